import pytest

from qsix import DEFAULT_CAPS, SampleConstraints, sample, violations
from qsix.errors import DomainError, Unsatisfiable
from qsix.identities import compute_U, compute_V

KINDS = ("trunc", "bailey_a", "t_params")


def test_zero_count_is_empty():
    assert sample("trunc", SampleConstraints(), seed=1, count=0) == []


def test_negative_count_rejected():
    with pytest.raises(DomainError):
        sample("trunc", SampleConstraints(), seed=1, count=-1)


def test_unknown_kind_rejected():
    with pytest.raises(DomainError):
        sample("poch", SampleConstraints(), seed=1, count=1)
    with pytest.raises(DomainError):
        violations("poch", None, SampleConstraints())


@pytest.mark.parametrize("kind", KINDS)
def test_same_seed_same_draws(kind):
    con = SampleConstraints()
    a = sample(kind, con, seed=42, count=4)
    b = sample(kind, con, seed=42, count=4)
    assert a == b


@pytest.mark.parametrize("kind", KINDS)
def test_batch_prefix_matches_shorter_batch(kind):
    # draws are keyed by (seed, index), not by generator state, so a
    # longer batch extends a shorter one
    con = SampleConstraints()
    assert sample(kind, con, seed=7, count=5)[:3] == \
        sample(kind, con, seed=7, count=3)


def test_different_seeds_differ():
    con = SampleConstraints()
    assert sample("trunc", con, seed=1, count=2) != \
        sample("trunc", con, seed=2, count=2)


@pytest.mark.parametrize("kind", KINDS)
def test_draws_pass_their_own_audit(kind):
    con = SampleConstraints()
    for p in sample(kind, con, seed=11, count=6):
        assert violations(kind, p, con) == []


def test_trunc_draws_respect_documented_caps():
    con = SampleConstraints()
    for p in sample("trunc", con, seed=5, count=6):
        assert 0.25 <= abs(p.q) <= 0.7
        for v in (p.A, p.B, p.D, p.E):
            assert 0.1 <= abs(v) <= 3.0
        arg = abs(1.0 / (p.C * p.q ** 2))
        assert DEFAULT_CAPS["trunc_arg_min"] <= arg
        assert arg <= DEFAULT_CAPS["trunc_arg_max"]
        assert p.N == 0


def test_t_draws_respect_documented_caps():
    con = SampleConstraints()
    for p in sample("t_params", con, seed=5, count=6):
        arg = abs(p.C / p.q ** 3)
        assert DEFAULT_CAPS["t_arg_min"] <= arg <= DEFAULT_CAPS["t_arg_max"]


def test_bailey_draws_respect_argument_cap():
    con = SampleConstraints()
    for p in sample("bailey_a", con, seed=5, count=6):
        assert abs(p.series_arg) <= DEFAULT_CAPS["bailey_a_arg_max"]


def test_decay_band_cap_switches_C_construction():
    con = SampleConstraints(convergence_caps={"kn_decay_base_min": 1.5})
    for p in sample("trunc", con, seed=9, count=4):
        base = abs(p.C * p.q ** 3)
        assert 1.5 <= base <= 3.0


def test_diff_amp_cap_bounds_step_cancellation():
    con = SampleConstraints(convergence_caps={"diff_amp_max": 300.0})
    for p in sample("trunc", con, seed=13, count=3):
        for compute in (compute_U, compute_V):
            vals = [compute(n, p) for n in range(-5, 7)]
            for a, b in zip(vals, vals[1:]):
                assert max(abs(a), abs(b)) <= 300.0 * abs(b - a)


def test_impossible_margin_is_unsatisfiable():
    con = SampleConstraints(pole_margin=0.9, max_rejections=50)
    with pytest.raises(Unsatisfiable):
        sample("trunc", con, seed=1, count=1)


def test_constraint_validation():
    with pytest.raises(DomainError):
        SampleConstraints(q_modulus_range=(0.0, 0.7))
    with pytest.raises(DomainError):
        SampleConstraints(q_modulus_range=(0.5, 1.0))
    with pytest.raises(DomainError):
        SampleConstraints(param_modulus_range=(2.0, 1.0))
    with pytest.raises(DomainError):
        SampleConstraints(pole_margin=0.0)
    with pytest.raises(DomainError):
        SampleConstraints(max_rejections=0)
    with pytest.raises(DomainError):
        SampleConstraints(convergence_caps={"tightness": 2.0})
