"""Tests for the residual checks: summation by parts, the three-term
product identity, the boundary-term recurrence and its decay, the T-shift
family, and the closed-form endpoints."""

import cmath
import dataclasses
import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsix import (AbelInput, BaileyParams, DomainError, NonConvergence,
                  PoleError, QContext, TParams, TruncParams, check_abel,
                  check_bailey, check_KN_decay, check_Q_constancy,
                  check_recurrence, check_remark1_equivalence, check_rogers,
                  check_T_iteration, check_T_recursion, check_U_difference,
                  check_V_difference, check_weierstrass, compute_KN,
                  compute_KN_printed, compute_U, compute_V, kn_limit,
                  map_remark1, truncated_S)

GENERIC = TruncParams(q=0.5, A=2.0, B=0.3, C=3.0, D=0.7, E=1.1, N=0)

# plain-loop bilateral sum at BaileyParams(0.5, 0.09, 0.6, 0.7, 0.8, 0.9)
BAILEY_SAMPLE = -201.07089456265018


def prod1m(xs):
    t = 1.0 + 0j
    for x in xs:
        t *= 1.0 - x
    return t


# ---------------------------------------------------------------------------
# summation by parts

def test_abel_input_coverage():
    with pytest.raises(DomainError):
        AbelInput(U={0: 1.0}, V={0: 1.0}, M=-1, N=0)
    with pytest.raises(DomainError):
        AbelInput(U={0: 1.0}, V={0: 1.0}, M=0, N=0)
    with pytest.raises(DomainError):
        AbelInput(U={0: 1.0, 1: 2.0}, V={0: 1.0, 1: 9.0}, M=0, N=0)


def test_abel_point_window():
    rep = check_abel(AbelInput(U={0: 3.0, 1: 5.0}, V={0: 2.0}, M=0, N=0))
    # both sides are V_0 (U_0 - U_1) = -4 on a single-point window
    assert rep.passed
    assert rep.lhs == -4
    assert rep.abs_err == 0


def test_abel_deterministic_sequences():
    U = {n: complex(n * n, 1.0) for n in range(-5, 7)}
    V = {n: 1.0 / (n + 10.0) for n in range(-5, 6)}
    rep = check_abel(AbelInput(U=U, V=V, M=5, N=5))
    assert rep.passed
    assert rep.rel_err <= 1e-14


def test_abel_random_windows_pass():
    rng = random.Random(20240811)
    for _ in range(20):
        M = rng.randrange(0, 9)
        N = rng.randrange(0, 9)
        U = {n: complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
             for n in range(-M, N + 2)}
        V = {n: complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
             for n in range(-M, N + 1)}
        rep = check_abel(AbelInput(U=U, V=V, M=M, N=N))
        assert rep.passed
        assert rep.rel_err <= 1e-13


@given(st.integers(0, 6), st.integers(0, 6), st.data())
def test_abel_rearrangement_property(M, N, data):
    vals = st.floats(min_value=-3.0, max_value=3.0)
    U = {n: complex(data.draw(vals), data.draw(vals))
         for n in range(-M, N + 2)}
    V = {n: complex(data.draw(vals), data.draw(vals))
         for n in range(-M, N + 1)}
    rep = check_abel(AbelInput(U=U, V=V, M=M, N=N))
    assert rep.abs_err <= 1e-12


# ---------------------------------------------------------------------------
# three-term product identity

def test_weierstrass_generic_point():
    b, c, x, z = 2.0, 3.0, 0.5, 0.7
    raw_lhs = (prod1m((c * x, x / c, b * z, z / b))
               - prod1m((b * x, x / b, c * z, z / c)))
    raw_rhs = (z / c) * prod1m((b * c, c / b, x * z, x / z))
    assert abs(raw_lhs - raw_rhs) <= 1e-14 * abs(raw_rhs)
    rep = check_weierstrass(b, c, x, z)
    assert rep.passed
    assert rep.rel_err <= 1e-14


@pytest.mark.parametrize("b,c,x,z", [
    (1.7, 1.7, 0.5, 0.7),   # b = c
    (2.0, 3.0, 0.8, 0.8),   # x = z
    (0.5, 2.0, 0.6, 0.9),   # bc = 1
    (2.0, 3.0, 0.5, 2.0),   # xz = 1
])
def test_weierstrass_symmetry_zeros(b, c, x, z):
    rep = check_weierstrass(b, c, x, z)
    assert rep.passed
    assert abs(rep.lhs) <= 1e-13
    assert abs(rep.rhs) <= 1e-13


def test_weierstrass_theta_form():
    ctx = QContext(0.5)
    rep = check_weierstrass(1.1, 0.8, 0.6, 0.9, ctx=ctx, use_theta=True)
    assert rep.passed
    assert rep.rel_err <= 1e-10
    assert "tail bound" in rep.note


def test_weierstrass_theta_zero_family():
    ctx = QContext(0.5)
    rep = check_weierstrass(1.3, 1.3, 0.6, 0.9, ctx=ctx, use_theta=True)
    assert rep.passed
    assert abs(rep.lhs) <= 1e-13
    assert abs(rep.rhs) <= 1e-13


def test_weierstrass_domain():
    with pytest.raises(DomainError):
        check_weierstrass(0.0, 2.0, 0.5, 0.7)
    with pytest.raises(DomainError):
        check_weierstrass(2.0, 3.0, 0.5, 0.7, use_theta=True)
    with pytest.raises(DomainError):
        check_weierstrass(2.0, 3.0, 0.0, 0.7, ctx=QContext(0.5),
                          use_theta=True)


@st.composite
def _ring_points(draw):
    m = draw(st.floats(min_value=0.3, max_value=1.8))
    ph = draw(st.floats(min_value=0.0, max_value=2 * math.pi))
    return m * complex(math.cos(ph), math.sin(ph))


@given(_ring_points(), _ring_points(), _ring_points(), _ring_points())
def test_weierstrass_residual_scales_with_products(b, c, x, z):
    rep = check_weierstrass(b, c, x, z)
    amp = max(abs(prod1m((c * x, x / c, b * z, z / b))),
              abs(prod1m((b * x, x / b, c * z, z / c))),
              abs(z / c * prod1m((b * c, c / b, x * z, x / z))),
              1.0)
    assert rep.abs_err <= 1e-12 * amp


# ---------------------------------------------------------------------------
# the U and V sequences and their step differences

def test_u_at_zero_is_one():
    assert compute_U(0, GENERIC) == 1


def test_u_first_values_match_direct_products():
    q, A, B, C, D, E = (GENERIC.q, GENERIC.A, GENERIC.B, GENERIC.C,
                        GENERIC.D, GENERIC.E)
    num = (B * q, D * q, E * q, B * D * E / (A * A * q))
    den = (B * D / A, B * E / A, D * E / A, A * q * q)
    want1 = prod1m(num) / prod1m(den)
    assert abs(compute_U(1, GENERIC) - want1) <= 1e-15 * abs(want1)
    wantm1 = prod1m(tuple(d / q for d in den)) / prod1m(
        tuple(x / q for x in num))
    assert abs(compute_U(-1, GENERIC) - wantm1) <= 1e-15 * abs(wantm1)


def test_v_first_values_match_direct_products():
    q, A, B, C, D, E = (GENERIC.q, GENERIC.A, GENERIC.B, GENERIC.C,
                        GENERIC.D, GENERIC.E)
    want0 = (prod1m((A * q * q, B * C * D * E * q / (A * A)))
             / prod1m((A / (C * q), B * D * E / (A * A * q * q))))
    assert abs(compute_V(0, GENERIC) - want0) <= 1e-15 * abs(want0)
    assert abs(compute_V(-1, GENERIC) - C * q ** 3) <= 1e-15 * abs(C * q ** 3)


def test_u_pole_when_Aq2_is_one():
    p = dataclasses.replace(GENERIC, A=4.0)
    with pytest.raises(PoleError):
        compute_U(1, p)


# GENERIC has Aq = 1, a V pole for n <= -2; shift A off the degeneracy
DIFF_P = dataclasses.replace(GENERIC, A=1.7)


@pytest.mark.parametrize("n", range(-3, 4))
def test_u_difference_generic(n):
    rep = check_U_difference(n, DIFF_P)
    assert rep.passed
    assert rep.rel_err <= 1e-12


@pytest.mark.parametrize("n", range(-3, 4))
def test_v_difference_generic(n):
    rep = check_V_difference(n, DIFF_P)
    assert rep.passed
    assert rep.rel_err <= 1e-12


def test_u_difference_constant_family():
    # B = Aq makes U_n identically 1: the step difference and its closed
    # form both vanish
    p = TruncParams(q=0.5, A=1.2, B=0.6, C=2.0, D=0.7, E=1.1, N=0)
    for n in (-2, 0, 3):
        rep = check_U_difference(n, p)
        assert rep.passed
        assert abs(rep.lhs) <= 1e-13
        assert rep.rhs == 0


def test_u_difference_kernel_zero():
    # BDE = A/q zeroes the closed form's kernel at n = 0; U_1 = U_0 exactly
    p = TruncParams(q=0.5, A=0.2, B=0.5, C=2.0, D=0.8, E=1.0, N=0)
    rep = check_U_difference(0, p)
    assert rep.passed
    assert rep.rhs == 0
    assert abs(rep.lhs) <= 1e-13


def test_v_difference_kernel_zero():
    # BDE = A zeroes the closed form's kernel at n = 0; V_0 = V_{-1}
    p = TruncParams(q=0.5, A=0.4, B=0.5, C=2.0, D=0.8, E=1.0, N=0)
    rep = check_V_difference(0, p)
    assert rep.passed
    assert rep.rhs == 0
    assert abs(rep.lhs) <= 1e-13


def test_u_difference_rejects_unit_factor():
    # BD = A zeroes a denominator factor of the U closed form; the V form
    # carries no BD/A factor and stays regular at the same point
    p = TruncParams(q=0.5, A=0.35, B=0.5, C=3.0, D=0.7, E=1.1, N=0)
    with pytest.raises(PoleError):
        check_U_difference(0, p)
    rep = check_V_difference(0, p)
    assert rep.passed


# ---------------------------------------------------------------------------
# boundary term and recurrence

def _recurrence_coefficient(p):
    q, A, B, C, D, E = p.q, p.A, p.B, p.C, p.D, p.E
    top = prod1m((B * D * E / A, C * q ** 3, B * D / A, B * E / A,
                  D * E / A))
    bot = prod1m((B * D * E * q / A, B * C * D * E * q / (A * A),
                  A * q / B, A * q / D, A * q / E))
    return (A * A * q / (B * D * E)) * top / bot


def test_kn_zero_window_against_public_pieces():
    p = GENERIC
    q, A, B, C, D, E = p.q, p.A, p.B, p.C, p.D, p.E
    coeff = ((A * A * q / (B * D * E))
             * prod1m((A / (C * q), B * D / A, B * E / A, D * E / A,
                       B * D * E / (A * A * q * q)))
             / prod1m((A * q / B, A * q / D, A * q / E,
                       B * C * D * E * q / (A * A), B * D * E * q / A)))
    boundary = coeff * (compute_V(-1, p) * compute_U(-1, p)
                        - compute_V(0, p) * compute_U(1, p))
    k3 = ((1.0 - B * D * E * q ** 3 / A) / (1.0 - B * D * E * q / A)
          * prod1m((B * q, D * q, E * q, B * C * D * E * q * q / (A * A)))
          / prod1m((A / C, B * D * q / A, B * E * q / A, D * E * q / A)))
    want = boundary + k3 / (C * q * q)
    got = compute_KN(p)
    assert abs(got - want) <= 1e-12 * abs(want)


@pytest.mark.parametrize("N", range(5))
def test_kn_consistent_with_window_sums(N):
    p = dataclasses.replace(GENERIC, N=N)
    q, C = p.q, p.C
    lhs = truncated_S(dataclasses.replace(p, N=N + 1))
    shifted = truncated_S(dataclasses.replace(p, A=p.A * q, C=C * q))
    residual = lhs - _recurrence_coefficient(p) * shifted
    kn = compute_KN(p) * (C * q ** 3) ** (-N)
    assert abs(kn - residual) <= 1e-12 + 1e-9 * max(abs(lhs), 1.0)


@pytest.mark.parametrize("N", range(6))
def test_kn_printed_form_matches_assembled(N):
    p = dataclasses.replace(GENERIC, N=N)
    a = compute_KN(p)
    b = compute_KN_printed(p)
    assert abs(a - b) <= 1e-10 * max(abs(a), 1.0)


def test_kn_pole_at_unit_kernel():
    p = TruncParams(q=0.5, A=0.2, B=0.5, C=2.0, D=0.8, E=1.0, N=0)
    with pytest.raises(PoleError):
        compute_KN(p)


@pytest.mark.parametrize("N", range(7))
def test_recurrence_generic(N):
    rep = check_recurrence(dataclasses.replace(GENERIC, N=N))
    assert rep.passed
    assert rep.rel_err <= 1e-9


def test_recurrence_pole_is_classified():
    p = TruncParams(q=0.5, A=0.2, B=0.5, C=3.0, D=0.8, E=1.0, N=1)
    with pytest.raises(PoleError):
        check_recurrence(p)


# ---------------------------------------------------------------------------
# decay of the scaled boundary term

def test_kn_decay_passes_when_base_exceeds_one():
    p = dataclasses.replace(GENERIC, C=12.0)
    rep = check_KN_decay(p, N_max=60)
    assert rep.passed
    assert rep.final_magnitude < 1e-6
    assert rep.eventually_decreasing
    assert rep.limit_rel_err <= 1e-8
    assert len(rep.magnitudes) == 61
    assert "|Cq^3|" in rep.note


def test_kn_decay_limit_agrees_with_large_N():
    p = dataclasses.replace(GENERIC, C=12.0)
    lim = kn_limit(p)
    kn = compute_KN(dataclasses.replace(p, N=60))
    assert abs(kn - lim) <= 1e-8 * abs(lim)


def test_kn_decay_grows_inside_unit_base():
    # |Cq^2| = 1.25 meets the precondition but |Cq^3| = 0.625 < 1, so the
    # scaled trace grows without bound
    p = dataclasses.replace(GENERIC, C=5.0)
    rep = check_KN_decay(p, N_max=30)
    assert not rep.passed
    assert rep.final_magnitude > 1.0


def test_kn_decay_domain():
    with pytest.raises(DomainError):
        check_KN_decay(dataclasses.replace(GENERIC, C=3.6))
    with pytest.raises(DomainError):
        check_KN_decay(dataclasses.replace(GENERIC, C=12.0), N_max=3)


# ---------------------------------------------------------------------------
# T(X;C) family

T_GENERIC = TParams(q=0.5, X=1.2, B=0.3, C=0.1, D=0.35, E=0.45)


def test_t_recursion_generic():
    rep = check_T_recursion(T_GENERIC)
    assert rep.passed
    assert rep.rel_err <= 1e-8
    assert "tail bound" in rep.note


def test_t_recursion_second_point():
    # below C ~ 0.06 the scaled series grows a transient hump that eats
    # digits faster than the default tolerance
    rep = check_T_recursion(dataclasses.replace(T_GENERIC, C=0.08))
    assert rep.passed


def test_t_recursion_domain():
    with pytest.raises(DomainError):
        check_T_recursion(dataclasses.replace(T_GENERIC, C=0.0))


def test_t_iteration_collapsed_steps():
    p = dataclasses.replace(T_GENERIC, X=0.5)
    for m in (1, 6):
        rep = check_T_iteration(p, m)
        assert rep.passed
        assert rep.rel_err <= 1e-7


def test_t_iteration_domain():
    with pytest.raises(DomainError):
        check_T_iteration(T_GENERIC, 3)
    with pytest.raises(DomainError):
        check_T_iteration(dataclasses.replace(T_GENERIC, X=0.5), 0)


def test_q_constancy_generic():
    # positive real tuples park some scaled argument C q^k near a factor
    # zero and the ratio loses digits; phases keep all five scalings away
    # from that set
    p = TParams(q=0.4 - 0.33j, X=-1.2 - 0.1j, B=-0.11 + 0.12j,
                C=0.064 - 0.066j, D=2.5 - 0.46j, E=1.4 - 0.47j)
    rep = check_Q_constancy(p, steps=4)
    assert rep.passed
    assert rep.rel_err <= 1e-9
    assert "spread" in rep.note


def test_q_constancy_domain():
    with pytest.raises(DomainError):
        check_Q_constancy(T_GENERIC, steps=0)
    with pytest.raises(DomainError):
        check_Q_constancy(dataclasses.replace(T_GENERIC, C=0.0))
    with pytest.raises(NonConvergence):
        check_Q_constancy(dataclasses.replace(T_GENERIC, C=0.5 ** 3))


# ---------------------------------------------------------------------------
# closed-form endpoints

def test_rogers_zero_C_is_exact():
    rep = check_rogers(0.3, 0.0, 0.35, 0.45, QContext(0.5))
    assert rep.passed
    assert rep.abs_err <= 1e-15


def test_rogers_generic():
    rep = check_rogers(0.3, 0.1, 0.35, 0.45, QContext(0.5))
    assert rep.passed
    assert rep.rel_err <= 1e-8


def test_rogers_outside_disk():
    with pytest.raises(NonConvergence):
        check_rogers(0.3, 0.4, 0.35, 0.45, QContext(0.5))
    with pytest.raises(NonConvergence):
        check_rogers(0.3, 1.2 * 0.5 ** 3, 0.35, 0.45, QContext(0.5))


def test_rogers_domain():
    with pytest.raises(DomainError):
        check_rogers(0.0, 0.1, 0.35, 0.45, QContext(0.5))


def test_bailey_a_form_generic():
    p = BaileyParams(q=0.5, a=0.09, b=0.6, c=0.7, d=0.8, e=0.9)
    rep = check_bailey("a", p)
    assert rep.passed
    assert rep.rel_err <= 1e-7
    assert abs(rep.lhs - BAILEY_SAMPLE) <= 1e-9 * abs(BAILEY_SAMPLE)


def test_bailey_a_form_divergent():
    p = BaileyParams(q=0.5, a=2.0, b=0.5, c=0.5, d=0.5, e=0.5)
    with pytest.raises(NonConvergence):
        check_bailey("a", p)


def test_bailey_x_form_generic():
    rep = check_bailey("X", T_GENERIC)
    assert rep.passed
    assert rep.rel_err <= 1e-7


def test_bailey_x_form_at_unit_shift():
    rep = check_bailey("x", dataclasses.replace(T_GENERIC, X=0.5))
    assert rep.passed


def test_bailey_unknown_form():
    with pytest.raises(DomainError):
        check_bailey("b", T_GENERIC)


def test_remark1_map_arms():
    p = BaileyParams(q=0.5, a=0.09, b=0.6, c=0.7, d=0.8, e=0.9)
    t = map_remark1(p)
    aq2 = p.a * p.q * p.q
    assert t.X == p.a * p.q / p.b
    assert t.B == p.b * p.c / aq2
    assert t.D == p.b * p.d / aq2
    assert t.E == p.b * p.e / aq2
    assert t.C == p.a * p.a * p.q ** 4 / (p.b * p.c * p.d * p.e)
    assert abs(t.series_arg - p.series_arg) <= 1e-15 * abs(p.series_arg)


def test_remark1_equivalence():
    p = BaileyParams(q=0.5, a=0.09, b=0.6, c=0.7, d=0.8, e=0.9)
    rep = check_remark1_equivalence(p)
    assert rep.passed
    assert rep.rel_err <= 1e-10
    assert "series-argument" in rep.note


def test_remark1_series_routes_agree():
    from qsix import eval_T, vwp_psi6
    p = BaileyParams(q=0.5, a=0.09, b=0.6, c=0.7, d=0.8, e=0.9)
    ctx = QContext(p.q)
    direct = vwp_psi6(p.a, (p.b, p.c, p.d, p.e), p.series_arg, ctx)
    mapped = eval_T(map_remark1(p), ctx)
    assert abs(direct.value - mapped.value) <= 1e-8 * abs(direct.value)


def test_report_honors_tightened_tolerances():
    # point chosen so the residual is nonzero in floats (several all-real
    # tuples cancel exactly and would pass even with zero tolerance)
    rep = check_weierstrass(1.7, 2.3, 0.51, 0.73, atol=0.0, rtol=0.0)
    assert not rep.passed
    rep = check_weierstrass(1.7, 2.3, 0.51, 0.73)
    assert rep.passed
