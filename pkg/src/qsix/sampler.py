"""Deterministic constraint-aware parameter generation for identity sweeps.

Draws are keyed by (seed, draw index) through a counter-based generator, so
draw k is the same whether generated alone or as part of a batch, serially
or split across workers. Every emitted tuple passes violations(); the same
re-check is public so sweep consumers can audit samples independently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import DomainError, Unsatisfiable
from .series import BaileyParams, TParams, TruncParams

#: documented convergence_caps keys and their defaults. Caps not listed for
#: a kind are ignored by it.
DEFAULT_CAPS = {
    # trunc: |1/(Cq^2)| range for the series argument
    "trunc_arg_min": 0.05,
    "trunc_arg_max": 20.0,
    # trunc with decay construction: |Cq^3| in [min, 2 min]; presence of the
    # key switches the C construction
    # "kn_decay_base_min": 1.5,
    # trunc, opt-in: bound on max(|U_n|, |U_{n+1}|) / |U_{n+1} - U_n| (and
    # the V analogue) over the difference-check window; the step ratio
    # tends to 1 at the window edges, so differencing loses digits there
    # "diff_amp_max": 300.0,
    # bailey_a: |a^2 q/(bcde)| rejection bound
    "bailey_a_arg_max": 0.9,
    # t_params: |C/q^3| range (C is constructed as w q^3)
    "t_arg_min": 0.05,
    "t_arg_max": 0.9,
    # all kinds: bound on max |term| / |full sum| in a probe walk of every
    # series the draw feeds (min partial sum for truncated windows); caps
    # the cancellation amplifier of term rounding in downstream checks
    "hump_max": 1e5,
}

_SHELL_LO = 0.25
_SHELL_HI = 4.0


@dataclass(frozen=True)
class SampleConstraints:
    """Acceptance region for one draw.

    pole_margin is the minimum relative distance of every reachable
    denominator factor 1 - x q^j from zero. convergence_caps overrides
    entries of DEFAULT_CAPS.
    """

    q_modulus_range: tuple = (0.25, 0.7)
    param_modulus_range: tuple = (0.1, 3.0)
    pole_margin: float = 1e-3
    convergence_caps: Mapping[str, float] = field(default_factory=dict)
    max_rejections: int = 5000

    def __post_init__(self):
        qlo, qhi = self.q_modulus_range
        if not (0.0 < qlo <= qhi < 1.0):
            raise DomainError("q_modulus_range must be inside (0, 1)")
        plo, phi = self.param_modulus_range
        if not (0.0 < plo <= phi):
            raise DomainError("param_modulus_range must be positive and "
                              "ordered")
        if not self.pole_margin > 0.0:
            raise DomainError("pole_margin must be > 0")
        if self.max_rejections < 1:
            raise DomainError("max_rejections must be >= 1")
        unknown = set(self.convergence_caps) - set(DEFAULT_CAPS) \
            - {"kn_decay_base_min", "diff_amp_max"}
        if unknown:
            raise DomainError(f"unknown convergence_caps keys: "
                              f"{sorted(unknown)}")

    def cap(self, name: str) -> float:
        if name in self.convergence_caps:
            return float(self.convergence_caps[name])
        return DEFAULT_CAPS[name]


def _rng(seed: int, index: int) -> np.random.Generator:
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, index & 0xFFFFFFFFFFFFFFFF],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _draw_complex(rng, lo: float, hi: float) -> complex:
    mod = float(np.exp(rng.uniform(np.log(lo), np.log(hi))))
    phase = float(rng.uniform(0.0, 2.0 * np.pi))
    return complex(mod * np.cos(phase), mod * np.sin(phase))


def _margin_bad(x: complex, q: complex, margin: float,
                nonneg_only: bool = False) -> bool:
    """True when some reachable factor 1 - x q^j comes within margin of
    zero. Factors vanish only when |x q^j| is near 1, so only shifts
    landing |x q^j| in a fixed shell around 1 are examined."""
    ax = abs(x)
    if ax == 0.0:
        return False
    aq = abs(q)
    lq = np.log(aq)
    jhi = int(np.floor(np.log(_SHELL_LO / ax) / lq))
    jlo = int(np.ceil(np.log(_SHELL_HI / ax) / lq))
    if nonneg_only:
        jlo = max(jlo, 0)
    for j in range(jlo, jhi + 1):
        xq = x * q ** j
        if abs(1.0 - xq) < margin * (1.0 + abs(xq)):
            return True
    return False


def _walk_side(num, den, q, z, vwp_a, direction, max_steps=400):
    """One direction of a bilateral walk: (max |term|, sum of this side's
    terms, min |partial sum|). Partial sums include the leading n = 0
    term (= 1); the side sum does not. Crude and cheap: no pole checks,
    stops once terms are negligible and every factor base has crossed
    unit modulus (before that, a dip can be followed by renewed growth).
    Returns (inf, 0, 0) on a vanishing denominator or non-finite term."""
    g = 1.0 + 0j
    q2 = 1.0 + 0j
    side = 0.0 + 0j
    hump = 0.0
    low = 1.0
    qe = 1.0 + 0j if direction > 0 else 1.0 / q
    lg = -np.log(abs(q))
    k_min = 3
    for x in (*num, *den):
        ax = abs(x)
        if direction < 0 and 0.0 < ax < 1.0:
            k_min = max(k_min, int(np.ceil(-np.log(ax) / lg)))
        elif direction > 0 and ax > 1.0:
            k_min = max(k_min, int(np.ceil(np.log(ax) / lg)))
    k_min = min(k_min, max_steps // 2)
    for k in range(1, max_steps + 1):
        if direction > 0:
            top = 1.0 + 0j
            bot = 1.0 + 0j
            for a in num:
                top *= 1.0 - a * qe
            for b in den:
                bot *= 1.0 - b * qe
            if bot == 0:
                return float("inf"), 0.0 + 0j, 0.0
            if top == 0:
                break
            g *= z * top / bot
            q2 *= q * q
            qe *= q
        else:
            top = 1.0 + 0j
            bot = 1.0 + 0j
            for b in den:
                top *= 1.0 - b * qe
            for a in num:
                bot *= 1.0 - a * qe
            if bot == 0:
                return float("inf"), 0.0 + 0j, 0.0
            if top == 0:
                break
            g *= top / (z * bot)
            q2 /= q * q
            qe /= q
        t = g
        if vwp_a is not None:
            t = g * (1.0 - vwp_a * q2) / (1.0 - vwp_a)
        at = abs(t)
        if not np.isfinite(at):
            return float("inf"), 0.0 + 0j, 0.0
        side += t
        hump = max(hump, at)
        low = min(low, abs(1.0 + side))
        if at < 1e-18 * (1.0 + abs(1.0 + side)) and k > k_min:
            break
    return hump, side, low


def _hump_bilateral(num, den, q, z, vwp_a, max_steps=400) -> float:
    """max |term| over both directions relative to the full bilateral sum.

    Per-direction normalization understates the damage when the two sides
    nearly cancel against each other and the n = 0 term: every term then
    carries its rounding into a much smaller total. This ratio is the
    amplification factor of term-level rounding in the final value."""
    up, us, _ = _walk_side(num, den, q, z, vwp_a, +1, max_steps)
    dn, ds, _ = _walk_side(num, den, q, z, vwp_a, -1, max_steps)
    if not np.isfinite(up) or not np.isfinite(dn):
        return float("inf")
    total = abs(1.0 + us + ds)
    if total == 0.0:
        return float("inf")
    return max(1.0, up, dn) / total


def _trunc_factors(p: TruncParams):
    """Factor arguments x whose 1 - x q^j must keep the pole margin for the
    window sums, the U/V sequences, the boundary term, and the closed
    limit. nonneg_only factors appear in infinite products only."""
    q, A, B, C, D, E = p.q, p.A, p.B, p.C, p.D, p.E
    A2 = A * A
    every = [
        D * E * q / A, B * E * q / A, B * D * q / A, A / C,
        B * q, D * q, E * q, B * C * D * E * q * q / A2,
        B * D * E * q / A, B * D * E / A, C * q ** 3,
        A * q * q, B * D / A, B * E / A, D * E / A,
        A / (C * q), B * D * E / (A2 * q * q), B * D * E / (A2 * q),
        B * C * D * E * q / A2, A * q / B, A * q / D, A * q / E,
        1.0 / B, 1.0 / D, 1.0 / E, A2 / (B * C * D * E * q),
        A / (B * D), A / (B * E), A / (D * E), C / A,
        B / (A * q), B * q * q, D * q * q, E * q * q,
    ]
    return every


def _t_factors(p: TParams):
    q, X, B, C, D, E = p.q, p.X, p.B, p.C, p.D, p.E
    m = B * C * D * E * X
    every = [
        B * C * D * E * X * q, B * X * q, D * X * q, E * X * q,
        C * D * E * X, B * C * E * X, B * C * D * X,
        m * X, 1.0 / (m * q), 1.0 / (m * X), C / q ** 3,
        B * C / q, C * D / q, C * E / q,
        B * C * D * q, B * C * E * q, C * D * E * q,
        B * C * D * E * q ** 3, m * X * q, 1.0 / m,
        1.0 / (B * X), 1.0 / (D * X), 1.0 / (E * X),
        1.0 / (B * q), 1.0 / (D * q), 1.0 / (E * q),
    ]
    if X != q:
        # at X = q exactly the (X;q) zeros collapse the downward side by
        # design (the unilateral specialization); off that point they are
        # poles and must keep their margin
        every.append(X)
    return every


def _bailey_factors(p: BaileyParams):
    q, a, b, c, d, e = p.q, p.a, p.b, p.c, p.d, p.e
    every = [
        b, c, d, e, a * q / b, a * q / c, a * q / d, a * q / e,
        a, a * q, q / a,
        q / b, q / c, q / d, q / e,
        a * a * q / (b * c * d * e),
        a * q / (b * c), a * q / (b * d), a * q / (b * e),
        a * q / (c * d), a * q / (c * e), a * q / (d * e),
    ]
    return every


def violations(kind: str, params, constraints: SampleConstraints) -> list:
    """Reasons the draw fails its constraints; empty means acceptable."""
    con = constraints
    out = []
    margin = con.pole_margin
    qlo, qhi = con.q_modulus_range
    plo, phi = con.param_modulus_range

    if kind == "trunc":
        p: TruncParams = params
        q = p.q
        values = (p.A, p.B, p.C, p.D, p.E)
        names = "ABCDE"
    elif kind == "bailey_a":
        p = params
        q = p.q
        values = (p.a, p.b, p.c, p.d, p.e)
        names = ("a", "b", "c", "d", "e")
    elif kind == "t_params":
        p = params
        q = p.q
        values = (p.X, p.B, p.C, p.D, p.E)
        names = ("X", "B", "C", "D", "E")
    else:
        raise DomainError(f"unknown sample kind {kind!r}")

    if not (qlo <= abs(q) <= qhi):
        out.append(f"|q| = {abs(q):.6g} outside q_modulus_range")
    for name, v in zip(names, values):
        ok_lo = plo
        if kind == "trunc" and name == "C":
            continue
        if kind == "t_params" and name == "C":
            continue
        if not (ok_lo <= abs(v) <= phi):
            out.append(f"|{name}| = {abs(v):.6g} outside "
                       f"param_modulus_range")

    if kind == "trunc":
        base = abs(p.C * q ** 3)
        if "kn_decay_base_min" in con.convergence_caps:
            mn = con.cap("kn_decay_base_min")
            if not (mn <= base <= 2.0 * mn):
                out.append(f"|Cq^3| = {base:.6g} outside decay band")
        else:
            arg = abs(1.0 / (p.C * q * q))
            if not (con.cap("trunc_arg_min") <= arg
                    <= con.cap("trunc_arg_max")):
                out.append(f"|1/(Cq^2)| = {arg:.6g} outside trunc arg caps")
        for x in _trunc_factors(p):
            if _margin_bad(x, q, margin):
                out.append(f"factor base {x:.6g} within pole margin of "
                           f"a q-shift of 1")
                break
        if not out and "kn_decay_base_min" not in con.convergence_caps:
            h = _S_window_hump(p, N=8)
            if h > con.cap("hump_max"):
                out.append(f"window-sum term hump {h:.3g} exceeds cap")
        if not out and "diff_amp_max" in con.convergence_caps:
            amp = _diff_amp(p, lo=-5, hi=5)
            if amp > con.cap("diff_amp_max"):
                out.append(f"difference amplifier {amp:.3g} exceeds cap")
    elif kind == "bailey_a":
        arg = abs(p.series_arg)
        if arg > con.cap("bailey_a_arg_max"):
            out.append(f"|a^2 q/(bcde)| = {arg:.6g} exceeds cap")
        for x in _bailey_factors(p):
            if _margin_bad(x, q, margin):
                out.append(f"factor base {x:.6g} within pole margin of "
                           f"a q-shift of 1")
                break
        if not out:
            num = (p.b, p.c, p.d, p.e)
            den = tuple(p.a * q / v for v in num)
            h = _hump_bilateral(num, den, q, p.series_arg, p.a)
            if h > con.cap("hump_max"):
                out.append(f"bilateral term hump {h:.3g} exceeds cap")
    else:
        arg = abs(p.series_arg)
        if not (con.cap("t_arg_min") <= arg <= con.cap("t_arg_max")):
            out.append(f"|C/q^3| = {arg:.6g} outside t arg caps")
        for x in _t_factors(p):
            if _margin_bad(x, q, margin):
                out.append(f"factor base {x:.6g} within pole margin of "
                           f"a q-shift of 1")
                break
        if not out:
            h = _t_hump(p, scalings=4)
            if h > con.cap("hump_max"):
                out.append(f"bilateral term hump {h:.3g} exceeds cap")
    return out


def _S_window_hump(p: TruncParams, N: int) -> float:
    """Worst max-term over min-|partial-sum| across the two window-sum
    families entering the recurrence check at window size N. Every
    partial sum up to N is a consumed value, so the smallest one sets
    the conditioning."""
    worst = 0.0
    for (A, C) in ((p.A, p.C), (p.A * p.q, p.C * p.q)):
        q = p.q
        num = (p.B * q, p.D * q, p.E * q,
               p.B * C * p.D * p.E * q * q / (A * A))
        den = (p.D * p.E * q / A, p.B * p.E * q / A, p.B * p.D * q / A,
               A / C)
        a = p.B * p.D * p.E * q / A
        z = 1.0 / (C * q * q)
        mx, _, low = _walk_side(num, den, q, z, a, +1, max_steps=N + 1)
        if not np.isfinite(mx) or low == 0.0:
            return float("inf")
        worst = max(worst, max(1.0, mx) / low)
    return worst


def _diff_amp(p: TruncParams, lo: int, hi: int) -> float:
    """Worst cancellation amplifier of the U and V step differences over
    n = lo..hi. A vanishing step difference counts as infinite."""
    from .errors import PoleError
    from .identities import compute_U, compute_V

    worst = 0.0
    for compute in (compute_U, compute_V):
        try:
            vals = [compute(n, p) for n in range(lo, hi + 2)]
        except PoleError:
            return float("inf")
        for a, b in zip(vals, vals[1:]):
            d = abs(b - a)
            if d == 0.0:
                return float("inf")
            worst = max(worst, max(abs(a), abs(b)) / d)
    return worst


def _t_hump(p: TParams, scalings: int) -> float:
    """Worst bilateral amplification over the scaled series family
    C, Cq, ..., Cq^scalings. Deep scalings are where the full sum
    collapses, so every member is probed."""
    q, X, B, D, E = p.q, p.X, p.B, p.D, p.E
    worst = 0.0
    for k in range(scalings + 1):
        C = p.C * q ** k
        num = (B * C * D * E * X * q, B * X * q, D * X * q, E * X * q)
        den = (X, C * D * E * X, B * C * E * X, B * C * D * X)
        a = B * C * D * E * X * X
        z = C / q ** 3
        worst = max(worst, _hump_bilateral(num, den, q, z, a))
    return worst


def _draw_once(kind: str, rng, con: SampleConstraints):
    qlo, qhi = con.q_modulus_range
    plo, phi = con.param_modulus_range
    q = _draw_complex(rng, qlo, qhi)
    if kind == "trunc":
        A = _draw_complex(rng, plo, phi)
        B = _draw_complex(rng, plo, phi)
        D = _draw_complex(rng, plo, phi)
        E = _draw_complex(rng, plo, phi)
        if "kn_decay_base_min" in con.convergence_caps:
            mn = con.cap("kn_decay_base_min")
            target = _draw_complex(rng, mn, 2.0 * mn)
            C = target / q ** 3
        else:
            arg = _draw_complex(rng, con.cap("trunc_arg_min"),
                                con.cap("trunc_arg_max"))
            C = 1.0 / (arg * q * q)
        return TruncParams(q=q, A=A, B=B, C=C, D=D, E=E, N=0)
    if kind == "bailey_a":
        a = _draw_complex(rng, plo, phi)
        b = _draw_complex(rng, plo, phi)
        c = _draw_complex(rng, plo, phi)
        d = _draw_complex(rng, plo, phi)
        e = _draw_complex(rng, plo, phi)
        return BaileyParams(q=q, a=a, b=b, c=c, d=d, e=e)
    if kind == "t_params":
        X = _draw_complex(rng, plo, phi)
        B = _draw_complex(rng, plo, phi)
        D = _draw_complex(rng, plo, phi)
        E = _draw_complex(rng, plo, phi)
        w = _draw_complex(rng, con.cap("t_arg_min"), con.cap("t_arg_max"))
        C = w * q ** 3
        return TParams(q=q, X=X, B=B, C=C, D=D, E=E)
    raise DomainError(f"unknown sample kind {kind!r}")


def sample(kind: str, constraints: SampleConstraints, seed: int,
           count: int) -> list:
    """count constraint-satisfying parameter sets, deterministically keyed
    by (seed, draw index).

    trunc draws carry N = 0; window sizes are the consumer's choice.
    Raises Unsatisfiable when a draw index exhausts max_rejections.
    """
    if count < 0:
        raise DomainError("count must be >= 0")
    out = []
    for index in range(count):
        rng = _rng(seed, index)
        for _ in range(constraints.max_rejections):
            p = _draw_once(kind, rng, constraints)
            if not violations(kind, p, constraints):
                out.append(p)
                break
        else:
            raise Unsatisfiable(
                f"draw {index} for kind {kind!r} exhausted "
                f"{constraints.max_rejections} rejections")
    return out
