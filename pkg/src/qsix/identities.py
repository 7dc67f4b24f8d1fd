"""Residual checks for the identity chain.

Every check evaluates both sides of one identity independently and returns a
ResidualReport; nothing is simplified across the equals sign. Denominator
factors are evaluated position-aware so that a vanishing factor raises
PoleError naming the factor, while vanishing numerator factors produce exact
zeros.
"""

from __future__ import annotations

import cmath
import dataclasses
import math
from dataclasses import dataclass
from typing import Mapping

from . import _backend as _K
from .config import POLE_EPS
from .errors import DomainError, NonConvergence, PoleError
from .qcore import DEFAULT_POLICY, QContext, TruncationPolicy, _as_complex, \
    nabla, qpochhammer_inf_multi, theta_multi
from .series import BaileyParams, SeriesSpec, TParams, TruncParams, \
    bailey_closed_a, bailey_closed_X, eval_phi, eval_T, F_function, \
    q_factor, rogers_closed, truncated_S, vwp_psi6

DEFAULT_ATOL = 1e-12

#: per-identity default relative tolerances
DEFAULT_RTOL = {
    "abel": 1e-13,
    "weierstrass": 1e-14,
    "weierstrass-theta": 1e-10,
    "udiff": 1e-12,
    "vdiff": 1e-12,
    "recurrence": 1e-9,
    "kn-decay": 1e-6,
    "t-recursion": 1e-8,
    "t-iteration": 1e-7,
    "rogers": 1e-8,
    "q-constancy": 1e-8,
    "bailey-a": 1e-7,
    "bailey-x": 1e-7,
    "remark1": 1e-10,
}

_TINY = 1e-300


@dataclass(frozen=True)
class ResidualReport:
    """Two independently computed sides and their disagreement.

    passed is abs_err <= atol + rtol * max(|lhs|, |rhs|); rel_err divides by
    the same scale floored at 1e-300.
    """

    lhs: complex
    rhs: complex
    abs_err: float
    rel_err: float
    passed: bool
    note: str = ""


def _report(lhs: complex, rhs: complex, atol: float, rtol: float,
            note: str = "", extra_ok: bool = True) -> ResidualReport:
    abs_err = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs))
    rel_err = abs_err / max(scale, _TINY)
    passed = (abs_err <= atol + rtol * scale) and extra_ok
    return ResidualReport(lhs, rhs, abs_err, rel_err, passed, note)


def _nabla_den(pairs) -> complex:
    """Difference product in denominator position; named PoleError."""
    acc = 1.0 + 0j
    for name, x in pairs:
        f = 1.0 - x
        if abs(f) <= POLE_EPS * (1.0 + abs(x)):
            raise PoleError(f"factor 1 - {name} vanishes", factor=name)
        acc *= f
    return acc


def _scm(m: complex, e: int, z: complex):
    """Renormalizing multiply for scale-tracked products m * 2^e.

    Keeps |m| within [2^-8, 2^8] so superexponentially growing q-shifted
    factorials at deeply negative index stay representable."""
    m = m * z
    if m == 0:
        return 0j, 0
    a = abs(m)
    if a > 256.0 or a < 0.00390625:
        k = int(math.floor(math.log2(a)))
        m = complex(math.ldexp(m.real, -k), math.ldexp(m.imag, -k))
        e += k
    return m, e


def _sc_value(m: complex, e: int) -> complex:
    return complex(math.ldexp(m.real, e), math.ldexp(m.imag, e))


def _poch_num_sc(pairs, q: complex, n: int, m: complex, e: int):
    """Multiply prod (x;q)_n, numerator position, onto a scaled product:
    zeros pass through, a vanishing negative-index factor is a pole."""
    if n >= 0:
        for name, x in pairs:
            w = 1.0 + 0j
            for _ in range(n):
                m, e = _scm(m, e, 1.0 - x * w)
                w *= q
        return m, e
    for name, x in pairs:
        w = 1.0 + 0j
        for k in range(1, -n + 1):
            w /= q
            xw = x * w
            f = 1.0 - xw
            if abs(f) <= POLE_EPS * (1.0 + abs(xw)):
                raise PoleError(
                    f"factor 1 - ({name})*q^(-{k}) vanishes",
                    factor=name, exponent=-k)
            m, e = _scm(m, e, 1.0 / f)
    return m, e


def _poch_den_inv_sc(pairs, q: complex, n: int, m: complex, e: int):
    """Multiply 1 / prod (x;q)_n, denominator position, onto a scaled
    product.

    For n >= 0 a vanishing factor is a pole; for n < 0 the reciprocal
    factors multiply in directly, so a vanishing one yields an exact zero.
    """
    if n >= 0:
        for name, x in pairs:
            w = 1.0 + 0j
            for k in range(n):
                xw = x * w
                f = 1.0 - xw
                if abs(f) <= POLE_EPS * (1.0 + abs(xw)):
                    raise PoleError(
                        f"factor 1 - ({name})*q^({k}) vanishes",
                        factor=name, exponent=k)
                m, e = _scm(m, e, 1.0 / f)
                w *= q
        return m, e
    for name, x in pairs:
        w = 1.0 + 0j
        for _ in range(-n):
            w /= q
            m, e = _scm(m, e, 1.0 - x * w)
    return m, e


def _poch_num(pairs, q: complex, n: int) -> complex:
    m, e = _poch_num_sc(pairs, q, n, 1.0 + 0j, 0)
    return _sc_value(m, e)


def _poch_den_inv(pairs, q: complex, n: int) -> complex:
    m, e = _poch_den_inv_sc(pairs, q, n, 1.0 + 0j, 0)
    return _sc_value(m, e)


# ---------------------------------------------------------------------------
# summation by parts

@dataclass(frozen=True)
class AbelInput:
    """Finite bilateral sequences for the summation-by-parts identity.

    U must cover indices -M..N+1 exactly, V must cover -M..N exactly.
    """

    U: Mapping[int, complex]
    V: Mapping[int, complex]
    M: int
    N: int

    def __post_init__(self):
        if self.M < 0 or self.N < 0:
            raise DomainError("window bounds M, N must be >= 0")
        need_u = set(range(-self.M, self.N + 2))
        need_v = set(range(-self.M, self.N + 1))
        if set(self.U) != need_u:
            raise DomainError("U must cover exactly the indices -M..N+1")
        if set(self.V) != need_v:
            raise DomainError("V must cover exactly the indices -M..N")


def check_abel(inp: AbelInput, atol: float = DEFAULT_ATOL,
               rtol: float = DEFAULT_RTOL["abel"]) -> ResidualReport:
    """Summation by parts over the window -M..N:

    sum V_n (U_n - U_{n+1}) = V_{-M} U_{-M} - V_N U_{N+1}
                              + sum_{n=-M+1}^{N} U_n (V_n - V_{n-1}).
    """
    U, V, M, N = inp.U, inp.V, inp.M, inp.N
    lhs = sum(V[n] * (U[n] - U[n + 1]) for n in range(-M, N + 1))
    rhs = V[-M] * U[-M] - V[N] * U[N + 1] + sum(
        U[n] * (V[n] - V[n - 1]) for n in range(-M + 1, N + 1))
    return _report(lhs, rhs, atol, rtol)


# ---------------------------------------------------------------------------
# three-term product difference (plain and theta form)

def check_weierstrass(b: complex, c: complex, x: complex, z: complex,
                      ctx: QContext | None = None, use_theta: bool = False,
                      atol: float = DEFAULT_ATOL,
                      rtol: float | None = None) -> ResidualReport:
    """Three-term difference identity

        f(cx) f(x/c) f(bz) f(z/b) - f(bx) f(x/b) f(cz) f(z/c)
            = (z/c) f(bc) f(c/b) f(xz) f(x/z)

    with f = (1 - .) in the plain form and f = theta(.;q) when use_theta.
    Requires b, c, z != 0; the theta form also needs x != 0 and a context.
    """
    b, c, x, z = map(_as_complex, (b, c, x, z))
    if 0 in (b, c, z):
        raise DomainError("b, c, z must be nonzero")
    if rtol is None:
        rtol = DEFAULT_RTOL["weierstrass-theta" if use_theta
                            else "weierstrass"]
    first = (c * x, x / c, b * z, z / b)
    second = (b * x, x / b, c * z, z / c)
    third = (b * c, c / b, x * z, x / z) if x != 0 else None
    if not use_theta:
        rhs_args = (b * c, c / b, x * z, x / z if z != 0 else 0j)
        lhs = nabla(first) - nabla(second)
        rhs = (z / c) * nabla(rhs_args)
        return _report(lhs, rhs, atol, rtol)
    if ctx is None:
        raise DomainError("theta form needs a QContext")
    if x == 0:
        raise DomainError("theta form needs x != 0")
    t1 = theta_multi(first, ctx)
    t2 = theta_multi(second, ctx)
    t3 = theta_multi(third, ctx)
    lhs = t1.value - t2.value
    rhs = (z / c) * t3.value
    est = t1.est_error + t2.est_error + abs(z / c) * t3.est_error
    return _report(lhs, rhs, atol, rtol,
                   note=f"combined tail bound {est:.3e}")


# ---------------------------------------------------------------------------
# the two sequences entering summation by parts, and their step differences

def compute_U(n: int, p: TruncParams) -> complex:
    """U_n = (Bq, Dq, Eq, BDE/A^2 q;q)_n / (BD/A, BE/A, DE/A, Aq^2;q)_n."""
    q, A, B, C, D, E = p.q, p.A, p.B, p.C, p.D, p.E
    num = (("Bq", B * q), ("Dq", D * q), ("Eq", E * q),
           ("BDE/A^2q", B * D * E / (A * A * q)))
    den = (("BD/A", B * D / A), ("BE/A", B * E / A), ("DE/A", D * E / A),
           ("Aq^2", A * q * q))
    return _poch_num(num, q, n) * _poch_den_inv(den, q, n)


def compute_V(n: int, p: TruncParams) -> complex:
    """V_n = (Aq^2, BCDEq/A^2;q)_{n+1} / (A/Cq, BDE/A^2q^2;q)_{n+1}
    * (Cq^3)^{-n}."""
    q, A, B, C, D, E = p.q, p.A, p.B, p.C, p.D, p.E
    num = (("Aq^2", A * q * q), ("BCDEq/A^2", B * C * D * E * q / (A * A)))
    den = (("A/Cq", A / (C * q)),
           ("BDE/A^2q^2", B * D * E / (A * A * q * q)))
    scale = _K.cpow_int(1.0 / (C * q ** 3), n)
    return _poch_num(num, q, n + 1) * _poch_den_inv(den, q, n + 1) * scale


def check_U_difference(n: int, p: TruncParams, atol: float = DEFAULT_ATOL,
                       rtol: float = DEFAULT_RTOL["udiff"]) -> ResidualReport:
    """U_n - U_{n+1} against its closed single-term form."""
    q, A, B, C, D, E = p.q, p.A, p.B, p.C, p.D, p.E
    lhs = compute_U(n, p) - compute_U(n + 1, p)
    pref = -(D * E / A) * _K.cpow_int(q, n) * nabla(
        (B / (A * q), A * q / D, A * q / E))
    kern = 1.0 - B * D * E * _K.cpow_int(q, 2 * n + 1) / A
    num = (("Bq", B * q), ("Dq", D * q), ("Eq", E * q),
           ("BDE/A^2q", B * D * E / (A * A * q)))
    den = (("BD/A", B * D / A), ("BE/A", B * E / A), ("DE/A", D * E / A),
           ("Aq^2", A * q * q))
    rhs = pref * kern * _poch_num(num, q, n) * _poch_den_inv(den, q, n + 1)
    return _report(lhs, rhs, atol, rtol)


def check_V_difference(n: int, p: TruncParams, atol: float = DEFAULT_ATOL,
                       rtol: float = DEFAULT_RTOL["vdiff"]) -> ResidualReport:
    """V_n - V_{n-1} against its closed single-term form."""
    q, A, B, C, D, E = p.q, p.A, p.B, p.C, p.D, p.E
    lhs = compute_V(n, p) - compute_V(n - 1, p)
    num = (("Aq^2", A * q * q), ("BCDEq/A^2", B * C * D * E * q / (A * A)))
    den = (("A/Cq", A / (C * q)),
           ("BDE/A^2q^2", B * D * E / (A * A * q * q)))
    kern = ((1.0 - B * D * E * _K.cpow_int(q, 2 * n) / A)
            * (1.0 - C * q ** 3))
    rhs = (_poch_num(num, q, n) * _poch_den_inv(den, q, n + 1)
           * kern * _K.cpow_int(1.0 / (C * q ** 3), n))
    return _report(lhs, rhs, atol, rtol)


# ---------------------------------------------------------------------------
# boundary term K_N, recurrence, decay

def _kn_coefficient(p: TruncParams) -> complex:
    """Shared prefactor (A^2 q/BDE) nabla(A/Cq, BD/A, BE/A, DE/A,
    BDE/A^2q^2) / nabla(Aq/B, Aq/D, Aq/E, BCDEq/A^2, BDEq/A)."""
    q, A, B, C, D, E = p.q, p.A, p.B, p.C, p.D, p.E
    top = nabla((A / (C * q), B * D / A, B * E / A, D * E / A,
                 B * D * E / (A * A * q * q)))
    bot = _nabla_den((("Aq/B", A * q / B), ("Aq/D", A * q / D),
                      ("Aq/E", A * q / E),
                      ("BCDEq/A^2", B * C * D * E * q / (A * A)),
                      ("BDEq/A", B * D * E * q / A)))
    return (A * A * q / (B * D * E)) * top / bot


def _require_bde(p: TruncParams) -> None:
    if 0 in (p.B, p.D, p.E):
        raise DomainError("B, D, E must be nonzero here")


def _vu_shared(p: TruncParams):
    q, A, B, C, D, E = p.q, p.A, p.B, p.C, p.D, p.E
    num1 = (("BCDEq/A^2", B * C * D * E * q / (A * A)),)
    den1 = (("A/Cq", A / (C * q)),
            ("BDE/A^2q^2", B * D * E / (A * A * q * q)))
    num0 = (("Bq", B * q), ("Dq", D * q), ("Eq", E * q),
            ("BDE/A^2q", B * D * E / (A * A * q)))
    den0 = (("BD/A", B * D / A), ("BE/A", B * E / A), ("DE/A", D * E / A))
    return num1, den1, num0, den0


def _vu_product_sc(n: int, p: TruncParams):
    """V_n U_n, scale-tracked, with the (Aq^2;q) pair, shared between V's
    numerator and U's denominator, collapsed to the single factor
    (1 - Aq^{n+2}); the separate sequences have a removable 0*inf there."""
    q, A, C = p.q, p.A, p.C
    num1, den1, num0, den0 = _vu_shared(p)
    m, e = 1.0 - A * _K.cpow_int(q, n + 2), 0
    m, e = _poch_num_sc(num1, q, n + 1, m, e)
    m, e = _poch_den_inv_sc(den1, q, n + 1, m, e)
    m, e = _poch_num_sc(num0, q, n, m, e)
    m, e = _poch_den_inv_sc(den0, q, n, m, e)
    scale = 1.0 / (C * q ** 3) if n > 0 else C * q ** 3
    for _ in range(abs(n)):
        m, e = _scm(m, e, scale)
    return m, e


def _vu_offset_sc(N: int, p: TruncParams):
    """V_N U_{N+1}, scale-tracked; the (Aq^2;q)_{N+1} factors cancel
    outright."""
    q, C = p.q, p.C
    num1, den1, num0, den0 = _vu_shared(p)
    m, e = 1.0 + 0j, 0
    m, e = _poch_num_sc(num1, q, N + 1, m, e)
    m, e = _poch_den_inv_sc(den1, q, N + 1, m, e)
    m, e = _poch_num_sc(num0, q, N + 1, m, e)
    m, e = _poch_den_inv_sc(den0, q, N + 1, m, e)
    for _ in range(N):
        m, e = _scm(m, e, 1.0 / (C * q ** 3))
    return m, e


def compute_KN(p: TruncParams) -> complex:
    """Boundary term K_N assembled from its three constituents.

    K_N = K1 - K2 + K3 * q^{N-2}/C with K1/K2 the two evaluated boundary
    products V U at -N-1 and (N, N+1) times the shared coefficient and
    (Cq^3)^N, and K3 the off-by-one window correction term. The V U pieces
    are evaluated fused and scale-tracked: their intermediates grow
    superexponentially in N while K_N itself stays bounded.
    """
    _require_bde(p)
    q, A, B, C, D, E, N = p.q, p.A, p.B, p.C, p.D, p.E, p.N
    ckm, cke = _kn_coefficient(p), 0
    for _ in range(N):
        ckm, cke = _scm(ckm, cke, C * q ** 3)
    m1, e1 = _vu_product_sc(-N - 1, p)
    m2, e2 = _vu_offset_sc(N, p)
    k1 = _sc_value(*_scm(m1, e1 + cke, ckm))
    k2 = _sc_value(*_scm(m2, e2 + cke, ckm))
    kern = ((1.0 - B * D * E * _K.cpow_int(q, 2 * N + 3) / A)
            / _nabla_den((("BDEq/A", B * D * E * q / A),)))
    num = (("Bq", B * q), ("Dq", D * q), ("Eq", E * q),
           ("BCDEq^2/A^2", B * C * D * E * q * q / (A * A)))
    den = (("A/C", A / C), ("BDq/A", B * D * q / A),
           ("BEq/A", B * E * q / A), ("DEq/A", D * E * q / A))
    k3 = kern * _poch_num(num, q, N + 1) * _poch_den_inv(den, q, N + 1)
    return k1 - k2 + k3 * _K.cpow_int(q, N - 2) / C


def compute_KN_printed(p: TruncParams) -> complex:
    """K_N in its fully displayed three-summand form (cross-check only;
    compute_KN is the primary definition)."""
    _require_bde(p)
    q, A, B, C, D, E, N = p.q, p.A, p.B, p.C, p.D, p.E, p.N
    s1 = (_K.cpow_int(q, N - 2)
          * (1.0 - B * D * E * _K.cpow_int(q, 2 * N + 3) / A)
          * _poch_num((("Bq", B * q), ("Dq", D * q), ("Eq", E * q),
                       ("BCDEq^2/A^2", B * C * D * E * q * q / (A * A))),
                      q, N + 1)
          / (C * _nabla_den((("BDEq/A", B * D * E * q / A),)))
          * _poch_den_inv((("A/C", A / C), ("BDq/A", B * D * q / A),
                           ("BEq/A", B * E * q / A),
                           ("DEq/A", D * E * q / A)), q, N + 1))
    s2 = (B * D * E * (1.0 - _K.cpow_int(q, N - 1) / A)
          * _poch_num((("A/BD", A / (B * D)), ("A/BE", A / (B * E)),
                       ("A/DE", A / (D * E)), ("C/A", C / A)), q, N + 2)
          / (C * _nabla_den((("C/A", C / A), ("Aq/B", A * q / B),
                             ("Aq/D", A * q / D), ("Aq/E", A * q / E),
                             ("BDEq/A", B * D * E * q / A))))
          * _poch_den_inv((("1/B", 1.0 / B), ("1/D", 1.0 / D),
                           ("1/E", 1.0 / E),
                           ("A^2/BCDEq", A * A / (B * C * D * E * q))),
                          q, N + 1))
    s3 = ((A * A * q / (B * D * E))
          * nabla((B * q, D * q, E * q,
                   B * D * E * _K.cpow_int(q, N - 1) / (A * A)))
          * _poch_num((("BCDEq^2/A^2", B * C * D * E * q * q / (A * A)),
                       ("Bq^2", B * q * q), ("Dq^2", D * q * q),
                       ("Eq^2", E * q * q)), q, N)
          / _nabla_den((("Aq/B", A * q / B), ("Aq/D", A * q / D),
                        ("Aq/E", A * q / E),
                        ("BDEq/A", B * D * E * q / A)))
          * _poch_den_inv((("A/C", A / C), ("BDq/A", B * D * q / A),
                           ("BEq/A", B * E * q / A),
                           ("DEq/A", D * E * q / A)), q, N))
    return s1 + s2 - s3


def check_recurrence(p: TruncParams, atol: float = DEFAULT_ATOL,
                     rtol: float = DEFAULT_RTOL["recurrence"]) \
        -> ResidualReport:
    """Window-growth recurrence

        S_{N+1}(A;C) = K_N / (Cq^3)^N
            + (A^2 q/BDE) nabla(BDE/A, Cq^3, BD/A, BE/A, DE/A)
              / nabla(BDEq/A, BCDEq/A^2, Aq/B, Aq/D, Aq/E)
              * S_N(Aq;Cq).

    p.N names the window of the right-hand side; the left side evaluates at
    N+1 with the same (A, C).
    """
    _require_bde(p)
    q, A, B, C, D, E, N = p.q, p.A, p.B, p.C, p.D, p.E, p.N
    lhs = truncated_S(dataclasses.replace(p, N=N + 1))
    coeff = ((A * A * q / (B * D * E))
             * nabla((B * D * E / A, C * q ** 3, B * D / A, B * E / A,
                      D * E / A))
             / _nabla_den((("BDEq/A", B * D * E * q / A),
                           ("BCDEq/A^2", B * C * D * E * q / (A * A)),
                           ("Aq/B", A * q / B), ("Aq/D", A * q / D),
                           ("Aq/E", A * q / E))))
    shifted = dataclasses.replace(p, A=A * q, C=C * q)
    rhs = (compute_KN(p) * _K.cpow_int(C * q ** 3, -N)
           + coeff * truncated_S(shifted))
    return _report(lhs, rhs, atol, rtol)


@dataclass(frozen=True)
class KNDecayReport:
    """Magnitude trace of K_N/(Cq^3)^N together with the closed limit."""

    magnitudes: tuple
    final_magnitude: float
    kn_at_nmax: complex
    limit: complex
    limit_rel_err: float
    eventually_decreasing: bool
    passed: bool
    note: str = ""


def kn_limit(p: TruncParams, policy: TruncationPolicy | None = None) -> complex:
    """Closed N -> infinity value of K_N as a theta-product ratio."""
    _require_bde(p)
    q, A, B, C, D, E = p.q, p.A, p.B, p.C, p.D, p.E
    ctx = QContext(q, policy or DEFAULT_POLICY)
    pref = (B * D * E
            / (C * _nabla_den((("Aq/B", A * q / B), ("Aq/D", A * q / D),
                               ("Aq/E", A * q / E),
                               ("BDEq/A", B * D * E * q / A)))))
    th1 = theta_multi((A / (B * D), A / (B * E), A / (D * E), A / C), ctx)
    th2 = theta_multi((1.0 / B, 1.0 / D, 1.0 / E,
                       A * A / (B * C * D * E * q)), ctx)
    bot = qpochhammer_inf_multi(
        (1.0 / B, 1.0 / D, 1.0 / E, A * A / (B * C * D * E * q), A / C,
         B * D * q / A, B * E * q / A, D * E * q / A), ctx)
    if bot.value == 0:
        raise PoleError("limit denominator product vanishes",
                        factor="(1/B,1/D,1/E,A^2/BCDEq,A/C,BDq/A,BEq/A,"
                               "DEq/A;q)_inf")
    scale = A * A * C * q / (B * D * E) ** 2
    return pref * (th1.value - scale * th2.value) / bot.value


def check_KN_decay(p: TruncParams, N_max: int = 80, tol: float =
                   DEFAULT_RTOL["kn-decay"],
                   policy: TruncationPolicy | None = None) -> KNDecayReport:
    """Trace |K_N/(Cq^3)^N| for N = 0..N_max and compare K_{N_max} with the
    closed limit.

    Precondition |Cq^2| > 1; the trace actually dies out only when
    |Cq^3| > 1 (K_N tends to a finite, generically nonzero limit). passed
    requires the final magnitude below tol and monotone decrease over the
    last quarter of indices.
    """
    if abs(p.C * p.q * p.q) <= 1.0:
        raise DomainError("decay check needs |Cq^2| > 1")
    if N_max < 4:
        raise DomainError("N_max too small to judge decay")
    base = abs(p.C * p.q ** 3)
    mags = []
    kn = 0j
    for N in range(N_max + 1):
        kn = compute_KN(dataclasses.replace(p, N=N))
        mags.append(abs(kn) / base ** N)
    lim = kn_limit(p, policy)
    scale = max(abs(kn), abs(lim))
    rel = abs(kn - lim) / max(scale, _TINY)
    q3 = 3 * N_max // 4
    decreasing = all(mags[k + 1] <= mags[k] * (1.0 + 1e-9)
                     for k in range(q3, N_max))
    passed = mags[-1] < tol and decreasing
    return KNDecayReport(tuple(mags), mags[-1], kn, lim, rel, decreasing,
                         passed,
                         note=f"|Cq^3| = {base:.6g}")


# ---------------------------------------------------------------------------
# T(X;C): one-step recursion, iterated steps, constancy of T/F

def check_T_recursion(p: TParams, policy: TruncationPolicy | None = None,
                      atol: float = DEFAULT_ATOL,
                      rtol: float = DEFAULT_RTOL["t-recursion"]) \
        -> ResidualReport:
    """One step of the argument shift C -> Cq:

        T(X;C) = nabla(1/BCDEXq, BCDEX^2 q, BC/q, CD/q, CE/q)
                 / nabla(1/BCDEX^2, C/q^3, BCDX, BCEX, CDEX) * T(X;Cq).
    """
    q, X, B, C, D, E = p.q, p.X, p.B, p.C, p.D, p.E
    if C == 0:
        raise DomainError("C must be nonzero")
    ctx = QContext(q, policy or DEFAULT_POLICY)
    m = B * C * D * E * X
    mX = m * X
    top = nabla((1.0 / (m * q), mX * q, B * C / q, C * D / q, C * E / q))
    bot = _nabla_den((("1/BCDEX^2", 1.0 / mX), ("C/q^3", C / q ** 3),
                      ("BCDX", B * C * D * X), ("BCEX", B * C * E * X),
                      ("CDEX", C * D * E * X)))
    lhs = eval_T(p, ctx)
    rhs = eval_T(dataclasses.replace(p, C=C * q), ctx)
    value = (top / bot) * rhs.value
    est = lhs.est_error + abs(top / bot) * rhs.est_error
    return _report(lhs.value, value, atol, rtol,
                   note=f"combined tail bound {est:.3e}")


def check_T_iteration(p: TParams, m: int,
                      policy: TruncationPolicy | None = None,
                      atol: float = DEFAULT_ATOL,
                      rtol: float = DEFAULT_RTOL["t-iteration"]) \
        -> ResidualReport:
    """m collapsed recursion steps at X = q:

        T(q;C) = (BCDEq^3, BC/q, CD/q, CE/q;q)_m
                 / (C/q^3, BCDq, BCEq, CDEq;q)_m * T(q;Cq^m).
    """
    q, X, B, C, D, E = p.q, p.X, p.B, p.C, p.D, p.E
    if X != q:
        raise DomainError("the collapsed iteration holds at X = q only")
    if C == 0:
        raise DomainError("C must be nonzero")
    if m < 1:
        raise DomainError("m must be >= 1")
    ctx = QContext(q, policy or DEFAULT_POLICY)
    pref = (_poch_num((("BCDEq^3", B * C * D * E * q ** 3),
                       ("BC/q", B * C / q), ("CD/q", C * D / q),
                       ("CE/q", C * E / q)), q, m)
            * _poch_den_inv((("C/q^3", C / q ** 3), ("BCDq", B * C * D * q),
                             ("BCEq", B * C * E * q),
                             ("CDEq", C * D * E * q)), q, m))
    lhs = eval_T(p, ctx)
    rhs = eval_T(dataclasses.replace(p, C=C * _K.cpow_int(q, m)), ctx)
    return _report(lhs.value, pref * rhs.value, atol, rtol)


def check_Q_constancy(p: TParams, steps: int = 4,
                      policy: TruncationPolicy | None = None,
                      atol: float = DEFAULT_ATOL,
                      rtol: float = DEFAULT_RTOL["q-constancy"],
                      qfactor_rtol: float | None = None) -> ResidualReport:
    """Constancy of T(X;C)/F(C) under C -> Cq^k, k = 0..steps, plus
    agreement of the constant with the closed q_factor ratio.

    lhs/rhs are the max/min-modulus ratios; abs_err is the worst pairwise
    spread.
    """
    if steps < 1:
        raise DomainError("steps must be >= 1")
    if p.C == 0:
        raise DomainError("C must be nonzero")
    ctx = QContext(p.q, policy or DEFAULT_POLICY)
    if qfactor_rtol is None:
        qfactor_rtol = DEFAULT_RTOL["q-constancy"]
    ratios = []
    for k in range(steps + 1):
        pk = dataclasses.replace(p, C=p.C * _K.cpow_int(p.q, k))
        t = eval_T(pk, ctx)
        f = F_function(pk, ctx)
        if f.value == 0:
            raise PoleError("F vanished under scaling", factor="F(Cq^k)")
        ratios.append(t.value / f.value)
    spread = max(abs(r1 - r2) for r1 in ratios for r2 in ratios)
    scale = max(abs(r) for r in ratios)
    hi = max(ratios, key=abs)
    lo = min(ratios, key=abs)
    qf = q_factor(p.X, p.B, p.D, p.E, ctx)
    qf_err = abs(ratios[0] - qf.value)
    qf_ok = qf_err <= atol + qfactor_rtol * max(abs(ratios[0]),
                                                abs(qf.value))
    rep = _report(hi, lo, atol, rtol,
                  note=(f"spread {spread:.3e} over {steps + 1} scalings; "
                        f"|r0 - q_factor| = {qf_err:.3e}"),
                  extra_ok=qf_ok)
    passed = (spread <= atol + rtol * scale) and qf_ok
    return dataclasses.replace(rep, abs_err=spread,
                               rel_err=spread / max(scale, _TINY),
                               passed=passed)


# ---------------------------------------------------------------------------
# closed-form endpoints

def check_rogers(B: complex, C: complex, D: complex, E: complex,
                 ctx: QContext, atol: float = DEFAULT_ATOL,
                 rtol: float = DEFAULT_RTOL["rogers"]) -> ResidualReport:
    """Unilateral very-well-poised sum against its closed product.

    lhs is the explicit unilateral series with kernel parameter BCDEq^2 and
    argument C/q^3 (the X = q endpoint), rhs the closed four-over-four
    product ratio. Needs |C/q^3| < 1; B, D, E nonzero.
    """
    q = ctx.q
    B, C, D, E = map(_as_complex, (B, C, D, E))
    if 0 in (B, D, E):
        raise DomainError("B, D, E must be nonzero")
    z = C / q ** 3
    if abs(z) >= 1.0:
        raise NonConvergence(
            f"unilateral argument |C/q^3| = {abs(z)} is outside the "
            f"convergence disk")
    a = B * C * D * E * q * q
    s = cmath.sqrt(a)
    spec = SeriesSpec(
        (a, q * s, -q * s, B * q * q, D * q * q, E * q * q),
        (s, -s, C * D * E * q, B * C * E * q, B * C * D * q),
        z)
    lhs = eval_phi(spec, ctx)
    rhs = rogers_closed(B, C, D, E, ctx)
    return _report(lhs.value, rhs.value, atol, rtol,
                   note=f"combined tail bound "
                        f"{lhs.est_error + rhs.est_error:.3e}")


def check_bailey(form: str, params, policy: TruncationPolicy | None = None,
                 atol: float = DEFAULT_ATOL,
                 rtol: float | None = None) -> ResidualReport:
    """Bilateral sum against its closed product, in either parameter row.

    form "a": params is BaileyParams, series in (a; b, c, d, e) with
    argument a^2 q/(bcde). form "X": params is TParams, series T(X;C) with
    argument C/q^3.
    """
    if form == "a":
        p: BaileyParams = params
        if rtol is None:
            rtol = DEFAULT_RTOL["bailey-a"]
        z = p.series_arg
        if abs(z) >= 1.0:
            raise NonConvergence(
                f"bilateral argument |a^2 q/(bcde)| = {abs(z)} is outside "
                f"the convergence disk")
        ctx = QContext(p.q, policy or DEFAULT_POLICY)
        lhs = vwp_psi6(p.a, (p.b, p.c, p.d, p.e), z, ctx,
                       ("b", "c", "d", "e"),
                       ("aq/b", "aq/c", "aq/d", "aq/e"))
        rhs = bailey_closed_a(p, ctx)
    elif form in ("X", "x"):
        t: TParams = params
        if rtol is None:
            rtol = DEFAULT_RTOL["bailey-x"]
        ctx = QContext(t.q, policy or DEFAULT_POLICY)
        lhs = eval_T(t, ctx)
        rhs = bailey_closed_X(t, ctx)
    else:
        raise DomainError(f"unknown form {form!r}; use 'a' or 'X'")
    return _report(lhs.value, rhs.value, atol, rtol,
                   note=f"combined tail bound "
                        f"{lhs.est_error + rhs.est_error:.3e}")


def map_remark1(p: BaileyParams) -> TParams:
    """Parameter bridge from the (a; b, c, d, e) row to the (X; B, C, D, E)
    row: X = aq/b, B = bc/aq^2, C = a^2 q^4/bcde, D = bd/aq^2, E = be/aq^2."""
    q, a, b, c, d, e = p.q, p.a, p.b, p.c, p.d, p.e
    aq2 = a * q * q
    return TParams(q=q, X=a * q / b, B=b * c / aq2,
                   C=a * a * q ** 4 / (b * c * d * e), D=b * d / aq2,
                   E=b * e / aq2)


def check_remark1_equivalence(p: BaileyParams,
                              policy: TruncationPolicy | None = None,
                              atol: float = DEFAULT_ATOL,
                              rtol: float = DEFAULT_RTOL["remark1"],
                              arg_rtol: float = 1e-15) -> ResidualReport:
    """The bridge map must carry one closed product onto the other and make
    the two series arguments coincide: C/q^3 = a^2 q/(bcde)."""
    t = map_remark1(p)
    ctx = QContext(p.q, policy or DEFAULT_POLICY)
    lhs = bailey_closed_a(p, ctx)
    rhs = bailey_closed_X(t, ctx)
    z1 = t.series_arg
    z2 = p.series_arg
    arg_err = abs(z1 - z2)
    arg_scale = max(abs(z1), abs(z2), _TINY)
    arg_ok = arg_err <= arg_rtol * arg_scale
    return _report(lhs.value, rhs.value, atol, rtol,
                   note=f"series-argument relative mismatch "
                        f"{arg_err / arg_scale:.3e}",
                   extra_ok=arg_ok)
