"""Foundational q-arithmetic.

Difference products, q-shifted factorials for any integer index, certified
infinite q-products, and multiplicative theta functions. Everything downstream
(series evaluators, identity checks) is built on these.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import _backend as _K
from .config import POLE_EPS, ZERO_EPS
from .errors import BudgetExceeded, DomainError, PoleError


def _as_complex(x) -> complex:
    z = complex(x)
    if not (cmath.isfinite(z)):
        raise DomainError(f"non-finite input {x!r}")
    return z


@dataclass(frozen=True)
class TruncationPolicy:
    """Caps shared by every infinite sum and product.

    tail_tol
        magnitude below which a term/factor counts toward stagnation.
    max_terms
        hard budget per one-sided sum or product.
    stagnation_window
        consecutive satisfying terms required before convergence is declared.
    """

    tail_tol: float = 1e-15
    max_terms: int = 10000
    stagnation_window: int = 3

    def __post_init__(self):
        if not self.tail_tol > 0.0:
            raise DomainError("tail_tol must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")
        if self.stagnation_window < 1:
            raise DomainError("stagnation_window must be >= 1")


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class QContext:
    """Base q together with the truncation policy for dependent evaluations.

    Requires 0 < |q| < 1.
    """

    q: complex
    policy: TruncationPolicy = field(default=DEFAULT_POLICY)

    def __post_init__(self):
        q = _as_complex(self.q)
        object.__setattr__(self, "q", q)
        if not 0.0 < abs(q) < 1.0:
            raise DomainError(f"|q| must lie in (0, 1), got |q| = {abs(q)}")


@dataclass(frozen=True)
class EvalResult:
    """Value of a truncated evaluation plus its accounting.

    est_error bounds the truncation error under the geometric-tail
    assumption; terminated is True when the result is exact (the sum or
    product ended on a vanishing factor rather than a tolerance).
    """

    value: complex
    est_error: float
    terms_used: int
    terminated: bool


def nabla(xs: Iterable[complex]) -> complex:
    """Difference product prod_i (1 - x_i) over a nonempty sequence.

    Examples
    --------
    >>> nabla([0.5])
    (0.5+0j)
    >>> nabla([0.5, 2.0, 3.0])
    (1+0j)
    >>> nabla([1.0, 7.3])
    0j
    """
    vals = [_as_complex(x) for x in xs]
    if not vals:
        raise DomainError("nabla needs at least one argument")
    acc = 1.0 + 0j
    for x in vals:
        acc *= 1.0 - x
    return acc


def qpochhammer(a: complex, ctx: QContext, n: int) -> complex:
    """q-shifted factorial (a;q)_n for any integer n.

    For n > 0 this is the plain product (1-a)(1-aq)...(1-aq^{n-1}); n = 0
    gives 1; n < 0 divides out the factors (1 - a q^{-1})...(1 - a q^{n}),
    raising PoleError when one of them sits within POLE_EPS of zero.

    Examples
    --------
    >>> ctx = QContext(0.5)
    >>> qpochhammer(0.5, ctx, 3)
    (0.328125+0j)
    >>> qpochhammer(0.25, ctx, -1)
    (2+0j)
    """
    a = _as_complex(a)
    val, status, bad_k = _K.qpoch(a, ctx.q, int(n), POLE_EPS)
    if status == _K.POLE:
        raise PoleError(
            f"(a;q)_{n} with a = {a}: factor 1 - a*q^(-{bad_k}) vanishes",
            factor="1 - a*q^-k", exponent=-bad_k)
    return val


def qpochhammer_multi(as_: Sequence[complex], ctx: QContext, n: int) -> complex:
    """prod_i (a_i;q)_n, the product convention used throughout."""
    acc = 1.0 + 0j
    for a in as_:
        acc *= qpochhammer(a, ctx, n)
    return acc


def qpochhammer_inf(a: complex, ctx: QContext) -> EvalResult:
    """Infinite product (a;q)_infinity with a certified geometric tail.

    The loop stops once |a q^k| < tail_tol holds for stagnation_window
    consecutive k; est_error then bounds |true - value| via the remaining
    geometric mass. An exactly vanishing factor short-circuits to 0 with
    terminated=True; a = 0 returns 1 the same way.

    Examples
    --------
    >>> r = qpochhammer_inf(0.5, QContext(0.5))
    >>> round(abs(r.value), 9)
    0.288788095
    """
    a = _as_complex(a)
    p = ctx.policy
    val, est, terms, exact, status = _K.qpoch_inf(
        a, ctx.q, p.tail_tol, p.max_terms, p.stagnation_window, ZERO_EPS)
    if status == _K.BUDGET:
        raise BudgetExceeded(
            f"(a;q)_inf with a = {a}: no stagnation within "
            f"{p.max_terms} factors")
    return EvalResult(val, est, terms, bool(exact))


def qpochhammer_inf_multi(as_: Sequence[complex], ctx: QContext) -> EvalResult:
    """prod_i (a_i;q)_infinity with composed error bound."""
    out = EvalResult(1.0 + 0j, 0.0, 0, True)
    for a in as_:
        out = _mul_results(out, qpochhammer_inf(a, ctx))
    return out


def theta(x: complex, ctx: QContext) -> EvalResult:
    """Multiplicative theta function (x;q)_inf (q/x;q)_inf.

    Satisfies the inversion symmetry theta(x) = theta(q/x) and vanishes
    exactly at x in {q^k : k integer}. x must be nonzero.
    """
    x = _as_complex(x)
    if x == 0:
        raise DomainError("theta requires x != 0")
    return _mul_results(qpochhammer_inf(x, ctx),
                        qpochhammer_inf(ctx.q / x, ctx))


def theta_multi(xs: Sequence[complex], ctx: QContext) -> EvalResult:
    """prod_i theta(x_i; q)."""
    out = EvalResult(1.0 + 0j, 0.0, 0, True)
    for x in xs:
        out = _mul_results(out, theta(x, ctx))
    return out


def _mul_results(a: EvalResult, b: EvalResult) -> EvalResult:
    """Product of two certified values; first-order error composition."""
    value = a.value * b.value
    est = (abs(a.value) * b.est_error + abs(b.value) * a.est_error
           + a.est_error * b.est_error)
    exact = (a.terminated and b.terminated) or value == 0
    return EvalResult(value, est, a.terms_used + b.terms_used, exact)
