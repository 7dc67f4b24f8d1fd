"""Scalar numeric kernels: q-product loops and ratio-driven series sums.

Pure-Python twin of the compiled extension ``qsix._kernels_cy``. The two
implement the same algorithms step for step; any change here must be mirrored
there. Everything operates on built-in complex scalars and returns plain
tuples, leaving validation, naming of factors, and error raising to the
callers in qcore/series.
"""

from __future__ import annotations

import math

BACKEND = "python"

OK = 0
TERMINATED = 1
POLE = 2
BUDGET = 3
DIVERGED = 4

_OVERFLOW = 1e150


def cpow_int(base: complex, n: int) -> complex:
    """base**n by binary exponentiation; shared op order across backends."""
    if n == 0:
        return 1.0 + 0j
    neg = n < 0
    e = -n if neg else n
    acc = 1.0 + 0j
    b = complex(base)
    while e:
        if e & 1:
            acc *= b
        e >>= 1
        if e:
            b *= b
    if neg:
        return 1.0 / acc
    return acc


def qpoch(a: complex, q: complex, n: int, pole_eps: float):
    """Finite q-shifted factorial (a;q)_n for any integer n.

    Returns (value, status, bad_k). For n < 0 the factors (1 - a q^-k),
    k = 1..-n, are divided out; one of them within pole_eps (relative) of
    zero gives status POLE with bad_k = k.
    """
    if n == 0:
        return 1.0 + 0j, OK, 0
    if n > 0:
        acc = 1.0 + 0j
        w = 1.0 + 0j
        for _ in range(n):
            acc *= 1.0 - a * w
            w *= q
        return acc, OK, 0
    acc = 1.0 + 0j
    w = 1.0 + 0j
    for k in range(1, -n + 1):
        w /= q
        aw = a * w
        f = 1.0 - aw
        if abs(f) <= pole_eps * (1.0 + abs(aw)):
            return complex("nan"), POLE, k
        acc *= f
    return 1.0 / acc, OK, 0


def qpoch_raw(a: complex, q: complex, n: int) -> complex:
    """(a;q)_n with no pole checks; callers must have vetted the factors."""
    if n >= 0:
        acc = 1.0 + 0j
        w = 1.0 + 0j
        for _ in range(n):
            acc *= 1.0 - a * w
            w *= q
        return acc
    acc = 1.0 + 0j
    w = 1.0 + 0j
    for _ in range(-n):
        w /= q
        acc *= 1.0 - a * w
    return 1.0 / acc


def qpoch_inf(a: complex, q: complex, tail_tol: float, max_terms: int,
              window: int, zero_eps: float):
    """(a;q)_infinity = prod_{k>=0} (1 - a q^k), certified geometric tail.

    Iteration stops once |a q^k| < tail_tol for `window` consecutive k; the
    est_error bounds |true - value| through the log-tail
    sum_{j>k} |a q^j| / (1 - |a q^{k+1}|). Returns
    (value, est_error, terms, terminated, status); terminated=1 marks an
    exact value (a == 0, or a vanished factor making the product 0).
    """
    if a == 0:
        return 1.0 + 0j, 0.0, 1, 1, OK
    absq = abs(q)
    acc = 1.0 + 0j
    w = 1.0 + 0j
    run = 0
    for k in range(max_terms):
        aw = a * w
        mag = abs(aw)
        f = 1.0 - aw
        if abs(f) <= zero_eps * (1.0 + mag):
            return 0.0 + 0j, 0.0, k + 1, 1, OK
        acc *= f
        if mag < tail_tol:
            run += 1
            if run >= window:
                head = mag * absq
                s = head / (1.0 - absq)
                est = abs(acc) * math.expm1(s / (1.0 - head))
                return acc, est, k + 1, 0, OK
        else:
            run = 0
        w *= q
    return acc, float("inf"), max_terms, 0, BUDGET


def _crossing(ax: float, lg: float, down: bool, floor: int) -> int:
    """Step count after which |x q^e| has crossed 1 in this direction."""
    if down:
        if 0.0 < ax < 1.0:
            k = int(math.ceil(-math.log(ax) / lg))
            if k > floor:
                return k
    elif ax > 1.0:
        k = int(math.ceil(math.log(ax) / lg))
        if k > floor:
            return k
    return floor


def series_side(num, den, q: complex, z: complex, direction: int,
                vwp_a: complex, use_vwp: bool, fixed_terms: int,
                tail_tol: float, max_terms: int, window: int,
                pole_eps: float, zero_eps: float, recompute_every: int):
    """One index direction of a Pochhammer-ratio power series.

    Sums t(n) over n = d, 2d, ... for d = +-1, leaving the n = 0 term (always
    1) to the caller, where

        t(n) = P(n) * prod_i (num[i];q)_n / prod_j (den[j];q)_n * z^n,
        P(n) = (1 - vwp_a q^{2n}) / (1 - vwp_a)     (only when use_vwp).

    Each outward step multiplies the running term by one new factor per
    parameter; those factors decide terminations and poles:

        upward   * z   * (1 - num[i] q^m) / (1 - den[j] q^m),  m = n-1,
        downward * 1/z * (1 - den[j] q^m) / (1 - num[i] q^m),  m = n,

    so downward the roles swap: a den-side zero terminates the direction, a
    num-side zero is a pole. The step multiplier is accumulated with top and
    bottom factors interleaved: downward every factor grows like |x q^n|, so
    the two full products overflow after a few hundred steps even while
    their ratio stays of order one. P(n) is a per-term multiplier; its
    zeros suppress single terms to roundoff level without terminating
    anything. The prefactor rides along as h = g q^{2n} rather than as the
    bare power q^{2n}: h decays with the terms, while q^{2n} alone leaves
    double range near step 500 on downward walks. The running power q^m is
    refreshed by exact integer exponentiation every `recompute_every`
    steps; the ratio product itself stays incremental (a from-scratch
    rebuild would overflow: isolated q-shifted factorials grow
    superexponentially in |n| even while the term stays bounded).

    fixed_terms >= 0 sums exactly that many terms (no tail test); -1 selects
    adaptive mode, which stops after `window` consecutive terms satisfy
    |t| <= tail_tol * (1 + |partial|) with step ratio below one, and bounds
    the remainder by |t_last| * rho / (1 - rho). The adaptive stop is held
    off until the step index passes every factor base's unit-modulus
    crossing |x q^e| = 1: term profiles can dip and then hump while factors
    cross one, but no new growth can start past the last crossing.

    Returns (acc, tail, used, status, bad_is_num, bad_slot, bad_exp).
    """
    rn = len(num)
    rd = len(den)
    down = direction < 0
    one_minus_a = 1.0 - vwp_a if use_vwp else 1.0 + 0j
    step_z = 1.0 / z if down else z
    n_min = 0
    if fixed_terms < 0:
        lg = -math.log(abs(q))
        for x in num:
            n_min = _crossing(abs(x), lg, down, n_min)
        for x in den:
            n_min = _crossing(abs(x), lg, down, n_min)
        if use_vwp:
            half = _crossing(abs(vwp_a), 2.0 * lg, down, 0)
            if half > n_min:
                n_min = half
        if n_min > max_terms // 2:
            n_min = max_terms // 2
    acc = 0j
    g = 1.0 + 0j            # prod (num;q)_n / (den;q)_n * z^n at current n
    qe = 1.0 / q if down else 1.0 + 0j   # q^m for the next step's factors
    h = 1.0 + 0j            # g * q^{2n} for the prefactor
    qsq = q * q
    prev_abs = 1.0          # |t(0)|
    run = 0
    steps = 0
    nt = rd if down else rn
    nb = rn if down else rd
    npair = nt if nt < nb else nb
    ftop = [0j] * nt
    fbot = [0j] * nb
    while True:
        if fixed_terms >= 0:
            if steps >= fixed_terms:
                return acc, 0.0, steps, OK, 0, 0, 0
        elif steps >= max_terms:
            return acc, float("inf"), steps, BUDGET, 0, 0, 0
        n = -(steps + 1) if down else steps + 1
        e = n if down else n - 1
        if down:
            for j in range(rd):
                w = den[j] * qe
                f = 1.0 - w
                if abs(f) <= zero_eps * (1.0 + abs(w)):
                    return acc, 0.0, steps, TERMINATED, 0, j, e
                ftop[j] = f
            for i in range(rn):
                w = num[i] * qe
                f = 1.0 - w
                if abs(f) <= pole_eps * (1.0 + abs(w)):
                    return acc, 0.0, steps, POLE, 1, i, e
                fbot[i] = f
        else:
            for i in range(rn):
                w = num[i] * qe
                f = 1.0 - w
                if abs(f) <= zero_eps * (1.0 + abs(w)):
                    return acc, 0.0, steps, TERMINATED, 1, i, e
                ftop[i] = f
            for j in range(rd):
                w = den[j] * qe
                f = 1.0 - w
                if abs(f) <= pole_eps * (1.0 + abs(w)):
                    return acc, 0.0, steps, POLE, 0, j, e
                fbot[j] = f
        steps += 1
        r = step_z
        for k in range(npair):
            r = r * ftop[k] / fbot[k]
        for k in range(npair, nt):
            r = r * ftop[k]
        for k in range(npair, nb):
            r = r / fbot[k]
        g = g * r
        if use_vwp:
            h = h * r / qsq if down else h * r * qsq
            term = (g - vwp_a * h) / one_minus_a
        else:
            term = g
        acc += term
        abs_term = abs(term)
        if abs_term > _OVERFLOW or abs_term != abs_term:
            return acc, float("inf"), steps, DIVERGED, 0, 0, 0
        if fixed_terms < 0:
            ratio = abs_term / prev_abs if prev_abs > 0.0 else 2.0
            if (steps >= n_min and ratio < 1.0
                    and abs_term <= tail_tol * (1.0 + abs(acc))):
                run += 1
                if run >= window:
                    tail = abs_term * ratio / (1.0 - ratio)
                    return acc, tail, steps, OK, 0, 0, 0
            else:
                run = 0
            prev_abs = abs_term
        if recompute_every > 0 and steps % recompute_every == 0:
            qe = cpow_int(q, -(steps + 1) if down else steps)
        else:
            qe = qe / q if down else qe * q
