"""
Rational generating functions ``Z_n = X_{n-1}``.

The coefficient of ``t^l`` in ``Z_n`` is the multiplicity of ``T(n-1)`` in
``V^{(x)l}``.  ``Z_closed`` builds ``Z_n`` from the digit product formula;
the ``verify_*`` functions check the linear recurrences, multiplicativity and
the descriptions of ``c_s`` as exact equalities of reduced rational functions.
"""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

from .algebra import ONE, T, RatFn, RatPoly, chebyshev_Q, compose_R_Q, path_poly_P, taylor_coeffs
from .fusion import _raw_digits, _valuation, check_prime, v_power_rows
from .report import Case, Report, compare

__all__ = [
    "GenFunQuery", "Z_closed", "Z", "X", "Z_single_digit", "c_s_fn", "F_a",
    "c_s_form_A", "c_s_form_B", "c_s_form_C",
    "verify_linear_recurrences", "verify_multiplicativity", "verify_cs_identities",
    "verify_single_digit", "coeffs_vs_oracle", "recurrence_terms",
]

EXHAUSTIVE_LIMIT = 125
SAMPLE_SIZE = 50


@dataclass(frozen=True)
class GenFunQuery:
    p: int
    n: int

    def __post_init__(self):
        check_prime(self.p)
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise ValueError("Z_n needs n >= 1 (Z_0 = 1/t is a constant)")

    @property
    def digits(self) -> list[int]:
        return _raw_digits(self.n, self.p)

    @property
    def s(self) -> int:
        return len(self.digits) - 1


INV_T = RatFn(ONE, T, reduced=True)


@lru_cache(maxsize=None)
def _rev_R(m: int, i: int, p: int) -> RatPoly:
    # R_{m,i} is monic of degree m p^i; reversal w.r.t. that degree keeps zero roots
    return compose_R_Q(m, i, p).reverse(m * p ** i)


@lru_cache(maxsize=None)
def _Z_closed(n: int, p: int) -> RatFn:
    if n == 0:
        return INV_T
    num = T ** (n - 1)
    den = ONE
    for i, a in enumerate(_raw_digits(n, p)):
        if a:
            # a zero digit contributes R_{p-1,i} to both sides; it cancels
            num = num * _rev_R(p - a - 1, i, p)
            den = den * _rev_R(p - 1, i, p)
    # coprime by construction: numerator roots have angles with a denominator
    # prime to p, denominator roots are 2cos(j pi / p^{i+1}); den(0) = 1.
    return RatFn(num, den, reduced=True)


def Z_closed(q) -> RatFn:
    """``Z_n`` from the digit product formula; accepts a GenFunQuery or ``(p, n)``."""
    if isinstance(q, GenFunQuery):
        return _Z_closed(q.n, q.p)
    p, n = q
    if n == 0:
        check_prime(p)
        return INV_T
    q = GenFunQuery(p, n)
    return _Z_closed(q.n, q.p)


def Z(n: int, p: int) -> RatFn:
    """``Z_n`` with ``Z_0 = 1/t``."""
    return Z_closed((p, n))


def X(n: int, p: int) -> RatFn:
    """``X_n = Z_{n+1}`` with ``X_{-1} = 1/t``."""
    return Z(n + 1, p)


def F_a(a: int, p: int) -> RatFn:
    """``t^a P_{p-a-1}(t) / P_{p-1}(t)``."""
    return RatFn(T ** a * path_poly_P(p - a - 1), path_poly_P(p - 1))


@lru_cache(maxsize=None)
def c_s_fn(s: int, p: int) -> RatFn:
    """``c_s = 1 / Q_{p^s}(1/t) = t^{p^s} / (t^{p^s} Q_{p^s}(1/t))``; ``c_0 = t``."""
    check_prime(p)
    if s < 0:
        raise ValueError("s must be non-negative")
    if s == 0:
        return RatFn(T, ONE, reduced=True)
    N = p ** s
    return RatFn(T ** N, chebyshev_Q(N).reverse(N))


def c_s_form_A(s: int, p: int) -> RatFn:
    """``t Z_{p^s} / (1 + t Z_{2p^s})``."""
    N = p ** s
    return T * Z(N, p) / (1 + T * Z(2 * N, p))


def c_s_form_B(s: int, p: int) -> RatFn:
    """``t^2 Z_{p^s - 1} / (1 - 2 t^3 sum_{i<s} Z_{p^i} Z_{p^i - 1})``."""
    acc = RatFn.const(0)
    for i in range(s):
        acc = acc + Z(p ** i, p) * Z(p ** i - 1, p)
    return T ** 2 * Z(p ** s - 1, p) / (1 - 2 * T ** 3 * acc)


def c_s_form_C(s: int, p: int) -> RatFn:
    """``c_1(c_{s-1})``, unrolled from ``c_0 = t``."""
    if s == 0:
        return RatFn(T, ONE, reduced=True)
    c1 = c_s_fn(1, p)
    acc = RatFn(T, ONE, reduced=True)
    for _ in range(s):
        acc = c1.compose(acc)
    return acc


def Z_single_digit(a: int, s: int, p: int) -> RatFn:
    """``(1/t) c_s^a P_{p-a-1}(c_s) / P_{p-1}(c_s)``, built by substitution."""
    check_prime(p)
    if not 0 <= a < p:
        raise ValueError("digit a must satisfy 0 <= a < p")
    c = c_s_fn(s, p)
    body = RatFn(T ** a * path_poly_P(p - a - 1), path_poly_P(p - 1)).compose(c)
    return body * INV_T


def recurrence_terms(n: int, p: int) -> tuple[str, list[tuple[int, int]]]:
    """Right-hand side of the linear equation for ``X_n``: branch name and
    ``[(index m, coefficient)]`` meaning ``X_n = t * sum coeff * X_m``."""
    m = n + 1
    a0 = m % p
    if a0 and a0 < p - 1:
        return "a0_mid", [(n - 1, 1), (n + 1, 1)]
    if a0 == p - 1:
        return "a0_top", [(n - 1, 1)]
    d = _valuation(m, p) - 1
    terms = [(n - 1, 1), (n + 1, 2)]
    terms += [(n + 2 * p ** i - 1, 2) for i in range(1, d + 1)]
    a = (m // p ** (d + 1)) % p
    if 1 <= a <= p - 2:
        # written both as X_{n-1+2p^{d+1}} and X_{n+2p^{d+1}-1}: the same index
        terms.append((n - 1 + 2 * p ** (d + 1), 1))
        return "a0_zero_extra", terms
    return "a0_zero", terms


def _recurrence_case(n: int, p: int) -> Case:
    branch, terms = recurrence_terms(n, p)
    rhs = RatFn.const(0)
    for idx, c in terms:
        rhs = rhs + X(idx, p) * c
    rhs = rhs * T
    return compare({"n": n, "branch": branch}, X(n, p), rhs)


def _multiplicativity_case(a: int, s: int, i: int, p: int) -> Case:
    N = a * p ** s
    lhs = Z(N + i, p)
    rhs = T * Z(N, p) * Z(i, p)
    return compare({"a": a, "s": s, "i": i}, lhs, rhs)


def _run(fn, args: list[tuple], jobs: int) -> list[Case]:
    if jobs and jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, *zip(*args), chunksize=max(1, len(args) // (4 * jobs))))
    return [fn(*a) for a in args]


def verify_linear_recurrences(p: int, n_max: int, jobs: int = 1) -> Report:
    check_prime(p)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    cases = _run(_recurrence_case, [(n, p) for n in range(n_max + 1)], jobs)
    return Report("linear_recurrences", p, cases).sort()


def multiplicativity_indices(p: int, s: int, seed: int = 0,
                             limit: int = EXHAUSTIVE_LIMIT, sample: int = SAMPLE_SIZE) -> list[int]:
    N = p ** s
    if N <= limit:
        return list(range(N))
    rng = random.Random(f"{seed}:{p}:{s}")
    return sorted(rng.sample(range(N), sample))


def verify_multiplicativity(p: int, s_max: int, seed: int = 0, jobs: int = 1,
                            limit: int = EXHAUSTIVE_LIMIT) -> Report:
    """``Z_{ap^s+i} = t Z_{ap^s} Z_i`` for ``1 <= s <= s_max``, ``0 < a < p``;
    all ``i < p^s`` when ``p^s <= limit``, else a seeded sample of 50."""
    check_prime(p)
    if s_max < 1:
        raise ValueError("s_max must be >= 1")
    args = []
    for s in range(1, s_max + 1):
        idx = multiplicativity_indices(p, s, seed, limit)
        args += [(a, s, i, p) for a in range(1, p) for i in idx]
    return Report("multiplicativity", p, _run(_multiplicativity_case, args, jobs)).sort()


def _cs_cases(s: int, p: int) -> list[Case]:
    direct = c_s_fn(s, p)
    out = [
        compare({"s": s, "form": "tZ/(1+tZ)"}, c_s_form_A(s, p), direct),
        compare({"s": s, "form": "t^2 Z/(1-2t^3 sum)"}, c_s_form_B(s, p), direct),
        compare({"s": s, "form": "c_1(c_{s-1})"}, c_s_form_C(s, p), direct),
    ]
    return out


def verify_cs_identities(p: int, s_max: int, jobs: int = 1) -> Report:
    """The three descriptions of ``c_s`` against ``1/Q_{p^s}(1/t)``, ``0 <= s <= s_max``."""
    check_prime(p)
    if s_max < 1:
        raise ValueError("s_max must be >= 1")
    cases = []
    for chunk in _run(_cs_cases, [(s, p) for s in range(s_max + 1)], jobs):
        cases += chunk
    return Report("cs_identities", p, cases).sort()


def verify_single_digit(p: int, s_max: int) -> Report:
    """``Z_single_digit(a, s) == Z_closed(a p^s)`` and ``t Z_{ap^s} == F_a(c_s)``."""
    check_prime(p)
    cases = []
    for s in range(s_max + 1):
        c = c_s_fn(s, p)
        for a in range(p):
            zd = Z_single_digit(a, s, p)
            cases.append(compare({"a": a, "s": s, "form": "single_digit"}, zd, Z(a * p ** s, p)))
            if a:
                cases.append(compare({"a": a, "s": s, "form": "F_a(c_s)"}, T * zd, F_a(a, p).compose(c)))
    return Report("single_digit", p, cases).sort()


def coeffs_vs_oracle(p: int, n: int, L: int) -> Report:
    """Taylor coefficients of ``Z_n`` against DP multiplicities of ``T(n-1)``."""
    q = GenFunQuery(p, n)
    if L < 0:
        raise ValueError("L must be non-negative")
    series = taylor_coeffs(Z_closed(q), L)
    rows = v_power_rows(p, L)
    oracle = [rows[l].get(n - 1, 0) for l in range(L + 1)]
    case = compare({"n": n, "L": L}, series, oracle)
    if not case.passed:
        bad = next(l for l in range(L + 1) if series[l] != oracle[l])
        case.note = f"first mismatch at l={bad}: {series[bad]} vs {oracle[bad]}"
    return Report("coeffs_vs_oracle", p, [case])


def oracle_row(p: int, n: int, L: int) -> list[int]:
    rows = v_power_rows(p, L)
    return [rows[l].get(n - 1, 0) for l in range(L + 1)]
