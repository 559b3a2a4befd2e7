"""
Growth of ``b_k``, the number of indecomposable summands of ``T^{(x)k}``.

A tilting module ``T`` corresponds to the integer polynomial ``Q`` with
``chi_T(t) = Q(t + 1/t)``.  The expected law is
``b_k ~ k^{-alpha_p} (dim T)^k`` with ``alpha_p = 1 - log_p((p+1)/2) / 2``;
``growth_table`` measures the normalized ratio ``b_k k^{alpha_p} / (dim T)^k``.
"""
from __future__ import annotations

import csv
import io
import logging
import math
import statistics
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .algebra import IntPoly, _mul_int
from .fusion import TiltingMultiset, _as_multiset, check_prime, chebyshev_of, tensor_powers

__all__ = [
    "InvariantViolation", "NonpositiveBase", "TiltingPolySpec", "GrowthSample",
    "spec_from_tilting", "alpha_p", "choose_l", "mk_diagnostic", "weight_tail_mass",
    "growth_table", "growth_summary", "growth_csv", "format_tilting", "parse_tilting",
]

log = logging.getLogger(__name__)

GRID_POINTS = 1000
NEAR_MISS = Fraction(1, 10 ** 6)


class InvariantViolation(AssertionError):
    """A clause of the Q(x) invariants failed; this means an implementation bug."""


class NonpositiveBase(ValueError):
    """Q(beta) <= 0 (or beta <= 0), so the M_k ratio is undefined."""


@dataclass(frozen=True)
class TiltingPolySpec:
    p: int
    Q: IntPoly
    dim: int
    derivative_at_2: int
    minus2: int
    parity_class: str
    T: TiltingMultiset | None = None

    @property
    def degree(self) -> int:
        return self.Q.degree


def format_tilting(T) -> str:
    """Inverse of :func:`parse_tilting`: ``"n:mult,..."`` by descending weight."""
    return ",".join(f"{n}:{c}" for n, c in _as_multiset(T).summands())


def parse_tilting(text: str) -> TiltingMultiset:
    """``"2:1,0:3"``, a single weight ``"7"``, or ``"V"`` (the natural module)."""
    text = text.strip()
    if text in ("V", "v"):
        return TiltingMultiset({1: 1})
    out: dict[int, int] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise ValueError(f"empty entry in tilting module {text!r}")
        if ":" in part:
            n, c = part.split(":", 1)
            n, c = int(n), int(c)
        else:
            n, c = int(part), 1
        if n < 0 or c < 0:
            raise ValueError(f"weights and multiplicities must be non-negative: {part!r}")
        out[n] = out.get(n, 0) + c
    T = TiltingMultiset(out)
    if not T:
        raise ValueError("tilting module must be nonzero")
    return T


def spec_from_tilting(T, p: int) -> TiltingPolySpec:
    """``Q`` with ``Q(V) = T`` and the checked invariant data (``Q(2) = dim T`` etc.)."""
    check_prime(p)
    T = _as_multiset(T)
    if not T:
        raise ValueError("T must be nonempty")
    Q = chebyshev_of(T, p)
    dim = Q(2)
    if dim != T.dim(p) or dim <= 0:
        raise InvariantViolation(f"clause (1): Q(2) = {dim} but dim T = {T.dim(p)}")
    d2 = Q.derivative()(2)
    if Q.degree > 0 and d2 <= 0:
        raise InvariantViolation(f"clause (2): Q'(2) = {d2} is not positive")
    if Q.degree > 0:
        # exact rational grid strictly inside (-2, 2)
        worst = Fraction(0)
        for i in range(1, GRID_POINTS + 1):
            x = Fraction(-2) + Fraction(4 * i, GRID_POINTS + 1)
            v = abs(Fraction(Q(x)))
            if v >= dim:
                raise InvariantViolation(f"clause (3): |Q({x})| = {v} >= dim T = {dim}")
            worst = max(worst, v)
        if dim - worst < NEAR_MISS:
            log.warning("clause (3) near miss: max |Q| on grid = %s, dim T = %s", worst, dim)
    m2 = Q(-2)
    even = all(n % 2 == 0 for n in T)
    odd = all(n % 2 == 1 for n in T)
    parity = "even" if m2 == dim else "odd" if m2 == -dim else "mixed"
    if (parity == "even") != even or (parity == "odd") != odd:
        raise InvariantViolation(f"clause (4): Q(-2) = {m2} disagrees with weight parities")
    return TiltingPolySpec(p, Q, dim, d2, m2, parity, T)


def alpha_p(p: int, precision: int = 128) -> mpmath.mpf:
    """``1 - log_p((p + 1)/2) / 2``."""
    check_prime(p)
    with mpmath.workprec(precision):
        return 1 - mpmath.log(mpmath.mpf(p + 1) / 2) / (2 * mpmath.log(p))


def choose_l(k: int, spec: TiltingPolySpec, want_parity: str = "match_Qk") -> int:
    """``floor(2k Q'(2) / dim T)``, bumped by one if needed for the parity."""
    if k < 1:
        raise ValueError("k must be >= 1")
    base = (2 * k * spec.derivative_at_2) // spec.dim
    if want_parity == "even":
        target = 0
    elif want_parity == "odd":
        target = 1
    elif want_parity == "match_Qk":
        target = (k * spec.degree) % 2
    else:
        raise ValueError(f"unknown parity request {want_parity!r}")
    return base if base % 2 == target else base + 1


def mk_diagnostic(spec: TiltingPolySpec, k: int, theta, precision: int = 128) -> mpmath.mpf:
    """``M_k = (Q(beta)/dim T)^k (2/beta)^l`` at ``beta = 2cos(theta)``."""
    l = choose_l(k, spec)
    with mpmath.workprec(precision):
        beta = 2 * mpmath.cos(mpmath.mpf(theta))
        q = mpmath.polyval([mpmath.mpf(c) for c in reversed(spec.Q.coeffs)], beta)
        if q <= 0 or beta <= 0:
            raise NonpositiveBase(f"Q(beta) = {mpmath.nstr(q, 8)} at beta = {mpmath.nstr(beta, 8)}")
        return (q / spec.dim) ** k * (2 / beta) ** l


def _weight_distribution(spec: TiltingPolySpec) -> tuple[list[int], int]:
    chi = spec.T.character(spec.p)
    d = chi.degree
    dense = [0] * (2 * d + 1)
    for m, c in chi.items():
        dense[d + m] = c
        dense[d - m] = c
    return dense, d


def weight_tail_mass(spec: TiltingPolySpec, k: int, cutoff=None,
                     precision: int = 128) -> tuple[int, mpmath.mpf]:
    """Total dimension of weight spaces of weight ``> cutoff`` in ``T^{(x)k}``
    and its share of ``(dim T)^k``.  Default cutoff ``sqrt(k) log k``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if cutoff is None:
        cutoff = math.sqrt(k) * math.log(k)
    base, d = _weight_distribution(spec)
    acc, acc_d = [1], 0
    power, power_d, e = base, d, k
    while e:
        if e & 1:
            acc, acc_d = _mul_int(acc, power), acc_d + power_d
        e >>= 1
        if e:
            power, power_d = _mul_int(power, power), 2 * power_d
    mass = sum(c for i, c in enumerate(acc) if i - acc_d > cutoff)
    with mpmath.workprec(precision):
        ratio = mpmath.mpf(mass) / mpmath.mpf(spec.dim) ** k
    return mass, ratio


@dataclass(frozen=True)
class GrowthSample:
    k: int
    b_k: int
    ratio: mpmath.mpf


def growth_table(T, p: int, k_list, precision: int = 128) -> list[GrowthSample]:
    """``b_k`` for every ``k`` in ``k_list`` from one DP sweep, with ratios."""
    check_prime(p)
    T = _as_multiset(T)
    ks = sorted(set(k_list))
    if not ks:
        return []
    if ks[0] < 1:
        raise ValueError("k must be >= 1")
    dim = T.dim(p)
    a = alpha_p(p, precision)
    wanted = set(ks)
    out = []
    for k, power in enumerate(tensor_powers(T, p, ks[-1])):
        if k in wanted:
            b = power.total()
            with mpmath.workprec(precision):
                ratio = mpmath.mpf(b) * mpmath.mpf(k) ** a / mpmath.mpf(dim) ** k
            out.append(GrowthSample(k, b, ratio))
    return out


def _dec(x, precision: int) -> str:
    return mpmath.nstr(x, max(6, int(precision * math.log10(2)) - 2), strip_zeros=False)


def growth_summary(samples: list[GrowthSample], T, p: int, precision: int = 128) -> dict:
    """Observed ratio window and the slope of ``log ratio`` against ``log k``."""
    ratios = [s.ratio for s in samples]
    slope = None
    if len(samples) >= 2:
        xs = [math.log(s.k) for s in samples]
        ys = [float(mpmath.log(r)) for r in ratios]
        slope = statistics.linear_regression(xs, ys).slope
    lo, hi = min(ratios), max(ratios)
    return {"p": p, "T": format_tilting(T),
            "window": [samples[0].k, samples[-1].k],
            "min_ratio": _dec(lo, precision), "max_ratio": _dec(hi, precision),
            "max_over_min": _dec(hi / lo, precision),
            "slope_fit": slope, "precision_bits": precision}


def growth_csv(samples: list[GrowthSample], T, p: int, precision: int = 128) -> str:
    dim = _as_multiset(T).dim(p)
    a = _dec(alpha_p(p, precision), precision)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "b_k", "dim_T", "alpha_p", "ratio"])
    for s in samples:
        w.writerow([s.k, str(s.b_k), dim, a, _dec(s.ratio, precision)])
    return buf.getvalue()
