"""
Coefficients of ``Z_n`` as sums over the roots of its denominator.

With ``A_n = prod_i R_{p-a_i-1,i}`` and ``B_n = prod_i R_{p-1,i}`` (``a_i`` the
digits of ``n``), the roots of ``B_n`` are ``beta = 2cos(j pi / p^{s+1})`` for
``0 < j < p^{s+1}`` and, once ``l >= p^{s+1} - 2``,

    mu_{n-1}(x^l) = sum_beta A_n(beta) / B_n'(beta) * beta^l.

Trigonometric values use ``R_{m-1}(2cos t) = sin(m t) / sin(t)``.  Angles are
kept as exact rationals of ``pi`` so that vanishing and singular factors are
decided by integer arithmetic, never by floating point tests.
"""
from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath

from .algebra import IntPoly, compose_R_Q
from .fusion import _raw_digits, check_prime
from .report import Case, Report, digest

__all__ = [
    "SingularAngle", "MultipleVanishingFactors", "RegimeViolation", "RootSumPrecisionError",
    "RootAngle", "RootSumPlan", "RootSumResult", "default_precision",
    "roots_of_B", "R_trig", "Bprime_trig", "A_trig", "mu_rootsum", "admissible_ls",
    "verify_estimates", "sin_product_check",
]

MAX_PRECISION = 1 << 15


class SingularAngle(ValueError):
    """sin(theta) = 0: the quotient form of R is undefined there."""


class MultipleVanishingFactors(ArithmeticError):
    """More than one factor of B_n vanishes at a root."""


class RegimeViolation(ValueError):
    """l is below the range where the root sum is exact."""


class RootSumPrecisionError(ArithmeticError):
    """Adaptive precision failed to certify the rounded value."""


def default_precision() -> int:
    """Working precision in bits; ``TILTFUSE_PRECISION`` overrides 256."""
    raw = os.environ.get("TILTFUSE_PRECISION")
    if not raw:
        return 256
    bits = int(raw)
    if bits < 64:
        raise ValueError("TILTFUSE_PRECISION must be at least 64 bits")
    return bits


@dataclass(frozen=True)
class RootAngle:
    """``theta = j pi / p^level`` and ``beta = 2cos(theta)``."""

    j: int
    level: int
    p: int

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level must be >= 1")
        if not 0 < self.j < self.p ** self.level:
            raise ValueError("need 0 < j < p^level")

    @property
    def denom(self) -> int:
        return self.p ** self.level

    @property
    def frac(self) -> Fraction:
        """``theta / pi``."""
        return Fraction(self.j, self.denom)

    def theta(self):
        return mpmath.pi * self.j / self.denom

    def beta(self):
        return 2 * mpmath.cos(self.theta())

    @property
    def positive(self) -> bool:
        # beta > 0 iff theta < pi/2; p^level is odd so equality never happens
        return 2 * self.j < self.denom

    @property
    def factor_index(self) -> int:
        """The unique ``i`` with ``R_{p-1,i}(beta) = 0``: ``i = level - 1 - v_p(j)``."""
        v, j = 0, self.j
        while j % self.p == 0:
            j //= self.p
            v += 1
        return self.level - 1 - v


@dataclass(frozen=True)
class RootSumPlan:
    p: int
    n: int
    precision_bits: int = field(default_factory=default_precision)

    def __post_init__(self):
        check_prime(self.p)
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.precision_bits < 64:
            raise ValueError("precision_bits must be >= 64")

    @property
    def digits(self) -> tuple[int, ...]:
        return tuple(_raw_digits(self.n, self.p))

    @property
    def s(self) -> int:
        return len(self.digits) - 1

    @property
    def level(self) -> int:
        return self.s + 1

    @property
    def regime_start(self) -> int:
        """Smallest ``l`` covered: ``n - 1 + deg A_n = p^{s+1} - 2``."""
        return self.p ** self.level - 2

    def A_poly(self) -> IntPoly:
        acc = IntPoly([1])
        for i, a in enumerate(self.digits):
            acc = acc * compose_R_Q(self.p - a - 1, i, self.p)
        return acc

    def B_poly(self) -> IntPoly:
        acc = IntPoly([1])
        for i in range(self.level):
            acc = acc * compose_R_Q(self.p - 1, i, self.p)
        return acc


def roots_of_B(plan: RootSumPlan) -> list[RootAngle]:
    """All ``p^{s+1} - 1`` roots of ``B_n``, by increasing angle."""
    N = plan.p ** plan.level
    return [RootAngle(j, plan.level, plan.p) for j in range(1, N)]


def R_trig(m: int, theta) -> mpmath.mpf:
    """``R_{m-1}(2cos theta) = sin(m theta) / sin(theta)``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    theta = mpmath.mpf(theta)
    sv = mpmath.sin(theta)
    # theta is a multiple of pi up to rounding
    k = mpmath.nint(theta / mpmath.pi)
    if abs(theta - k * mpmath.pi) <= mpmath.eps * 8 * max(1, abs(theta)):
        raise SingularAngle(f"sin(theta) = 0 at theta = {mpmath.nstr(theta, 10)}")
    return mpmath.sin(m * theta) / sv


def _R_rational(m: int, x: Fraction) -> mpmath.mpf:
    """``R_{m-1}(2cos(pi x))`` for rational ``x``, exact at the singular points."""
    if x.denominator == 1:
        # 2cos(pi x) = +-2 and R_{m-1}(+-2) = m (+-1)^{m-1}
        return mpmath.mpf(m if (x.numerator * (m - 1)) % 2 == 0 else -m)
    if (m * x).denominator == 1:
        return mpmath.mpf(0)
    return mpmath.sinpi(m * x.numerator / mpmath.mpf(x.denominator)) / \
        mpmath.sinpi(x.numerator / mpmath.mpf(x.denominator))


def _is_zero_R(m: int, x: Fraction) -> bool:
    return x.denominator != 1 and (m * x).denominator == 1


def A_trig(plan: RootSumPlan, root: RootAngle) -> mpmath.mpf:
    """``A_n(beta)`` as a product of trig quotients."""
    acc = mpmath.mpf(1)
    for i, a in enumerate(plan.digits):
        acc *= _R_rational(plan.p - a, root.frac * plan.p ** i)
    return acc


def Bprime_trig(plan: RootSumPlan, root: RootAngle) -> mpmath.mpf:
    """``B_n'(beta)``: only the vanishing factor ``R_{p-1,i0}`` is differentiated,

        R'_{p-1,i0}(2cos t) = (-1)^{K+1} p^{i0+1} / (2 sin(K pi / p) sin t),

    where ``p^{i0} t = K pi / p``; the other factors are evaluated directly.
    """
    p = plan.p
    if root.p != p or root.level != plan.level:
        raise ValueError("root does not belong to this plan")
    zeros = [i for i in range(plan.level) if _is_zero_R(p, root.frac * p ** i)]
    if len(zeros) != 1:
        raise MultipleVanishingFactors(f"{len(zeros)} vanishing factors at j={root.j}")
    i0 = zeros[0]
    K = root.j // p ** (plan.s - i0)
    sign = 1 if K % 2 else -1
    val = sign * mpmath.mpf(p) ** (i0 + 1) / (
        2 * mpmath.sinpi(mpmath.mpf(K) / p) * mpmath.sinpi(mpmath.mpf(root.j) / root.denom))
    for i in range(plan.level):
        if i != i0:
            val *= _R_rational(p, root.frac * p ** i)
    return val


@dataclass(frozen=True)
class RootSumResult:
    value: mpmath.mpf
    rounded: int
    residual: mpmath.mpf
    precision_bits_used: int
    n_roots: int

    def to_json(self) -> dict:
        digits = max(15, int(self.precision_bits_used * math.log10(2)))
        return {"value": mpmath.nstr(self.value, digits, strip_zeros=False),
                "rounded": self.rounded,
                "residual": mpmath.nstr(self.residual, 6),
                "precision_bits": self.precision_bits_used,
                "precision_bits_used": self.precision_bits_used,
                "n_roots": self.n_roots}


def _tree_sum(xs: list):
    """Pairwise summation: deterministic grouping regardless of length."""
    if not xs:
        return mpmath.mpf(0)
    while len(xs) > 1:
        nxt = [xs[i] + xs[i + 1] for i in range(0, len(xs) - 1, 2)]
        if len(xs) % 2:
            nxt.append(xs[-1])
        xs = nxt
    return xs[0]


@lru_cache(maxsize=256)
def _weights(p: int, n: int, prec: int) -> tuple:
    """``(beta, A(beta)/B'(beta))`` over the positive roots, at ``prec`` bits."""
    plan = RootSumPlan(p, n, prec)
    with mpmath.workprec(prec):
        out = []
        for root in roots_of_B(plan):
            if not root.positive:
                continue
            a = A_trig(plan, root)
            if a == 0:
                continue
            out.append((root.beta(), a / Bprime_trig(plan, root)))
        return tuple(out)


def _rootsum_at(plan: RootSumPlan, l: int, prec: int):
    with mpmath.workprec(prec):
        terms = [w * beta ** l for beta, w in _weights(plan.p, plan.n, prec)]
        return 2 * _tree_sum(terms)


def mu_rootsum(plan: RootSumPlan, l: int, tolerance: float = 1e-6) -> RootSumResult:
    """Multiplicity of ``T(n-1)`` in ``V^{(x)l}`` from the root sum.

    Precision starts at ``plan.precision_bits`` and doubles until two
    consecutive precisions round to the same integer with residual below
    ``tolerance``.
    """
    if l < plan.regime_start:
        raise RegimeViolation(
            f"l = {l} < p^(s+1) - 2 = {plan.regime_start}; the root sum is exact only from there")
    n_roots = plan.p ** plan.level - 1
    if (plan.n - 1 - l) % 2:
        zero = mpmath.mpf(0)
        return RootSumResult(zero, 0, zero, plan.precision_bits, n_roots)
    prec = plan.precision_bits
    prev = None
    while prec <= MAX_PRECISION:
        value = _rootsum_at(plan, l, prec)
        with mpmath.workprec(prec):
            rounded = int(mpmath.nint(value))
            residual = abs(value - rounded)
        if prev is not None and prev == rounded and residual < tolerance:
            return RootSumResult(value, rounded, residual, prec, n_roots)
        prev = rounded
        prec *= 2
    raise RootSumPrecisionError(
        f"no stable rounding for p={plan.p}, n={plan.n}, l={l} up to {MAX_PRECISION} bits")


def admissible_ls(plan: RootSumPlan, count: int, l_max: int | None = None) -> list[int]:
    """The first ``count`` values ``l >= p^{s+1} - 2`` with ``l = n - 1 (mod 2)``."""
    l0 = plan.regime_start
    if (l0 - plan.n + 1) % 2:
        l0 += 1
    out = list(range(l0, l0 + 2 * count, 2))
    if l_max is not None:
        out = [l for l in out if l <= l_max]
    return out


def sin_product_check(n: int, theta) -> tuple[mpmath.mpf, mpmath.mpf]:
    """Both sides of ``sin(n t) = 2^{n-1} prod_{k<n} sin(t + k pi / n)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    theta = mpmath.mpf(theta)
    lhs = mpmath.sin(n * theta)
    rhs = mpmath.mpf(2) ** (n - 1)
    for k in range(n):
        rhs *= mpmath.sin(theta + k * mpmath.pi / n)
    return lhs, rhs


# --- estimate bounds -----------------------------------------------------------

ESTIMATE_CLAUSES = ("sin_lower", "R_bounds", "R_small_angle", "product_bounds", "Bprime_bounds")


def _fmt(x) -> str:
    return mpmath.nstr(x, 12)


class _Checker:
    """Collects sandwich checks ``lo <= value <= hi`` with a relative epsilon."""

    def __init__(self, eps):
        self.eps = eps

    def check(self, name: str, lo, value, hi, strict_hi: bool = False) -> tuple[bool, bool, str]:
        tol = self.eps * max(1, abs(value))
        ok = True
        near = False
        if lo is not None:
            ok &= value >= lo - tol
            near |= abs(value - lo) <= tol
        if hi is not None:
            ok &= (value < hi + tol) if strict_hi else (value <= hi + tol)
            near |= abs(value - hi) <= tol
        parts = [f"{name}={_fmt(value)}"]
        if lo is not None:
            parts.append(f"lower={_fmt(lo)}")
        if hi is not None:
            parts.append(f"upper={_fmt(hi)}")
        return ok, near, " ".join(parts)


def _sample_estimate(rng: random.Random, clause: str, p: int, s: int, scale: int, chk: _Checker):
    """One random admissible instance of ``clause``; ``None`` when not applicable."""
    N = p ** (s + 1)
    two_p = mpmath.mpf(2) ** p
    if clause == "sin_lower":
        j = rng.randrange(1, N)
        val = abs(mpmath.sinpi(mpmath.mpf(j) / N))
        first = abs(mpmath.sinpi(mpmath.mpf(1) / N))
        ok1, near1, msg1 = chk.check("|sin theta|", first, val, None)
        ok2, near2, msg2 = chk.check("|sin theta_1|", mpmath.mpf(2) / N, first, None)
        return {"j": j}, ok1 and ok2, near1 or near2, msg1 + "; " + msg2
    if clause in ("R_bounds", "R_small_angle"):
        for _ in range(64):
            m = rng.randint(1, p)
            j = rng.randrange(1, N)
            x = Fraction(j, N)
            if _is_zero_R(m, x):
                continue
            if clause == "R_small_angle" and not 2 * m * j < N:
                continue
            val = abs(scale * _R_rational(m, x))
            if clause == "R_bounds":
                ok, near, msg = chk.check("|R_{m-1}|", mpmath.mpf(4) / N, val, two_p, strict_hi=True)
            else:
                ok, near, msg = chk.check("|R_{m-1}|", 2 / mpmath.pi, val, two_p)
            return {"m": m, "j": j}, ok, near, msg
        return None
    if clause == "product_bounds":
        for _ in range(64):
            ns = tuple(rng.randint(1, p) for _ in range(s + 1))
            j = rng.randrange(1, N)
            x = Fraction(j, N)
            if any(_is_zero_R(m, x * p ** i) for i, m in enumerate(ns)):
                continue
            val = mpmath.mpf(1)
            for i, m in enumerate(ns):
                val *= scale * _R_rational(m, x * p ** i)
            val = abs(val)
            lj = mpmath.log(j) / mpmath.log(p)
            lo = mpmath.pi ** (-(s - 1 - lj)) * mpmath.mpf(2) ** s * mpmath.mpf(p) ** (-(lj ** 2))
            ok, near, msg = chk.check("|prod R|", lo, val, two_p ** s)
            return {"ns": list(ns), "j": j}, ok, near, msg
        return None
    if clause == "Bprime_bounds":
        if s < 1:
            return None
        for _ in range(64):
            j = rng.randrange(1, N)
            root = RootAngle(j, s + 1, p)
            i0 = root.factor_index
            K = j // p ** (s - i0)
            # hypothesis: theta = K pi / p^{i0+1} with 1 <= i0 and 0 < K < p
            if i0 < 1 or K >= p:
                continue
            plan = RootSumPlan(p, p ** s, max(64, mpmath.mp.prec))
            val = abs(Bprime_trig(plan, root)) * scale ** (s + 1)
            base = mpmath.mpf(p) ** (i0 + 1) / (
                2 * mpmath.sinpi(mpmath.mpf(K) / p) * mpmath.sinpi(mpmath.mpf(j) / N))
            lj = mpmath.log(j) / mpmath.log(p)
            hi = base * two_p ** (s - 1)
            lo = base * mpmath.pi ** (-(s - 2 - lj)) * mpmath.mpf(2) ** (s - 1) * mpmath.mpf(p) ** (-(lj ** 2))
            ok, near, msg = chk.check("|B'|", lo, val, hi)
            return {"j": j, "i0": i0, "K": K}, ok, near, msg
        return None
    raise ValueError(f"unknown clause {clause!r}")


def verify_estimates(p: int, s: int, samples: int, seed: int = 0, precision: int = 128,
                     convention: str = "polynomial") -> Report:
    """Evaluate the stated magnitude bounds on random admissible instances.

    ``convention="polynomial"`` uses the true values of ``R_{m-1}``;
    ``"doubled"`` multiplies every ``R`` factor by 2 (the normalization
    ``2 sin(m t)/sin t``).  Each sample is one case; violations keep the
    evaluated numbers in ``note``.  Near-boundary cases are marked there too.
    """
    check_prime(p)
    if s < 0:
        raise ValueError("s must be non-negative")
    if convention not in ("polynomial", "doubled"):
        raise ValueError(f"unknown convention {convention!r}")
    scale = 1 if convention == "polynomial" else 2
    clauses = [c for c in ESTIMATE_CLAUSES if not (c == "Bprime_bounds" and s < 1)]
    rng = random.Random(f"estimates:{seed}:{p}:{s}")
    cases = []
    with mpmath.workprec(precision):
        chk = _Checker(mpmath.mpf(2) ** (-(precision - 16)))
        for idx in range(samples):
            clause = clauses[idx % len(clauses)]
            got = _sample_estimate(rng, clause, p, s, scale, chk)
            if got is None:
                continue
            params, ok, near, msg = got
            params = {"sample": idx, "clause": clause, "s": s, **params}
            note = ("near-boundary; " if near else "") + msg
            cases.append(Case(params, bool(ok), digest(msg), digest(clause), note))
    return Report(f"estimates[{convention}]", p, cases)


def estimate_summary(report: Report) -> dict[str, dict[str, int]]:
    """Per-clause counts of samples, violations and near-boundary cases."""
    out: dict[str, dict[str, int]] = {}
    for c in report.cases:
        row = out.setdefault(c.params["clause"], {"samples": 0, "violations": 0, "near_boundary": 0})
        row["samples"] += 1
        row["violations"] += not c.passed
        row["near_boundary"] += c.note.startswith("near-boundary")
    return out
