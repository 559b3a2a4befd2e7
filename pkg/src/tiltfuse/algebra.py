"""
Exact univariate polynomials, rational functions and symmetric Laurent polynomials.

Polynomials are dense, little-endian coefficient tuples: ``coeffs[i]`` is the
coefficient of ``t**i``.  Coefficients are Python ints whenever they are
integral and :class:`fractions.Fraction` otherwise, so integer polynomials stay
on the fast integer path.

>>> path_poly_P(3)
IntPoly('1 - 2*x^2')
>>> chebyshev_Q(3)
IntPoly('-3*x + x^3')
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Mapping, Union

from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dup_inner_gcd

Number = Union[int, Fraction]

__all__ = [
    "RatPoly", "IntPoly", "RatFn", "SymLaurent",
    "poly_arith", "chebyshev_Q", "path_poly_P", "reciprocal_R", "compose_R_Q",
    "hat", "taylor_coeffs", "sym_laurent_mul", "chebyshev_basis", "evaluate_on_V", "CHI_V",
    "poly_gcd",
]

# Below this length schoolbook multiplication beats packing into big ints.
_KRONECKER_MIN = 24


def _canon(c) -> Number:
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, float):
        raise TypeError("floating point coefficients are not exact")
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def _trim(cs: list) -> list:
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _pack(cs: list[int], nbytes: int) -> int:
    """``sum cs[i] * 256**(nbytes*i)`` for signed ``cs``, built from bytes."""
    pos = b"".join((c if c > 0 else 0).to_bytes(nbytes, "little") for c in cs)
    neg = b"".join((-c if c < 0 else 0).to_bytes(nbytes, "little") for c in cs)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _unpack(value: int, nbytes: int, count: int) -> list[int]:
    # bias every slot by half its range so all digits become non-negative
    half = 1 << (8 * nbytes - 1)
    bias = int.from_bytes((half.to_bytes(nbytes, "little")) * count, "little")
    raw = (value + bias).to_bytes(nbytes * count, "little")
    return [int.from_bytes(raw[i:i + nbytes], "little") - half
            for i in range(0, nbytes * count, nbytes)]


def _mul_int(a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    if min(len(a), len(b)) < _KRONECKER_MIN:
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return out
    # Kronecker substitution: evaluate at 256**nbytes, multiply, read digits back.
    bound = max(map(abs, a)) * max(map(abs, b)) * min(len(a), len(b))
    nbytes = (bound.bit_length() + 2) // 8 + 1
    return _unpack(_pack(a, nbytes) * _pack(b, nbytes), nbytes, len(a) + len(b) - 1)


def _to_int(cs) -> tuple[list[int], int]:
    """Clear denominators: returns ``(ints, d)`` with ``cs == ints / d``."""
    d = 1
    for c in cs:
        if isinstance(c, Fraction):
            d = lcm(d, c.denominator)
    if d == 1:
        return list(cs), 1
    return [int(c * d) for c in cs], d


def _mul_lists(a, b) -> list:
    ai, da = _to_int(a)
    bi, db = _to_int(b)
    prod = _mul_int(ai, bi)
    d = da * db
    if d == 1:
        return prod
    return [_canon(Fraction(c, d)) for c in prod]


class RatPoly:
    """Polynomial with exact rational coefficients, little-endian.

    Instances are immutable.  Arithmetic returns an :class:`IntPoly` when every
    coefficient of the result is integral.
    """

    __slots__ = ("_c",)
    var = "t"

    def __init__(self, coeffs: Iterable = ()):
        self._c = tuple(_trim([_canon(c) for c in coeffs]))

    @staticmethod
    def make(coeffs: Iterable) -> RatPoly:
        cs = _trim([_canon(c) for c in coeffs])
        cls = IntPoly if all(isinstance(c, int) for c in cs) else RatPoly
        obj = object.__new__(cls)
        obj._c = tuple(cs)
        return obj

    @classmethod
    def monomial(cls, degree: int, coeff: Number = 1) -> RatPoly:
        return RatPoly.make([0] * degree + [coeff])

    @property
    def coeffs(self) -> tuple:
        return self._c

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    @property
    def leading(self) -> Number:
        return self._c[-1] if self._c else 0

    def __getitem__(self, i: int) -> Number:
        return self._c[i] if 0 <= i < len(self._c) else 0

    def __len__(self):
        return len(self._c)

    def __eq__(self, other):
        if isinstance(other, RatPoly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == RatPoly.make([other])._c
        return NotImplemented

    def __hash__(self):
        return hash(self._c)

    def _coerce(self, other) -> RatPoly:
        if isinstance(other, RatPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return RatPoly.make([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        return RatPoly.make([x + b[i] if i < len(b) else x for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return RatPoly.make([-c for c in self._c])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatPoly.make([c * other for c in self._c])
        if not isinstance(other, RatPoly):
            return NotImplemented
        return RatPoly.make(_mul_lists(self._c, other._c))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result, base = RatPoly.make([1]), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def shift(self, k: int) -> RatPoly:
        """Multiply by ``t**k``."""
        if not self._c:
            return self
        return RatPoly.make([0] * k + list(self._c))

    def __call__(self, x):
        acc = 0 * x if not isinstance(x, (int, Fraction)) else 0
        for c in reversed(self._c):
            acc = acc * x + c
        return acc

    def compose(self, inner: RatPoly) -> RatPoly:
        """``self(inner(t))`` by Horner's rule."""
        acc = RatPoly.make([])
        for c in reversed(self._c):
            acc = acc * inner + c
        return acc

    def derivative(self) -> RatPoly:
        return RatPoly.make([i * c for i, c in enumerate(self._c)][1:])

    def reverse(self, degree: int | None = None) -> RatPoly:
        """``t**degree * self(1/t)``; ``degree`` defaults to the actual degree."""
        if degree is None:
            degree = self.degree
        if degree < self.degree:
            raise ValueError("reversal degree below polynomial degree")
        padded = list(self._c) + [0] * (degree + 1 - len(self._c))
        return RatPoly.make(reversed(padded))

    def divmod(self, other: RatPoly) -> tuple[RatPoly, RatPoly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = [Fraction(c) for c in self._c]
        d = other.degree
        lead = Fraction(other.leading)
        quot = [Fraction(0)] * max(len(rem) - d, 0)
        for k in range(len(rem) - 1 - d, -1, -1):
            q = rem[k + d] / lead
            quot[k] = q
            if q:
                for i, c in enumerate(other._c):
                    rem[k + i] -= q * c
        return RatPoly.make(quot), RatPoly.make(rem[:d] if d > 0 else [])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def content(self) -> Fraction:
        """Positive rational ``c`` with ``self / c`` a primitive integer polynomial."""
        ints, d = _to_int(self._c)
        g = 0
        for x in ints:
            g = _gcd(g, x)
        return Fraction(g, d) if g else Fraction(0)

    def primitive(self) -> tuple[Fraction, list[int]]:
        c = self.content()
        if not c:
            return c, []
        return c, [int(x / c) for x in self._c]

    def monic(self) -> RatPoly:
        if self.is_zero():
            return self
        lead = self.leading
        if lead == 1:
            return self
        return RatPoly.make([Fraction(c) / lead for c in self._c])

    def to_string(self, var: str | None = None) -> str:
        var = var or self.var
        if not self._c:
            return "0"
        terms = []
        for i, c in enumerate(self._c):
            if c == 0:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if not mono:
                body = str(c)
            elif c == 1:
                body = mono
            elif c == -1:
                body = "-" + mono
            else:
                cs = f"({c})" if isinstance(c, Fraction) else str(c)
                body = f"{cs}*{mono}"
            terms.append(body)
        out = terms[0]
        for t in terms[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"{type(self).__name__}('{self.to_string()}')"


class IntPoly(RatPoly):
    """Integer polynomial.  Printed in the variable ``x`` since these are
    mostly elements of Z[x] acting on tilting modules through ``x -> V``."""

    __slots__ = ()
    var = "x"

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = list(coeffs)
        for c in cs:
            if not isinstance(c, int) and not (isinstance(c, Fraction) and c.denominator == 1):
                raise TypeError(f"non-integer coefficient {c!r}")
        super().__init__(cs)


def _gcd(a: int, b: int) -> int:
    from math import gcd
    return gcd(a, b)


def _to_zz(ints: list[int]) -> list:
    return [ZZ(c) for c in reversed(ints)]


def _from_zz(cs) -> list[int]:
    return [int(c) for c in reversed(cs)]


def poly_gcd(a: RatPoly, b: RatPoly) -> RatPoly:
    """Monic greatest common divisor over Q."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    _, pa = a.primitive()
    _, pb = b.primitive()
    h, _, _ = dup_inner_gcd(_to_zz(pa), _to_zz(pb), ZZ)
    return RatPoly.make(_from_zz(h)).monic()


def poly_arith(a: RatPoly, b: RatPoly, op: str) -> RatPoly:
    """Exact ``a op b`` for ``op`` in {'add', 'sub', 'mul'}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown polynomial operation {op!r}")


T = RatPoly.make([0, 1])
ONE = RatPoly.make([1])


@lru_cache(maxsize=None)
def chebyshev_Q(n: int) -> IntPoly:
    """The integer polynomial with ``Q_n(t + 1/t) = t^n + t^-n`` (``Q_0 = 2``)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return IntPoly([2])
    if n == 1:
        return IntPoly([0, 1])
    # Q_{n+1} = x Q_n - Q_{n-1}
    return chebyshev_Q(n - 1).shift(1) - chebyshev_Q(n - 2)


@lru_cache(maxsize=None)
def path_poly_P(m: int) -> IntPoly:
    """Characteristic polynomial ``det M_m`` of the path graph, in ``t``.

    ``P_0 = P_1 = 1`` and ``P_m = P_{m-1} - t^2 P_{m-2}``.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    if m <= 1:
        return IntPoly([1])
    return path_poly_P(m - 1) - path_poly_P(m - 2).shift(2)


@lru_cache(maxsize=None)
def reciprocal_R(m: int) -> IntPoly:
    """Monic ``R_m(t) = prod_k (t - 2cos(k pi/(m+1)))``, i.e. ``U_m(t/2)``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    if m == 0:
        return IntPoly([1])
    if m == 1:
        return IntPoly([0, 1])
    return reciprocal_R(m - 1).shift(1) - reciprocal_R(m - 2)


@lru_cache(maxsize=None)
def compose_R_Q(m: int, s: int, p: int) -> IntPoly:
    """``R_m(Q_{p^s}(t))``: monic of degree ``m * p**s``."""
    if m < 0 or s < 0:
        raise ValueError("m and s must be non-negative")
    return reciprocal_R(m).compose(chebyshev_Q(p ** s))


def hat(f: RatPoly) -> RatPoly:
    """``x^deg(f) f(1/x)``: the polynomial whose roots are the reciprocals.

    For monic ``f`` with roots ``b_i`` this is ``prod (1 - b_i x)``.
    """
    if f.is_zero() or f[0] == 0:
        raise ValueError("hat needs a nonzero constant term (all roots nonzero)")
    return f.reverse()


class RatFn:
    """Reduced quotient ``num / den`` of rational polynomials.

    The canonical form has ``gcd(num, den) = 1`` and a monic denominator, so
    two rational functions are equal exactly when their fields are equal.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1, *, reduced: bool = False):
        num = num if isinstance(num, RatPoly) else RatPoly.make([num])
        den = den if isinstance(den, RatPoly) else RatPoly.make([den])
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = RatPoly.make([]), RatPoly.make([1])
        elif not reduced:
            num, den = _reduce(num, den)
        else:
            lead = den.leading
            if lead != 1:
                num, den = num * (Fraction(1) / lead), den.monic()
        self.num = num
        self.den = den

    @classmethod
    def t(cls) -> RatFn:
        return cls(T, ONE, reduced=True)

    @classmethod
    def const(cls, c: Number) -> RatFn:
        return cls(RatPoly.make([c]), ONE, reduced=True)

    def _coerce(self, other):
        if isinstance(other, RatFn):
            return other
        if isinstance(other, RatPoly):
            return RatFn(other, ONE, reduced=True)
        if isinstance(other, (int, Fraction)):
            return RatFn.const(other)
        return NotImplemented

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RatFn(self.num + other.num, self.den)
        g = poly_gcd(self.den, other.den)
        if g.degree == 0:
            return RatFn(self.num * other.den + other.num * self.den, self.den * other.den)
        bd, dd = self.den // g, other.den // g
        return RatFn(self.num * dd + other.num * bd, self.den * dd)

    __radd__ = __add__

    def __neg__(self):
        return RatFn(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return RatFn.const(0)
        # cross-cancel first: both operands are already reduced
        a, d = _cancel(self.num, other.den)
        c, b = _cancel(other.num, self.den)
        return RatFn(a * c, b * d, reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> RatFn:
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RatFn(self.den, self.num, reduced=True)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFn(self.num ** e, self.den ** e, reduced=True)

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def compose(self, inner: RatFn) -> RatFn:
        """``self(inner(t))``, reduced."""
        inner = self._coerce(inner)
        D = max(self.num.degree, self.den.degree)
        gn, gd = inner.num, inner.den
        pow_n = [ONE]
        pow_d = [ONE]
        for _ in range(D):
            pow_n.append(pow_n[-1] * gn)
            pow_d.append(pow_d[-1] * gd)

        def homog(f: RatPoly) -> RatPoly:
            acc = RatPoly.make([])
            for i, c in enumerate(f.coeffs):
                if c:
                    acc = acc + pow_n[i] * pow_d[D - i] * c
            return acc

        return RatFn(homog(self.num), homog(self.den))

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def to_string(self) -> str:
        """Display form; rescaled so the denominator has constant term 1 when
        it can be (the stored form keeps the monic denominator)."""
        num, den = self.num, self.den
        if den.degree == 0:
            return num.to_string("t")
        if den[0] != 0:
            scale = Fraction(1) / Fraction(den[0])
            num, den = num * scale, den * scale
        return f"({num.to_string('t')}) / ({den.to_string('t')})"

    def to_json(self) -> dict:
        return {"num": [_coeff_json(c) for c in self.num.coeffs],
                "den": [_coeff_json(c) for c in self.den.coeffs]}

    @classmethod
    def from_json(cls, data: Mapping) -> RatFn:
        return cls(RatPoly.make(_coeff_from_json(c) for c in data["num"]),
                   RatPoly.make(_coeff_from_json(c) for c in data["den"]))

    def __repr__(self):
        return f"RatFn('{self.to_string()}')"


def _coeff_json(c: Number):
    return c if isinstance(c, int) else f"{c.numerator}/{c.denominator}"


def _coeff_from_json(c) -> Number:
    return _canon(Fraction(c)) if isinstance(c, str) else c


def _cancel(a: RatPoly, b: RatPoly) -> tuple[RatPoly, RatPoly]:
    """Divide ``a`` and ``b`` by their gcd (scalars kept with ``a``)."""
    ca, pa = a.primitive()
    cb, pb = b.primitive()
    h, fa, fb = dup_inner_gcd(_to_zz(pa), _to_zz(pb), ZZ)
    if len(h) == 1:
        return a, b
    return (RatPoly.make(_from_zz(fa)) * ca, RatPoly.make(_from_zz(fb)) * cb)


def _reduce(num: RatPoly, den: RatPoly) -> tuple[RatPoly, RatPoly]:
    cn, pn = num.primitive()
    cd, pd = den.primitive()
    _, fn, fd = dup_inner_gcd(_to_zz(pn), _to_zz(pd), ZZ)
    n_int, d_int = _from_zz(fn), _from_zz(fd)
    scale = cn / cd / d_int[-1]
    num = RatPoly.make([c * scale for c in n_int])
    lead = d_int[-1]
    den = RatPoly.make(d_int if lead == 1 else [Fraction(c, lead) for c in d_int])
    return num, den


def taylor_coeffs(f: RatFn, N: int) -> list[Number]:
    """First ``N + 1`` Taylor coefficients of ``f`` at ``t = 0``.

    Uses the linear recurrence ``den * F = num``.
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    den, num = f.den.coeffs, f.num.coeffs
    if den[0] == 0:
        raise ValueError("denominator vanishes at t = 0; no Taylor expansion")
    d0 = den[0]
    integral = (d0 in (1, -1) and all(isinstance(c, int) for c in den)
                and all(isinstance(c, int) for c in num))
    if integral:
        # den0 = +-1: divide by den0 is multiply by den0
        tail = [c * d0 for c in den[1:]]
        rhs = [c * d0 for c in num]
    else:
        d0 = Fraction(d0)
        tail = [Fraction(c) / d0 for c in den[1:]]
        rhs = [Fraction(c) / d0 for c in num]
    nd = len(tail)
    out: list = []
    for k in range(N + 1):
        acc = rhs[k] if k < len(rhs) else 0
        lo = max(0, k - nd)
        # sum_{i=1..min(k,nd)} tail[i-1] * out[k-i]
        if k:
            acc -= sum(map(_mul, tail[: k - lo], reversed(out[lo:k])))
        out.append(acc)
    return [_canon(c) for c in out]


def _mul(a, b):
    return a * b


class SymLaurent:
    """Symmetric Laurent polynomial in ``t`` (a formal SL2 character).

    ``coeffs[m]`` for ``m > 0`` is the common coefficient of ``t^m`` and
    ``t^-m``; ``coeffs[0]`` is the constant term.  Zero entries are not stored.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        c = {}
        for m, v in (coeffs or {}).items():
            if m < 0:
                raise ValueError("SymLaurent stores only non-negative exponents")
            if v:
                c[int(m)] = v
        self._c = c

    @classmethod
    def _raw(cls, c: dict) -> SymLaurent:
        obj = object.__new__(cls)
        obj._c = c
        return obj

    @classmethod
    def from_dense(cls, dense: list[int]) -> SymLaurent:
        return cls._raw({m: v for m, v in enumerate(dense) if v})

    @classmethod
    def from_laurent(cls, full: Mapping[int, int]) -> SymLaurent:
        """From a full exponent -> coefficient map; must be symmetric."""
        for m, v in full.items():
            if full.get(-m, 0) != v:
                raise ValueError("Laurent polynomial is not symmetric under t -> 1/t")
        return cls({m: v for m, v in full.items() if m >= 0})

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items())

    def get(self, m: int) -> int:
        return self._c.get(abs(m), 0)

    @property
    def degree(self) -> int:
        return max(self._c) if self._c else -1

    def is_zero(self) -> bool:
        return not self._c

    def at_one(self) -> int:
        """Value at ``t = 1``: the dimension of a genuine character."""
        c0 = self._c.get(0, 0)
        return c0 + 2 * (sum(self._c.values()) - c0)

    def to_laurent(self) -> dict[int, int]:
        full = {}
        for m, v in self._c.items():
            full[m] = v
            full[-m] = v
        return full

    def dense(self) -> list[int]:
        out = [0] * (self.degree + 1)
        for m, v in self._c.items():
            out[m] = v
        return out

    def __eq__(self, other):
        if not isinstance(other, SymLaurent):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __add__(self, other: SymLaurent) -> SymLaurent:
        c = dict(self._c)
        for m, v in other._c.items():
            w = c.get(m, 0) + v
            if w:
                c[m] = w
            else:
                c.pop(m, None)
        return SymLaurent._raw(c)

    def __neg__(self):
        return SymLaurent._raw({m: -v for m, v in self._c.items()})

    def __sub__(self, other: SymLaurent) -> SymLaurent:
        return self + (-other)

    def scale(self, k: int) -> SymLaurent:
        if not k:
            return SymLaurent._raw({})
        return SymLaurent._raw({m: k * v for m, v in self._c.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        if not isinstance(other, SymLaurent):
            return NotImplemented
        return sym_laurent_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> SymLaurent:
        if e < 0:
            raise ValueError("negative power of a character")
        result, base = SymLaurent._raw({0: 1}), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def to_string(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for m in sorted(self._c, reverse=True):
            v = self._c[m]
            if m == 0:
                parts.append(str(v))
            else:
                coef = "" if v == 1 else f"{v}*"
                parts.append(f"{coef}(t^{m} + t^-{m})")
        return " + ".join(parts)

    def __repr__(self):
        return f"SymLaurent({dict(sorted(self._c.items()))})"


def sym_laurent_mul(a: SymLaurent, b: SymLaurent) -> SymLaurent:
    """Exact product of symmetric Laurent polynomials."""
    if len(a._c) > len(b._c):
        a, b = b, a
    if not a._c:
        return SymLaurent._raw({})
    if len(a._c) > _KRONECKER_MIN:
        # dense route: full Laurent coefficient lists via big-int convolution
        da, db = a.degree, b.degree
        fa = _full_dense(a)
        fb = _full_dense(b)
        prod = _mul_int(fa, fb)
        off = da + db
        return SymLaurent._raw({m: v for m, v in enumerate(prod[off:]) if v})
    out: dict[int, int] = {}
    bc = b._c
    for m, u in a._c.items():
        if m == 0:
            for n, v in bc.items():
                out[n] = out.get(n, 0) + u * v
            continue
        for n, v in bc.items():
            w = u * v
            # (t^m + t^-m)(t^n + t^-n) = (t^{m+n} + ...) + (t^{|m-n|} + ...)
            out[m + n] = out.get(m + n, 0) + w
            if n == 0:
                continue
            d = m - n if m >= n else n - m
            out[d] = out.get(d, 0) + (2 * w if d == 0 else w)
    return SymLaurent._raw({m: v for m, v in out.items() if v})


def _full_dense(a: SymLaurent) -> list[int]:
    d = a.degree
    out = [0] * (2 * d + 1)
    for m, v in a._c.items():
        out[d + m] = v
        out[d - m] = v
    return out


CHI_V = SymLaurent({1: 1})


def evaluate_on_V(Q: RatPoly) -> SymLaurent:
    """The character ``Q(t + 1/t)`` of the virtual module ``Q(V)``."""
    acc = SymLaurent()
    for c in reversed(Q.coeffs):
        if not isinstance(c, int):
            raise ValueError("only integer polynomials define virtual modules")
        acc = acc * CHI_V
        if c:
            acc = acc + SymLaurent({0: c})
    return acc


def chebyshev_basis(chi: SymLaurent) -> IntPoly:
    """The unique ``Q`` in Z[x] with ``Q(t + 1/t) = chi``.

    Each symmetric monomial ``c (t^m + t^-m)`` is ``c Q_m(t + 1/t)``, so this is a direct sum.
    """
    acc = IntPoly([])
    for m, c in chi.items():
        acc = acc + (IntPoly([c]) if m == 0 else chebyshev_Q(m) * c)
    return acc
