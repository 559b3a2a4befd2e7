"""
Fusion combinatorics of SL2 tilting modules in odd characteristic.

``T(n)`` is the indecomposable tilting module of highest weight ``n`` and
``V = T(1)`` the natural module.  Everything here is driven by the base-``p``
digits of ``n + 1``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Mapping

from .algebra import IntPoly, SymLaurent, chebyshev_basis, evaluate_on_V, sym_laurent_mul

__all__ = [
    "InvalidPrime", "NotATiltingCharacter", "V",
    "DigitExpansion", "TiltingMultiset", "FusionGraph",
    "check_prime", "digits", "supp", "dim_tilting", "tilting_character", "tensor_by_V",
    "fusion_graph", "character_to_tilting", "tensor_power_multiplicities",
    "tensor_powers", "b_k", "mu", "chebyshev_of", "apply_poly", "v_power_rows",
]


class InvalidPrime(ValueError):
    """p is not an odd prime."""


class NotATiltingCharacter(ValueError):
    """A character is not a non-negative combination of tilting characters."""


@lru_cache(maxsize=64)
def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def check_prime(p) -> int:
    if isinstance(p, bool) or not isinstance(p, int):
        raise InvalidPrime(f"p must be an integer, got {p!r}")
    if p == 2:
        raise InvalidPrime("p = 2 is not supported; p must be an odd prime")
    if not _is_prime(p):
        raise InvalidPrime(f"p = {p} is not prime")
    return p


def _check_weight(n, name: str = "n") -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ValueError(f"{name} must be a non-negative integer, got {n!r}")
    return n


@dataclass(frozen=True)
class DigitExpansion:
    """Base-``p`` digits, little-endian: ``digits[i]`` is the coefficient of ``p**i``."""

    p: int
    digits: tuple[int, ...]

    def __post_init__(self):
        if not self.digits:
            raise ValueError("empty digit expansion")
        if any(not 0 <= a < self.p for a in self.digits):
            raise ValueError("digit out of range")
        if len(self.digits) > 1 and self.digits[-1] == 0:
            raise ValueError("leading digit must be nonzero")

    @property
    def value(self) -> int:
        v = 0
        for a in reversed(self.digits):
            v = v * self.p + a
        return v

    @property
    def s(self) -> int:
        """Index of the leading digit, so ``p**s <= value < p**(s+1)``."""
        return len(self.digits) - 1

    def __getitem__(self, i: int) -> int:
        return self.digits[i] if 0 <= i < len(self.digits) else 0

    def __len__(self):
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)


def digits(n: int, p: int) -> DigitExpansion:
    check_prime(p)
    _check_weight(n)
    out = []
    while True:
        n, a = divmod(n, p)
        out.append(a)
        if not n:
            break
    return DigitExpansion(p, tuple(out))


def _raw_digits(n: int, p: int) -> list[int]:
    out = []
    while True:
        n, a = divmod(n, p)
        out.append(a)
        if not n:
            return out


@lru_cache(maxsize=65536)
def _supp(n: int, p: int) -> tuple[int, ...]:
    ds = _raw_digits(n + 1, p)
    vals = {ds[-1] * p ** (len(ds) - 1)}
    for i in range(len(ds) - 2, -1, -1):
        term = ds[i] * p ** i
        if term:
            vals = {v + term for v in vals} | {v - term for v in vals}
    return tuple(sorted(vals, reverse=True))


def supp(n: int, p: int) -> frozenset[int]:
    """All values ``a_j p^j +- a_{j-1} p^{j-1} +- ... +- a_0`` from the digits of ``n + 1``."""
    check_prime(p)
    _check_weight(n)
    return frozenset(_supp(n, p))


def dim_tilting(n: int, p: int) -> int:
    """``dim T(n)``: each Weyl module of highest weight ``k - 1`` has dimension ``k``."""
    check_prime(p)
    _check_weight(n)
    return sum(_supp(n, p))


def _character_dense(n: int, p: int) -> list[int]:
    # Weyl character (t^k - t^-k)/(t - 1/t) = t^{k-1} + t^{k-3} + ... ; all k in
    # supp(n) have the parity of n + 1, so c_m counts the k > m for m = n mod 2.
    ks = _supp(n, p)
    dense = [0] * (n + 1)
    for k in ks:
        for m in range(k - 1, -1, -2):
            dense[m] += 1
    return dense


@lru_cache(maxsize=4096)
def _character_cached(n: int, p: int) -> SymLaurent:
    return SymLaurent.from_dense(_character_dense(n, p))


def tilting_character(n: int, p: int) -> SymLaurent:
    """Formal character of ``T(n)`` as a sum of Weyl characters over ``supp(n)``."""
    check_prime(p)
    _check_weight(n)
    return _character_cached(n, p)


class TiltingMultiset(Mapping):
    """Multiset of indecomposable tilting modules, ``{highest weight: multiplicity}``.

    Zero multiplicities and the weight ``-1`` (``T(-1) = 0``) are never stored.
    """

    __slots__ = ("_d",)

    def __init__(self, entries: Mapping[int, int] | Iterator | None = None):
        d: dict[int, int] = {}
        items = entries.items() if isinstance(entries, Mapping) else (entries or ())
        for n, c in items:
            if n == -1 or not c:
                continue
            if isinstance(n, bool) or not isinstance(n, int) or n < 0:
                raise ValueError(f"invalid highest weight {n!r}")
            if c < 0:
                raise ValueError(f"negative multiplicity {c} for T({n})")
            d[n] = d.get(n, 0) + c
        self._d = d

    def __getitem__(self, n):
        return self._d[n]

    def get(self, n, default=0):
        return self._d.get(n, default)

    def __iter__(self):
        return iter(sorted(self._d))

    def __len__(self):
        return len(self._d)

    def __eq__(self, other):
        if isinstance(other, TiltingMultiset):
            return self._d == other._d
        if isinstance(other, Mapping):
            return self._d == {n: c for n, c in other.items() if c and n != -1}
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._d.items()))

    def total(self) -> int:
        """Number of indecomposable summands, counted with multiplicity."""
        return sum(self._d.values())

    def dim(self, p: int) -> int:
        return sum(c * dim_tilting(n, p) for n, c in self._d.items())

    def character(self, p: int) -> SymLaurent:
        acc = SymLaurent()
        for n, c in self._d.items():
            acc = acc + tilting_character(n, p).scale(c)
        return acc

    def summands(self) -> list[tuple[int, int]]:
        """``[(weight, multiplicity)]`` by descending weight."""
        return sorted(self._d.items(), reverse=True)

    def to_string(self) -> str:
        if not self._d:
            return "0"
        return " + ".join(f"T({n})" if c == 1 else f"{c}*T({n})" for n, c in self.summands())

    def __repr__(self):
        return f"TiltingMultiset({dict(sorted(self._d.items()))})"


V = TiltingMultiset({1: 1})


def _valuation(m: int, p: int) -> int:
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


@lru_cache(maxsize=None)
def _tensor_by_V(n: int, p: int) -> tuple[tuple[int, int], ...]:
    out: dict[int, int] = {}

    def add(w: int, c: int):
        if w >= 0:
            out[w] = out.get(w, 0) + c

    a0 = (n + 1) % p
    add(n + 1, 1)
    if a0 == 0:
        pass
    elif a0 == 1:
        add(n - 1, 2)
    elif a0 < p - 1:
        add(n - 1, 1)
    else:
        add(n - 1, 1)
        d = _valuation(n + 2, p) - 1
        for i in range(1, d + 1):
            add(n + 1 - 2 * p ** i, 1)
        top = p ** (d + 1)
        far = n + 1 - 2 * top
        if n + 2 == top:
            pass
        elif (n + 2) % top == 0 and (n + 2) // top < p:
            # n + 2 = a p^{d+1} with 1 < a < p
            add(far, 1)
        else:
            a = ((n + 1) // top) % p
            if a == 1:
                add(far, 2)
            elif 1 < a < p - 1:
                add(far, 1)
    return tuple(sorted(out.items(), reverse=True))


def tensor_by_V(n: int, p: int) -> TiltingMultiset:
    """Decomposition of ``T(n) (x) V`` into indecomposable tilting modules."""
    check_prime(p)
    _check_weight(n)
    return TiltingMultiset(dict(_tensor_by_V(n, p)))


@dataclass(frozen=True)
class FusionGraph:
    """Edges ``n -> m`` (multiplicity ``c``) of the fusion graph of ``- (x) V``
    for sources ``n < n_max``.  Edges with ``m >= n_max`` are boundary edges."""

    p: int
    n_max: int
    edges: tuple[tuple[int, int, int], ...] = field(default=())

    def is_boundary(self, edge: tuple[int, int, int]) -> bool:
        return edge[1] >= self.n_max

    def interior_edges(self) -> list[tuple[int, int, int]]:
        return [e for e in self.edges if e[1] < self.n_max]

    def boundary_edges(self) -> list[tuple[int, int, int]]:
        return [e for e in self.edges if e[1] >= self.n_max]

    def restrict(self, nodes) -> set[tuple[int, int, int]]:
        """Edges with both endpoints in ``nodes``."""
        nodes = set(nodes)
        return {e for e in self.edges if e[0] in nodes and e[1] in nodes}

    def to_dot(self) -> str:
        lines = [f"digraph fusion_p{self.p} {{", "  rankdir=LR;"]
        for n in range(self.n_max):
            lines.append(f'  {n} [label="{n}"];')
        for n in sorted({e[1] for e in self.boundary_edges()}):
            lines.append(f'  {n} [label="{n}", style=dashed];')
        for n, m, c in self.edges:
            attrs = []
            if c > 1:
                attrs.append(f'label="{c}"')
            if m >= self.n_max:
                attrs.append("style=dashed")
            suffix = f" [{', '.join(attrs)}]" if attrs else ""
            lines.append(f"  {n} -> {m}{suffix};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({"p": self.p, "n_max": self.n_max,
                           "edges": [list(e) for e in self.edges]})

    @classmethod
    def from_json(cls, text: str) -> FusionGraph:
        data = json.loads(text)
        return cls(data["p"], data["n_max"], tuple(tuple(e) for e in data["edges"]))


def fusion_graph(p: int, n_max: int) -> FusionGraph:
    check_prime(p)
    if isinstance(n_max, bool) or not isinstance(n_max, int) or n_max < 1:
        raise ValueError("n_max must be a positive integer")
    edges = []
    for n in range(n_max):
        for m, c in sorted(_tensor_by_V(n, p)):
            edges.append((n, m, c))
    return FusionGraph(p, n_max, tuple(edges))


def character_to_tilting(chi: SymLaurent, p: int) -> TiltingMultiset:
    """Greedy expansion of ``chi`` in tilting characters, top weight first."""
    check_prime(p)
    rem = dict(chi.coeffs)
    out: dict[int, int] = {}
    while rem:
        m = max(rem)
        c = rem[m]
        if c < 0:
            raise NotATiltingCharacter(f"negative coefficient {c} at top weight {m}")
        out[m] = c
        for k in _supp(m, p):
            for w in range(k - 1, -1, -2):
                v = rem.get(w, 0) - c
                if v:
                    rem[w] = v
                else:
                    rem.pop(w, None)
    return TiltingMultiset(out)


def _as_multiset(T) -> TiltingMultiset:
    if isinstance(T, TiltingMultiset):
        return T
    if isinstance(T, Mapping):
        return TiltingMultiset(T)
    if isinstance(T, int):
        return TiltingMultiset({T: 1})
    raise TypeError(f"cannot interpret {T!r} as a tilting module")


def _step(vec: dict[int, int], p: int) -> dict[int, int]:
    """One application of ``- (x) V`` to a (possibly virtual) multiplicity vector."""
    new: dict[int, int] = {}
    get = new.get
    for n, c in vec.items():
        for m, e in _tensor_by_V(n, p):
            new[m] = get(m, 0) + e * c
    return {m: c for m, c in new.items() if c}


def apply_poly(Q: IntPoly, vec: dict[int, int], p: int) -> dict[int, int]:
    """``Q(- (x) V)`` applied to ``vec`` (Horner's rule).

    Tilting classes form a ring in which ``[T] = Q_T([V])``, so tensoring by
    ``T`` is the operator ``Q_T`` in ``- (x) V``.
    """
    acc: dict[int, int] = {}
    for c in reversed(Q.coeffs):
        acc = _step(acc, p) if acc else {}
        if c:
            for n, v in vec.items():
                w = acc.get(n, 0) + c * v
                if w:
                    acc[n] = w
                else:
                    acc.pop(n, None)
    return acc


def chebyshev_of(T, p: int) -> IntPoly:
    """The ``Q`` in Z[x] with ``Q(V) = T`` (character taken in Chebyshev basis)."""
    return chebyshev_basis(_as_multiset(T).character(p))


def tensor_powers(T, p: int, k_max: int | None = None) -> Iterator[TiltingMultiset]:
    """Yields ``T^{(x)k}`` for ``k = 0, 1, 2, ...`` (up to ``k_max``) by DP."""
    check_prime(p)
    T = _as_multiset(T)
    if not T:
        raise ValueError("T must be a nonzero module")
    Q = None if T == V else chebyshev_of(T, p)
    vec = {0: 1}
    k = 0
    while k_max is None or k <= k_max:
        yield TiltingMultiset(vec)
        vec = _step(vec, p) if Q is None else apply_poly(Q, vec, p)
        if any(c < 0 for c in vec.values()):
            raise NotATiltingCharacter("tensor power produced a negative multiplicity")
        k += 1


def tensor_power_multiplicities(T, k: int, p: int, engine: str = "dp") -> TiltingMultiset:
    """Indecomposable summands of ``T^{(x)k}``.

    ``engine="dp"`` pushes multiplicity vectors through the fusion rule;
    ``engine="character"`` raises the character to the ``k``-th power and
    decomposes greedily.  The two must agree.
    """
    check_prime(p)
    _check_weight(k, "k")
    T = _as_multiset(T)
    if engine == "dp":
        for k_cur, result in enumerate(tensor_powers(T, p, k)):
            if k_cur == k:
                return result
    if engine == "character":
        chi = T.character(p)
        acc = SymLaurent({0: 1})
        for _ in range(k):
            acc = sym_laurent_mul(acc, chi)
        return character_to_tilting(acc, p)
    raise ValueError(f"unknown engine {engine!r}")


def b_k(T, k: int, p: int) -> int:
    """Number of indecomposable summands of ``T^{(x)k}``."""
    return tensor_power_multiplicities(T, k, p).total()


def mu(n: int, Q: IntPoly, k: int, p: int) -> int:
    """Multiplicity of ``T(n)`` in ``Q(V)^{(x)k}``."""
    check_prime(p)
    _check_weight(n)
    _check_weight(k, "k")
    T = character_to_tilting(evaluate_on_V(Q), p)
    vec = {0: 1}
    for _ in range(k):
        vec = apply_poly(Q, vec, p)
    if T and any(c < 0 for c in vec.values()):
        raise NotATiltingCharacter("negative multiplicity in a tensor power")
    return vec.get(n, 0)


@lru_cache(maxsize=32)
def v_power_rows(p: int, L: int) -> tuple[dict[int, int], ...]:
    """Multiplicity vectors of ``V^{(x)l}`` for ``l = 0..L`` (shared DP table)."""
    check_prime(p)
    _check_weight(L, "L")
    rows = [{0: 1}]
    for _ in range(L):
        rows.append(_step(rows[-1], p))
    return tuple(rows)
