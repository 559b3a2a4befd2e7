from __future__ import annotations

import csv
import io
import json
import math
import random
from fractions import Fraction

import mpmath
import pytest

from tiltfuse.algebra import IntPoly
from tiltfuse.asymptotics import (
    NonpositiveBase, alpha_p, choose_l, format_tilting, growth_csv, growth_summary, growth_table,
    mk_diagnostic, parse_tilting, spec_from_tilting, weight_tail_mass,
)
from tiltfuse.fusion import V, TiltingMultiset, b_k, mu, tilting_character


# --- tilting polynomials ------------------------------------------------------------------

def test_spec_examples():
    s = spec_from_tilting(V, 7)
    assert s.Q == IntPoly([0, 1]) and s.dim == 2 and s.parity_class == "odd"
    s = spec_from_tilting(TiltingMultiset({2: 1}), 3)
    assert s.Q == IntPoly([-1, 0, 1]) and s.dim == 3 and s.parity_class == "even"
    assert s.derivative_at_2 == 4
    s = spec_from_tilting(TiltingMultiset({2: 1, 1: 1}), 3)
    assert s.Q == IntPoly([-1, 1, 1]) and s.dim == 5 and s.parity_class == "mixed"
    assert s.minus2 == 1


def test_trivial_module():
    s = spec_from_tilting(TiltingMultiset({0: 2}), 5)
    assert s.Q == IntPoly([2]) and s.dim == 2 and s.parity_class == "even"
    with pytest.raises(ValueError):
        spec_from_tilting(TiltingMultiset({}), 3)


def test_invariant_suite_random_multisets():
    rng = random.Random(7)
    grid = [Fraction(-2) + Fraction(4 * i, 1001) for i in range(1, 1001)]
    for _ in range(50):
        p = rng.choice([3, 5])
        T = TiltingMultiset({rng.randint(0, 30): rng.randint(1, 3) for _ in range(rng.randint(1, 4))})
        s = spec_from_tilting(T, p)
        # independent recomputation from the weights
        dim = sum(c * tilting_character(n, p).at_one() for n, c in T.items())
        assert s.Q(2) == dim == s.dim
        if s.Q.degree > 0:
            assert s.Q.derivative()(2) > 0
            assert max(abs(s.Q(x)) for x in grid) < dim
        all_even = all(n % 2 == 0 for n in T)
        all_odd = all(n % 2 == 1 for n in T)
        assert (s.parity_class == "even") == all_even
        assert (s.parity_class == "odd") == all_odd


def test_parse_and_format():
    assert parse_tilting("V") == V
    assert parse_tilting("7") == TiltingMultiset({7: 1})
    assert parse_tilting("2:1,0:3") == TiltingMultiset({2: 1, 0: 3})
    assert format_tilting(TiltingMultiset({0: 3, 2: 1})) == "2:1,0:3"
    for bad in ("", "a", "1:-1", "-2", "0:0"):
        with pytest.raises(ValueError):
            parse_tilting(bad)


# --- alpha and l ---------------------------------------------------------------------------

def test_alpha_values():
    with mpmath.workprec(200):
        a3 = alpha_p(3, 200)
        assert abs(a3 - (1 - mpmath.log(2, 3) / 2)) < mpmath.mpf(10) ** -50
        assert abs(a3 - mpmath.mpf("0.684535")) < 1e-6
        a5 = alpha_p(5, 200)
        assert abs(a5 - (1 - mpmath.log(3, 5) / 2)) < mpmath.mpf(10) ** -50
        assert abs(a5 - mpmath.mpf("0.658697")) < 1e-6
        assert a3 > a5 > alpha_p(7, 200)


def test_choose_l_examples():
    sV = spec_from_tilting(V, 3)
    assert choose_l(10, sV) == 10
    assert choose_l(7, sV, "odd") == 7
    assert choose_l(7, sV, "even") == 8
    s2 = spec_from_tilting(TiltingMultiset({2: 1}), 3)
    assert choose_l(10, s2, "even") == 26
    assert choose_l(10, s2) == 26
    with pytest.raises(ValueError):
        choose_l(0, sV)


# --- M_k -----------------------------------------------------------------------------------

def test_mk_for_V_is_one():
    sV = spec_from_tilting(V, 3)
    k = 10 ** 4
    with mpmath.workprec(128):
        assert abs(mk_diagnostic(sV, k, mpmath.pi / k) - 1) < 0.1
        assert abs(mk_diagnostic(sV, 50, mpmath.mpf(10) ** -8) - 1) < 1e-10


def test_mk_converges():
    s2 = spec_from_tilting(TiltingMultiset({2: 1}), 3)
    errs = []
    for k in (10 ** 2, 10 ** 3, 10 ** 4):
        m = mk_diagnostic(s2, k, 1 / mpmath.sqrt(k))
        assert mpmath.isfinite(m) and m > 0
        errs.append(abs(m - 1))
    assert errs[0] > errs[1] > errs[2]
    m = mk_diagnostic(s2, 10 ** 4, mpmath.pi / 100 * mpmath.mpf("0.1"))
    assert mpmath.isfinite(m)


def test_mk_nonpositive_base():
    s2 = spec_from_tilting(TiltingMultiset({2: 1}), 3)
    with pytest.raises(NonpositiveBase):
        mk_diagnostic(s2, 10, mpmath.pi / 2)       # beta = 0, Q(0) = -1


# --- weight tail ---------------------------------------------------------------------------

def test_tail_examples():
    sV = spec_from_tilting(V, 3)
    mass, ratio = weight_tail_mass(sV, 4, 0)
    assert mass == 5 and ratio == mpmath.mpf(5) / 16
    assert weight_tail_mass(sV, 50, 50)[0] == 0


def test_tail_matches_binomial_sum():
    sV = spec_from_tilting(V, 5)
    for k in (10, 33, 100):
        cut = math.sqrt(k) * math.log(k)
        # weight of a word in {+1,-1}^k is 2j - k for j plus signs
        want = sum(math.comb(k, j) for j in range(k + 1) if 2 * j - k > cut)
        assert weight_tail_mass(sV, k)[0] == want


def test_tail_general_module():
    T = TiltingMultiset({2: 1, 0: 1})
    s = spec_from_tilting(T, 3)
    chi = T.character(3)
    full = (chi ** 3).to_laurent()
    assert weight_tail_mass(s, 3, 1)[0] == sum(c for w, c in full.items() if w > 1)


def test_tail_decreasing():
    sV = spec_from_tilting(V, 3)
    ratios = [weight_tail_mass(sV, k)[1] for k in (64, 128, 256)]
    assert ratios[0] > ratios[1] > ratios[2]
    assert ratios[0] < 0.01


# --- growth --------------------------------------------------------------------------------

def test_growth_example():
    (g,) = growth_table(V, 3, [4])
    assert g.b_k == 5
    with mpmath.workprec(128):
        assert abs(g.ratio - 5 * mpmath.mpf(4) ** alpha_p(3) / 16) < mpmath.mpf(10) ** -30
    assert abs(g.ratio - 0.807) < 1e-3
    with pytest.raises(ValueError):
        growth_table(V, 3, [0])


def test_growth_matches_b_k():
    T = TiltingMultiset({1: 1, 0: 1})
    samples = growth_table(T, 5, [1, 2, 5, 9])
    assert [s.k for s in samples] == [1, 2, 5, 9]
    assert all(s.b_k == b_k(T, s.k, 5) >= 1 for s in samples)


def test_growth_outputs():
    samples = growth_table(V, 3, [16, 32, 64])
    summary = growth_summary(samples, V, 3)
    payload = json.loads(json.dumps(summary))
    assert {"p", "T", "window", "min_ratio", "max_ratio", "slope_fit"} <= set(payload)
    assert payload["window"] == [16, 64]
    rows = list(csv.reader(io.StringIO(growth_csv(samples, V, 3))))
    assert rows[0] == ["k", "b_k", "dim_T", "alpha_p", "ratio"]
    assert [int(r[1]) for r in rows[1:]] == [s.b_k for s in samples]


# --- parity vanishing ----------------------------------------------------------------------

@pytest.mark.parametrize("T,p", [(TiltingMultiset({2: 1}), 3), (TiltingMultiset({3: 1, 1: 2}), 5)])
def test_parity_vanishing(T, p):
    s = spec_from_tilting(T, p)
    q_parity = 0 if s.parity_class == "even" else 1
    for k in range(1, 9):
        for n in range(0, 3 * k + 2):
            if n % 2 != (k * q_parity) % 2:
                assert mu(n, s.Q, k, p) == 0
