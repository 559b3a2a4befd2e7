from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tiltfuse.algebra import (
    IntPoly, RatFn, RatPoly, chebyshev_Q, compose_R_Q, path_poly_P, taylor_coeffs,
)
from tiltfuse.fusion import InvalidPrime, V, tensor_power_multiplicities
from tiltfuse.genfun import (
    F_a, GenFunQuery, X, Z, Z_closed, Z_single_digit, c_s_fn, c_s_form_A, c_s_form_B, c_s_form_C,
    coeffs_vs_oracle, multiplicativity_indices, recurrence_terms, verify_cs_identities,
    verify_linear_recurrences, verify_multiplicativity, verify_single_digit,
)
from tiltfuse.report import Report

t = RatPoly.make([0, 1])


def rf(num, den=(1,)):
    return RatFn(RatPoly.make(num), RatPoly.make(den))


def dp_row(p, n, L):
    """Multiplicity of T(n-1) in V^l for l = 0..L, straight from the fusion DP."""
    return [tensor_power_multiplicities(V, l, p).get(n - 1, 0) for l in range(L + 1)]


# --- closed forms -----------------------------------------------------------------------

def test_Z_closed_examples():
    assert Z_closed(GenFunQuery(3, 1)) == rf([1], [1, 0, -1])
    assert Z_closed(GenFunQuery(3, 2)) == rf([0, 1], [1, 0, -1])
    assert Z_closed(GenFunQuery(5, 1)) == rf([1, 0, -2], [1, 0, -3, 0, 1])
    assert Z_closed((5, 1)) == RatFn(path_poly_P(3), path_poly_P(4))


def test_Z_zero_is_inverse_t():
    assert Z(0, 3) == RatFn(RatPoly.make([1]), t)
    assert X(-1, 5) == Z(0, 5)
    with pytest.raises(ValueError):
        GenFunQuery(3, 0)
    with pytest.raises(InvalidPrime):
        GenFunQuery(2, 5)


def test_query_digits():
    q = GenFunQuery(5, 14)
    assert q.digits == [4, 2]
    assert q.s == 1


@pytest.mark.parametrize("p,n,L,want", [
    (3, 1, 6, [1, 0, 1, 0, 1, 0, 1]),
    (3, 2, 5, [0, 1, 0, 1, 0, 1]),
])
def test_coefficient_examples(p, n, L, want):
    assert taylor_coeffs(Z_closed((p, n)), L) == want
    assert dp_row(p, n, L) == want


def test_coefficient_example_row_4():
    row = taylor_coeffs(Z_closed((3, 4)), 5)
    assert row[:4] == [0, 0, 0, 1]
    assert row == dp_row(3, 4, 5)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_coeffs_vs_oracle_report(p):
    for n in (1, 2, p, p + 1, p * p - 1, p * p + 3):
        rep = coeffs_vs_oracle(p, n, 40)
        assert rep.passed, rep.summary()


@given(st.sampled_from([3, 5, 7]), st.integers(1, 60))
@settings(max_examples=40, deadline=None)
def test_coefficients_are_multiplicities(p, n):
    L = 60
    series = taylor_coeffs(Z_closed((p, n)), L)
    assert all(isinstance(c, int) and c >= 0 for c in series)
    assert series == dp_row(p, n, L)


@given(st.sampled_from([3, 5, 7]), st.integers(1, 400))
@settings(max_examples=60, deadline=None)
def test_Z_integrality(p, n):
    f = Z_closed((p, n))
    # scaled so that den(0) = 1 both sides are integer polynomials
    d0 = f.den(0)
    assert d0 != 0
    assert isinstance(f.num * Fraction(1, d0), IntPoly)
    assert isinstance(f.den * Fraction(1, d0), IntPoly)


def factor_products(p, n):
    digits = GenFunQuery(p, n).digits
    A, B = RatPoly.make([1]), RatPoly.make([1])
    for i, a in enumerate(digits):
        A = A * compose_R_Q(p - a - 1, i, p)
        B = B * compose_R_Q(p - 1, i, p)
    return A, B


@pytest.mark.parametrize("p", [3, 5])
def test_degree_bookkeeping(p):
    for n in range(1, p ** 3):
        s = GenFunQuery(p, n).s
        A, B = factor_products(p, n)
        assert A.degree == p ** (s + 1) - 1 - n
        assert B.degree == p ** (s + 1) - 1
        # t Z_n = t^n * t^{deg A} A(1/t) / (t^{deg B} B(1/t))
        want = RatFn(t ** n * A.reverse(A.degree), B.reverse(B.degree))
        assert Z_closed((p, n)) * RatFn(t) == want


# --- c_s ----------------------------------------------------------------------------------

def test_c_s_examples():
    assert c_s_fn(0, 3) == RatFn(t)
    assert c_s_fn(0, 7) == RatFn(t)
    assert c_s_fn(1, 3) == rf([0, 0, 0, 1], [1, 0, -3])
    c1 = c_s_fn(1, 3)
    assert c_s_fn(2, 3) == c1.compose(c1)
    assert c_s_fn(2, 3) == RatFn(t ** 9, chebyshev_Q(9).reverse(9))


@pytest.mark.parametrize("p", [3, 5])
def test_c_s_three_forms(p):
    for s in range(3):
        direct = c_s_fn(s, p)
        assert c_s_form_A(s, p) == direct
        assert c_s_form_B(s, p) == direct
        assert c_s_form_C(s, p) == direct


def test_c_s_p3_s1_all_forms():
    want = rf([0, 0, 0, 1], [1, 0, -3])
    assert c_s_form_A(1, 3) == want
    assert c_s_form_B(1, 3) == want
    assert c_s_form_C(1, 3) == want


# --- single digit -------------------------------------------------------------------------

def test_single_digit_examples():
    assert Z_single_digit(0, 0, 3) == Z(0, 3)
    assert Z_single_digit(1, 0, 3) == rf([1], [1, 0, -1])
    assert Z_single_digit(2, 1, 3) == Z_closed((3, 6))
    with pytest.raises(ValueError):
        Z_single_digit(3, 0, 3)


@pytest.mark.parametrize("p", [3, 5])
def test_F_a_bridge(p):
    for s in range(3):
        c = c_s_fn(s, p)
        for a in range(1, p):
            assert Z_single_digit(a, s, p) * RatFn(t) == F_a(a, p).compose(c)


# --- recurrences --------------------------------------------------------------------------

def test_recurrence_routing():
    # n = 2, p = 3: n + 1 = 3 has a0 = 0 so the second family applies
    branch, terms = recurrence_terms(2, 3)
    assert branch.startswith("a0_zero")
    assert (1, 1) in terms and (3, 2) in terms
    assert recurrence_terms(0, 3) == ("a0_mid", [(-1, 1), (1, 1)])
    assert recurrence_terms(1, 3) == ("a0_top", [(0, 1)])
    assert recurrence_terms(1, 5)[0] == "a0_mid"
    assert recurrence_terms(3, 5)[0] == "a0_top"
    b, terms = recurrence_terms(4, 5)          # n+1 = 5 = [1, 0]
    assert b == "a0_zero_extra" and (4 - 1 + 10, 1) in terms


def test_recurrence_x2_by_hand():
    # X_2 = t (X_1 + 2 X_3 + X_{1 + 2*3})  for p = 3
    lhs = X(2, 3)
    rhs = RatFn(t) * (X(1, 3) + X(3, 3) * 2 + X(7, 3))
    assert lhs == rhs


@pytest.mark.parametrize("p,n_max", [(3, 27), (5, 25), (7, 20)])
def test_recurrence_reports(p, n_max):
    rep = verify_linear_recurrences(p, n_max)
    assert rep.passed
    assert [c.params["n"] for c in rep.cases] == list(range(n_max + 1))


def test_broken_identity_fails():
    # a wrong coefficient must be caught by the exact comparison
    wrong = RatFn(t) * (X(1, 3) + X(3, 3))
    assert wrong != X(2, 3)


# --- multiplicativity ---------------------------------------------------------------------

def test_multiplicativity_examples():
    assert Z(5, 3) == RatFn(t) * Z(3, 3) * Z(2, 3)
    assert Z(14, 5) == RatFn(t) * Z(10, 5) * Z(4, 5)
    assert Z(9, 3) == RatFn(t) * Z(9, 3) * Z(0, 3)


def test_multiplicativity_report():
    rep = verify_multiplicativity(3, 2)
    assert rep.passed
    assert len(rep.cases) == 2 * 3 + 2 * 9


def test_multiplicativity_sampling():
    assert multiplicativity_indices(5, 3) == sorted(multiplicativity_indices(5, 3))
    assert len(multiplicativity_indices(5, 3)) == 125
    big = multiplicativity_indices(7, 3, seed=4)
    assert len(big) == 50 and big == multiplicativity_indices(7, 3, seed=4)
    assert all(0 <= i < 343 for i in big)


# --- reports ------------------------------------------------------------------------------

def test_report_json_roundtrip():
    rep = verify_cs_identities(3, 2)
    assert rep.passed
    payload = json.loads(json.dumps(rep.to_json()))
    assert set(payload) == {"check_name", "p", "cases"}
    assert set(payload["cases"][0]) >= {"params", "pass", "lhs_hash", "rhs_hash"}
    back = Report.from_json(payload)
    assert back.to_json() == rep.to_json()


def test_single_digit_report():
    assert verify_single_digit(5, 2).passed
