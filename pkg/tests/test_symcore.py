from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from logres.symcore import (
    DivisionByZero,
    Frame,
    LogForm,
    MissingAssignment,
    NotDivisible,
    Polynomial,
    exact_divide,
    extend_variables,
    format_polynomial,
    parse_polynomial,
    substitute,
)

XY = ("x", "y")


def P(text, variables=XY):
    return parse_polynomial(text, variables)


# -- independent oracles ------------------------------------------------------


def oracle_divide_by_monomial(f, g):
    """Long-division oracle for a monomial divisor: shift each exponent."""
    (g_exp, g_coeff), = g.terms.items()
    terms = {}
    for exp, coeff in f.terms.items():
        shifted = tuple(a - b for a, b in zip(exp, g_exp))
        if any(s < 0 for s in shifted):
            return None
        terms[shifted] = coeff / g_coeff
    return Polynomial(f.variables, terms)


def oracle_expand_substitution(f, assignment):
    """Term-by-term expansion using raw dict convolution, no Polynomial ops."""
    target = next(iter(assignment.values())).variables
    acc = {}

    def convolve(t1, t2):
        out = {}
        for e1, c1 in t1.items():
            for e2, c2 in t2.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return {e: c for e, c in out.items() if c}

    for exp, coeff in f.terms.items():
        term = {(0,) * len(target): coeff}
        for var, e in zip(f.variables, exp):
            for _ in range(e):
                term = convolve(term, assignment[var].terms)
        for e, c in term.items():
            acc[e] = acc.get(e, Fraction(0)) + c
    return Polynomial(target, acc)


# -- exact_divide -------------------------------------------------------------


def test_divide_factor_by_inspection():
    assert exact_divide(P("x^2*y + x*y^2"), P("x*y")) == P("x + y")


def test_divide_remainder_one():
    with pytest.raises(NotDivisible):
        exact_divide(P("x^2 + 1"), P("x"))


def test_divide_power_sum_matches_long_division_oracle():
    f = P("x^5 + x^3*y^2 + x*y^4")
    g = P("x")
    expected = oracle_divide_by_monomial(f, g)
    assert expected == P("x^4 + x^2*y^2 + y^4")
    assert exact_divide(f, g) == expected


def test_divide_by_zero():
    with pytest.raises(DivisionByZero):
        exact_divide(P("x"), Polynomial.zero(XY))


def test_divide_non_monomial_divisor():
    f = P("x^2 - y^2")
    g = P("x - y")
    assert exact_divide(f, g) == P("x + y")
    with pytest.raises(NotDivisible):
        exact_divide(P("x^2 + y^2"), g)


# -- substitute ---------------------------------------------------------------


def test_substitute_blowup_chart_map():
    frame = ("x1", "x2")
    child = ("x1", "x2t")
    f = Polynomial.variable(frame, "x2")
    image = {
        "x1": Polynomial.variable(child, "x1"),
        "x2": Polynomial.variable(child, "x1") * Polynomial.variable(child, "x2t"),
    }
    assert substitute(f, image) == parse_polynomial("x1*x2t", child)


def test_substitute_identity():
    f = P("x + y")
    ident = {v: Polynomial.variable(XY, v) for v in XY}
    assert substitute(f, ident) == f


def test_substitute_product_term_matches_expansion_oracle():
    frame = ("x2", "x4")
    target = ("t", "u", "x4")
    f = parse_polynomial("x2*x4", frame)
    image = {
        "x2": parse_polynomial("t*u", target),
        "x4": parse_polynomial("x4", target),
    }
    assert substitute(f, image) == oracle_expand_substitution(f, image)
    assert substitute(f, image) == parse_polynomial("t*u*x4", target)


def test_substitute_missing_assignment():
    with pytest.raises(MissingAssignment):
        substitute(P("x + y"), {"x": Polynomial.variable(XY, "x")})


# -- hypothesis: ring axioms and round trips ----------------------------------

coeffs = st.integers(-6, 6).map(Fraction)
exponents = st.tuples(st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(exponents, coeffs, max_size=5).map(
    lambda d: Polynomial(XY, d)
)


@settings(max_examples=80, deadline=None)
@given(polys, polys, polys)
def test_distributivity(f, g, h):
    assert (f + g) * h == f * h + g * h


@settings(max_examples=80, deadline=None)
@given(polys, polys)
def test_commutativity(f, g):
    assert f * g == g * f
    assert f + g == g + f


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_exact_divide_recovers_factor(f, g):
    if g.is_zero:
        with pytest.raises(DivisionByZero):
            exact_divide(f * g, g)
    else:
        assert exact_divide(f * g, g) == f


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_substitute_is_ring_homomorphism(f, g):
    target = ("u", "v")
    image = {
        "x": parse_polynomial("u + v", target),
        "y": parse_polynomial("u*v - 1", target),
    }
    assert substitute(f * g, image) == substitute(f, image) * substitute(g, image)
    assert substitute(f + g, image) == substitute(f, image) + substitute(g, image)


@settings(max_examples=100, deadline=None)
@given(polys)
def test_text_round_trip(f):
    assert parse_polynomial(format_polynomial(f), XY) == f


def test_format_examples():
    assert format_polynomial(P("3/2*x^2*y - y")) == "3/2*x^2*y - y"
    assert str(Polynomial.zero(XY)) == "0"
    assert str(P("-x + 1/2")) == "-x + 1/2"


def test_canonical_form_is_insertion_order_independent():
    a = Polynomial(XY, [((1, 0), 1), ((0, 1), 2)])
    b = Polynomial(XY, [((0, 1), 2), ((1, 0), 1)])
    assert a == b and hash(a) == hash(b)


# -- calculus helpers ---------------------------------------------------------


def test_diff_and_evaluate():
    f = P("x^3*y + 2*y^2")
    assert f.diff("x") == P("3*x^2*y")
    assert f.diff("y") == P("x^3 + 4*y")
    assert f.evaluate({"x": Fraction(2), "y": Fraction(1, 2)}) == Fraction(9, 2)


def test_extend_variables():
    f = P("x + y")
    g = extend_variables(f, ("t", "x", "y"))
    assert g == parse_polynomial("x + y", ("t", "x", "y"))


# -- log forms ----------------------------------------------------------------


def test_logform_construction_and_addition():
    frame = Frame(("z1", "z2"), frozenset({"z1"}))
    zero = Polynomial.zero(frame.variables)
    one = Polynomial.constant(frame.variables, 1)
    z2 = Polynomial.variable(frame.variables, "z2")
    eta = LogForm.make(frame, {"z2": one}, {"z1": z2})
    assert str(eta) == "(z2)*dlog(z1) + (1)*d(z2)"
    assert (eta + eta.scale(-1)).is_zero
    assert LogForm.make(frame, {"z1": zero}, {}).is_zero


def test_logform_rejects_log_on_unmarked_coordinate():
    frame = Frame(("z1", "z2"), frozenset({"z1"}))
    one = Polynomial.constant(frame.variables, 1)
    with pytest.raises(ValueError):
        LogForm.make(frame, {}, {"z2": one})
