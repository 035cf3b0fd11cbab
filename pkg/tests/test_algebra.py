from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tomlinks.algebra import (
    AlgebraError,
    BiDegree,
    NotDivisible,
    NotHomogeneous,
    ParseError,
    Polynomial,
    Ring,
    bidegree,
    exact_divide,
    monomials_of_degree,
    parse,
    random_general,
    substitute,
    well_form,
)

R7 = Ring(("x1", "x2", "x3", "y1", "y2", "y3", "y4"), [(1, 1, 1, 6, 5, 4, 3)])
SCROLL = Ring(
    ("t", "s", "x1", "x2", "x3", "y1", "y2", "y3", "y4"),
    [(0, 2, 1, 1, 1, 6, 5, 4, 3), (1, 1, 0, 0, 0, -1, -1, -1, -1)],
)


def rand_poly(ring, seed, degree=3):
    # dense-ish random polynomial of bounded degree for property tests
    import random

    rng = random.Random(seed)
    terms = {}
    for _ in range(6):
        mono = [0] * ring.nvars
        for _ in range(degree):
            mono[rng.randrange(ring.nvars)] += rng.randrange(2)
        terms[tuple(mono)] = Fraction(rng.randint(-5, 5))
    return Polynomial(ring, terms)


class TestParse:
    def test_two_term(self):
        p = parse("x1*x2^2 - y4", R7)
        assert len(p) == 2
        assert p.coefficient((1, 2, 0, 0, 0, 0, 0)) == 1
        assert p.coefficient((0, 0, 0, 0, 0, 0, 1)) == -1

    def test_zero(self):
        assert parse("0", R7).is_zero()

    def test_underscored_names_round_trip(self):
        p = parse("-x_2^3 + y_4", R7)
        assert parse(str(p), R7) == p
        assert parse(str(parse(str(p), R7)), R7) == p

    def test_juxtaposition(self):
        assert parse("2x1y4", R7) == parse("2*x1*y4", R7)

    def test_unknown_variable(self):
        with pytest.raises(ParseError):
            parse("x1 + w3", R7)

    def test_malformed_exponent(self):
        with pytest.raises(ParseError):
            parse("x1^", R7)

    @given(st.integers(0, 10**6))
    @settings(max_examples=25, deadline=None)
    def test_print_parse_identity(self, seed):
        p = rand_poly(R7, seed)
        if p.is_zero():
            return
        assert parse(str(p), R7) == p


class TestArithmetic:
    def test_difference_of_squares(self):
        a, b = parse("x1+y1", R7), parse("x1-y1", R7)
        assert a * b == parse("x1^2 - y1^2", R7)

    def test_annihilator(self):
        p = rand_poly(R7, 5)
        assert (p * R7.zero()).is_zero()

    @given(st.integers(0, 10**6))
    @settings(max_examples=25, deadline=None)
    def test_ring_axioms(self, seed):
        p, q, r = (rand_poly(R7, seed + k) for k in range(3))
        assert (p + q) + r == p + (q + r)
        assert p * (q + r) == p * q + p * r
        assert p * q == q * p


class TestExactDivide:
    def test_monomial(self):
        assert exact_divide(parse("x1^2*y1", R7), parse("x1", R7)) == parse("x1*y1", R7)

    def test_not_divisible(self):
        with pytest.raises(NotDivisible):
            exact_divide(parse("x1+1", R7), parse("x2", R7))

    @given(st.integers(0, 10**6))
    @settings(max_examples=25, deadline=None)
    def test_product_round_trip(self, seed):
        p, q = rand_poly(R7, seed), rand_poly(R7, seed + 1)
        if q.is_zero():
            return
        assert exact_divide(p * q, q) == p


class TestBidegree:
    def test_rank1(self):
        ring = Ring(tuple(f"v{i}" for i in range(8)), [(1, 1, 1, 2, 3, 4, 5, 6)])
        assert bidegree(ring.gen("v0") * ring.gen("v1")) == BiDegree(2)

    def test_scroll_bidegree(self):
        assert bidegree(parse("t*y4^2", SCROLL)) == BiDegree(6, -1)

    def test_mixed_degrees(self):
        with pytest.raises(NotHomogeneous):
            bidegree(parse("x1 + y1", R7))

    @given(st.integers(0, 10**6))
    @settings(max_examples=25, deadline=None)
    def test_additivity(self, seed):
        import random

        rng = random.Random(seed)
        d1, d2 = rng.randint(1, 4), rng.randint(1, 4)
        p = random_general(d1, R7, seed=seed)
        q = random_general(d2, R7, seed=seed + 1)
        assert bidegree(p * q).top == bidegree(p).top + bidegree(q).top


class TestSubstitute:
    def test_unit_substitution(self):
        p = parse("y1^2 - x1*y1", R7)
        assert substitute(p, {"y1": 1}) == parse("1 - x1", R7)

    def test_identity(self):
        p = rand_poly(R7, 11)
        assert substitute(p, {"y1": R7.gen("y1")}) == p

    def test_pullback_to_scroll(self):
        # y -> t*y realises the map contracting the ideal variables
        t = SCROLL.gen("t")
        image = substitute(parse("x1*y4", R7), {n: t * SCROLL.gen(n) for n in ("y1", "y2", "y3", "y4")}, SCROLL)
        assert image == parse("t*x1*y4", SCROLL)


class TestWellForm:
    def test_blowup_normalisation(self):
        raw = Ring(SCROLL.names, [(0, 2, 1, 1, 1, 6, 5, 4, 3), (-2, 0, 1, 1, 1, 8, 7, 6, 5)])
        ring, T = well_form(raw)
        assert ring.bottom == (1, 1, 0, 0, 0, -1, -1, -1, -1)
        # T maps the input rows to the output rows
        for col in range(ring.nvars):
            top = T[0][0] * raw.top[col] + T[0][1] * raw.bottom[col]
            bot = T[1][0] * raw.top[col] + T[1][1] * raw.bottom[col]
            assert (top, bot) == (ring.top[col], ring.bottom[col])

    def test_fixed_point(self):
        ring, _ = well_form(SCROLL)
        assert ring == SCROLL

    def test_localisation_at_y1(self):
        ring, _ = well_form(SCROLL, pivot="y1")
        assert ring.top == (6, 8, 1, 1, 1, 0, -1, -2, -3)

    def test_zero_column(self):
        bad = Ring(("a", "b"), [(0, 1), (0, 1)])
        with pytest.raises(AlgebraError):
            well_form(bad)


class TestRandomGeneral:
    def test_dense_linear_form(self):
        ring = Ring(("x1", "x2", "x3"), [(1, 1, 1)])
        p = random_general(1, ring, seed=7)
        assert len(p) == 3

    def test_ideal_constraint(self):
        ys = [R7.index[n] for n in ("y1", "y2", "y3", "y4")]
        p = random_general(3, R7, constraint=lambda m: any(m[i] for i in ys), seed=1)
        assert all(any(m[i] for i in ys) for m in p.terms)

    def test_determinism(self):
        assert random_general(4, R7, seed=3) == random_general(4, R7, seed=3)

    def test_no_admissible_monomial(self):
        ys = [R7.index[n] for n in ("y1", "y2", "y3", "y4")]
        with pytest.raises(AlgebraError):
            random_general(1, R7, constraint=lambda m: any(m[i] for i in ys), seed=0)

    def test_full_support(self):
        p = random_general(3, R7, seed=9)
        assert len(p) == len(monomials_of_degree(R7, 3))
