import random
from fractions import Fraction

import pytest

from fiberlab.groebner import (
    Budget,
    BudgetExceeded,
    HilbertSeries,
    NotHomogeneousError,
    budget_scope,
    buchberger,
    hilbert_series,
    is_member,
    krull_dimension,
    leading_term_ideal,
    normal_form,
)
from fiberlab.idealops import Ideal, eliminate
from fiberlab.polyring import GREVLEX, LEX, QQ, polynomial_ring, random_polynomial


def test_normal_form_examples():
    R = polynomial_ring(["x", "y"], QQ)
    assert normal_form(R.parse("x^2 + y"), buchberger([R.parse("x")], R, LEX)) == R.parse("y")
    G = buchberger([R.parse("x - y")], R, LEX)
    assert normal_form(R.parse("x^2 + y^2 - 1"), G) == R.parse("2*y^2 - 1")
    assert normal_form(R.parse("x^2 - x*y"), G).is_zero()


def test_buchberger_examples():
    R = polynomial_ring(["x", "y"], QQ)
    G = buchberger([R.parse("x^2 + y^2 - 1"), R.parse("x - y")], R, LEX)
    assert {str(g) for g in G} == {"x - y", "y^2 - 1/2"}
    assert {str(g) for g in buchberger(R.gens(), R, GREVLEX)} == {"x", "y"}
    B = polynomial_ring(["x1", "x2", "t"], weights=[2, 3, 1])
    P = eliminate(Ideal(B, ["x1 - t^2", "x2 - t^3"]), ["t"])
    assert [str(g) for g in P.gens] == ["x1^3 - x2^2"]


def test_leading_term_ideal():
    R = polynomial_ring(["x", "y"], QQ)
    G = buchberger([R.parse("x - y"), R.parse("2*y^2 - 1")], R, LEX)
    assert sorted(leading_term_ideal(G)) == [(0, 2), (1, 0)]
    assert sorted(leading_term_ideal(buchberger(R.gens(), R))) == [(0, 1), (1, 0)]
    assert leading_term_ideal(buchberger([], R)) == []


def test_hilbert_series_examples():
    R = polynomial_ring(["x", "y"])
    assert hilbert_series([R.parse("x^2"), R.parse("x*y")], R) == HilbertSeries((1, 1, -1), (1,))
    X = polynomial_ring(["x"])
    assert hilbert_series([], X) == HilbertSeries((1,), (1,))
    T = polynomial_ring(["T1", "T2", "T3"])
    assert hilbert_series([T.parse("T2^2 - T1*T3")], T) == HilbertSeries((1, 1), (1, 1))
    with pytest.raises(NotHomogeneousError):
        hilbert_series([R.parse("x^2 + y")], R)


def test_weighted_hilbert_series_of_curve(curve_ring):
    hs = hilbert_series(curve_ring.relations, curve_ring.free())
    assert hs.dimension == 1
    # the Hilbert function counts semigroup elements: 1 in every degree of S
    S = {0, 6, 11, 12, 15, 17, 18, 21, 22, 23, 24}
    assert [hs.coefficients(24)[d] for d in range(25)] == [int(d in S) for d in range(25)]


def test_krull_dimension_examples():
    R = polynomial_ring(["x", "y", "z"])
    assert krull_dimension([R.parse("x*y")], R) == 2
    assert krull_dimension(R.gens(), R) == 0
    T = polynomial_ring(["T1", "T2", "T3"])
    rels = [T.parse(s) for s in ("T2^3", "T1*T3", "T2*T3", "T3^2")]
    assert krull_dimension(rels, T) == 1
    assert krull_dimension([R.one], R) == -1


def test_is_member_examples():
    R = polynomial_ring(["x", "y"], weights=[2, 3])
    assert is_member(R.parse("x^3 - y^2"), [R.parse("x^3 - y^2")], R)
    assert not is_member(R.one, R.gens(), R)
    assert is_member(R.zero, [R.parse("x")], R)


def test_membership_of_explicit_combinations():
    R = polynomial_ring(["a", "b", "c"])
    rng = random.Random(5)
    for _ in range(20):
        gens = [random_polynomial(R, rng, nterms=3, max_deg=3) for _ in range(3)]
        f = sum((random_polynomial(R, rng, nterms=2, max_deg=2) * g for g in gens), R.zero)
        assert is_member(f, gens, R)


def test_spair_certificate_on_random_bases():
    R = polynomial_ring(["a", "b", "c"])
    rng = random.Random(17)
    for _ in range(25):
        gens = [random_polynomial(R, rng, nterms=3, max_deg=4) for _ in range(3)]
        G = buchberger(gens, R, rng.choice([GREVLEX, LEX]), use_cache=False)
        if len(G) <= 30:
            assert G.spolynomials_reduce_to_zero()
        lms = G.leading_monomials()
        for g in G:  # reducedness
            for _, e in g.terms(G.order)[1:]:
                assert not any(all(x <= y for x, y in zip(m, e)) for m in lms)


def test_hilbert_series_is_order_independent():
    R = polynomial_ring(["a", "b", "c"])
    rng = random.Random(23)
    for _ in range(50):
        gens = [random_polynomial(R, rng, nterms=3, homogeneous_degree=rng.randint(1, 4)) for _ in range(3)]
        h1 = hilbert_series(gens, R, order=GREVLEX)
        h2 = hilbert_series(gens, R, order=LEX)
        assert h1 == h2 and h1.dimension == h2.dimension


def test_budget_is_enforced():
    R = polynomial_ring(["a", "b", "c", "d"])
    rng = random.Random(1)
    gens = [random_polynomial(R, rng, nterms=4, homogeneous_degree=3) for _ in range(4)]
    with pytest.raises(BudgetExceeded):
        with budget_scope(Budget(max_pairs=3)):
            buchberger(gens, R, LEX, use_cache=False)


def test_multiplicity_of_twisted_cubic():
    T = polynomial_ring(["a", "b", "c", "d"])
    rels = [T.parse(s) for s in ("a*c - b^2", "b*d - c^2", "a*d - b*c")]
    hs = hilbert_series(rels, T)
    assert hs.dimension == 2 and hs.multiplicity == Fraction(3)
