import random

import pytest

from fiberlab.closure import (
    NewtonPolyhedron,
    NotMonomialError,
    check_hubl_huneke_hypotheses,
    check_KIj_closed,
    closure_membership_bounded,
    is_integrally_closed_monomial,
    is_normal,
    newton_closure,
    replay_certificate,
)
from fiberlab.criteria import FAILS, HOLDS, NOT_CHECKED
from fiberlab.idealops import Ideal, equal, variables_ideal
from fiberlab.polyring import polynomial_ring
from fiberlab.semigroup import NumericalSemigroup, SemigroupIdeal

from oracles import in_newton_polyhedron, newton_closure_points


def I_(R, *g):
    return Ideal(R, list(g))


def exps(I):
    return {g.leading_monomial() for g in I.gens}


def test_newton_closure_examples(xy):
    assert exps(newton_closure(I_(xy, "x^2", "y^2"))) == {(2, 0), (1, 1), (0, 2)}
    assert exps(newton_closure(I_(xy, "x^3"))) == {(3, 0)}
    assert exps(newton_closure(I_(xy, "x^3", "y^3"))) == {(3, 0), (2, 1), (1, 2), (0, 3)}


def test_newton_closure_rejects_non_monomial(xy):
    with pytest.raises(NotMonomialError):
        newton_closure(I_(xy, "x + y"))


def test_integrally_closed_examples(xy):
    assert is_integrally_closed_monomial(I_(xy, "x^2", "x*y", "y^2"))
    assert not is_integrally_closed_monomial(I_(xy, "x^2", "y^2"))
    assert is_integrally_closed_monomial(I_(xy, "x"))
    assert is_normal(I_(xy, "x^2", "x*y", "y^2"), 3)
    assert not is_normal(I_(xy, "x^2", "y^2"), 2)


def test_simplex_agrees_with_float_lp():
    rng = random.Random(2)
    for _ in range(40):
        n = rng.choice([2, 3])
        verts = [tuple(rng.randint(0, 6) for _ in range(n)) for _ in range(rng.randint(1, 4))]
        NP = NewtonPolyhedron(tuple(verts))
        for _ in range(10):
            p = tuple(rng.randint(0, 6) for _ in range(n))
            assert NP.contains(p) == in_newton_polyhedron(p, verts)


def test_closure_matches_brute_force_enumeration():
    rng = random.Random(6)
    for _ in range(20):
        n = rng.choice([2, 3])
        R = polynomial_ring(["a", "b", "c"][:n])
        verts = [tuple(rng.randint(0, 6) for _ in range(n)) for _ in range(rng.randint(1, 4))]
        I = Ideal(R, [R.monomial(v) for v in verts])
        box = [max(v[c] for v in verts) for c in range(n)]
        assert exps(newton_closure(I)) == newton_closure_points(verts, box)


def test_membership_examples(xy):
    res = closure_membership_bounded("x*y", I_(xy, "x^2", "y^2"), 2)
    assert res.yes and res.certificate.exponent == 1
    assert replay_certificate(res.certificate, I_(xy, "x^2", "y^2"))
    assert closure_membership_bounded("y", I_(xy, "x^2"), 3).status == "UNKNOWN"
    res = closure_membership_bounded("x^2*y", I_(xy, "x^2"), 3)
    assert res.yes and res.certificate.exponent == 0


def test_KIj_closed_examples(xy):
    m = variables_ideal(xy)
    out = check_KIj_closed(m, m, 2)
    assert [v.status for v in out["by_j"]] == [HOLDS] * 3
    assert out["hypotheses"]["R/KR unmixed"].status == NOT_CHECKED
    out = check_KIj_closed(I_(xy, "x^2", "y^2"), m, 1)
    assert [v.status for v in out["by_j"]] == [HOLDS, HOLDS]
    # m*(x^2, y^5) misses x*y^4, which lies on the segment from (2,1) to (0,6)
    out = check_KIj_closed(I_(xy, "x^2", "y^5"), m, 1)
    assert [v.status for v in out["by_j"]] == [HOLDS, FAILS]
    assert "x*y^4" in out["by_j"][1].witness
    assert not in_newton_polyhedron((1, 3), [(3, 0), (2, 1), (1, 5), (0, 6)])
    assert in_newton_polyhedron((1, 4), [(3, 0), (2, 1), (1, 5), (0, 6)])


def test_KIj_closed_non_monomial_is_not_checked(xy):
    out = check_KIj_closed(I_(xy, "x^2 + y^2"), variables_ideal(xy), 1)
    assert out["by_j"][1].status == NOT_CHECKED


def test_hubl_huneke_maximal_ideal(xy):
    rep = check_hubl_huneke_hypotheses(variables_ideal(xy), 1, 1)
    assert all(v.status == HOLDS for v in rep.hypotheses.values())
    assert rep.conclusion.status == HOLDS and rep.implied


def test_hubl_huneke_square(xy):
    rep = check_hubl_huneke_hypotheses(I_(xy, "x^2", "x*y", "y^2"), 1, 1)
    assert rep.hypotheses["no fiber relations in degrees <= 2"].status == FAILS
    assert rep.conclusion.status == HOLDS and not rep.implied


def test_hubl_huneke_curve_semigroup_path():
    S = NumericalSemigroup((6, 11, 15, 31))
    rep = check_hubl_huneke_hypotheses(SemigroupIdeal(S, [6, 11, 31]), 1, 1)
    census = rep.hypotheses["no fiber relations in degrees <= 2"]
    assert census.status == FAILS and "{2: 3}" in census.witness
    assert not rep.implied


def test_idempotence_and_monotonicity():
    rng = random.Random(12)
    R = polynomial_ring(["a", "b"])
    ideals = []
    for _ in range(10):
        verts = [tuple(rng.randint(0, 6) for _ in range(2)) for _ in range(rng.randint(1, 3))]
        ideals.append(Ideal(R, [R.monomial(v) for v in verts]))
    for I in ideals:
        C = newton_closure(I)
        assert equal(newton_closure(C), C)
        assert all(C.contains(g) for g in I.gens)
    for I in ideals:
        for J in ideals:
            if all(I.contains(g) for g in J.gens):
                CI, CJ = newton_closure(I), newton_closure(J)
                assert all(CI.contains(g) for g in CJ.gens)
