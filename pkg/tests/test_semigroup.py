import random

import pytest

from fiberlab.closure import closure_membership_bounded
from fiberlab.idealops import Ideal, equal, intersect, quotient
from fiberlab.semigroup import (
    NumericalSemigroup,
    SemigroupError,
    SemigroupIdeal,
    all_factorization_lifts,
    lift_to_toric,
    semigroup_ideal_ops,
    toric_presentation,
)

from oracles import semigroup_members

CURVE = NumericalSemigroup((6, 11, 15, 31))


def test_basics():
    S = NumericalSemigroup((3, 5))
    assert S.frobenius == 7 and set(S.apery) == {0, 10, 5}
    assert NumericalSemigroup((2, 3)).frobenius == 1
    assert 9 not in CURVE and 21 in CURVE
    with pytest.raises(SemigroupError):
        NumericalSemigroup((4, 6))


@pytest.mark.parametrize("gens", [(3, 5), (2, 3), (6, 11, 15, 31), (5, 7, 9), (4, 9, 14)])
def test_membership_against_enumeration(gens):
    S = NumericalSemigroup(gens)
    bound = S.conductor + max(gens)
    members = semigroup_members(gens, bound)
    assert {v for v in range(bound + 1) if v in S} == members
    assert len(S.apery) == S.multiplicity
    assert max(S.apery) - S.multiplicity == S.frobenius
    assert S.frobenius not in S and all(v in S for v in range(S.conductor, bound))


def test_toric_presentations():
    assert [str(r) for r in toric_presentation(NumericalSemigroup((2, 3))).relations] == ["x1^3 - x2^2"]
    R = toric_presentation(CURVE)
    assert Ideal(R.free(), R.relations).contains(R.free().parse("x1^5 - x3^2"))
    assert R.weights == (6, 11, 15, 31) and R.is_domain
    assert toric_presentation(NumericalSemigroup((1,))).relations == ()


def test_ideal_ops_examples():
    C = SemigroupIdeal(CURVE, [6]).closure()
    assert C.exponents[:3] == (6, 11, 15)
    assert all(b in CURVE and b >= 6 for b in C.exponents)
    assert (SemigroupIdeal(CURVE, [6, 11]) ** 2).exponents == (12, 17, 22)
    Q = semigroup_ideal_ops("colon", SemigroupIdeal(CURVE, [12]), 6)
    expected = [b for b in range(80) if b in CURVE and (b + 6 - 12) in CURVE]
    assert [b for b in range(80) if Q.contains_exponent(b)] == expected


def test_lifts():
    A = SemigroupIdeal(CURVE, [6, 11, 31])
    assert [str(g) for g in lift_to_toric(A).gens] == ["x1", "x2", "x4"]
    assert [str(g) for g in lift_to_toric(SemigroupIdeal(CURVE, [12])).gens] == ["x1^2"]
    assert [str(g) for g in lift_to_toric(SemigroupIdeal(CURVE, [26])).gens] == ["x2*x3"]
    with pytest.raises(SemigroupError):
        SemigroupIdeal(CURVE, [9])


def test_any_factorization_gives_the_same_ideal():
    A = SemigroupIdeal(CURVE, [30, 37])
    lifts = list(all_factorization_lifts(A))
    assert len(lifts) > 1
    assert all(equal(L, lifts[0]) for L in lifts)


def _random_ideal(rng):
    elems = [b for b in range(6, 50) if b in CURVE]
    return SemigroupIdeal(CURVE, rng.sample(elems, rng.randint(1, 3)))


def test_dictionary_soundness():
    rng = random.Random(21)
    for _ in range(50):
        A, B = _random_ideal(rng), _random_ideal(rng)
        LA, LB = lift_to_toric(A), lift_to_toric(B)
        op = rng.choice(["product", "intersect", "colon", "sum"])
        if op == "product":
            assert equal(lift_to_toric(A * B), LA * LB)
        elif op == "intersect":
            assert equal(lift_to_toric(A.intersect(B)), intersect(LA, LB))
        elif op == "colon":
            assert equal(lift_to_toric(A.colon(B)), quotient(LA, LB))
        else:
            assert equal(lift_to_toric(A + B), LA + LB)


def test_valuation_closure_is_certified():
    rng = random.Random(5)
    for _ in range(5):
        A = _random_ideal(rng)
        LA = lift_to_toric(A)
        for e in A.closure().exponents:
            if not A.contains_exponent(e):
                f = lift_to_toric(SemigroupIdeal(CURVE, [e])).gens[0]
                # reduction exponents of t-power ideals stay below the multiplicity
                assert closure_membership_bounded(f, LA, CURVE.multiplicity).yes


def test_reduction_exponent_can_reach_multiplicity_minus_one():
    # (t^32, t^33)^(r+1) = t^32 (t^32, t^33)^r needs r+1 >= 6, the least positive element of S
    A = SemigroupIdeal(CURVE, [32])
    f = lift_to_toric(SemigroupIdeal(CURVE, [33])).gens[0]
    assert 33 in A.closure().exponents and not A.contains_exponent(33)
    assert closure_membership_bounded(f, lift_to_toric(A), 4).status == "UNKNOWN"
    res = closure_membership_bounded(f, lift_to_toric(A), 6)
    assert res.yes and res.certificate.exponent == 5
