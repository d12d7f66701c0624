"""Numerical semigroup rings ``k[t^S]`` and their monomial ideals.

A monomial ideal of ``k[t^S]`` is determined by the set of exponents of
the monomials it contains, so ideal arithmetic reduces to arithmetic of
subsets of ``S``.  Every such set contains all integers past
``min(gens) + conductor``; enumeration up to that point (plus one more
generator) decides everything.
"""

from __future__ import annotations

import math
from functools import cached_property, lru_cache
from itertools import product as cartesian

from .idealops import Ideal, eliminate
from .polyring import CoefficientField, GF32003, PresentedRing, polynomial_ring


class SemigroupError(ValueError):
    pass


class NumericalSemigroup:
    """The additive monoid generated by positive integers with gcd 1."""

    def __init__(self, generators):
        gens = tuple(int(g) for g in generators)
        if not gens or any(g <= 0 for g in gens):
            raise SemigroupError("generators must be positive integers")
        if math.gcd(*gens) != 1:
            raise SemigroupError(f"gcd of {gens} is not 1")
        self.generators = gens

    def __repr__(self):
        return f"NumericalSemigroup{self.generators}"

    def __eq__(self, other):
        return isinstance(other, NumericalSemigroup) and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    @property
    def multiplicity(self) -> int:
        return min(self.generators)

    @cached_property
    def apery(self) -> tuple:
        """Smallest element of ``S`` in each residue class modulo the multiplicity."""
        m = self.multiplicity
        best = [None] * m
        best[0] = 0
        # shortest paths on residues; edge weights are the generators
        frontier = [0]
        while frontier:
            nxt = []
            for r in frontier:
                for g in self.generators:
                    v = best[r] + g
                    q = v % m
                    if best[q] is None or v < best[q]:
                        best[q] = v
                        nxt.append(q)
            frontier = nxt
        return tuple(best)

    @property
    def frobenius(self) -> int:
        return max(self.apery) - self.multiplicity

    @property
    def conductor(self) -> int:
        return self.frobenius + 1

    def __contains__(self, n: int) -> bool:
        if n < 0:
            return False
        return n >= self.apery[n % self.multiplicity]

    def elements_up_to(self, bound: int) -> list:
        return [n for n in range(bound + 1) if n in self]

    def gaps(self) -> list:
        return [n for n in range(self.conductor) if n not in self]

    def factorizations(self, n: int) -> list:
        """All exponent vectors ``e`` with ``sum e_i s_i = n``, sorted ascending."""
        gens = self.generators
        out = []

        def rec(i, left, acc):
            if i == len(gens) - 1:
                if left % gens[i] == 0:
                    out.append(tuple(acc + [left // gens[i]]))
                return
            for k in range(left // gens[i] + 1):
                rec(i + 1, left - k * gens[i], acc + [k])

        if n >= 0:
            rec(0, n, [])
        return sorted(out)


def semigroup_basics(generators) -> NumericalSemigroup:
    return NumericalSemigroup(generators)


@lru_cache(maxsize=32)
def _toric(gens: tuple, field: CoefficientField) -> PresentedRing:
    names = [f"x{i + 1}" for i in range(len(gens))]
    if len(gens) == 1:
        return PresentedRing(names, field, list(gens), (), True)
    B = polynomial_ring(names + ["t"], field, list(gens) + [1])
    t = B.var("t")
    P = eliminate(Ideal(B, [B.var(x) - t ** g for x, g in zip(names, gens)]), ["t"])
    from .idealops import minimal_generators

    rels = minimal_generators(P).gens
    return PresentedRing(names, field, list(gens), rels, True)


def toric_presentation(S: NumericalSemigroup, field: CoefficientField | None = None) -> PresentedRing:
    """``k[x_1..x_k]/P`` with ``x_i ↦ t^(s_i)``, weighted by the generators."""
    return _toric(S.generators, field or GF32003)


class SemigroupIdeal:
    """Monomial ideal of ``k[t^S]`` given by generator exponents."""

    def __init__(self, semigroup: NumericalSemigroup, exponents):
        S = semigroup
        exps = sorted(set(int(e) for e in exponents))
        for e in exps:
            if e not in S:
                raise SemigroupError(f"t^{e} is not in the semigroup ring")
        self.semigroup = S
        self.exponents = tuple(_minimal(S, exps))

    def __repr__(self):
        return f"SemigroupIdeal({', '.join(f't^{e}' for e in self.exponents)})"

    def __eq__(self, other):
        return (isinstance(other, SemigroupIdeal) and self.semigroup == other.semigroup
                and self.exponents == other.exponents)

    def __hash__(self):
        return hash((self.semigroup, self.exponents))

    @property
    def is_zero(self) -> bool:
        return not self.exponents

    @property
    def order(self) -> int:
        """Smallest exponent (the t-adic valuation)."""
        return self.exponents[0]

    def contains_exponent(self, b: int) -> bool:
        return any((b - a) in self.semigroup for a in self.exponents)

    def bound(self, extra: int = 0) -> int:
        S = self.semigroup
        top = max(self.exponents) if self.exponents else 0
        return S.conductor + 2 * max(top, extra) + max(S.generators)

    def exponent_set(self, bound: int) -> set:
        return {b for b in range(bound + 1) if self.contains_exponent(b)}

    def __mul__(self, other: "SemigroupIdeal") -> "SemigroupIdeal":
        _same(self, other)
        return SemigroupIdeal(self.semigroup, [a + b for a in self.exponents for b in other.exponents])

    def __pow__(self, k: int) -> "SemigroupIdeal":
        if k < 0:
            raise ValueError("negative power")
        out = SemigroupIdeal(self.semigroup, [0])
        for _ in range(k):
            out = out * self
        return out

    def __add__(self, other: "SemigroupIdeal") -> "SemigroupIdeal":
        _same(self, other)
        return SemigroupIdeal(self.semigroup, self.exponents + other.exponents)

    def intersect(self, other: "SemigroupIdeal") -> "SemigroupIdeal":
        _same(self, other)
        if self.is_zero or other.is_zero:
            return SemigroupIdeal(self.semigroup, [])
        N = max(self.bound(), other.bound())
        common = self.exponent_set(N) & other.exponent_set(N)
        return SemigroupIdeal(self.semigroup, common)

    def colon(self, other) -> "SemigroupIdeal":
        """``{b in S : b + g in self for every generator g of other}``; ``other`` may be an exponent."""
        if isinstance(other, int):
            other = SemigroupIdeal(self.semigroup, [other])
        _same(self, other)
        if other.is_zero:
            return SemigroupIdeal(self.semigroup, [0])
        S = self.semigroup
        N = self.bound(max(other.exponents))
        out = [b for b in range(N + 1) if b in S and all(self.contains_exponent(b + g) for g in other.exponents)]
        return SemigroupIdeal(S, out)

    def closure(self) -> "SemigroupIdeal":
        """Integral closure: all ``t^b`` with ``b`` in ``S`` at least the order."""
        if self.is_zero:
            return self
        S = self.semigroup
        a = self.order
        return SemigroupIdeal(S, [b for b in range(a, a + S.conductor + max(S.generators) + 1) if b in S])

    def is_integrally_closed(self) -> bool:
        return self.closure() == self


def _same(A, B):
    if A.semigroup != B.semigroup:
        raise SemigroupError("ideals live in different semigroup rings")


def _minimal(S: NumericalSemigroup, exps):
    out = []
    for e in exps:  # ascending, so earlier entries are the only possible divisors
        if not any((e - a) in S for a in out):
            out.append(e)
    return out


def semigroup_ideal_ops(op: str, A: SemigroupIdeal, B=None) -> SemigroupIdeal:
    if op == "product":
        return A * B
    if op == "power":
        return A ** int(B)
    if op == "colon":
        return A.colon(B)
    if op == "intersect":
        return A.intersect(B)
    if op == "closure":
        return A.closure()
    raise ValueError(f"unknown semigroup operation {op!r}")


def canonical_factorization(S: NumericalSemigroup, n: int) -> tuple:
    facts = S.factorizations(n)
    if not facts:
        raise SemigroupError(f"{n} is not in the semigroup")
    return facts[0]


def lift_to_toric(A: SemigroupIdeal, field: CoefficientField | None = None) -> Ideal:
    """The ideal of the toric ring generated by one monomial per exponent."""
    ring = toric_presentation(A.semigroup, field)
    gens = [ring.monomial(canonical_factorization(A.semigroup, e)) for e in A.exponents]
    return Ideal(ring, gens)


def all_factorization_lifts(A: SemigroupIdeal, field: CoefficientField | None = None, limit: int = 3):
    """Lifts using other factorizations (at most ``limit`` per exponent) for consistency checks."""
    ring = toric_presentation(A.semigroup, field)
    choices = [A.semigroup.factorizations(e)[:limit] for e in A.exponents]
    for pick in cartesian(*choices):
        yield Ideal(ring, [ring.monomial(e) for e in pick])
