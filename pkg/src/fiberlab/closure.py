"""Integral closure of ideals.

Monomial ideals are closed exactly through their Newton polyhedra, with
membership decided by an exact rational simplex.  Monomial ideals of a
numerical semigroup ring use the valuation rule.  For everything else
there is a one-sided test: ``f`` is integral over ``I`` exactly when
``I`` is a reduction of ``I + (f)``, and the search for a reduction
exponent is bounded.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from typing import Sequence

from .criteria import FAILS, HOLDS, INCONCLUSIVE, NOT_CHECKED, Verdict, cm_test
from .groebner import minimalize_monomials, monomial_divides
from .idealops import Ideal, equal, unit_ideal, variables_ideal
from .semigroup import SemigroupIdeal, lift_to_toric


class NotMonomialError(ValueError):
    pass


# ---------------------------------------------------------------------------
# exact linear programming


def _phase_one(A: list, b: list) -> bool:
    """Is ``{x >= 0 : A x = b}`` non-empty?  ``b >= 0`` is required.

    Simplex on the auxiliary problem with one artificial variable per
    row, Bland's rule, all arithmetic in ``Fraction``.
    """
    m, n = len(A), len(A[0]) if A else 0
    # tableau rows: [A | I | b]; objective: minimize sum of artificials
    T = [[Fraction(x) for x in A[i]] + [Fraction(int(i == k)) for k in range(m)] + [Fraction(b[i])]
         for i in range(m)]
    basis = [n + i for i in range(m)]
    width = n + m
    # reduced costs of the phase-one objective
    cost = [Fraction(0)] * (width + 1)
    for i in range(m):
        for j in range(width + 1):
            cost[j] -= T[i][j]
    for k in range(m):
        cost[n + k] += 1
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best, leave = None, None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][-1] / T[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # unbounded direction; cannot happen for phase one
            break
        piv = T[leave][enter]
        T[leave] = [x / piv for x in T[leave]]
        for i in range(m):
            if i != leave and T[i][enter]:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], T[leave])]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, T[leave])]
        basis[leave] = enter
    return cost[-1] == 0


@dataclass(frozen=True)
class NewtonPolyhedron:
    """``conv(vertices) + R_{>=0}^n``."""

    vertices: tuple

    @property
    def dimension(self) -> int:
        return len(self.vertices[0]) if self.vertices else 0

    def contains(self, point: Sequence) -> bool:
        """Exact test for ``point = sum λ_i v_i + r`` with ``λ >= 0``, ``sum λ = 1``, ``r >= 0``."""
        if not self.vertices:
            return False
        if any(monomial_divides(v, point) for v in self.vertices):
            return True
        n, k = self.dimension, len(self.vertices)
        # sum λ_i v_i + s = point ; sum λ_i = 1 ; λ, s >= 0
        A = [[self.vertices[i][c] for i in range(k)] + [int(j == c) for j in range(n)] for c in range(n)]
        A.append([1] * k + [0] * n)
        return _phase_one(A, list(point) + [1])


def _monomial_exponents(I: Ideal) -> list:
    if not I.is_monomial():
        raise NotMonomialError("the ideal is not generated by monomials")
    if I.ring.relations:
        raise NotMonomialError("Newton polyhedra need a polynomial ring")
    return minimalize_monomials([g.leading_monomial() for g in I.gens if g])


def newton_polyhedron(I: Ideal) -> NewtonPolyhedron:
    return NewtonPolyhedron(tuple(_monomial_exponents(I)))


def newton_closure(I: Ideal) -> Ideal:
    """Integral closure of a monomial ideal of a polynomial ring."""
    gens = _monomial_exponents(I)
    ring = I.ring
    if not gens:
        return Ideal(ring, [])
    if any(not any(g) for g in gens):
        return unit_ideal(ring)
    NP = NewtonPolyhedron(tuple(gens))
    box = [max(g[c] for g in gens) for c in range(ring.nvars)]
    points = [p for p in cartesian(*(range(b + 1) for b in box)) if NP.contains(p)]
    return Ideal(ring, [ring.monomial(e) for e in minimalize_monomials(points)])


def is_integrally_closed_monomial(I: Ideal) -> bool:
    return equal(I, newton_closure(I))


def is_normal(I: Ideal, jmax: int) -> bool:
    """All powers ``I^j`` with ``j <= jmax`` integrally closed."""
    P = I
    for j in range(1, jmax + 1):
        if j > 1:
            P = P * I
        if not is_integrally_closed_monomial(P):
            return False
    return True


# ---------------------------------------------------------------------------
# bounded membership


@dataclass
class ClosureCertificate:
    element: str
    exponent: int
    equality: str

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ClosureMembership:
    status: str  # "YES" or "UNKNOWN"
    certificate: ClosureCertificate | None = None

    @property
    def yes(self) -> bool:
        return self.status == "YES"


def _reduction_holds(I: Ideal, L: Ideal, r: int) -> bool:
    return equal(L ** (r + 1), I * L ** r) if r else equal(L, I)


def closure_membership_bounded(f, I: Ideal, rmax: int) -> ClosureMembership:
    """YES with the least ``r <= rmax`` such that ``(I+(f))^(r+1) = I (I+(f))^r``, else UNKNOWN."""
    if isinstance(f, str):
        f = I.ring.parse(f)
    L = I + Ideal(I.ring, [f])
    for r in range(rmax + 1):
        if _reduction_holds(I, L, r):
            eq = "(I+(f)) = I" if r == 0 else f"(I+(f))^{r + 1} = I*(I+(f))^{r}"
            return ClosureMembership("YES", ClosureCertificate(str(f), r, eq))
    return ClosureMembership("UNKNOWN")


def replay_certificate(cert: ClosureCertificate, I: Ideal) -> bool:
    L = I + Ideal(I.ring, [I.ring.parse(cert.element)])
    return _reduction_holds(I, L, cert.exponent)


# ---------------------------------------------------------------------------
# checkers


def _closed_verdict(A) -> Verdict:
    if isinstance(A, SemigroupIdeal):
        ok = A.is_integrally_closed()
        return Verdict(HOLDS if ok else FAILS, "valuation rule" + ("" if ok else f"; closure {A.closure()}"))
    if A.is_monomial() and not A.ring.relations:
        C = newton_closure(A)
        if equal(A, C):
            return Verdict(HOLDS, "Newton polyhedron")
        extra = [str(g) for g in C.gens if not A.contains(g)]
        return Verdict(FAILS, f"Newton polyhedron adds {', '.join(extra)}")
    return Verdict(NOT_CHECKED, notes=["integral closure of a non-monomial ideal"])


def check_KIj_closed(I, K, jmax: int, normal_asserted: bool = False, unmixed_asserted: bool = False) -> dict:
    """Whether ``K I^j`` is integrally closed for ``0 <= j <= jmax``.

    The hypotheses of the divisorial criterion (normality of ``I``,
    ``ell = d``, unmixedness of ``R/KR``) are recorded, not derived.
    """
    hyps = {
        "I normal": Verdict(HOLDS if normal_asserted else NOT_CHECKED,
                            "asserted by the caller" if normal_asserted else ""),
        "R/KR unmixed": Verdict(HOLDS if unmixed_asserted else NOT_CHECKED,
                                "asserted by the caller" if unmixed_asserted else ""),
    }
    results = []
    P = K
    for j in range(jmax + 1):
        if j:
            P = P * I
        v = _closed_verdict(P)
        v.witness = f"j={j}: " + v.witness
        results.append(v)
    return {"hypotheses": hyps, "by_j": results}


@dataclass
class HublHunekeReport:
    hypotheses: dict
    conclusion: Verdict
    implied: bool
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"hypotheses": {k: v.to_dict() for k, v in self.hypotheses.items()},
                "conclusion": self.conclusion.to_dict(), "implied": self.implied, "notes": list(self.notes)}


def check_hubl_huneke_hypotheses(I, s: int, t: int, trials: int = 5, seed: int = 0) -> HublHunekeReport:
    """Hypotheses for ``I^t ∩ closure(m I^t) = m I^t`` and, when checkable, ``m I^t`` closed."""
    from .blowup import relation_census, special_fiber

    if s < 1 or t < 1:
        raise ValueError("s and t must be positive")
    semigroup = isinstance(I, SemigroupIdeal)
    lifted = lift_to_toric(I) if semigroup else I
    hyps = {}
    hyps[f"I^{s} closed"] = _closed_verdict(I ** s)
    hyps[f"I^{s + t} closed"] = _closed_verdict(I ** (s + t))
    rep = cm_test(lifted ** s, trials=trials, seed=seed)
    if rep.dimension == 0:
        hyps[f"depth R/I^{s} = 0"] = Verdict(HOLDS, "R/I^s is Artinian")
    elif rep.depth == 0 and rep.status == FAILS:
        hyps[f"depth R/I^{s} = 0"] = Verdict(HOLDS, f"socle element {rep.witness}")
    elif rep.depth > 0:
        hyps[f"depth R/I^{s} = 0"] = Verdict(FAILS, f"regular sequence of length {rep.depth}")
    else:
        hyps[f"depth R/I^{s} = 0"] = Verdict(INCONCLUSIVE, notes=rep.notes)
    census = relation_census(special_fiber(lifted), s + t)
    low = {d: c for d, c in census.items() if d <= s + t}
    hyps[f"no fiber relations in degrees <= {s + t}"] = Verdict(
        HOLDS if not low else FAILS, f"census {dict(sorted(census.items()))}")
    implied = all(v.holds for v in hyps.values())
    It = I ** t
    if semigroup:
        m = SemigroupIdeal(I.semigroup, I.semigroup.generators)
    else:
        m = variables_ideal(I.ring)
    it_closed = _closed_verdict(It)
    notes = []
    if it_closed.holds:
        conclusion = _closed_verdict(m * It)
        conclusion.witness = "m*I^t closed: " + conclusion.witness
    elif it_closed.fails:
        conclusion = Verdict(NOT_CHECKED, notes=["I^t is not integrally closed"])
    else:
        conclusion = Verdict(NOT_CHECKED, notes=["closedness of I^t is not decidable here"])
    if not implied:
        notes.append("hypotheses do not all hold; the conclusion is reported, not implied")
    elif conclusion.fails:
        from .criteria import ImplicationViolation

        raise ImplicationViolation("hypotheses hold but m*I^t is not integrally closed")
    return HublHunekeReport(hyps, conclusion, implied, notes)
