"""Rees algebra, special fiber, associated graded ring and R/KR as graded quotients.

All presentations live in ``k[x, T_1..T_n]`` (or ``k[T]`` for the fiber)
with the relations of the base ring carried along.  For a homogeneous
ideal with generators of degrees ``d_i`` the variable ``T_i`` gets weight
``d_i + 1``; the Rees ideal is then homogeneous for that weighting and,
separately, for the T-degree.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .groebner import NotHomogeneousError, buchberger, hilbert_series, krull_dimension
from .idealops import (
    Ideal,
    _fresh_name,
    equal,
    locally_equal,
    minimal_generators,
    presentation_of,
)
from .polyring import MonomialOrder, NOT_HOMOGENEOUS, Polynomial, PresentedRing, multidegree


class NotADomainError(ValueError):
    """The Rees construction by elimination needs a domain."""


class NotPrimaryError(ValueError):
    """The base ideal of R/KR must be primary to the homogeneous maximal ideal."""


# ---------------------------------------------------------------------------


@dataclass
class ReesData:
    """Rees ideal ``A`` of ``I`` inside ``B = R[T_1..T_n]``."""

    base_ring: PresentedRing
    ring: PresentedRing
    generators: tuple           # f_1..f_n in the base ring
    t_vars: tuple
    ideal: Ideal                # A, including the relations of the base ring
    x_map: list                 # base variable index -> index in B
    t_grading: tuple            # T-degree weights on B

    def lift(self, f: Polynomial) -> Polynomial:
        """Image of a base-ring polynomial in ``B``."""
        return f.map_to(self.ring, self.x_map)

    @property
    def n(self) -> int:
        return len(self.generators)


_rees_cache: dict = {}


def _generator_list(I: Ideal) -> tuple:
    if I.is_homogeneous():
        return minimal_generators(I).gens
    return I.gens


def rees_algebra(I: Ideal) -> ReesData:
    """Eliminate ``t`` from ``(T_i - t f_i) + P``."""
    R = I.ring
    if not R.is_domain:
        raise NotADomainError("the Rees ideal is computed by elimination only over a domain")
    key = (R, I.gens)
    if key in _rees_cache:
        return _rees_cache[key]
    gens = _generator_list(I)
    if not gens:
        raise ValueError("the zero ideal has no Rees presentation")
    homog = I.is_homogeneous()
    degs = [max(g.degree(R.weights), 0) if homog else 0 for g in gens]
    names = []
    probe = R
    for i in range(len(gens)):
        nm = _fresh_name(probe, f"T{i + 1}")
        names.append(nm)
        probe = probe.extend([nm])
    B = R.extend(names, [d + 1 for d in degs])
    tname = _fresh_name(B, "t")
    E = B.free().extend([tname], [1], first=True)
    shift = list(range(1, R.nvars + 1))
    t = E.var(0)
    polys = []
    for i, f in enumerate(gens):
        polys.append(E.var(names[i]) - t * f.map_to(E, shift))
    polys += [r.map_to(E, shift) for r in R.relations]
    G = buchberger(polys, E, MonomialOrder("elim", weights=E.weights, block=(0,)))
    back = [None] + list(range(B.nvars))
    A = Ideal(B, [g.map_to(B, back) for g in G if 0 not in g.support()])
    tg = tuple([0] * R.nvars + [1] * len(gens))
    data = ReesData(R, B, tuple(gens), tuple(names), A, list(range(R.nvars)), tg)
    _rees_cache[key] = data
    return data


def rees_ideal(I: Ideal) -> Ideal:
    return rees_algebra(I).ideal


# ---------------------------------------------------------------------------


@dataclass
class GradedQuotientPresentation:
    """``ring / relations`` viewed as a T-graded algebra over ``k`` or over ``R/K``.

    ``base_gens`` generate the base ideal that is treated as coefficients
    (``K`` for R/KR, ``I`` for G, nothing for F) when counting relations.
    """

    kind: str
    ring: PresentedRing
    relations: Ideal
    t_vars: tuple
    base_vars: tuple
    base_gens: tuple
    generators: tuple
    t_grading: tuple
    base_artinian: bool
    notes: list = field(default_factory=list)

    def relation_ideal_without_base(self) -> list:
        """Generators of the relation ideal that do not come from the base ideal."""
        base = set(self.base_gens) | set(self.ring.relations)
        return [g for g in self.relations.gens if g not in base]

    def basis_strings(self) -> list:
        """Reduced Gröbner basis of the relations (ring relations omitted), sorted."""
        return sorted(self.relations.basis_strings())

    def dimension(self) -> int:
        return krull_dimension(self.relations.gens, self.ring)

    def specialize(self, names: Sequence[str]) -> "GradedQuotientPresentation":
        """Quotient by additional variables (e.g. killing some of the T's)."""
        extra = [self.ring.var(v) for v in names]
        rel = Ideal(self.ring, list(self.relations.gens) + extra)
        return GradedQuotientPresentation(
            self.kind + "/(" + ",".join(names) + ")", self.ring, rel, self.t_vars, self.base_vars,
            self.base_gens, self.generators, self.t_grading, self.base_artinian, list(self.notes))

    def is_standard_graded(self) -> bool:
        ones = (1,) * self.ring.nvars
        return all(multidegree(g, ones) is not NOT_HOMOGENEOUS
                   for g in list(self.relations.gens) + list(self.ring.relations))

    def is_t_homogeneous(self) -> bool:
        return all(multidegree(g, self.t_grading) is not NOT_HOMOGENEOUS
                   for g in list(self.relations.gens) + list(self.ring.relations))


def special_fiber(I: Ideal) -> GradedQuotientPresentation:
    """``F = R[It] / m R[It]`` as ``k[T]/Q`` with ``Q`` the image of ``A`` modulo ``m``."""
    rd = rees_algebra(I)
    F = PresentedRing(rd.t_vars, I.ring.field, None, (), False)
    nx = rd.base_ring.nvars
    idx = [None] * nx + list(range(len(rd.t_vars)))
    rels = []
    for g in rd.ideal.gens:
        terms = {e: c for e, c in g._terms.items() if not any(e[:nx])}
        if terms:
            rels.append(Polynomial._raw(rd.ring, terms).map_to(F, idx))
    Q = Ideal(F, rels)
    if Q.gens and Q.is_homogeneous():
        Q = Ideal(F, minimal_generators(Q).gens)
    return GradedQuotientPresentation("fiber", F, Q, rd.t_vars, (), (), rd.generators,
                                      (1,) * len(rd.t_vars), True)


def fiber_by_subalgebra(I: Ideal) -> Ideal:
    """Kernel of ``k[T] -> R``, ``T_i -> f_i``; equals the fiber relations for equigenerated ``I``."""
    rd = rees_algebra(I)
    R = rd.base_ring
    degs = {g.degree(R.weights) for g in rd.generators}
    if len(degs) != 1 or not I.is_homogeneous():
        raise ValueError("the subalgebra kernel presents the fiber only for equigenerated ideals")
    d = degs.pop()
    B = R.extend(rd.t_vars, [d] * len(rd.t_vars))
    gens = [B.var(t) - f.map_to(B, list(range(R.nvars))) for t, f in zip(rd.t_vars, rd.generators)]
    G = buchberger(gens, B, MonomialOrder("elim", weights=B.weights, block=tuple(range(R.nvars))))
    F = PresentedRing(rd.t_vars, R.field, None, (), False)
    idx = [None] * R.nvars + list(range(len(rd.t_vars)))
    out = [g.map_to(F, idx) for g in G if not (g.support() & set(range(R.nvars)))]
    return Ideal(F, out)


def is_m_primary(K: Ideal) -> bool:
    """Whether ``R/K`` is Artinian."""
    return krull_dimension(K.gens, K.ring) == 0


def quotient_algebra(I: Ideal, K: Ideal) -> GradedQuotientPresentation:
    """``R/KR = (R/K)[T]/Q`` for an ideal ``K`` primary to the homogeneous maximal ideal."""
    if not is_m_primary(K):
        raise NotPrimaryError("K must be primary to the homogeneous maximal ideal")
    rd = rees_algebra(I)
    kg = tuple(rd.lift(k) for k in K.gens)
    Q = Ideal(rd.ring, list(rd.ideal.gens) + list(kg))
    return GradedQuotientPresentation("R/KR", rd.ring, Q, rd.t_vars, rd.base_ring.variables, kg,
                                      rd.generators, rd.t_grading, True)


def associated_graded(I: Ideal) -> GradedQuotientPresentation:
    """``G = R[It] / I R[It]``, presented over ``R/I``."""
    rd = rees_algebra(I)
    ig = tuple(rd.lift(f) for f in rd.generators)
    Q = Ideal(rd.ring, list(rd.ideal.gens) + list(ig))
    return GradedQuotientPresentation("G", rd.ring, Q, rd.t_vars, rd.base_ring.variables, ig,
                                      rd.generators, rd.t_grading, is_m_primary(I))


def analytic_spread(I: Ideal) -> int:
    return special_fiber(I).dimension()


# ---------------------------------------------------------------------------
# censuses


def relation_census(pres: GradedQuotientPresentation, up_to: int | None = None) -> dict:
    """Minimal relations (modulo the base ideal) counted by T-degree."""
    ring = pres.ring
    rel = pres.relation_ideal_without_base()
    if not rel:
        return {}
    base = list(pres.base_gens)
    weights = ring.weights
    if not all(multidegree(g, weights) is not NOT_HOMOGENEOUS for g in rel + base):
        raise NotHomogeneousError("relation census needs a homogeneous presentation")
    mg = minimal_generators(rel, ring, base=base, weights=weights, census_weights=pres.t_grading)
    census = mg.census
    if up_to is not None:
        census = {d: c for d, c in census.items() if d <= up_to}
    return census


def minimal_relations(pres: GradedQuotientPresentation) -> tuple:
    rel = pres.relation_ideal_without_base()
    if not rel:
        return ()
    return minimal_generators(rel, pres.ring, base=list(pres.base_gens), census_weights=pres.t_grading).gens


# ---------------------------------------------------------------------------
# reductions


@dataclass
class ReductionData:
    """A random minimal reduction ``J = (a_1..a_ell)`` and its reduction number."""

    seed: int
    field_spec: str
    coefficients: tuple         # ell x n matrix
    generators: tuple           # a_i as polynomials of R
    r: int
    census: dict                # Hilbert function of F/(linear forms)
    ell: int
    trial_seeds: tuple = ()
    trial_values: tuple = ()
    certificate: str = "not attempted"

    def ideal(self, ring: PresentedRing) -> Ideal:
        return Ideal(ring, self.generators)


def random_forms(n: int, count: int, field, rng: random.Random) -> tuple:
    return tuple(tuple(field.random_element(rng, nonzero=True) for _ in range(n)) for _ in range(count))


def _combine(coeffs, polys, ring):
    out = ring.zero
    for c, f in zip(coeffs, polys):
        out = out + f.scale(c)
    return out


def fiber_artinian_census(F: GradedQuotientPresentation, coeffs) -> dict:
    """Hilbert function of ``F / (linear forms)`` for the given coefficient rows."""
    ring = F.ring
    T = [ring.var(v) for v in F.t_vars]
    lin = [_combine(row, T, ring) for row in coeffs]
    Q = Ideal(ring, list(F.relations.gens) + lin)
    hs = hilbert_series(Q.gens, ring)
    if hs.dimension > 0:
        return {}
    values = hs.coefficients(len(hs.numerator) + 1)
    return {d: v for d, v in enumerate(values) if v}


def reduction_number(I: Ideal, seed: int = 0, trials: int = 5, count: int | None = None,
                     certify: str = "auto") -> ReductionData:
    """Smallest reduction number among ``trials`` random reductions with ``count`` generators.

    ``count`` defaults to the analytic spread (minimal reductions).  The
    reduction number is the top degree of ``F / (λ_1..λ_count)``.

    ``certify``: ``"auto"`` replays ``I^(r+1) = J I^r`` when ``J`` is
    homogeneous, ``"local"`` also attempts the (slower) local replay for
    inhomogeneous ``J``, ``"none"`` skips it.
    """
    F = special_fiber(I)
    ell = F.dimension()
    m = ell if count is None else count
    if m < ell:
        raise ValueError("a reduction needs at least analytic-spread many generators")
    rd = rees_algebra(I)
    field_ = I.ring.field
    best = None
    seeds, values = [], []
    for k in range(max(1, trials)):
        s = seed * 1000 + k
        rng = random.Random(s)
        coeffs = random_forms(len(F.t_vars), m, field_, rng)
        census = fiber_artinian_census(F, coeffs)
        if not census:
            values.append(None)
            seeds.append(s)
            continue
        r = max(census)
        seeds.append(s)
        values.append(r)
        if best is None or r < best[0]:
            best = (r, s, coeffs, census)
    if best is None:
        raise RuntimeError("no trial produced a reduction; the field is too small")
    r, s, coeffs, census = best
    gens = tuple(_combine(row, rd.generators, I.ring) for row in coeffs)
    data = ReductionData(s, field_.spec, coeffs, gens, r, census, ell, tuple(seeds), tuple(values))
    homog = all(multidegree(g, I.ring.weights) is not NOT_HOMOGENEOUS for g in gens)
    if certify == "local" or (certify == "auto" and homog):
        data.certificate = certify_reduction(I, data)
    elif certify == "auto":
        data.certificate = "not attempted: the reduction is not homogeneous"
    return data


def certify_reduction(I: Ideal, data: ReductionData) -> str:
    """Check ``I^(r+1) = J I^r`` on the ideal side (and that ``r`` is least)."""
    R = I.ring
    gens = _generator_list(I)
    Imin = Ideal(R, gens)
    J = Ideal(R, data.generators)
    r = data.r
    homog = J.is_homogeneous()
    top = Imin ** (r + 1)
    lower = J * (Imin ** r) if r > 0 else J
    if homog:
        ok = equal(top, lower)
        strict = r == 0 or not equal(Imin ** r, J * (Imin ** (r - 1)) if r > 1 else J)
    else:
        ok = locally_equal(lower, top)
        strict = r == 0 or not locally_equal(J * (Imin ** (r - 1)) if r > 1 else J, Imin ** r)
    if ok and strict:
        claim = "I = J" if r == 0 else "I^(r+1) = J I^r and I^r != J I^(r-1)"
        return f"verified: {claim}" + ("" if homog else " (local)")
    if ok:
        return "J I^r = I^(r+1) holds but r is not least for this J"
    return "FAILED: I^(r+1) != J I^r"


# ---------------------------------------------------------------------------
# symmetric algebra


def symmetric_presentation(I: Ideal) -> Ideal:
    """``A_{<=1}``: linear forms ``sum_j s_j T_j`` from the syzygies of the generators."""
    rd = rees_algebra(I)
    pm = presentation_of(Ideal(I.ring, rd.generators))
    B = rd.ring
    T = [B.var(v) for v in rd.t_vars]
    forms = []
    for col in pm.columns:
        forms.append(_combine_polys([rd.lift(c) for c in col], T, B))
    return Ideal(B, [f for f in forms if f])


def _combine_polys(coeffs, polys, ring):
    out = ring.zero
    for c, f in zip(coeffs, polys):
        if c:
            out = out + c * f
    return out


def is_linear_type(I: Ideal) -> bool:
    rd = rees_algebra(I)
    return equal(symmetric_presentation(I), Ideal(rd.ring, rd.ideal.gens))
