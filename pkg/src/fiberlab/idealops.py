"""Ideals of presented rings and the operations on them.

An :class:`Ideal` of ``k[x]/P`` is always handled through its preimage in
``k[x]``: the generators given by the caller together with the relations
of ``P``.  Gröbner bases are computed lazily and cached per monomial order.
"""

from __future__ import annotations

import math
import threading
import warnings
from dataclasses import dataclass
from functools import reduce as _fold
from itertools import combinations
from typing import Iterable, Sequence

from .groebner import (
    GroebnerBasis,
    NotHomogeneousError,
    buchberger,
    divide_exact,
    krull_dimension,
    minimalize_monomials,
)
from .polyring import (
    GREVLEX,
    MonomialOrder,
    NOT_HOMOGENEOUS,
    Polynomial,
    PresentedRing,
    multidegree,
)


def default_order(ring: PresentedRing) -> MonomialOrder:
    """Degree-compatible grevlex for the ring's weights."""
    if all(w == 1 for w in ring.weights):
        return GREVLEX
    return MonomialOrder("grevlex", weights=ring.weights)


class Ideal:
    """Ideal of a presented ring given by generators; equality is extensional."""

    def __init__(self, ring: PresentedRing, gens: Iterable = ()):
        self.ring = ring
        seen = []
        index = set()
        for g in gens:
            if isinstance(g, str):
                g = ring.parse(g)
            elif not isinstance(g, Polynomial):
                g = ring.constant(g)
            elif g.ring != ring:
                g = g.map_to(ring)
            if g and g not in index:
                index.add(g)
                seen.append(g)
        self.gens = tuple(seen)
        self._gbs: dict = {}
        self._lock = threading.Lock()

    # -- Groebner bases ------------------------------------------------------
    def gb(self, order: MonomialOrder | None = None) -> GroebnerBasis:
        order = order or default_order(self.ring)
        hit = self._gbs.get(order)
        if hit is not None:
            return hit
        with self._lock:
            hit = self._gbs.get(order)
            if hit is None:
                hit = buchberger(self.gens, self.ring, order)
                self._gbs[order] = hit
        return hit

    def reduce(self, f: Polynomial) -> Polynomial:
        return self.gb().normal_form(f)

    def contains(self, f) -> bool:
        if isinstance(f, Ideal):
            return all(self.contains(g) for g in f.gens)
        if isinstance(f, str):
            f = self.ring.parse(f)
        return f.is_zero() or self.gb().contains(f)

    __contains__ = contains

    @property
    def is_unit(self) -> bool:
        return self.gb().is_unit

    @property
    def is_zero(self) -> bool:
        """True when every generator vanishes in the ring (lies in ``P``)."""
        if not self.gens:
            return True
        rel = Ideal(self.ring, ())
        return all(rel.contains(g) for g in self.gens)

    def is_homogeneous(self, weights: Sequence[int] | None = None) -> bool:
        w = self.ring.weights if weights is None else weights
        return all(multidegree(g, w) is not NOT_HOMOGENEOUS for g in self.gens)

    def is_monomial(self) -> bool:
        return all(g.is_monomial() for g in self.gens)

    def degrees(self, weights: Sequence[int] | None = None) -> list:
        w = self.ring.weights if weights is None else weights
        return [g.degree(w) for g in self.gens]

    def preimage_gens(self) -> list:
        return list(self.gens) + list(self.ring.relations)

    def dimension(self) -> int:
        """Krull dimension of ``ring / I`` (-1 for the unit ideal)."""
        return krull_dimension(self.gens, self.ring)

    # -- algebra -------------------------------------------------------------
    def __add__(self, other: "Ideal") -> "Ideal":
        return combine("sum", self, other)

    def __mul__(self, other) -> "Ideal":
        if isinstance(other, Polynomial):
            return Ideal(self.ring, [g * other for g in self.gens])
        return combine("product", self, other)

    def __pow__(self, k: int) -> "Ideal":
        return combine("power", self, k)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return equal(self, other)

    def __hash__(self):
        return hash(self.ring)

    def __le__(self, other: "Ideal") -> bool:
        return other.contains(self)

    def __repr__(self):
        return f"Ideal({', '.join(str(g) for g in self.gens) or '0'})"

    def basis_strings(self, order: MonomialOrder | None = None) -> list:
        """Reduced Gröbner basis minus the ring relations, printed canonically."""
        G = self.gb(order)
        if not self.ring.relations:
            return [str(g) for g in G]
        rel = Ideal(self.ring, ())
        return [str(g) for g in G if not rel.contains(g)]


def unit_ideal(ring: PresentedRing) -> Ideal:
    return Ideal(ring, [ring.one])


def zero_ideal(ring: PresentedRing) -> Ideal:
    return Ideal(ring, [])


def variables_ideal(ring: PresentedRing, names: Sequence[str] | None = None) -> Ideal:
    """Ideal generated by the variables (all of them by default)."""
    names = ring.variables if names is None else names
    return Ideal(ring, [ring.var(v) for v in names])


# ---------------------------------------------------------------------------


def combine(op: str, I: Ideal, J) -> Ideal:
    """``sum`` or ``product`` of two ideals, or ``power`` with an integer exponent."""
    if op == "sum":
        _same_ring(I, J)
        return Ideal(I.ring, I.gens + J.gens)
    if op == "product":
        _same_ring(I, J)
        return Ideal(I.ring, [f * g for f in I.gens for g in J.gens])
    if op == "power":
        k = J
        if not isinstance(k, int) or k < 0:
            raise ValueError("power exponent must be a non-negative integer")
        if k == 0:
            return unit_ideal(I.ring)
        return _power(I, k)
    raise ValueError(f"unknown combination {op!r}")


_power_cache: dict = {}
_power_lock = threading.Lock()


def _power(I: Ideal, k: int) -> Ideal:
    """``I^k`` with generators the distinct products of ``k`` generators."""
    gens = I.gens
    key = (I.ring, gens, k)
    with _power_lock:
        hit = _power_cache.get(key)
    if hit is not None:
        return hit
    # distinct products indexed by multisets of generator positions
    layer = {(): I.ring.one}
    for _ in range(k):
        nxt = {}
        for idx, f in layer.items():
            start = idx[-1] if idx else 0
            for j in range(start, len(gens)):
                nxt[idx + (j,)] = f * gens[j]
        layer = nxt
    result = Ideal(I.ring, list(layer.values()))
    with _power_lock:
        if len(_power_cache) > 512:
            _power_cache.clear()
        _power_cache[key] = result
    return result


def _same_ring(I: Ideal, J: Ideal):
    if I.ring != J.ring:
        raise ValueError("ideals live in different rings")


def equal(I: Ideal, J: Ideal) -> bool:
    """Extensional equality via reduced Gröbner bases."""
    _same_ring(I, J)
    if I is J:
        return True
    order = default_order(I.ring)
    return [g._terms for g in I.gb(order)] == [g._terms for g in J.gb(order)]


def _fresh_name(ring: PresentedRing, stem: str) -> str:
    name = stem
    k = 0
    while name in ring.variables:
        k += 1
        name = f"{stem}{k}"
    return name


def _monomial_free(I: Ideal) -> bool:
    return not I.ring.relations and I.is_monomial()


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """``I ∩ J`` by eliminating ``u`` from ``u*I + (1-u)*J``."""
    _same_ring(I, J)
    ring = I.ring
    if I.is_unit:
        return Ideal(ring, J.gens)
    if J.is_unit:
        return Ideal(ring, I.gens)
    if not I.gens or not J.gens:
        return Ideal(ring, [])
    if _monomial_free(I) and _monomial_free(J):
        ea = [next(iter(g._terms)) for g in I.gens]
        eb = [next(iter(g._terms)) for g in J.gens]
        mons = minimalize_monomials(_lcm(a, b) for a in ea for b in eb)
        return Ideal(ring, [ring.monomial(e) for e in mons])
    return _intersect_free(I.preimage_gens(), J.preimage_gens(), ring)


def _intersect_free(A: list, B: list, ring: PresentedRing) -> Ideal:
    """Intersection of two ideals of the free ambient ring, returned as an ideal of ``ring``."""
    free = ring.free()
    u = _fresh_name(free, "u")
    ext = free.extend([u], [1], first=True)
    uu = ext.var(0)
    one = ext.one
    shift = list(range(1, ext.nvars))
    gens = [uu * a.map_to(ext, shift) for a in A] + [(one - uu) * b.map_to(ext, shift) for b in B]
    order = MonomialOrder("elim", weights=ext.weights, block=(0,))
    G = buchberger(gens, ext, order)
    back = [None] + list(range(free.nvars))
    out = [g.map_to(ring, back) for g in G if 0 not in g.support()]
    return Ideal(ring, out)


def quotient(I: Ideal, J) -> Ideal:
    """Colon ideal ``I : J``; ``J`` may be an ideal or a single polynomial."""
    ring = I.ring
    if isinstance(J, Polynomial):
        J = Ideal(ring, [J])
    _same_ring(I, J)
    if J.is_zero:
        warnings.warn("colon by the zero ideal is the unit ideal", stacklevel=2)
        return unit_ideal(ring)
    parts = []
    rel = Ideal(ring, ())
    for g in J.gens:
        if ring.relations and rel.contains(g):
            continue
        parts.append(_quotient_element(I, g))
    if not parts:
        return unit_ideal(ring)
    return _fold(intersect, parts)


def _quotient_element(I: Ideal, g: Polynomial) -> Ideal:
    ring = I.ring
    if I.contains(g):
        return unit_ideal(ring)
    if _monomial_free(I) and g.is_monomial():
        eg = next(iter(g._terms))
        mons = [tuple(max(x - y, 0) for x, y in zip(next(iter(f._terms)), eg)) for f in I.gens]
        return Ideal(ring, [ring.monomial(e) for e in minimalize_monomials(mons)])
    free = ring.free()
    inter = _intersect_free(I.preimage_gens(), [g.map_to(free)], free)
    gf = g.map_to(free)
    quots = [divide_exact(h, gf).map_to(ring) for h in inter.gens]
    return Ideal(ring, quots)


def saturation(I: Ideal, J) -> tuple:
    """``(I : J^∞, k)`` where ``k`` is the first exponent at which the colon chain is stable."""
    cur = I
    k = 0
    while True:
        nxt = quotient(cur, J)
        if equal(nxt, cur):
            return cur, k
        cur = nxt
        k += 1


def eliminate(I: Ideal, names: Sequence[str]) -> Ideal:
    """``I ∩ k[remaining variables]``, as an ideal of the free polynomial ring on them."""
    ring = I.ring
    names = list(names)
    keep = [v for v in ring.variables if v not in names]
    sub = ring.free().subring(keep)
    if not names:
        return Ideal(ring, I.gens)
    block = tuple(ring.index(v) for v in names)
    G = I.gb(MonomialOrder("elim", weights=ring.weights, block=block))
    idx = [sub.index(v) if v in keep else None for v in ring.variables]
    out = [g.map_to(sub, idx) for g in G if not (g.support() & set(block))]
    return Ideal(sub, out)


# ---------------------------------------------------------------------------
# graded structure


def _homogeneous_check(polys, weights):
    for f in polys:
        if multidegree(f, weights) is NOT_HOMOGENEOUS:
            raise NotHomogeneousError(f"{f} is not homogeneous for weights {tuple(weights)}")


def _echelon_select(vectors: list, p: int) -> list:
    """Indices of a maximal linearly independent prefix-greedy subset (dict vectors)."""
    from fractions import Fraction

    pivots: list = []   # (pivot key, normalized row dict)
    chosen = []
    for idx, vec in enumerate(vectors):
        v = dict(vec)
        for key, row in pivots:
            c = v.get(key)
            if c:
                for k2, r2 in row.items():
                    nv = v.get(k2, 0) - c * r2
                    if p:
                        nv %= p
                    if nv:
                        v[k2] = nv
                    else:
                        v.pop(k2, None)
        v = {k: c for k, c in v.items() if c}
        if not v:
            continue
        key = max(v)
        c = v[key]
        inv = pow(c, -1, p) if p else 1 / Fraction(c)
        row = {k: (x * inv % p if p else x * inv) for k, x in v.items()}
        # keep previous rows reduced on the new pivot column
        new_pivots = []
        for k0, r0 in pivots:
            c0 = r0.get(key)
            if c0:
                r0 = dict(r0)
                for k2, r2 in row.items():
                    nv = r0.get(k2, 0) - c0 * r2
                    if p:
                        nv %= p
                    if nv:
                        r0[k2] = nv
                    else:
                        r0.pop(k2, None)
            new_pivots.append((k0, r0))
        pivots = new_pivots + [(key, row)]
        chosen.append(idx)
    return chosen


@dataclass(frozen=True)
class MinimalGenerators:
    gens: tuple
    census: dict

    @property
    def count(self) -> int:
        return len(self.gens)


def minimal_generators(I: Ideal | Sequence[Polynomial], ring: PresentedRing | None = None,
                       base: Sequence[Polynomial] = (), weights: Sequence[int] | None = None,
                       census_weights: Sequence[int] | None = None) -> MinimalGenerators:
    """Minimal homogeneous generators by graded Nakayama.

    ``weights`` must be positive and make every generator (and ``base``)
    homogeneous.  Generators of ``base`` are treated as zero: the result
    minimally generates ``(I + base) / base``.  ``census_weights`` selects
    the degree used for the census (default: ``weights``).
    """
    if isinstance(I, Ideal):
        ring = I.ring
        gens = list(I.gens)
    else:
        gens = list(I)
    w = tuple(weights) if weights is not None else ring.weights
    cw = tuple(census_weights) if census_weights is not None else w
    _homogeneous_check(gens + list(base) + list(ring.relations), w)
    p = ring.field.characteristic
    rel = list(ring.relations) + list(base)
    by_deg: dict = {}
    for g in gens:
        by_deg.setdefault(g.degree(w), []).append(g)
    if 0 in by_deg:
        one = ring.one
        return MinimalGenerators((one,), {0: 1})
    kept: list = []
    order = MonomialOrder("grevlex", weights=w)
    for d in sorted(by_deg):
        G = buchberger(kept + rel, ring.free(), order) if (kept or rel) else None
        cands = by_deg[d]
        nfs = [G.normal_form(g.map_to(ring.free())) if G else g for g in cands]
        sel = _echelon_select([nf._terms for nf in nfs], p)
        kept.extend(cands[i] for i in sel)
    census: dict = {}
    for g in kept:
        dd = g.degree(cw)
        census[dd] = census.get(dd, 0) + 1
    return MinimalGenerators(tuple(kept), dict(sorted(census.items())))


def minimalize(I: Ideal, weights: Sequence[int] | None = None) -> Ideal:
    return Ideal(I.ring, minimal_generators(I, weights=weights).gens)


# ---------------------------------------------------------------------------
# syzygies and Fitting ideals


@dataclass(frozen=True)
class PresentationMatrix:
    """Columns are syzygies of ``gens``: ``sum_i gens[i] * column[i] = 0`` in the ring."""

    gens: tuple
    columns: tuple  # tuple of tuples of Polynomial

    @property
    def shape(self) -> tuple:
        return (len(self.gens), len(self.columns))

    def rows(self) -> list:
        return [[c[i] for c in self.columns] for i in range(len(self.gens))]

    def entry(self, i, j) -> Polynomial:
        return self.columns[j][i]


def syzygy_matrix(gens: Sequence[Polynomial], ring: PresentedRing | None = None,
                  minimize: bool = True) -> PresentationMatrix:
    """Generators of the syzygy module of ``gens`` over ``ring``.

    Encodes the module ``<g_i e_0 + e_i>`` as an ideal in extra tag
    variables (with all products ``e_a e_b`` adjoined) and eliminates
    ``e_0``; relations of the ring get their own tags and are projected away.
    """
    gens = list(gens)
    ring = ring or gens[0].ring
    m = len(gens)
    if m == 0:
        return PresentationMatrix((), ())
    free = ring.free()
    rels = list(ring.relations)
    allg = [g.map_to(free) for g in gens] + rels
    homog = all(multidegree(g, ring.weights) is not NOT_HOMOGENEOUS for g in allg)
    degs = [max(g.degree(ring.weights), 0) if homog else 0 for g in allg]
    tags = ["e0"] + [f"e{i + 1}" for i in range(len(allg))]
    tags = [_fresh_name(free, t) for t in tags]
    tw = [1] + [1 + d for d in degs]
    ext = free.extend(tags, tw, first=True)
    k = len(tags)
    shift = list(range(k, ext.nvars))
    E = [ext.var(i) for i in range(k)]
    polys = []
    for i, g in enumerate(allg):
        gi = g.map_to(ext, shift) if g.ring != ext else g
        polys.append(gi * E[0] + E[i + 1])
    for a in range(k):
        for b in range(a, k):
            polys.append(E[a] * E[b])
    order = MonomialOrder("elim", weights=ext.weights, block=(0,))
    G = buchberger(polys, ext, order)
    back = [None] * k + list(range(free.nvars))
    cols = []
    for s in G:
        sup = s.support()
        if 0 in sup:
            continue
        # keep the e-degree-one part: elements linear in e_1..e_m
        col = [ring.zero] * m
        linear = True
        pieces: dict = {}
        for e, c in s._terms.items():
            tag_deg = sum(e[:k])
            if tag_deg != 1:
                linear = False
                break
            t = next(i for i in range(k) if e[i])
            pieces.setdefault(t, {})[e] = c
        if not linear:
            continue
        for t, terms in pieces.items():
            if t - 1 < m:
                part = Polynomial._raw(ext, terms)
                ee = [0] * ext.nvars
                ee[t] = 1
                col[t - 1] = divide_exact(part, ext.monomial(ee)).map_to(ring, back)
        if any(not c.is_zero() for c in col):
            cols.append(tuple(col))
    if minimize and cols and homog:
        cols = _minimize_columns(gens, cols, ring, degs[:m])
    return PresentationMatrix(tuple(gens), tuple(cols))


def _minimize_columns(gens, cols, ring, degs):
    """Drop columns generated by the others (graded Nakayama on the syzygy module)."""
    free = ring.free()
    m = len(gens)
    tags = [_fresh_name(free, f"e{i + 1}") for i in range(m)]
    ext = free.extend(tags, [1 + d for d in degs], first=True)
    shift = list(range(m, ext.nvars))
    E = [ext.var(i) for i in range(m)]
    vecs = []
    for col in cols:
        v = ext.zero
        for i, c in enumerate(col):
            if c:
                v = v + c.map_to(ext, shift) * E[i]
        vecs.append(v)
    base = [E[a] * E[b] for a in range(m) for b in range(a, m)]
    base += [r.map_to(ext, shift) for r in ring.relations]
    nonzero = [v for v in vecs if v]
    if not nonzero:
        return []
    mg = minimal_generators(nonzero, ext, base=base)
    keep = set(id(v) for v in mg.gens)
    return [col for col, v in zip(cols, vecs) if id(v) in keep]


def minors(matrix: Sequence[Sequence[Polynomial]], size: int, ring: PresentedRing | None = None) -> Ideal:
    """Ideal of all ``size``-minors, by memoized cofactor expansion."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if ring is None:
        ring = next(e.ring for row in matrix for e in row)
    if size < 0 or size > min(rows, cols):
        raise ValueError(f"minor size {size} exceeds the matrix shape {rows}x{cols}")
    if size == 0:
        return unit_ideal(ring)
    return Ideal(ring, [d for _, _, d in minor_list(matrix, size)])


def minor_list(matrix, size):
    """All ``size``-minors as (rows, cols, determinant), rows and cols in increasing order."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    memo: dict = {}

    def det(rs, cs):
        key = (rs, cs)
        if key in memo:
            return memo[key]
        if len(rs) == 1:
            v = matrix[rs[0]][cs[0]]
        else:
            v = None
            r0, rest = rs[0], rs[1:]
            for j, c in enumerate(cs):
                a = matrix[r0][c]
                if a.is_zero():
                    continue
                sub = det(rest, cs[:j] + cs[j + 1:])
                term = a * sub
                if j % 2:
                    term = -term
                v = term if v is None else v + term
            if v is None:
                v = matrix[r0][cs[0]].ring.zero
        memo[key] = v
        return v

    out = []
    for rs in combinations(range(rows), size):
        for cs in combinations(range(cols), size):
            out.append((rs, cs, det(rs, cs)))
    return out


def fitting_ideal(I: Ideal, i: int, presentation: PresentationMatrix | None = None) -> Ideal:
    """``Fitt_i``: the ``(n-i)``-minors of a presentation on ``n`` minimal generators."""
    if i < 0:
        raise ValueError("Fitting index must be non-negative")
    ring = I.ring
    if presentation is None:
        presentation = presentation_of(I)
    n, c = presentation.shape
    size = n - i
    if size <= 0:
        return unit_ideal(ring)
    if size > c:
        return zero_ideal(ring)
    return minors(presentation.rows(), size, ring)


_pres_cache: dict = {}
_pres_lock = threading.Lock()


def presentation_of(I: Ideal) -> PresentationMatrix:
    """Presentation matrix on a minimal generating set (cached)."""
    key = (I.ring, I.gens)
    with _pres_lock:
        hit = _pres_cache.get(key)
    if hit is not None:
        return hit
    gens = minimal_generators(I).gens if I.is_homogeneous() else I.gens
    pm = syzygy_matrix(gens, I.ring)
    with _pres_lock:
        _pres_cache[key] = pm
    return pm


def height(I: Ideal) -> float:
    """``dim R - dim R/I`` for homogeneous ``I``; ``inf`` for the unit ideal."""
    if not I.is_homogeneous():
        raise NotHomogeneousError("height is only defined here for homogeneous ideals")
    d = krull_dimension(I.gens, I.ring)
    if d < 0:
        return math.inf
    return krull_dimension([], I.ring) - d


# ---------------------------------------------------------------------------
# local comparison at the origin


def locally_equal(small: Ideal, big: Ideal) -> bool:
    """For ``small ⊆ big``: equality after localizing at the homogeneous maximal ideal.

    The two agree locally iff ``small : big`` contains a unit of the local
    ring, i.e. an element with nonzero constant term.
    """
    # m is prime, so the colon escapes m iff each (small : g) does
    m = variables_ideal(small.ring)
    for g in big.gens:
        if g.is_zero() or small.contains(g):
            continue
        if not (_quotient_element(small, g) + m).is_unit:
            return False
    return True
