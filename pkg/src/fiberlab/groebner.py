"""Buchberger's algorithm on packed monomials, normal forms, Hilbert series and dimension.

Monomials are packed into a single Python integer.  The most significant
fields hold the rows of the order matrix, the low fields hold the raw
exponents, and every field carries a spare top bit.  With this layout
monomial multiplication is integer addition, the term order is integer
comparison, and ``a | b`` is a single guarded subtraction.
"""

from __future__ import annotations

import contextlib
import contextvars
import threading
from dataclasses import dataclass
from fractions import Fraction
from heapq import heapify, heappop, heappush
from typing import Iterable, Sequence

from .polyring import (
    GREVLEX,
    MonomialOrder,
    Polynomial,
    PresentedRing,
    multidegree,
    NOT_HOMOGENEOUS,
)


class BudgetExceeded(RuntimeError):
    """A Groebner computation hit its pair-count or degree cap."""


class NotHomogeneousError(ValueError):
    """An operation that needs weighted-homogeneous input received something else."""


@dataclass(frozen=True)
class Budget:
    max_pairs: int = 500_000
    max_degree: int = 2_000


_budget_var: contextvars.ContextVar = contextvars.ContextVar("fiberlab_budget", default=Budget())


def current_budget() -> Budget:
    return _budget_var.get()


@contextlib.contextmanager
def budget_scope(budget: Budget):
    """Run a block with different resource caps."""
    token = _budget_var.set(budget)
    try:
        yield budget
    finally:
        _budget_var.reset(token)


# ---------------------------------------------------------------------------
# packed monomials


class _Packer:
    def __init__(self, n: int, order: MonomialOrder, max_degree: int):
        self.n = n
        self.order = order
        rows = order.matrix(n)
        self.rows = rows
        k = len(rows)
        top = max([1] + [v for r in rows for v in r])
        width = max(16, (max_degree * top).bit_length() + 2)
        self.width = width
        self.nfields = k + n
        self.mask = (1 << (width - 1)) - 1
        guard = 0
        for f in range(self.nfields):
            guard |= 1 << (f * width + width - 1)
        self.guard = guard
        unit = []
        for i in range(n):
            u = 1 << ((n - 1 - i) * width)
            for r, row in enumerate(rows):
                if row[i]:
                    u += row[i] << ((n + k - 1 - r) * width)
            unit.append(u)
        self.unit = unit

    def pack(self, e: Sequence[int]) -> int:
        m = 0
        for x, u in zip(e, self.unit):
            if x:
                m += x * u
        if m & self.guard:
            raise BudgetExceeded("monomial exceeds the packed degree range")
        return m

    def unpack(self, m: int) -> tuple:
        n, w, mask = self.n, self.width, self.mask
        return tuple((m >> ((n - 1 - i) * w)) & mask for i in range(n))


def _lcm_exps(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# reduction kernels; polynomials are lists of (mono, coeff) in decreasing order


def _find_reducer(m, lms, guard):
    mg = m | guard
    for idx, lm in enumerate(lms):
        if (mg - lm) & guard == guard:
            return idx
    return -1


def _reduce(acc: dict, lms, polys, p: int, guard: int, full: bool = True):
    """Reduce the polynomial held in ``acc`` by monic ``polys`` (leading monomials ``lms``)."""
    heap = [-m for m in acc]
    heapify(heap)
    out = []
    while heap:
        m = -heappop(heap)
        c = acc.pop(m, 0)
        if not c:
            continue
        idx = _find_reducer(m, lms, guard)
        if idx < 0:
            out.append((m, c))
            if not full:
                rest = sorted(((mm, cc) for mm, cc in acc.items() if cc), reverse=True)
                out.extend(rest)
                return out
            continue
        q = m - lms[idx]
        g = polys[idx]
        if p:
            for gm, gc in g[1:]:
                nm = gm + q
                if nm & guard:
                    raise BudgetExceeded("monomial exceeds the packed degree range")
                v = acc.get(nm)
                if v is None:
                    acc[nm] = (-c * gc) % p
                    heappush(heap, -nm)
                else:
                    acc[nm] = (v - c * gc) % p
        else:
            for gm, gc in g[1:]:
                nm = gm + q
                if nm & guard:
                    raise BudgetExceeded("monomial exceeds the packed degree range")
                v = acc.get(nm)
                if v is None:
                    acc[nm] = -c * gc
                    heappush(heap, -nm)
                else:
                    acc[nm] = v - c * gc
    return out


def _make_monic(poly, p):
    c = poly[0][1]
    if c == 1:
        return poly
    if p:
        inv = pow(c, -1, p)
        return [(m, v * inv % p) for m, v in poly]
    return [(m, v / c) for m, v in poly]


# ---------------------------------------------------------------------------
# Groebner bases


class GroebnerBasis:
    """Reduced, monic Groebner basis of an ideal of ``ring`` (relations included).

    Elements are sorted by increasing leading monomial.
    """

    def __init__(self, ring: PresentedRing, order: MonomialOrder, packer: _Packer, packed: list):
        self.ring = ring
        self.order = order
        self._packer = packer
        self._packed = packed
        self._lms = [g[0][0] for g in packed]
        self.polys = tuple(_to_poly(ring, packer, g) for g in packed)
        # work spent computing this basis: (S-pairs processed, largest pair degree seen)
        self.cost = (0, 0)

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    def __repr__(self):
        return f"GroebnerBasis({[str(g) for g in self.polys]}, order={self.order.kind})"

    @property
    def is_unit(self) -> bool:
        return len(self._packed) == 1 and self._lms[0] == 0

    @property
    def is_zero(self) -> bool:
        return not self._packed

    def leading_monomials(self) -> list:
        return [self._packer.unpack(m) for m in self._lms]

    def normal_form(self, f: Polynomial) -> Polynomial:
        pk = self._packer
        acc = {pk.pack(e): c for e, c in f._terms.items()}
        if not acc:
            return self.ring.zero
        red = _reduce(acc, self._lms, self._packed, self.ring.field.characteristic, pk.guard)
        return _to_poly(self.ring, pk, red)

    def contains(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero()

    def leading_term_ideal(self) -> list:
        return minimalize_monomials(self.leading_monomials())

    def spolynomials_reduce_to_zero(self) -> bool:
        """Exhaustive Buchberger criterion: every S-polynomial reduces to zero."""
        pk = self._packer
        p = self.ring.field.characteristic
        exps = self.leading_monomials()
        G = self._packed
        for i in range(len(G)):
            for j in range(i + 1, len(G)):
                l = pk.pack(_lcm_exps(exps[i], exps[j]))
                acc = _spoly(G[i], G[j], l, self._lms[i], self._lms[j], p)
                if acc and _reduce(acc, self._lms, G, p, pk.guard):
                    return False
        return True


def _spoly(gi, gj, lcm, lmi, lmj, p):
    qi, qj = lcm - lmi, lcm - lmj
    acc = {}
    for m, c in gi[1:]:
        acc[m + qi] = c
    for m, c in gj[1:]:
        nm = m + qj
        v = acc.get(nm)
        if v is None:
            acc[nm] = (-c) % p if p else -c
        else:
            v = (v - c) % p if p else v - c
            if v:
                acc[nm] = v
            else:
                del acc[nm]
    return acc


def _to_poly(ring, packer, packed):
    return Polynomial._raw(ring, {packer.unpack(m): c for m, c in packed})


def _free_exps_poly(f: Polynomial, ring: PresentedRing) -> Polynomial:
    if f.ring is ring or f.ring == ring:
        return f
    if f.ring.variables == ring.variables and f.ring.field == ring.field:
        return Polynomial._raw(ring, f._terms)
    return f.map_to(ring)


_cache: dict = {}
_cache_lock = threading.Lock()
_CACHE_LIMIT = 4096


def clear_cache():
    with _cache_lock:
        _cache.clear()


def buchberger(gens: Iterable[Polynomial], ring: PresentedRing, order: MonomialOrder | None = None,
               budget: Budget | None = None, use_cache: bool = True) -> GroebnerBasis:
    """Reduced Groebner basis of ``(gens) + P`` in the ambient polynomial ring of ``ring``."""
    order = order or GREVLEX
    budget = budget or current_budget()
    polys = [_free_exps_poly(g, ring) for g in gens]
    polys = [g for g in polys if g] + list(ring.relations)
    key = (ring, order, frozenset(polys))
    if use_cache:
        with _cache_lock:
            hit = _cache.get(key)
        if hit is not None:
            # a cached answer must not slip past a budget the computation would have hit
            pairs, degree = hit.cost
            if pairs > budget.max_pairs:
                raise BudgetExceeded(f"more than {budget.max_pairs} S-pairs")
            if degree > budget.max_degree:
                raise BudgetExceeded(f"S-pair degree {degree} exceeds cap {budget.max_degree}")
            return hit
    gb = _buchberger(polys, ring, order, budget)
    if use_cache:
        with _cache_lock:
            if len(_cache) >= _CACHE_LIMIT:
                _cache.clear()
            gb = _cache.setdefault(key, gb)
    return gb


def _buchberger(polys, ring, order, budget) -> GroebnerBasis:
    spent = {"pairs": 0, "degree": max((max(map(sum, f._terms)) for f in polys if f), default=0)}
    gb = _buchberger_run(polys, ring, order, budget, spent)
    gb.cost = (spent["pairs"], spent["degree"])
    return gb


def _buchberger_run(polys, ring, order, budget, spent) -> GroebnerBasis:
    n = ring.nvars
    pk = _Packer(n, order, budget.max_degree)
    p = ring.field.characteristic
    guard = pk.guard
    weights = ring.weights

    inputs = []
    for f in polys:
        t = sorted(((pk.pack(e), c) for e, c in f._terms.items()), reverse=True)
        inputs.append(_make_monic(t, p))
    if any(t[0][0] == 0 for t in inputs):
        return GroebnerBasis(ring, order, pk, [[(0, ring.field.one)]])

    if all(len(t) == 1 for t in inputs):
        mins = minimalize_monomials([pk.unpack(t[0][0]) for t in inputs])
        packed = sorted(([(pk.pack(e), ring.field.one)] for e in mins), key=lambda g: g[0][0])
        return GroebnerBasis(ring, order, pk, packed)

    G: list = []          # all basis polynomials ever added
    lms: list = []        # their leading monomials (packed)
    lexp: list = []       # leading exponents
    sugar: list = []
    active: list = []     # indices still in the basis
    act_lms: list = []
    act_polys: list = []
    heap: list = []       # (sugar, lcm, i, j); j == -1 marks an input polynomial

    def wdeg(e):
        return sum(a * b for a, b in zip(weights, e))

    for idx, t in enumerate(inputs):
        s = max(wdeg(pk.unpack(m)) for m, _ in t)
        heap.append((s, t[0][0], idx, -1))
    heapify(heap)

    def add(h_poly, h_sugar):
        nonlocal act_lms, act_polys, heap
        h = len(G)
        G.append(h_poly)
        lm_h = h_poly[0][0]
        e_h = pk.unpack(lm_h)
        lms.append(lm_h)
        lexp.append(e_h)
        sugar.append(h_sugar)
        # candidate pairs with every active element
        cand = []
        for i in active:
            le = _lcm_exps(lexp[i], e_h)
            spent["degree"] = max(spent["degree"], sum(le))
            if sum(le) > budget.max_degree:
                raise BudgetExceeded(f"S-pair degree {sum(le)} exceeds cap {budget.max_degree}")
            l = pk.pack(le)
            cand.append([l, i, l == lms[i] + lm_h, le])
        # chain criterion among the new pairs (strictly dividing lcm)
        kept = []
        for c in cand:
            lg = c[0] | guard
            dominated = False
            for d in cand:
                if d is not c and d[0] != c[0] and (lg - d[0]) & guard == guard:
                    dominated = True
                    break
            if not dominated:
                kept.append(c)
        # equal lcms: drop the group if any member is coprime, else keep one
        groups: dict = {}
        for c in kept:
            groups.setdefault(c[0], []).append(c)
        new_pairs = []
        for l, grp in groups.items():
            if any(c[2] for c in grp):
                continue
            c = min(grp, key=lambda c: c[1])
            i = c[1]
            le = c[3]
            s = max(sugar[i] + wdeg(le) - wdeg(lexp[i]), h_sugar + wdeg(le) - wdeg(e_h))
            new_pairs.append((s, l, i, h))
        # chain criterion on old pairs
        lcm_with_h = {c[1]: c[0] for c in cand}
        lmh_g = lm_h
        old = []
        changed = False
        for pr in heap:
            s, l, i, j = pr
            if j >= 0 and ((l | guard) - lmh_g) & guard == guard:
                lih = lcm_with_h.get(i)
                ljh = lcm_with_h.get(j)
                if lih is not None and ljh is not None and lih != l and ljh != l:
                    changed = True
                    continue
            old.append(pr)
        if changed:
            heap = old
            heapify(heap)
        for pr in new_pairs:
            heappush(heap, pr)
        # drop active elements whose leading monomial h divides
        keep_idx = []
        for i in active:
            if ((lms[i] | guard) - lm_h) & guard == guard:
                continue
            keep_idx.append(i)
        keep_idx.append(h)
        active[:] = keep_idx
        act_lms = [lms[i] for i in active]
        act_polys = [G[i] for i in active]

    processed = 0
    while heap:
        s, l, i, j = heappop(heap)
        processed += 1
        spent["pairs"] = processed
        if processed > budget.max_pairs:
            raise BudgetExceeded(f"more than {budget.max_pairs} S-pairs")
        if j < 0:
            acc = dict(inputs[i])
        else:
            acc = _spoly(G[i], G[j], l, lms[i], lms[j], p)
        if not acc:
            continue
        red = _reduce(acc, act_lms, act_polys, p, guard)
        if not red:
            continue
        red = _make_monic(red, p)
        if red[0][0] == 0:
            return GroebnerBasis(ring, order, pk, [[(0, ring.field.one)]])
        add(red, s)

    # reduced basis: minimal leading monomials, each fully reduced by the rest
    cand = sorted(active, key=lambda i: lms[i])
    minimal = []
    for i in cand:
        li = lms[i] | guard
        if any((li - lms[k]) & guard == guard for k in minimal):
            continue
        minimal.append(i)
    final = []
    for a, i in enumerate(minimal):
        others = [k for k in minimal if k != i]
        lead = G[i][0]
        acc = dict(G[i][1:])
        tail = _reduce(acc, [lms[k] for k in others], [G[k] for k in others], p, guard) if acc else []
        final.append([lead] + tail)
    final.sort(key=lambda g: g[0][0])
    return GroebnerBasis(ring, order, pk, final)


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    """Remainder of ``f`` on full reduction by ``G``."""
    return G.normal_form(f)


def is_member(f: Polynomial, gens: Iterable[Polynomial], ring: PresentedRing | None = None) -> bool:
    ring = ring or f.ring
    if f.is_zero():
        return True
    return buchberger(gens, ring).contains(f)


def leading_term_ideal(G: GroebnerBasis) -> list:
    """Minimal exponent vectors generating the initial ideal."""
    return G.leading_term_ideal()


# ---------------------------------------------------------------------------
# monomial ideals


def monomial_divides(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def minimalize_monomials(exps: Iterable[Sequence[int]]) -> list:
    """Minimal generators of a monomial ideal, sorted by degree then lexicographically."""
    es = sorted(set(tuple(e) for e in exps), key=lambda e: (sum(e), e))
    out = []
    for e in es:
        if not any(monomial_divides(o, e) for o in out):
            out.append(e)
    return out


def combinatorial_dimension(mons: Sequence[Sequence[int]], n: int) -> int:
    """Largest set of variables containing the support of no generator."""
    mons = minimalize_monomials(mons)
    if any(not any(m) for m in mons):
        return -1
    supports = [frozenset(i for i, x in enumerate(m) if x) for m in mons]
    best = 0

    def ok(s):
        return not any(sp <= s for sp in supports)

    # maximal independent sets by depth-first extension
    def rec(start, cur):
        nonlocal best
        if len(cur) + (n - start) <= best:
            return
        if len(cur) > best:
            best = len(cur)
        for v in range(start, n):
            nxt = cur | {v}
            if ok(nxt):
                rec(v + 1, nxt)

    rec(0, frozenset())
    return best


# ---------------------------------------------------------------------------
# Hilbert series


def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _padd(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def _hs_numerator(mons: list, weights) -> dict:
    """Numerator of the Hilbert series of k[x]/(mons) over prod(1 - t^w_i)."""
    mons = minimalize_monomials(mons)
    if not mons:
        return {0: 1}
    if any(not any(m) for m in mons):
        return {}

    def deg(m):
        return sum(a * b for a, b in zip(weights, m))

    # pairwise coprime generators give a product formula
    used: set = set()
    coprime = True
    for m in mons:
        s = {i for i, x in enumerate(m) if x}
        if s & used:
            coprime = False
            break
        used |= s
    if coprime:
        out = {0: 1}
        for m in mons:
            out = _pmul(out, {0: 1, deg(m): -1})
        return out
    n = len(mons[0])
    counts = [0] * n
    for m in mons:
        for i, x in enumerate(m):
            if x:
                counts[i] += 1
    v = max(range(n), key=lambda i: counts[i])
    e = min(m[v] for m in mons if m[v])
    # M + (x_v^e) splits off x_v^e; M : x_v^e lowers the x_v exponents
    rest = [m for m in mons if not m[v]]
    first = _pmul(_hs_numerator(rest, weights), {0: 1, e * weights[v]: -1})
    colon = [tuple(max(x - e, 0) if i == v else x for i, x in enumerate(m)) for m in mons]
    second = _pmul(_hs_numerator(colon, weights), {e * weights[v]: 1})
    return _padd(first, second)


@dataclass(frozen=True)
class HilbertSeries:
    """``numerator(t) / prod(1 - t^w)``; ``numerator`` lists coefficients from ``t^0``."""

    numerator: tuple
    weights: tuple

    @classmethod
    def from_dict(cls, num: dict, weights):
        top = max(num, default=-1)
        return cls(tuple(num.get(k, 0) for k in range(top + 1)), tuple(weights))

    def _reduced(self):
        """Cancel every factor (1 - t) shared by numerator and denominator."""
        num = list(self.numerator)
        poles = len(self.weights)
        while num and poles and sum(num) == 0:
            # synthetic division by (1 - t)
            q = []
            acc = 0
            for c in num[:-1]:
                acc += c
                q.append(acc)
            num = q
            poles -= 1
        return num, poles

    @property
    def dimension(self) -> int:
        if not any(self.numerator):
            return -1
        return self._reduced()[1]

    @property
    def multiplicity(self) -> Fraction:
        """Leading coefficient of the Hilbert quasi-polynomial, up to (dim-1)!."""
        num, poles = self._reduced()
        extra = 1
        for w in self.weights:
            extra *= w
        return Fraction(sum(num), extra) if num else Fraction(0)

    def coefficients(self, upto: int) -> list:
        """Values of the Hilbert function in degrees ``0..upto``."""
        series = [0] * (upto + 1)
        for k, c in enumerate(self.numerator):
            if k <= upto:
                series[k] = c
        for w in self.weights:
            for d in range(w, upto + 1):
                series[d] += series[d - w]
        return series

    def __eq__(self, other):
        if not isinstance(other, HilbertSeries):
            return NotImplemented
        a = _pmul(dict(enumerate(self.numerator)), _denominator(other.weights))
        b = _pmul(dict(enumerate(other.numerator)), _denominator(self.weights))
        return a == b

    def __hash__(self):
        return hash(self.dimension)

    def __str__(self):
        terms = ""
        for k, c in enumerate(self.numerator):
            if not c:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            body = mono if abs(c) == 1 and mono else (f"{abs(c)}*{mono}" if mono else str(abs(c)))
            if not terms:
                terms = ("-" if c < 0 else "") + body
            else:
                terms += (" - " if c < 0 else " + ") + body
        den = "*".join(f"(1-t^{w})" if w != 1 else "(1-t)" for w in self.weights)
        return f"({terms or '0'}) / ({den or '1'})"


def _denominator(weights) -> dict:
    out = {0: 1}
    for w in weights:
        out = _pmul(out, {0: 1, w: -1})
    return out


def _check_homogeneous(gens, weights):
    for g in gens:
        if multidegree(g, weights) is NOT_HOMOGENEOUS:
            raise NotHomogeneousError(f"{g} is not homogeneous for weights {tuple(weights)}")


def hilbert_series(gens: Iterable[Polynomial], ring: PresentedRing, weights: Sequence[int] | None = None,
                   order: MonomialOrder | None = None) -> HilbertSeries:
    """Hilbert series of ``ring / (gens)``, read off an initial ideal."""
    gens = list(gens)
    w = tuple(weights) if weights is not None else ring.weights
    if any(x <= 0 for x in w):
        raise ValueError("Hilbert series needs positive weights")
    _check_homogeneous(gens + list(ring.relations), w)
    if order is None:
        order = MonomialOrder("grevlex", weights=w)
    G = buchberger(gens, ring, order)
    return HilbertSeries.from_dict(_hs_numerator(G.leading_term_ideal(), w), w)


def monomial_hilbert_series(mons, weights) -> HilbertSeries:
    return HilbertSeries.from_dict(_hs_numerator(list(mons), weights), weights)


def krull_dimension(gens: Iterable[Polynomial], ring: PresentedRing, homogeneous_only: bool = False) -> int:
    """Krull dimension of ``ring / (gens)``; -1 for the unit ideal.

    Homogeneous input is read from the Hilbert series.  Other input uses the
    independent-set count on an initial ideal, which is exact for any ideal
    of a polynomial ring.
    """
    gens = list(gens)
    allg = gens + list(ring.relations)
    homog = all(multidegree(g, ring.weights) is not NOT_HOMOGENEOUS for g in allg)
    if homog:
        return hilbert_series(gens, ring).dimension
    if homogeneous_only:
        raise NotHomogeneousError("dimension requested for a non-homogeneous ideal")
    G = buchberger(gens, ring)
    if G.is_unit:
        return -1
    return combinatorial_dimension(G.leading_term_ideal(), ring.nvars)


def divide_exact(f: Polynomial, g: Polynomial) -> Polynomial:
    """Quotient ``f / g`` in the free polynomial ring; raises if ``g`` does not divide ``f``."""
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    ring = f.ring
    if f.is_zero():
        return ring.zero
    pk = _Packer(ring.nvars, GREVLEX, max(f.total_degree(), 1) + 2)
    F = ring.field
    p = F.characteristic
    gt = sorted(((pk.pack(e), c) for e, c in g._terms.items()), reverse=True)
    lmg, lcg = gt[0]
    inv = F.inv(lcg)
    acc = {pk.pack(e): c for e, c in f._terms.items()}
    heap = [-m for m in acc]
    heapify(heap)
    guard = pk.guard
    quot = {}
    while heap:
        m = -heappop(heap)
        c = acc.pop(m, 0)
        if not c:
            continue
        if ((m | guard) - lmg) & guard != guard:
            raise ValueError(f"{g} does not divide {f}")
        q = m - lmg
        cq = c * inv % p if p else c * inv
        quot[q] = cq
        for gm, gc in gt[1:]:
            nm = gm + q
            v = acc.get(nm)
            if v is None:
                acc[nm] = (-cq * gc) % p if p else -cq * gc
                heappush(heap, -nm)
            else:
                acc[nm] = (v - cq * gc) % p if p else v - cq * gc
    return Polynomial._raw(ring, {pk.unpack(m): c for m, c in quot.items()})
