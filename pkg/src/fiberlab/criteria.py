"""Checkers for Cohen-Macaulay criteria of blowup algebras.

Every checker returns structured verdicts.  ``HOLDS`` and ``FAILS`` always
come with something that can be replayed (an ideal equality, a regular
sequence, a socle element); ``INCONCLUSIVE`` is reserved for cases where
the exact machinery here cannot decide, and ``NOT-CHECKED`` for
hypotheses that are outside its reach (unmixedness, residual
intersections) or whose preconditions failed.
"""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field
from itertools import permutations
from typing import Sequence

from .blowup import (
    NotPrimaryError,
    ReductionData,
    is_m_primary,
    associated_graded,
    quotient_algebra,
    reduction_number,
    relation_census,
    special_fiber,
)
from .groebner import buchberger, krull_dimension
from .idealops import (
    Ideal,
    equal,
    fitting_ideal,
    height,
    intersect,
    locally_equal,
    minimal_generators,
    quotient,
    unit_ideal,
    variables_ideal,
    zero_ideal,
)
from .polyring import MonomialOrder, NOT_HOMOGENEOUS, Polynomial, PresentedRing, multidegree

GENERIC_RETRIES = 5

HOLDS = "HOLDS"
FAILS = "FAILS"
INCONCLUSIVE = "INCONCLUSIVE"
NOT_CHECKED = "NOT-CHECKED"


class ImplicationViolation(AssertionError):
    """A proven implication failed on a concrete instance: a bug in this toolkit."""


@dataclass
class Verdict:
    status: str
    witness: str = ""
    seed: int | None = None
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def fails(self) -> bool:
        return self.status == FAILS


def _all_status(verdicts: Sequence[Verdict]) -> str:
    st = [v.status for v in verdicts]
    if all(s == HOLDS for s in st):
        return HOLDS
    if any(s == FAILS for s in st):
        return FAILS
    if any(s == NOT_CHECKED for s in st) and not any(s == INCONCLUSIVE for s in st):
        return NOT_CHECKED
    return INCONCLUSIVE


def _homogeneous(I: Ideal) -> bool:
    return I.is_homogeneous()


def compare_contained(small: Ideal, big: Ideal, label: str) -> Verdict:
    """Verdict on ``small == big`` at the origin, given ``small ⊆ big``.

    Homogeneous pairs are compared globally; otherwise the comparison is
    made after localizing at the homogeneous maximal ideal.
    """
    if _homogeneous(small) and _homogeneous(big):
        ok = equal(small, big)
        how = "global equality of homogeneous ideals"
    else:
        ok = locally_equal(small, big)
        how = "equality after localizing at the origin"
    return Verdict(HOLDS if ok else FAILS, f"{label}: {how}")


# ---------------------------------------------------------------------------
# depth and Cohen-Macaulayness


@dataclass
class DepthReport:
    dimension: int
    depth: int                    # certified lower bound; exact when a socle witness exists
    steps: list                   # coefficients of the regular forms found
    trials: int
    is_cm: bool
    status: str                   # HOLDS (CM), FAILS (not CM, certified) or INCONCLUSIVE
    method: str
    witness: str = ""
    seeds: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def _subs_pivot(polys, ring, v, coeffs, V):
    """Apply the change of coordinates sending the form ``sum c_u u`` to ``v``."""
    F = ring.field
    cv = coeffs[v]
    inv = F.inv(cv)
    expr = ring.var(v)
    for u in V:
        if u != v:
            expr = expr - ring.var(u).scale(coeffs[u])
    expr = expr.scale(inv)
    return [f.subs({v: expr}) for f in polys]


def _bayer_order(grading, v_index):
    row2 = list(grading)
    row2[v_index] = 0
    return MonomialOrder("weight", rows=(tuple(grading), tuple(row2)))


def _restrict(polys, ring, drop):
    """Set ``drop`` to zero and move to the ring without it."""
    keep = [x for x in ring.variables if x != drop]
    sub = PresentedRing(keep, ring.field, [ring.weights[ring.index(x)] for x in keep], (), False)
    idx = [None if x == drop else sub.index(x) for x in ring.variables]
    di = ring.index(drop)
    out = []
    for f in polys:
        terms = {e: c for e, c in f._terms.items() if e[di] == 0}
        if terms:
            out.append(Polynomial._raw(ring, terms).map_to(sub, idx))
    return out, sub


def _socle_witness(polys, ring):
    """An element of ``(Q : M) \\ Q`` for the maximal homogeneous ideal ``M``, or None."""
    Q = Ideal(ring, polys)
    col = quotient(Q, variables_ideal(ring))
    for g in col.gens:
        if not Q.contains(g):
            return g
    return None


def cm_test(pres, trials: int = 5, seed: int = 0, ring: PresentedRing | None = None) -> DepthReport:
    """Depth by general linear forms, with a socle certificate when the search stops early.

    ``pres`` is a :class:`GradedQuotientPresentation` or an :class:`Ideal`
    (the ring is then ``ideal.ring / ideal``).  Linear forms are taken in
    all variables when the relations are standard graded, and in the T's
    when the base is Artinian; otherwise a local test with inhomogeneous
    linear forms is used.
    """
    if isinstance(pres, Ideal):
        ring = pres.ring
        rel_gens = list(pres.gens)
        t_vars, t_grading = (), None
    else:
        ring = pres.ring
        rel_gens = list(pres.relations.gens)
        t_vars, t_grading = pres.t_vars, pres.t_grading
    free = ring.free()
    polys = [g.map_to(free) if g.ring != free else g for g in rel_gens] + [r.map_to(free) for r in ring.relations]
    dim = krull_dimension(polys, free)
    if dim < 0:
        raise ValueError("the quotient is the zero ring")
    ones = (1,) * free.nvars
    standard = all(multidegree(g, ones) is not NOT_HOMOGENEOUS for g in polys)
    t_mode = False
    if not standard and t_vars:
        t_homog = all(multidegree(g, t_grading) is not NOT_HOMOGENEOUS for g in polys)
        if t_homog:
            with_t = polys + [free.var(v) for v in t_vars]
            t_mode = krull_dimension(with_t, free) == 0
    if standard or t_mode:
        return _cm_graded(polys, free, dim, trials, seed,
                          list(free.variables) if standard else list(t_vars),
                          ones if standard else tuple(t_grading),
                          "general linear forms" if standard else "general T-linear forms")
    return _cm_local(polys, free, dim, trials, seed)


def _cm_graded(polys, ring, dim, trials, seed, V, grading, method) -> DepthReport:
    rng = random.Random(seed)
    steps, seeds = [], []
    cur_polys, cur_ring, cur_V = list(polys), ring, list(V)
    grading = dict(zip(ring.variables, grading))
    depth = 0
    while depth < dim:
        found = False
        for k in range(trials):
            s = rng.randrange(2**31)
            seeds.append(s)
            r2 = random.Random(s)
            coeffs = {u: cur_ring.field.random_element(r2, nonzero=True) for u in cur_V}
            v = cur_V[-1]
            moved = _subs_pivot(cur_polys, cur_ring, v, coeffs, cur_V)
            gvec = [grading[x] for x in cur_ring.variables]
            vi = cur_ring.index(v)
            G = buchberger(moved, cur_ring, _bayer_order(gvec, vi))
            if any(e[vi] for e in G.leading_monomials()):
                continue
            found = True
            steps.append({u: str(cur_ring.field.format(c)) for u, c in coeffs.items()})
            cur_polys, cur_ring = _restrict(list(G), cur_ring, v)
            cur_V = [u for u in cur_V if u != v]
            depth += 1
            break
        if not found:
            break
    if depth == dim:
        return DepthReport(dim, depth, steps, trials, True, HOLDS, method, "", seeds,
                           [f"regular sequence of length {depth} found"])
    w = _socle_witness(cur_polys, cur_ring) if cur_polys else None
    if w is not None:
        note = "socle element of the quotient by the regular sequence"
        if steps:
            note += " (coordinates after the linear changes recorded in steps)"
        return DepthReport(dim, depth, steps, trials, False, FAILS, method, str(w), seeds, [note])
    return DepthReport(dim, depth, steps, trials, False, INCONCLUSIVE, method, "", seeds,
                       [f"no regular form found in {trials} trials and no socle element; depth >= {depth}"])


def _cm_local(polys, ring, dim, trials, seed) -> DepthReport:
    """Regular sequences of inhomogeneous linear forms, tested after localizing at the origin."""
    rng = random.Random(seed)
    steps, seeds = [], []
    Q = Ideal(ring, polys)
    depth = 0
    while depth < dim:
        found = False
        for k in range(trials):
            s = rng.randrange(2**31)
            seeds.append(s)
            r2 = random.Random(s)
            coeffs = {u: ring.field.random_element(r2, nonzero=True) for u in ring.variables}
            lam = ring.zero
            for u, c in coeffs.items():
                lam = lam + ring.var(u).scale(c)
            if locally_equal(Q, quotient(Q, lam)):
                found = True
                steps.append({u: str(ring.field.format(c)) for u, c in coeffs.items()})
                Q = Ideal(ring, list(Q.gens) + [lam])
                depth += 1
                break
        if not found:
            break
    method = "general linear forms, local test"
    if depth == dim:
        return DepthReport(dim, depth, steps, trials, True, HOLDS, method, "", seeds,
                           [f"regular sequence of length {depth} found"])
    col = quotient(Q, variables_ideal(ring))
    w = next((g for g in col.gens if not Q.contains(g)), None)
    if w is not None:
        return DepthReport(dim, depth, steps, trials, False, FAILS, method, str(w), seeds,
                           ["socle element of the quotient by the regular sequence"])
    return DepthReport(dim, depth, steps, trials, False, INCONCLUSIVE, method, "", seeds,
                       [f"no regular form found in {trials} trials; depth >= {depth}"])


def cm_verdict(report: DepthReport) -> Verdict:
    return Verdict(report.status,
                   report.witness or (f"regular sequence of length {report.depth}" if report.is_cm else ""),
                   None, list(report.notes))


# ---------------------------------------------------------------------------
# intersection conditions


def _general_elements(I: Ideal, seed: int, reduction: ReductionData | None, trials: int = 5):
    if reduction is None:
        reduction = reduction_number(I, seed=seed, trials=trials)
    return reduction, list(reduction.generators)


def _ideal_of(ring, polys) -> Ideal:
    return Ideal(ring, polys)


def _power(I: Ideal, k: int) -> Ideal:
    return unit_ideal(I.ring) if k <= 0 else I ** k


def _condition_pieces(I, a, i, j, t):
    """``(a_i I^(t-1) : a_(i+1)) ∩ I^j`` and ``a_i I^(j-1)`` for a sequence ``a``."""
    R = I.ring
    ai = _ideal_of(R, a[:i])
    left_inner = ai * _power(I, t - 1) if i else zero_ideal(R)
    col = quotient(left_inner, a[i])
    big = intersect(col, _power(I, j))
    small = ai * _power(I, j - 1) if i else zero_ideal(R)
    return small, big


def check_condition_a(I: Ideal, t: int, seed: int = 0, reduction: ReductionData | None = None,
                      trials: int = 5) -> list:
    """``(a_i I^(t-1) : a_(i+1)) ∩ I^t = a_i I^(t-1)`` for ``i = 0..ell-1``."""
    if t < 1:
        raise ValueError("t must be positive")
    I = Ideal(I.ring, _min_gens(I))
    draws = [reduction] if reduction is not None else [None] * GENERIC_RETRIES
    out = []
    for k, red in enumerate(draws):
        red, a = _general_elements(I, seed + k, red, trials)
        out = []
        for i in range(len(a)):
            small, big = _condition_pieces(I, a, i, t, t)
            v = compare_contained(small, big, f"i={i}, t={t}")
            v.seed = red.seed
            out.append(v)
        if not any(v.fails for v in out):
            break
    if any(v.fails for v in out) and len(draws) > 1:
        for v in out:
            if v.fails:
                v.notes.append(f"failed for {len(draws)} independent draws of general elements")
    return out


def _min_gens(I: Ideal):
    return minimal_generators(I).gens if I.is_homogeneous() else I.gens


def verify_lemma_propagation(I: Ideal, reduction: ReductionData, t: int, window: int = 2) -> Verdict:
    """Check the subset-indexed intersection equalities for ``j = t..t+window``."""
    if t < reduction.r or t < 1:
        return Verdict(NOT_CHECKED, "", reduction.seed, [f"needs t >= max(1, r) = {max(1, reduction.r)}"])
    I = Ideal(I.ring, _min_gens(I))
    a = list(reduction.generators)
    ell = len(a)
    tuples = []
    for size in range(1, ell + 1):
        for seq in permutations(range(ell), size):
            head = tuple(sorted(seq[:-1]))
            key = (head, seq[-1])
            if key not in tuples:
                tuples.append(key)

    def check(j):
        for head, last in tuples:
            seq = [a[k] for k in head] + [a[last]]
            small, big = _condition_pieces(I, seq, len(head), j, t)
            if compare_contained(small, big, "").status != HOLDS:
                return (head, last)
        return None

    bad = check(t)
    if bad is not None:
        return Verdict(NOT_CHECKED, "", reduction.seed,
                       [f"precondition fails at j=t for indices {bad[0]} -> {bad[1]}"])
    for j in range(t + 1, t + window + 1):
        bad = check(j)
        if bad is not None:
            return Verdict(FAILS, f"j={j}, indices {bad[0]} -> {bad[1]}", reduction.seed,
                           ["a failure here means a precondition or genericity problem"])
    return Verdict(HOLDS, f"all {len(tuples)} index patterns for j={t}..{t + window}", reduction.seed)


# ---------------------------------------------------------------------------
# the R/KR theorem


def is_maximal_ideal(K: Ideal) -> bool:
    return equal(K, variables_ideal(K.ring))


def relation_condition(n: int, ell: int, census: dict, t: int, K_is_max: bool) -> Verdict:
    """The relation-count hypothesis on R/KR in degrees ``<= t``."""
    count = sum(c for d, c in census.items() if d <= t)
    if K_is_max and n >= ell + 2:
        ok, rule = count <= 2, "at most two relations"
    elif K_is_max and n == ell + 1:
        ok, rule = count <= 1, "at most one relation"
    elif K_is_max:
        ok, rule = True, "no condition when n = ell"
    else:
        ok, rule = count == 0, "no relations"
    return Verdict(HOLDS if ok else FAILS,
                   f"{count} minimal relations in degrees <= {t}; rule: {rule} (n={n}, ell={ell})")


@dataclass
class TheoremReport:
    name: str
    verdicts: dict
    values: dict
    implication_ok: bool = True
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {"name": self.name, "implication_ok": self.implication_ok, "notes": list(self.notes),
               "values": self.values, "verdicts": {}}
        for k, v in self.verdicts.items():
            if isinstance(v, list):
                out["verdicts"][k] = [x.to_dict() for x in v]
            else:
                out["verdicts"][k] = v.to_dict()
        return out


def check_main_theorem(I: Ideal, K: Ideal, t: int, seed: int = 0, trials: int = 5,
                       reduction: ReductionData | None = None) -> TheoremReport:
    """Condition (a), the relation count and CM of R/KR, with the implication enforced."""
    supplied = reduction
    if reduction is None:
        reduction = reduction_number(I, seed=seed, trials=trials)
    gens = _min_gens(I)
    n, ell, r = len(gens), reduction.ell, reduction.r
    values = {"n": n, "ell": ell, "r": r, "t": t}
    if t < max(r, 1):
        return TheoremReport("main", {"a": Verdict(NOT_CHECKED, notes=[f"t={t} < r={r}"])}, values)
    cond_a = check_condition_a(I, t, seed, supplied, trials)
    a_status = _all_status(cond_a)
    Kmax = is_maximal_ideal(K)
    pres = special_fiber(I) if Kmax else quotient_algebra(I, K)
    census = relation_census(pres)
    values["census"] = census
    cond_b = relation_condition(n, ell, census, t, Kmax)
    rep = cm_test(pres, trials=trials, seed=seed)
    values["depth"] = rep.to_dict()
    cm = cm_verdict(rep)
    verdicts = {"a": Verdict(a_status, "", reduction.seed), "a_by_i": cond_a, "b": cond_b, "cm": cm}
    report = TheoremReport("main", verdicts, values)
    if a_status == HOLDS and cond_b.holds and cm.fails:
        report.implication_ok = False
        raise ImplicationViolation(f"(a) and (b) hold but R/KR is not CM: {report.to_dict()}")
    return report


# ---------------------------------------------------------------------------
# Valabrega-Valla type criterion


def check_valabrega_valla_K(I: Ideal, K: Ideal, seed: int = 0, trials: int = 5,
                            reduction: ReductionData | None = None) -> dict:
    """CM of R/KR versus freeness of J/KJ plus ``J I^(j-1) ∩ K I^j = J K I^(j-1)``, ``1 <= j <= r``."""
    R = I.ring
    if not is_m_primary(K):
        raise NotPrimaryError("K must be primary to the homogeneous maximal ideal")
    I = Ideal(R, _min_gens(I))
    if reduction is None:
        reduction = reduction_number(I, seed=seed, trials=trials)
    r, ell = reduction.r, reduction.ell
    a = list(reduction.generators)
    # standing hypothesis: condition (a) shape for 1 <= j <= max(1, r)
    pre = []
    for j in range(1, max(1, r) + 1):
        for i in range(ell):
            small, big = _condition_pieces(I, a, i, j, j)
            pre.append(compare_contained(small, big, f"i={i}, j={j}"))
            if pre[-1].fails:  # one failure decides it
                break
        if pre[-1].fails:
            break
    pre_status = _all_status(pre)
    summary = pre[-1].witness if pre_status == FAILS else f"{len(pre)} intersection equalities"
    result = {"precondition": Verdict(pre_status, summary, reduction.seed)}
    if pre_status != HOLDS:
        result["i"] = Verdict(NOT_CHECKED, notes=["standing hypothesis does not hold"])
        result["ii"] = Verdict(NOT_CHECKED, notes=["standing hypothesis does not hold"])
        result["equivalence_ok"] = None
        return result
    pres = special_fiber(I) if is_maximal_ideal(K) else quotient_algebra(I, K)
    rep = cm_test(pres, trials=trials, seed=seed)
    clause_i = cm_verdict(rep)
    free = _free_modulo(a, K)
    J = Ideal(R, a)
    inter = []
    for j in range(1, r + 1):
        small = J * K * _power(I, j - 1)
        big = intersect(J * _power(I, j - 1), K * _power(I, j))
        inter.append(compare_contained(small, big, f"j={j}"))
    parts = [free] + inter
    clause_ii = Verdict(_all_status(parts), "; ".join(
        ["J/KJ free" if free.holds else "J/KJ not free"] +
        [f"j={j}: {v.status}" for j, v in zip(range(1, r + 1), inter)]), reduction.seed)
    result["i"] = clause_i
    result["ii"] = clause_ii
    result["freeness"] = free
    decided = clause_i.status in (HOLDS, FAILS) and clause_ii.status in (HOLDS, FAILS)
    result["equivalence_ok"] = (clause_i.status == clause_ii.status) if decided else None
    if decided and clause_i.status != clause_ii.status:
        raise ImplicationViolation(f"Valabrega-Valla equivalence broken: (i)={clause_i.status}, (ii)={clause_ii.status}")
    return result


def _free_modulo(a: list, K: Ideal) -> Verdict:
    """``J/KJ`` is free on ``a`` iff ``(KJ + (a_j : j != i)) : a_i ⊆ K`` for every ``i``."""
    R = K.ring
    if is_maximal_ideal(K):
        return Verdict(HOLDS, "J/mJ is a vector space over R/m")
    KJ = [k * x for k in K.gens for x in a]
    for i, ai in enumerate(a):
        others = Ideal(R, KJ + [x for j, x in enumerate(a) if j != i])
        for c in quotient(others, ai).gens:
            if not K.contains(c):
                return Verdict(FAILS, f"relation coefficient {c} of a_{i + 1} is not in K")
    return Verdict(HOLDS, "all relation coefficients lie in K")


# ---------------------------------------------------------------------------
# G_s, depth of powers, the associated graded ring


def check_G_s(I: Ideal, s: int) -> Verdict:
    """``height Fitt_i(I) >= i+1`` for ``height(I) <= i <= s-1``."""
    g = height(I)
    bad = []
    info = []
    for i in range(int(g), s):
        h = height(fitting_ideal(I, i))
        info.append(f"ht Fitt_{i} = {h}")
        if h < i + 1:
            bad.append(i)
    if bad:
        return Verdict(FAILS, "; ".join(info), notes=[f"fails for i in {bad}"])
    return Verdict(HOLDS, "; ".join(info) or "vacuous range")


def depth_powers(I: Ideal, jmax: int, trials: int = 5, seed: int = 0) -> list:
    """DepthReport of ``R/I^j`` with the inequality ``depth >= dim R/I - j + 1``."""
    dim_RI = krull_dimension(I.gens, I.ring)
    out = []
    for j in range(1, jmax + 1):
        rep = cm_test(I ** j, trials=trials, seed=seed)
        ineq = rep.depth >= dim_RI - j + 1
        status = HOLDS if ineq else (FAILS if rep.status == FAILS or rep.is_cm else INCONCLUSIVE)
        rep.notes.append(f"depth R/I^{j} = {rep.depth} vs dim R/I - j + 1 = {dim_RI - j + 1}: {status}")
        out.append((rep, Verdict(status, f"j={j}")))
    return out


def _height_at_origin(L: Ideal) -> float | None:
    if L.is_homogeneous():
        return height(L)
    if (L + variables_ideal(L.ring)).is_unit:
        return math.inf
    return None


def check_thm_G_CM(I: Ideal, seed: int = 0, trials: int = 5) -> TheoremReport:
    """``J I^(j-1) ∩ I^(j+1) = J I^j`` for ``d-g+1 <= j <= r-1`` versus CM of G."""
    R = I.ring
    I = Ideal(R, _min_gens(I))
    d = krull_dimension([], R)
    g = height(I)
    red = reduction_number(I, seed=seed, trials=trials, count=d)
    r = red.r
    J = Ideal(R, red.generators)
    values = {"d": d, "g": g, "r_J": r}
    hyp = {"G_d": check_G_s(I, d)}
    dp = depth_powers(I, int(d - g), trials, seed) if d - g >= 1 else []
    hyp["depth_powers"] = Verdict(_all_status([v for _, v in dp]) if dp else HOLDS,
                                  f"{len(dp)} powers checked")
    colon = quotient(J, I)
    h = _height_at_origin(colon)
    if h is None:
        if d == 1 and R.is_domain and not colon.is_zero:
            hyp["ht(J:I)>=d"] = Verdict(HOLDS, "nonzero ideal in a one-dimensional domain")
        else:
            hyp["ht(J:I)>=d"] = Verdict(NOT_CHECKED, notes=["height of an inhomogeneous ideal"])
    else:
        hyp["ht(J:I)>=d"] = Verdict(HOLDS if h >= d else FAILS, f"height {h}")
    clauses = []
    for j in range(int(d - g) + 1, r):
        small = J * _power(I, j)
        big = intersect(J * _power(I, j - 1), _power(I, j + 1))
        clauses.append(compare_contained(small, big, f"j={j}"))
    ii = Verdict(_all_status(clauses) if clauses else HOLDS,
                 "; ".join(v.witness for v in clauses) or "empty range", red.seed)
    rep = cm_test(associated_graded(I), trials=trials, seed=seed)
    cm = cm_verdict(rep)
    values["depth_G"] = rep.to_dict()
    hyp_status = _all_status(list(hyp.values()))
    verdicts = dict(hyp)
    verdicts["ii"] = ii
    verdicts["cm_G"] = cm
    report = TheoremReport("G_CM", verdicts, values)
    report.values["hypotheses"] = hyp_status
    if hyp_status == HOLDS and ii.status in (HOLDS, FAILS) and cm.status in (HOLDS, FAILS):
        if ii.status != cm.status:
            report.implication_ok = False
            raise ImplicationViolation(f"(ii)={ii.status} but CM(G)={cm.status}: {report.to_dict()}")
        report.values["biconditional"] = ii.status
    else:
        report.values["biconditional"] = None
    if hyp_status == HOLDS and r <= d - g + 1:
        report.notes.append("r <= d-g+1 predicts G Cohen-Macaulay")
        if cm.fails:
            report.implication_ok = False
            raise ImplicationViolation("r <= d-g+1 but G is not CM")
    return report


def check_r_less_ell(I: Ideal, seed: int = 0, trials: int = 5) -> Verdict:
    red = reduction_number(I, seed=seed, trials=trials)
    r, ell = red.r, red.ell
    status = HOLDS if r < ell else FAILS
    extra = "r = 0" if r == 0 else ("r = ell-1" if r == ell - 1 else "r not in {0, ell-1}")
    return Verdict(status, f"r={r}, ell={ell}; {extra}", red.seed)


# ---------------------------------------------------------------------------
# implication audits


def audit_expected_reduction(I: Ideal, seed: int = 0, trials: int = 5, strongly_cm: bool = False,
                             K: Ideal | None = None) -> TheoremReport:
    """Strongly CM + ``G_ell`` + ``r <= ell-g+1`` must give CM of F and of R/KR for ``K ⊇ Fitt_(n-1)``."""
    I = Ideal(I.ring, _min_gens(I))
    red = reduction_number(I, seed=seed, trials=trials)
    ell, r = red.ell, red.r
    g = height(I)
    n = len(I.gens)
    verdicts = {"strongly_cm": Verdict(HOLDS if strongly_cm else NOT_CHECKED,
                                       "asserted by the caller" if strongly_cm else "")}
    verdicts["G_ell"] = check_G_s(I, ell)
    verdicts["r<=ell-g+1"] = Verdict(HOLDS if r <= ell - g + 1 else FAILS, f"r={r}, ell-g+1={ell - g + 1}")
    repF = cm_test(special_fiber(I), trials=trials, seed=seed)
    verdicts["cm_F"] = cm_verdict(repF)
    values = {"ell": ell, "r": r, "g": g, "n": n}
    if K is not None:
        fitt = fitting_ideal(I, n - 1)
        verdicts["Fitt_(n-1)⊆K"] = Verdict(HOLDS if K.contains(fitt) else FAILS)
        repK = cm_test(quotient_algebra(I, K), trials=trials, seed=seed)
        verdicts["cm_R/KR"] = cm_verdict(repK)
    report = TheoremReport("expected_reduction", verdicts, values)
    hyp = [verdicts["strongly_cm"], verdicts["G_ell"], verdicts["r<=ell-g+1"]]
    if all(v.holds for v in hyp):
        if verdicts["cm_F"].fails:
            report.implication_ok = False
            raise ImplicationViolation("expected reduction number hypotheses hold but F is not CM")
        if K is not None and verdicts["Fitt_(n-1)⊆K"].holds and verdicts["cm_R/KR"].fails:
            report.implication_ok = False
            raise ImplicationViolation("expected reduction number hypotheses hold but R/KR is not CM")
    return report


def audit_G_implies_quotient(I: Ideal, K: Ideal, seed: int = 0, trials: int = 5) -> TheoremReport:
    """``G_ell``, the relation count in degrees ``<= max(r, ell-g)`` and CM of G force CM of R/KR (``K ⊇ I``)."""
    I = Ideal(I.ring, _min_gens(I))
    red = reduction_number(I, seed=seed, trials=trials)
    ell, r = red.ell, red.r
    g = height(I)
    n = len(I.gens)
    Kmax = is_maximal_ideal(K)
    verdicts = {"K⊇I": Verdict(HOLDS if K.contains(I) else FAILS)}
    verdicts["G_ell"] = check_G_s(I, ell)
    pres = special_fiber(I) if Kmax else quotient_algebra(I, K)
    census = relation_census(pres)
    bound = max(r, int(ell - g))
    if Kmax and n == ell + 1:
        verdicts["census"] = relation_condition(n, ell, census, int(ell - g), True)
    else:
        verdicts["census"] = relation_condition(n, ell, census, bound, Kmax)
    verdicts["cm_G"] = cm_verdict(cm_test(associated_graded(I), trials=trials, seed=seed))
    verdicts["cm_R/KR"] = cm_verdict(cm_test(pres, trials=trials, seed=seed))
    report = TheoremReport("G_implies_R/KR", verdicts, {"ell": ell, "r": r, "g": g, "n": n, "census": census})
    hyp = [verdicts["K⊇I"], verdicts["G_ell"], verdicts["census"], verdicts["cm_G"]]
    if all(v.holds for v in hyp) and verdicts["cm_R/KR"].fails:
        report.implication_ok = False
        raise ImplicationViolation("G is CM and the hypotheses hold but R/KR is not CM")
    return report
