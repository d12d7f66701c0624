"""Job files in, reports out.

A job names a field, a ring (explicit variables and relations, or a
numerical semigroup), some ideals and a list of analyses.  Jobs are YAML
or JSON documents; see ``corpus/`` for examples.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import yaml

from . import __version__
from .blowup import (
    associated_graded,
    quotient_algebra,
    reduction_number,
    relation_census,
    rees_algebra,
    special_fiber,
)
from .closure import (
    check_hubl_huneke_hypotheses,
    check_KIj_closed,
    closure_membership_bounded,
    newton_closure,
)
from .criteria import (
    ImplicationViolation,
    audit_expected_reduction,
    audit_G_implies_quotient,
    check_condition_a,
    check_G_s,
    check_main_theorem,
    check_r_less_ell,
    check_thm_G_CM,
    check_valabrega_valla_K,
    cm_test,
    verify_lemma_propagation,
)
from .groebner import Budget, BudgetExceeded, budget_scope
from .idealops import Ideal, fitting_ideal, height, minimal_generators, minors, variables_ideal
from .polyring import CoefficientField, PolynomialSyntaxError, PresentedRing
from .semigroup import NumericalSemigroup, SemigroupIdeal, lift_to_toric, toric_presentation

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_VIOLATION = 0, 2, 3, 4

CORPUS = ("monomial_curve", "minors_4x3", "ci", "veronese", "polynomial_extension")


class JobError(ValueError):
    """Invalid job document; the message names the offending field."""


@dataclass
class Job:
    field: CoefficientField
    ring: PresentedRing
    ideals: dict
    analyses: list
    seed: int = 0
    trials: int = 5
    semigroup: NumericalSemigroup | None = None
    semigroup_ideals: dict = field(default_factory=dict)
    echo: dict = field(default_factory=dict)


ANALYSES = {}


def analysis(name, needs=("ideal",)):
    def deco(fn):
        ANALYSES[name] = (fn, needs)
        return fn
    return deco


# ---------------------------------------------------------------------------
# parsing


def load_document(path: str | Path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text) if str(path).endswith(".json") else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise JobError(f"{path}: not a valid document: {exc}") from None
    if not isinstance(doc, dict):
        raise JobError(f"{path}: top level must be a mapping")
    return doc


def parse_input(path, overrides: dict | None = None) -> Job:
    return build_job(load_document(path), overrides)


def _require(cond, msg):
    if not cond:
        raise JobError(msg)


def build_job(doc: dict, overrides: dict | None = None) -> Job:
    doc = dict(doc)
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    doc.update(overrides)
    allowed = {"field", "ring", "semigroup", "ideals", "analyses", "seed", "trials", "name"}
    unknown = set(doc) - allowed
    _require(not unknown, f"unknown top-level keys: {sorted(unknown)}")
    try:
        F = CoefficientField.parse(str(doc.get("field", "gf:32003")))
    except ValueError as exc:
        raise JobError(f"field: {exc}") from None
    seed = doc.get("seed", 0)
    trials = doc.get("trials", 5)
    _require(isinstance(seed, int) and seed >= 0, "seed: must be a non-negative integer")
    _require(isinstance(trials, int) and trials >= 1, "trials: must be a positive integer")
    _require(("ring" in doc) != ("semigroup" in doc), "exactly one of 'ring' or 'semigroup' is required")
    S = None
    if "semigroup" in doc:
        spec = doc["semigroup"]
        if isinstance(spec, list):
            spec = {"generators": spec}
        _require(isinstance(spec, dict) and "generators" in spec, "semigroup: needs 'generators'")
        try:
            S = NumericalSemigroup(spec["generators"])
        except (ValueError, TypeError) as exc:
            raise JobError(f"semigroup.generators: {exc}") from None
        ring = toric_presentation(S, F)
        adjoin = spec.get("adjoin", [])
        if adjoin:
            try:
                ring = ring.extend(adjoin, is_domain=True)
            except ValueError as exc:
                raise JobError(f"semigroup.adjoin: {exc}") from None
    else:
        spec = doc["ring"]
        _require(isinstance(spec, dict) and "variables" in spec, "ring: needs 'variables'")
        try:
            ring = PresentedRing(spec["variables"], F, spec.get("weights"), spec.get("relations", ()),
                                 spec.get("domain", True))
        except PolynomialSyntaxError as exc:
            raise JobError(f"ring.relations: {exc}") from None
        except ValueError as exc:
            raise JobError(f"ring: {exc}") from None
    ideals, sg_ideals = {}, {}
    raw = doc.get("ideals", {})
    _require(isinstance(raw, dict), "ideals: must be a mapping from names to specs")
    for name, spec in raw.items():
        _require(name != "m", "ideals: the name 'm' is reserved for the maximal ideal")
        ideals[name], sg = _build_ideal(name, spec, ring, S, ideals)
        if sg is not None:
            sg_ideals[name] = sg
    analyses = doc.get("analyses", [])
    _require(isinstance(analyses, list) and analyses, "analyses: must be a non-empty list")
    norm = []
    labels = set()
    for k, a in enumerate(analyses):
        if isinstance(a, str):
            a = {"name": a}
        _require(isinstance(a, dict) and "name" in a, f"analyses[{k}]: needs a 'name'")
        _require(a["name"] in ANALYSES, f"analyses[{k}]: unknown analysis {a['name']!r}")
        a = dict(a)
        a.setdefault("ideal", next(iter(ideals), None))
        for key in ("ideal", "K"):
            ref = a.get(key)
            if ref is not None:
                _require(ref == "m" or ref in ideals, f"analyses[{k}].{key}: unknown ideal {ref!r}")
        _require(a["ideal"] is not None, f"analyses[{k}]: no ideal defined")
        label = a.get("label") or a["name"]
        base, n = label, 2
        while label in labels:
            label, n = f"{base}#{n}", n + 1
        labels.add(label)
        a["label"] = label
        norm.append(a)
    echo = {"field": F.spec, "seed": seed, "trials": trials,
            "ring": {"variables": list(ring.variables), "weights": list(ring.weights),
                     "relations": sorted(str(r) for r in ring.relations)},
            "ideals": {n: [str(g) for g in I.gens] for n, I in ideals.items()},
            "analyses": [{k: v for k, v in a.items()} for a in norm]}
    if S is not None:
        echo["semigroup"] = list(S.generators)
    if "name" in doc:
        echo["name"] = doc["name"]
    return Job(F, ring, ideals, norm, seed, trials, S, sg_ideals, echo)


def _build_ideal(name, spec, ring, S, known):
    where = f"ideals.{name}"
    if isinstance(spec, list):
        spec = {"generators": spec}
    _require(isinstance(spec, dict), f"{where}: must be a list of generators or a mapping")
    gens, sg = [], None
    try:
        if "exponents" in spec:
            _require(S is not None, f"{where}.exponents: only valid with a semigroup ring")
            sg = SemigroupIdeal(S, spec["exponents"])
            gens += [g.map_to(ring) for g in lift_to_toric(sg, ring.field).gens]
        if "generators" in spec:
            gens += [ring.parse(str(g)) for g in spec["generators"]]
        if "minors" in spec:
            m = spec["minors"]
            _require(isinstance(m, dict) and "matrix" in m and "size" in m,
                     f"{where}.minors: needs 'matrix' and 'size'")
            mat = [[ring.parse(str(e)) for e in row] for row in m["matrix"]]
            gens += list(minors(mat, int(m["size"]), ring).gens)
        if "fitting" in spec:
            f = spec["fitting"]
            _require(isinstance(f, dict) and f.get("ideal") in known and "index" in f,
                     f"{where}.fitting: needs a previously defined 'ideal' and an 'index'")
            gens += list(fitting_ideal(known[f["ideal"]], int(f["index"])).gens)
    except PolynomialSyntaxError as exc:
        raise JobError(f"{where}: {exc}") from None
    except ValueError as exc:
        raise JobError(f"{where}: {exc}") from None
    _require(gens or sg is not None, f"{where}: no generators given")
    if sg is not None and set(spec) & {"generators", "minors", "fitting"}:
        sg = None  # extra generators leave the semigroup world
    return Ideal(ring, gens), sg


# ---------------------------------------------------------------------------
# running


def _K(job: Job, a: dict) -> Ideal:
    ref = a.get("K", "m")
    return variables_ideal(job.ring) if ref == "m" else job.ideals[ref]


def _pres_dict(pres) -> dict:
    return {"relations": pres.basis_strings(), "variables": list(pres.ring.variables),
            "dimension": pres.dimension(), "census": _census(relation_census(pres))}


def _census(c: dict) -> dict:
    return {str(k): v for k, v in sorted(c.items())}


def _verdicts(obj):
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if isinstance(obj, dict):
        return {str(k): _verdicts(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_verdicts(v) for v in obj]
    return obj


@analysis("generators")
def _a_generators(job, I, a):
    mg = minimal_generators(I) if I.is_homogeneous() else None
    return {"generators": [str(g) for g in I.gens],
            "minimal": [str(g) for g in mg.gens] if mg else None, "mu": len(mg.gens) if mg else None}


@analysis("height")
def _a_height(job, I, a):
    h = height(I)
    return {"height": h if h != float("inf") else "inf"}


@analysis("fitting")
def _a_fitting(job, I, a):
    F = fitting_ideal(I, int(a.get("index", 0)))
    return {"index": int(a.get("index", 0)), "basis": F.basis_strings(), "height": height(F)}


@analysis("rees")
def _a_rees(job, I, a):
    data = rees_algebra(I)
    return {"variables": list(data.ring.variables), "basis": sorted(data.ideal.basis_strings())}


@analysis("fiber")
def _a_fiber(job, I, a):
    return _pres_dict(special_fiber(I))


@analysis("associated_graded")
def _a_graded(job, I, a):
    return _pres_dict(associated_graded(I))


@analysis("quotient_algebra")
def _a_quotient(job, I, a):
    pres = quotient_algebra(I, _K(job, a))
    if a.get("kill"):
        pres = pres.specialize(a["kill"])
    return _pres_dict(pres)


@analysis("reduction_number")
def _a_reduction(job, I, a):
    red = reduction_number(I, seed=a.get("seed", job.seed), trials=a.get("trials", job.trials),
                           certify=a.get("certify", "auto"))
    return {"reduction_number": red.r, "analytic_spread": red.ell, "seed": red.seed,
            "trial_seeds": list(red.trial_seeds), "trial_values": list(red.trial_values),
            "general_elements": [str(g) for g in red.generators], "hilbert_function": _census(red.census),
            "certificate": red.certificate}


@analysis("cm")
def _a_cm(job, I, a):
    which = a.get("algebra", "fiber")
    if which == "fiber":
        pres = special_fiber(I)
    elif which == "associated_graded":
        pres = associated_graded(I)
    elif which == "quotient_algebra":
        pres = quotient_algebra(I, _K(job, a))
    elif which == "ring":
        pres = I
    else:
        raise JobError(f"cm: unknown algebra {which!r}")
    return cm_test(pres, trials=a.get("trials", job.trials), seed=a.get("seed", job.seed)).to_dict()


@analysis("G_s")
def _a_gs(job, I, a):
    return check_G_s(I, int(a.get("s", 1))).to_dict()


@analysis("condition_a")
def _a_cond(job, I, a):
    return _verdicts(check_condition_a(I, int(a["t"]), a.get("seed", job.seed), trials=job.trials))


@analysis("main_theorem")
def _a_main(job, I, a):
    return check_main_theorem(I, _K(job, a), int(a["t"]), a.get("seed", job.seed), job.trials).to_dict()


@analysis("lemma_propagation")
def _a_lemma(job, I, a):
    red = reduction_number(I, seed=a.get("seed", job.seed), trials=job.trials)
    return verify_lemma_propagation(I, red, int(a.get("t", max(1, red.r))), int(a.get("window", 2))).to_dict()


@analysis("valabrega_valla")
def _a_vv(job, I, a):
    K = I if a.get("K") == a["ideal"] else _K(job, a)
    return _verdicts(check_valabrega_valla_K(I, K, a.get("seed", job.seed), job.trials))


@analysis("graded_cm_criterion")
def _a_gcm(job, I, a):
    return check_thm_G_CM(I, a.get("seed", job.seed), job.trials).to_dict()


@analysis("r_less_ell")
def _a_rle(job, I, a):
    return check_r_less_ell(I, a.get("seed", job.seed), job.trials).to_dict()


@analysis("expected_reduction")
def _a_expected(job, I, a):
    K = _K(job, a) if a.get("K") else None
    return audit_expected_reduction(I, a.get("seed", job.seed), job.trials,
                                    bool(a.get("strongly_cm", False)), K).to_dict()


@analysis("G_implies_quotient")
def _a_gq(job, I, a):
    return audit_G_implies_quotient(I, _K(job, a), a.get("seed", job.seed), job.trials).to_dict()


@analysis("newton_closure")
def _a_newton(job, I, a):
    return {"closure": newton_closure(I).basis_strings()}


@analysis("semigroup_closure")
def _a_sg_closure(job, I, a):
    A = job.semigroup_ideals.get(a["ideal"])
    if A is None:
        raise JobError("semigroup_closure: the ideal must be given by exponents")
    C = A.closure()
    return {"exponents": list(A.exponents), "closure": list(C.exponents), "closed": C == A}


@analysis("closure_membership")
def _a_member(job, I, a):
    res = closure_membership_bounded(job.ring.parse(str(a["f"])), I, int(a.get("rmax", 3)))
    return {"status": res.status, "certificate": res.certificate.to_dict() if res.certificate else None}


@analysis("KIj_closed")
def _a_kij(job, I, a):
    K = _K(job, a)
    name = a["ideal"]
    if name in job.semigroup_ideals and a.get("K", "m") == "m" and job.semigroup is not None:
        S = job.semigroup
        I_, K_ = job.semigroup_ideals[name], SemigroupIdeal(S, S.generators)
    else:
        I_, K_ = I, K
    return _verdicts(check_KIj_closed(I_, K_, int(a.get("jmax", 2)), bool(a.get("normal", False)),
                                      bool(a.get("unmixed", False))))


@analysis("hubl_huneke")
def _a_hh(job, I, a):
    target = job.semigroup_ideals.get(a["ideal"], I)
    return check_hubl_huneke_hypotheses(target, int(a.get("s", 1)), int(a.get("t", 1)),
                                        job.trials, a.get("seed", job.seed)).to_dict()


@dataclass
class AnalysisReport:
    version: str
    job: dict
    results: dict
    exit_code: int = EXIT_OK

    def to_dict(self) -> dict:
        return {"version": self.version, "job": self.job, "results": self.results}


def run(job: Job, budget: Budget | None = None) -> AnalysisReport:
    """Run every requested analysis; failures are reported per analysis."""
    results = {}
    code = EXIT_OK
    for a in job.analyses:
        fn, _ = ANALYSES[a["name"]]
        I = job.ideals[a["ideal"]]
        entry = {"analysis": a["name"], "ideal": a["ideal"]}
        try:
            with budget_scope(budget or Budget()):
                entry["result"] = fn(job, I, a)
            entry["status"] = "completed"
        except BudgetExceeded as exc:
            entry["status"] = "budget-exceeded"
            entry["error"] = str(exc)
            code = max(code, EXIT_BUDGET)
        except ImplicationViolation as exc:
            entry["status"] = "implication-violation"
            entry["error"] = str(exc)
            code = EXIT_VIOLATION
        except (JobError, ValueError) as exc:
            entry["status"] = "error"
            entry["error"] = str(exc)
            code = max(code, EXIT_INPUT)
        results[a["label"]] = entry
    return AnalysisReport(__version__, job.echo, results, code)


# ---------------------------------------------------------------------------
# output


def _json_default(o):
    if isinstance(o, float) and o == float("inf"):
        return "inf"
    return str(o)


def emit(report: AnalysisReport, fmt: str = "machine") -> str:
    if fmt == "machine":
        return json.dumps(report.to_dict(), sort_keys=True, indent=2, default=_json_default) + "\n"
    if fmt != "human":
        raise ValueError(f"unknown format {fmt!r}")
    lines = [f"fiberlab {report.version}"]
    if "name" in report.job:
        lines.append(f"job: {report.job['name']}")
    for label in sorted(report.results):
        entry = report.results[label]
        lines.append("")
        lines.append(f"== {label} ({entry['analysis']} of {entry['ideal']}): {entry['status']}")
        if "error" in entry:
            lines.append(f"  error: {entry['error']}")
            continue
        lines.extend(_human_lines(entry["result"], "  "))
    return "\n".join(lines) + "\n"


def _is_verdict(d) -> bool:
    return isinstance(d, dict) and "status" in d and "witness" in d and "seed" in d


def _verdict_line(name, v, indent):
    seed = f" [seed={v['seed']}]" if v.get("seed") is not None else ""
    wit = f"  ({v['witness']})" if v.get("witness") else ""
    return f"{indent}{name}: {v['status']}{seed}{wit}"


def _human_lines(obj, indent, name=None):
    out = []
    if _is_verdict(obj):
        out.append(_verdict_line(name or "verdict", obj, indent))
        for n in obj.get("notes", []):
            out.append(f"{indent}  note: {n}")
        return out
    if isinstance(obj, dict):
        if name is not None:
            out.append(f"{indent}{name}:")
            indent += "  "
        for k in sorted(obj, key=str):
            v = obj[k]
            label = _LABELS.get(k, k)
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                out.extend(_human_lines(v, indent, label))
            else:
                out.append(f"{indent}{label}: {_scalar(v)}")
        return out
    if isinstance(obj, list):
        if all(_is_verdict(v) for v in obj):
            for i, v in enumerate(obj):
                out.append(_verdict_line(f"{name or 'item'} [{i}]", v, indent))
            return out
        out.append(f"{indent}{name}:")
        for v in obj:
            out.extend(_human_lines(v, indent + "  ", "-"))
        return out
    out.append(f"{indent}{name}: {_scalar(obj)}")
    return out


_LABELS = {"a": "condition (a)", "b": "condition (b)", "a_by_i": "condition (a) by i",
           "cm": "Cohen-Macaulay", "i": "clause (i)", "ii": "clause (ii)"}


def _flat_list(v):
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v):
    if isinstance(v, list):
        return "[" + ", ".join(str(x) for x in v) + "]"
    if v is None:
        return "-"
    return str(v)


# ---------------------------------------------------------------------------
# corpus and entry point


def corpus_path(name: str) -> Path:
    return Path(str(resources.files("fiberlab") / "corpus" / f"{name}.yaml"))


def load_corpus_job(name: str, **overrides) -> Job:
    return parse_input(corpus_path(name), overrides)


def main(argv=None) -> int:
    p = argparse.ArgumentParser(prog="fiberlab", description="Blowup algebra computations from a job file.")
    p.add_argument("--input", required=True,
                   help="job file (YAML or JSON), or corpus:NAME for a bundled job")
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("human", "machine"), default="human")
    p.add_argument("--seed", type=int)
    p.add_argument("--field", help="gf:P or qq")
    p.add_argument("--trials", type=int)
    p.add_argument("--budget-pairs", type=int, default=Budget().max_pairs)
    p.add_argument("--budget-degree", type=int, default=Budget().max_degree)
    args = p.parse_args(argv)
    src = args.input
    if src.startswith("corpus:"):
        src = corpus_path(src.split(":", 1)[1])
    overrides = {"seed": args.seed, "field": args.field, "trials": args.trials}
    try:
        job = parse_input(src, overrides)
    except FileNotFoundError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except JobError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = run(job, Budget(args.budget_pairs, args.budget_degree))
    text = emit(report, args.format)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
