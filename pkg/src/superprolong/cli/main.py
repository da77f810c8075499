"""Command-line front end.

Exit codes: 0 success, 2 invalid input (schema, expressions, inconsistent
dimensions), 3 computation error (degenerate forms or frames, escaped flows
where a result was required, failing self-tests).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction
from importlib import resources
from typing import Any

from .. import __version__
from ..gaussian import parse_gr
from ..gsalg import MixedData, model_space
from ..liesuper import (
    DegenerateFormError,
    GlElement,
    SuperAlgebraBasis,
    clifford_rep,
    generated_subalgebra,
    gl_algebra,
    is_subalgebra,
    osp_algebra,
    p_algebra,
    spin_w_algebra,
    standard_even_form,
    standard_odd_form,
    v_parities,
    zero_algebra,
)
from ..prolong import (
    DEFAULT_KMAX,
    InvalidMixedDataError,
    ProlongationTower,
    derivative_rank,
    finite_type,
    first_prolongation,
    h02_dimension,
    is_admissible,
)
from ..supercalc import (
    DegenerateFrameError,
    Family,
    FlowError,
    NotInvertibleError,
    SuperVectorField,
    evaluation_rank,
    family_decompose,
    flow,
    flow_residual,
    group_law_residual,
    is_bracket_closed,
    killing_metric,
    killing_parallelization,
    lie_derivative_check,
    standard_frame,
)
from .expr import ExprError, parse_field, parse_function
from .schema import SPEC_VERSION, ProblemSpec, SpecError, validate_report

EXIT_OK, EXIT_INVALID, EXIT_COMPUTE = 0, 2, 3


class ComputationError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# building inputs

def _space(spec: ProblemSpec) -> dict:
    if spec.space is None:
        raise SpecError("space: required for this task")
    return spec.space


def build_algebra(spec: ProblemSpec) -> SuperAlgebraBasis:
    alg = spec.algebra
    if alg is None:
        raise SpecError("algebra: required for this task")
    if "builtin" in alg:
        name = alg["builtin"]
        params = alg.get("params", {})
        if name == "spin_w":
            if "p" not in params:
                raise SpecError("algebra/params/p: required for spin_w")
            p, q = params["p"], params.get("q", 0)
            if p + q < 1:
                raise SpecError("algebra/params: spin_w needs p + q >= 1")
            if spec.space is not None:
                want = (p + q, clifford_rep(p, q).spinor_dim)
                have = (spec.space["even"], spec.space["odd"])
                if want != have:
                    raise SpecError(f"space: spin_w({p},{q}) acts on C^{want[0]}|{want[1]}, "
                                    f"not C^{have[0]}|{have[1]}")
            return spin_w_algebra(p, q)
        if params:
            raise SpecError(f"algebra/params: {name} takes no parameters")
        sp = _space(spec)
        n0, n1 = sp["even"], sp["odd"]
        if name == "gl":
            return gl_algebra(n0, n1)
        if name == "zero":
            return zero_algebra(n0, n1)
        if name == "osp":
            if n1 % 2:
                raise ComputationError(f"osp: odd dimension {n1} admits no even nondegenerate form")
            return osp_algebra(standard_even_form(n0, n1))
        if name == "p":
            if n0 != n1:
                raise ComputationError(f"p: needs dim V_0 = dim V_1, got {n0}|{n1}")
            return p_algebra(standard_odd_form(n0))
        raise SpecError(f"algebra/builtin: unknown {name!r}")
    sp = _space(spec)
    vp = v_parities(sp["even"], sp["odd"])
    N = len(vp)
    els = []
    for idx, M in enumerate(alg["custom"]):
        if len(M) != N or any(len(r) != N for r in M):
            raise SpecError(f"algebra/custom/{idx}: expected a {N}x{N} matrix")
        try:
            rows = [[parse_gr(x) for x in r] for r in M]
        except ValueError as exc:
            raise SpecError(f"algebra/custom/{idx}: {exc}") from exc
        try:
            els.append(GlElement.from_rows(rows, vp))
        except ValueError as exc:
            raise ComputationError(f"algebra/custom/{idx}: {exc}") from exc
    if alg.get("close"):
        return generated_subalgebra(vp, els, "custom")
    g = SuperAlgebraBasis.from_elements(vp, els, "custom")
    if not is_subalgebra(g):
        raise ComputationError("algebra/custom: matrices do not span a subalgebra (set close: true)")
    return g


def build_mixed(spec: ProblemSpec, g: SuperAlgebraBasis) -> MixedData:
    vp = g.vparities
    n0 = sum(1 for p in vp if p == 0)
    n_odd = len(vp) - n0
    sp = spec.space or {"even": n0, "odd": n_odd}
    n1 = sp.get("n1")
    n2 = sp.get("n2")
    if n1 is None and n2 is None:
        n1, n2 = n0, 0
    elif n1 is None:
        n1 = n0 - n2
    elif n2 is None:
        n2 = n0 - n1
    if n1 < 0 or n2 < 0 or n1 + n2 != n0:
        raise SpecError(f"space: n1 + n2 must equal the even dimension {n0}")
    return model_space(n1, n2, n_odd)


def _kmax(spec) -> int:
    return spec.options.get("kmax", DEFAULT_KMAX)


def _levels(tower: ProlongationTower, kmax: int) -> list[dict]:
    out = []
    for k in range(kmax + 1):
        d = tower.level(k).dim
        out.append({"k": k, "even": d.even, "odd": d.odd})
        if d.total == 0:
            break
    return out


# ---------------------------------------------------------------------------
# tasks

def task_prolong(spec: ProblemSpec) -> dict:
    g = build_algebra(spec)
    tower = ProlongationTower(g)
    levels = _levels(tower, _kmax(spec))
    vanish = levels[-1]["k"] if levels[-1]["even"] + levels[-1]["odd"] == 0 else None
    h = h02_dimension(g)
    return {"algebra_dim": g.dim.as_list(), "levels": levels, "vanishes_at": vanish,
            "h02": h.as_list()}


def task_finite_type(spec: ProblemSpec) -> dict:
    g = build_algebra(spec)
    tower = ProlongationTower(g)
    kmax = _kmax(spec)
    ft = finite_type(g, kmax=kmax, tower=tower)
    return {"verdict": str(ft), "finite": ft.finite, "k": ft.k, "levels": _levels(tower, kmax)}


def task_admissible(spec: ProblemSpec) -> dict:
    g = build_algebra(spec)
    mixed = build_mixed(spec, g)
    try:
        adm = is_admissible(g, mixed, _kmax(spec))
    except InvalidMixedDataError as exc:
        raise ComputationError(str(exc)) from exc
    levels = [{"k": lv.k, "even": lv.dim.even, "odd": lv.dim.odd, "real_even_dim": lv.real_even_dim,
               "complex_even_dim": lv.complex_even_dim,
               "mixed": "valid" if lv.verdict.valid else f"fails {lv.verdict.failed}"} for lv in adm.levels]
    out = {"verdict": str(adm), "status": adm.status, "levels": levels}
    if adm.k is not None:
        out["k"] = adm.k
    if adm.reason:
        out["reason"] = adm.reason
    return out


def task_h02(spec: ProblemSpec) -> dict:
    g = build_algebra(spec)
    h = h02_dimension(g)
    r = derivative_rank(g)
    g1 = first_prolongation(g)
    return {"h02": h.as_list(), "rank": r.as_list(), "first_prolongation": g1.dim.as_list()}


def _field(src, n, m, where) -> SuperVectorField:
    try:
        return parse_field(src, n, m)
    except ExprError as exc:
        raise SpecError(f"{where}: {exc}") from exc


def _function(src, n, m, where):
    try:
        return parse_function(src, n, m)
    except ExprError as exc:
        raise SpecError(f"{where}: {exc}") from exc


def _exprs(fields) -> list[str]:
    return [X.to_expr() for X in fields]


def task_killing(spec: ProblemSpec) -> dict:
    sp = _space(spec)
    n, m = sp["even"], sp["odd"]
    opts = spec.options
    deg = opts.get("max_degree", 2)
    mode = opts.get("mode", "frame")
    if mode == "metric":
        if m % 2:
            raise ComputationError(f"metric: odd dimension {m} admits no even nondegenerate form")
        J = standard_even_form(n, m)
        if deg < 1:
            raise SpecError("task/options/max_degree: metric mode needs degree >= 1")
        res = killing_metric(J, deg)
        osp = osp_algebra(J).dim
        return {"mode": "metric", "dim": res.dim.as_list(), "osp_dim": osp.as_list(),
                "expected": [osp.even + n, osp.odd + m], "tail_zero": res.tail_zero,
                "bracket_closed": is_bracket_closed(res),
                "even": _exprs(res.even), "odd": _exprs(res.odd)}
    if "frame" in opts:
        if len(opts["frame"]) != n + m:
            raise SpecError(f"task/options/frame: need {n + m} fields, got {len(opts['frame'])}")
        frame = [_field(s, n, m, f"task/options/frame/{j}") for j, s in enumerate(opts["frame"])]
    else:
        frame = standard_frame(n, m)
    points = opts.get("points") or [[0] * n]
    for j, p in enumerate(points):
        if len(p) != n:
            raise SpecError(f"task/options/points/{j}: expected {n} coordinates")
    exact_pts = [tuple(Fraction(str(c)) for c in p) for p in points]
    try:
        res = killing_parallelization(frame, deg, exact_pts)
    except DegenerateFrameError as exc:
        raise ComputationError(f"frame: {exc}") from exc
    return {"mode": "frame", "dim": res.dim.as_list(), "tail_zero": res.tail_zero,
            "evaluation_rank": evaluation_rank(res.basis, exact_pts[0]),
            "bracket_closed": is_bracket_closed(res),
            "even": _exprs(res.even), "odd": _exprs(res.odd)}


def _num(x: float) -> float:
    return float(f"{x:.12g}")


def task_flow(spec: ProblemSpec, tol: float | None) -> dict:
    sp = _space(spec)
    n, m = sp["even"], sp["odd"]
    opts = spec.options
    if "field" not in opts:
        raise SpecError("task/options/field: required for flow")
    X = _field(opts["field"], n, m, "task/options/field")
    t_span = tuple(opts.get("t_span", [0.0, 1.0]))
    steps = opts.get("steps", 10)
    step = opts.get("step", 1e-3)
    tol = tol if tol is not None else opts.get("tol", 1e-6)
    points = opts.get("points") or [[0.0] * n]
    for j, p in enumerate(points):
        if len(p) != n:
            raise SpecError(f"task/options/points/{j}: expected {n} coordinates")
    try:
        res = flow(X, t_span, points, steps=steps, step=step)
    except FlowError as exc:
        raise ComputationError(f"task/options/field: {exc}") from exc
    per_point = []
    for j, p in enumerate(points):
        body = res.body(j)
        traj = [[None if b != b else _num(b) for b in row] for row in body.tolist()]
        per_point.append({"point": list(p), "escape_time": None if res.escape_times[j] is None
                          else _num(res.escape_times[j]), "body": traj})
    fres = flow_residual(X, res)
    safe = [p for j, p in enumerate(points) if res.escape_times[j] is None]
    half = (t_span[1] - t_span[0]) / 4
    glr = group_law_residual(X, safe, half, half, step) if safe else None
    out = {
        "times": [_num(t) for t in res.times.tolist()],
        "points": per_point,
        "flow_residual": _num(fres),
        "group_law_residual": None if glr is None else _num(glr),
        "max_body_imag": _num(res.max_body_imag()),
        "tol": tol,
        "within_tol": bool(fres <= tol and (glr is None or glr <= tol)),
        "complete_within_horizon": all(e is None for e in res.escape_times),
    }
    if "lie_with" in opts:
        Y = _field(opts["lie_with"], n, m, "task/options/lie_with")
        try:
            rep = lie_derivative_check(X, Y, 1e-3, [tuple(p) for p in safe] or None)
        except FlowError as exc:
            raise ComputationError(str(exc)) from exc
        out["lie_derivative"] = {"bracket_residual": _num(rep.bracket_residual),
                                 "commute_residual": None if rep.commute_residual is None
                                 else _num(rep.commute_residual),
                                 "bracket_is_zero": rep.bracket_is_zero}
    return out


def task_decompose(spec: ProblemSpec) -> dict:
    sp = _space(spec)
    n, m = sp["even"], sp["odd"]
    opts = spec.options
    k = opts.get("n_params", 0)
    imgs = opts.get("images")
    if imgs is None:
        raise SpecError("task/options/images: required for decompose")
    if len(imgs) != n + m:
        raise SpecError(f"task/options/images: need {n + m} images, got {len(imgs)}")
    fs = [_function(s, n, k + m, f"task/options/images/{j}") for j, s in enumerate(imgs)]
    try:
        fam = Family(k, n, m, fs)
    except ValueError as exc:
        raise SpecError(f"task/options/images: {exc}") from exc
    try:
        dec = family_decompose(fam)
    except NotInvertibleError as exc:
        raise ComputationError(f"task/options/images: {exc}") from exc
    return {"n_params": k, "base": [f.to_expr() for f in dec.base],
            "fields": {",".join(str(i + 1) for i in I): X.to_expr() for I, X in dec.fields.items()},
            "roundtrip": True}


def run(spec: ProblemSpec, tol: float | None = None) -> dict:
    """Run one spec; raises SpecError or ComputationError."""
    t = spec.task
    if t == "prolong":
        return task_prolong(spec)
    if t == "finite-type":
        return task_finite_type(spec)
    if t == "admissible":
        return task_admissible(spec)
    if t == "h02":
        return task_h02(spec)
    if t == "killing":
        return task_killing(spec)
    if t == "flow":
        return task_flow(spec, tol)
    if t == "decompose":
        return task_decompose(spec)
    raise SpecError(f"task/kind: unknown {t!r}")


def make_report(spec: ProblemSpec, result: dict | None, error: str | None = None,
                timing: dict | None = None) -> dict:
    rep: dict[str, Any] = {
        "version": SPEC_VERSION,
        "tool": {"name": "superprolong", "version": __version__},
        "seed": spec.seed if spec.seed is not None else 0,
        "task": spec.serialize(),
        "status": "ok" if error is None else "error",
        "result": result or {},
    }
    if error is not None:
        rep["error"] = error
    if timing is not None:
        rep["timing"] = timing
    return rep


def run_report(data: Any, *, tol: float | None = None, timing: bool = False) -> tuple[dict, int]:
    """Validate, run and wrap into a report; returns (report, exit code)."""
    try:
        spec = ProblemSpec.parse(data)
    except SpecError as exc:
        bare = ProblemSpec(task="prolong")
        rep = make_report(bare, None, f"invalid spec: {exc}")
        rep.pop("task")
        return rep, EXIT_INVALID
    t0 = time.perf_counter()
    try:
        result = run(spec, tol)
    except SpecError as exc:
        return make_report(spec, None, str(exc)), EXIT_INVALID
    except (ComputationError, DegenerateFormError, DegenerateFrameError, NotInvertibleError,
            FlowError, ValueError) as exc:
        return make_report(spec, None, str(exc)), EXIT_COMPUTE
    elapsed = {"seconds": round(time.perf_counter() - t0, 6)} if timing else None
    return make_report(spec, result, timing=elapsed), EXIT_OK


# ---------------------------------------------------------------------------
# corpus and self-test

def corpus_names() -> list[str]:
    root = resources.files("superprolong") / "corpus"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_example(name: str) -> dict:
    root = resources.files("superprolong") / "corpus"
    path = root / f"{name}.json"
    if not path.is_file():
        raise SpecError(f"unknown example {name!r}; available: {', '.join(corpus_names())}")
    return json.loads(path.read_text())


def self_test(seed: int = 0) -> list[tuple[str, bool, str]]:
    """Quick checks of the main invariants plus the bundled corpus."""
    from ..liesuper import bracket
    from ..supercalc import GrassmannPoly, recompose
    from ..prolong import kth_prolongation

    rng = random.Random(seed)
    out = []

    def record(name, fn):
        try:
            ok, info = fn()
        except Exception as exc:  # a crashing check is a failing check
            ok, info = False, f"{type(exc).__name__}: {exc}"
        out.append((name, bool(ok), info))

    record("osp(2|2)^(1) = 0", lambda: (first_prolongation(osp_algebra(standard_even_form(2, 2))).is_zero(), ""))
    record("p(2)^(1) = 0", lambda: (first_prolongation(p_algebra(standard_odd_form(2))).is_zero(), ""))
    record("gl(1) undecided(6)", lambda: (str(finite_type(gl_algebra(1, 0), kmax=6)) == "undecided(6)", ""))

    def agreement():
        for _ in range(3):
            vp = v_parities(2, 1)
            gens = []
            for _ in range(2):
                par = rng.randint(0, 1)
                M = [[rng.randint(-2, 2) if (vp[r] + vp[c]) % 2 == par else 0 for c in range(3)]
                     for r in range(3)]
                gens.append(GlElement.from_rows(M, vp) if any(any(r) for r in M)
                            else GlElement.from_rows([[1, 0, 0], [0, 0, 0], [0, 0, 0]], vp))
            g = generated_subalgebra(vp, gens)
            if first_prolongation(g) != kth_prolongation(ProlongationTower(g), 1):
                return False, "mismatch"
        return True, f"seed {seed}"

    record("ker ∂ = symmetric condition", agreement)
    record("Killing fields of R^2", lambda: (killing_metric(standard_even_form(2, 0), 2).dim.as_list() == [3, 0], ""))

    def translation():
        x = GrassmannPoly.const(1, 0, 1)
        res = flow(SuperVectorField([x]), (0, 1), [(0.0,)], steps=2)
        return abs(res.body(0)[-1][0] - 1.0) < 1e-9, ""

    record("flow of D[x1]", translation)

    def roundtrip():
        q = [GrassmannPoly.coord(1, 1, a) for a in range(2)]
        base = [q[0] + 1, q[1] * 2]
        X = SuperVectorField([GrassmannPoly.coord(1, 1, 1).scale(rng.randint(1, 5)), GrassmannPoly.const(1, 1, 1)], 1)
        fam = recompose(1, base, {(0,): X})
        dec = family_decompose(fam)
        return dec.fields[(0,)] == X and dec.base == base, ""

    record("decompose round trip", roundtrip)
    record("bracket of even elements is even",
           lambda: (bracket(*gl_algebra(1, 1).elements[:2]).parity == 0, ""))
    for name in corpus_names():
        def run_one(name=name):
            rep, code = run_report(load_example(name))
            validate_report(rep)
            return code == 0, rep.get("error", "")
        record(f"corpus {name}", run_one)
    return out


# ---------------------------------------------------------------------------
# presentation

def _dim(v) -> str:
    return f"{v[0]}|{v[1]}"


def render_table(rep: dict) -> str:
    lines = []
    task = rep.get("task", {}).get("task", {}).get("kind", "?")
    name = rep.get("task", {}).get("name")
    lines.append(f"task: {task}" + (f"  ({name})" if name else ""))
    if rep["status"] != "ok":
        lines.append(f"error: {rep['error']}")
        return "\n".join(lines)
    r = rep["result"]
    if "verdict" in r:
        lines.append(f"verdict: {r['verdict']}")
    if "levels" in r:
        extra = any("real_even_dim" in lv for lv in r["levels"])
        head = "   k   dim" + ("   real_even  complex_even  mixed" if extra else "")
        lines.append(head)
        for lv in r["levels"]:
            row = f"{lv['k']:4d}   {lv['even']}|{lv['odd']}"
            if extra:
                row = f"{row:<14}{lv['real_even_dim']:>9}  {lv['complex_even_dim']:>12}  {lv['mixed']}"
            lines.append(row)
    for key in ("h02", "rank", "first_prolongation", "dim", "osp_dim", "expected"):
        if key in r:
            lines.append(f"{key}: {_dim(r[key])}")
    for key in ("tail_zero", "bracket_closed", "evaluation_rank", "flow_residual", "group_law_residual",
                "max_body_imag", "within_tol", "complete_within_horizon", "roundtrip"):
        if key in r:
            lines.append(f"{key}: {r[key]}")
    for key in ("even", "odd", "base"):
        if r.get(key):
            lines.append(f"{key}:")
            lines += [f"  {s}" for s in r[key]]
    if r.get("fields"):
        lines.append("fields:")
        lines += [f"  X_{{{k}}} = {v}" for k, v in r["fields"].items()]
    if "points" in r:
        for p in r["points"]:
            final = next((row for row in reversed(p["body"]) if None not in row), None)
            lines.append(f"point {p['point']}: escape_time={p['escape_time']} final_body={final}")
    if "lie_derivative" in r:
        lines.append(f"lie_derivative: {r['lie_derivative']}")
    return "\n".join(lines)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="superprolong",
                                 description="Prolongations of Lie superalgebras and superdomain calculus.")
    ap.add_argument("--version", action="version", version=f"superprolong {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for cmd in ("prolong", "finite-type", "admissible", "h02", "killing", "flow", "decompose"):
        sp = sub.add_parser(cmd, help=f"run a {cmd} spec")
        src = sp.add_mutually_exclusive_group()
        src.add_argument("--spec", metavar="FILE", help="JSON spec file ('-' or omitted: stdin)")
        src.add_argument("--example", metavar="NAME", help="run a bundled corpus spec")
        sp.add_argument("--json", action="store_true", help="emit the JSON report")
        sp.add_argument("--kmax", type=int, help="highest prolongation level")
        sp.add_argument("--degree", type=int, help="polynomial ansatz degree")
        sp.add_argument("--seed", type=int, help="seed for randomized checks")
        sp.add_argument("--tol", type=float, help="tolerance for numeric checks")
        sp.add_argument("--timing", action="store_true", help="include wall time in the report")
    ck = sub.add_parser("check", help="run the built-in self-test suite")
    ck.add_argument("--json", action="store_true")
    ck.add_argument("--seed", type=int, default=0)
    return ap


def _read_spec(args) -> Any:
    if args.example:
        return load_example(args.example)
    if args.spec and args.spec != "-":
        with open(args.spec) as fh:
            return json.load(fh)
    return json.load(sys.stdin)


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "check":
        results = self_test(args.seed)
        if args.json:
            print(json.dumps({"seed": args.seed, "checks": [
                {"name": n, "passed": ok, "info": info} for n, ok, info in results]}, indent=2))
        else:
            for n, ok, info in results:
                print(f"{'PASS' if ok else 'FAIL'}  {n}" + (f"  [{info}]" if info and not ok else ""))
        return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_COMPUTE
    try:
        data = _read_spec(args)
    except (OSError, json.JSONDecodeError, SpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if isinstance(data, dict):
        task = data.setdefault("task", {"kind": args.command})
        if isinstance(task, dict):
            if task.get("kind") != args.command:
                print(f"error: task/kind: spec asks for {task.get('kind')!r} but the subcommand is "
                      f"{args.command!r}", file=sys.stderr)
                return EXIT_INVALID
            opts = task.setdefault("options", {})
            if args.kmax is not None:
                opts["kmax"] = args.kmax
            if args.degree is not None:
                opts["max_degree"] = args.degree
            if not opts:
                del task["options"]
        if args.seed is not None:
            data["seed"] = args.seed
    rep, code = run_report(data, tol=args.tol, timing=args.timing)
    if args.json:
        print(json.dumps(rep, indent=2, sort_keys=True))
    else:
        print(render_table(rep))
    return code
