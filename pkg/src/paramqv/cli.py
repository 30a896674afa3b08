"""Command-line front end.

Exit codes: 0 when the checked property holds, 1 when it fails, 2 on
errors (bad input, unsupported modulus, ...).  ``--json`` switches every
command to the structured report format tagged with REPORT_SCHEMA.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional

from . import benchmarks, gates
from .models import ParseError, format_model, load_circuit, load_model
from .paramgen import parameterize, validate_box
from .swta import Swta, accepts, emptiness_witness, evaluate, prime_tail, union
from .trees import format_tree, parse_tree
from .verify import EQUAL, Verdict, bounded_oracle, functional_relate, image_chain
from .wtt import Wtt, compose_all, image

REPORT_SCHEMA = "paramqv-report/1"
TASK_SCHEMA = benchmarks.TASK_SCHEMA

# wall times reported for the original tool, seconds
REFERENCE_SECONDS = {
    "bv": 0.014,
    "grover": 0.088,
    "adder": 11.007,
    "qecc": 0.314,
    "heisenberg": 0.663,
}


class TaskError(ValueError):
    pass


# ------------------------------------------------------------------ loading


def _load_stage(entry, base: Path, m: Optional[int]) -> list:
    """A circuit stage: a .wtt file, a .circ gate list, or a staircase description."""
    if isinstance(entry, dict):
        if "param" not in entry:
            raise TaskError(f"stage {entry!r} needs a 'param' box file")
        box = load_model(base / entry["param"], m)
        if not isinstance(box, Wtt):
            raise TaskError(f"{entry['param']} is not a transducer")
        bt = validate_box(box, entry.get("id"))
        return [parameterize(bt, int(entry.get("offset", 1)), entry.get("dir", "right"))]
    path = base / entry
    if path.suffix == ".circ":
        return load_circuit(path, m)[2]
    T = load_model(path, m)
    if not isinstance(T, Wtt):
        raise TaskError(f"{entry} is not a transducer")
    return [T]


def load_stages(entries, base: Path, m: Optional[int]) -> list:
    out = []
    for e in entries:
        out.extend(_load_stage(e, base, m))
    return out


def _load_swta(path, m) -> Swta:
    A = load_model(path, m)
    if not isinstance(A, Swta):
        raise TaskError(f"{path} is not an SWTA")
    return A


def load_task(path) -> tuple:
    p = Path(path)
    try:
        task = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise TaskError(f"{p}: {e}") from None
    if task.get("schema") != TASK_SCHEMA:
        raise TaskError(f"{p}: expected schema {TASK_SCHEMA}")
    if task.get("kind") not in ("verify", "equiv"):
        raise TaskError(f"{p}: kind must be verify or equiv")
    need = ("pre", "post", "circuit") if task["kind"] == "verify" else ("bases", "left", "right")
    for k in need:
        if k not in task:
            raise TaskError(f"{p}: missing field {k!r}")
    return task, p.parent


# ------------------------------------------------------------------ reports


def _word(word) -> Optional[list]:
    return None if word is None else [list(s) for s in word]


def verdict_report(v: Verdict, name: str, kind: str) -> dict:
    st = v.stats
    rep = {
        "schema": REPORT_SCHEMA,
        "task": name,
        "kind": kind,
        "result": v.result,
        "reason": v.reason,
        "witness": _word(v.witness),
        "branch": v.branch,
    }
    if "karr" in st:
        k = st["karr"]
        rep["karr"] = {key: k[key] for key in ("lts_states", "vectors", "max_basis", "max_bits", "dim")}
        rep["diff_states"] = st["diff_states"]
        rep["domain_pairs"] = st["domain"]["pairs"]
    elif "pairs" in st:
        rep["domain_pairs"] = st["pairs"]
    for key in ("sizes", "sizes_left", "sizes_right"):
        if key in st:
            rep[key] = st[key]
    rep["timings"] = {}
    return rep


def run_pipeline(kind: str, name: str, *, pre=None, post=None, circuit=(), bases=None, left=(), right=(),
                 mode: str = EQUAL, oracle_depth: int = 0) -> dict:
    t0 = time.perf_counter()
    if kind == "verify":
        sizes = [pre.size()]
        res = image_chain(pre, circuit, sizes)
        t1 = time.perf_counter()
        v = functional_relate(res, post, mode)
        v.stats["sizes"] = sizes + [{"post": post.size()}]
        pair = (res, post)
    else:
        sl, sr = [bases.size()], [bases.size()]
        b1 = image_chain(bases, left, sl)
        b2 = image_chain(bases, right, sr)
        t1 = time.perf_counter()
        v = functional_relate(b1, b2, EQUAL)
        v.stats["sizes_left"], v.stats["sizes_right"] = sl, sr
        pair = (b1, b2)
        mode = EQUAL
    t2 = time.perf_counter()
    rep = verdict_report(v, name, kind)
    rep["mode"] = mode
    if oracle_depth > 0:
        o = bounded_oracle(pair[0], pair[1], oracle_depth, mode)
        rep["oracle"] = {"depth": oracle_depth, "result": o.result, "words": o.stats["words"]}
        if not o.holds and v.holds:
            rep["oracle"]["disagrees"] = True
    rep["timings"] = {"image": t1 - t0, "check": t2 - t1, "total": time.perf_counter() - t0}
    return rep


def run_task(path, oracle_depth: int = 0) -> dict:
    t0 = time.perf_counter()
    task, base = load_task(path)
    m = task.get("m")
    if task["kind"] == "verify":
        kw = dict(
            pre=_load_swta(base / task["pre"], m),
            post=_load_swta(base / task["post"], m),
            circuit=load_stages(task["circuit"], base, m),
            mode=task.get("mode", EQUAL),
        )
    else:
        kw = dict(
            bases=_load_swta(base / task["bases"], m),
            left=load_stages(task["left"], base, m),
            right=load_stages(task["right"], base, m),
        )
    t1 = time.perf_counter()
    rep = run_pipeline(task["kind"], task.get("name", Path(path).stem), oracle_depth=oracle_depth, **kw)
    rep["timings"]["load"] = t1 - t0
    rep["reconstructed"] = bool(task.get("reconstructed", False))
    return rep


def _run_task_safe(args) -> dict:
    path, depth = args
    try:
        return run_task(path, depth)
    except Exception as e:  # reported per task, the batch goes on
        return {"schema": REPORT_SCHEMA, "task": str(path), "result": "error", "reason": f"{type(e).__name__}: {e}"}


def strip_timings(rep: dict) -> dict:
    return {k: v for k, v in rep.items() if k != "timings"}


def format_report(rep: dict, stats: bool = False) -> str:
    lines = [f"{rep['task']}: {rep['result']}" + (f" ({rep['reason']})" if rep.get("reason") else "")]
    if rep.get("witness") is not None:
        word = " ".join(f"{a}:{c}" for a, c in rep["witness"])
        lines.append(f"  witness: {word or '(empty word)'}")
        if rep.get("branch"):
            lines.append(f"  branch: {rep['branch']}")
    if rep.get("oracle"):
        o = rep["oracle"]
        lines.append(f"  bounded oracle (L={o['depth']}): {o['result']} over {o['words']} words")
    if stats:
        for key in ("sizes", "sizes_left", "sizes_right"):
            if key in rep:
                lines.append(f"  {key}: " + " -> ".join(_fmt_size(s) for s in rep[key]))
        if "karr" in rep:
            k = rep["karr"]
            lines.append(
                f"  karr: dim={k['dim']} lts_states={k['lts_states']} vectors={k['vectors']} "
                f"max_basis={k['max_basis']} max_bits={k['max_bits']}"
            )
        t = rep.get("timings", {})
        if t:
            lines.append("  time: " + " ".join(f"{k}={v:.3f}s" for k, v in t.items()))
    return "\n".join(lines)


def _fmt_size(s: dict) -> str:
    if "post" in s:
        return f"post {s['post']['states']}q/{s['post']['transitions']}t"
    return f"{s['states']}q/{s['transitions']}t"


# ------------------------------------------------------------------ commands


def _emit(args, rep: dict) -> int:
    if args.json:
        print(json.dumps(rep, indent=2, sort_keys=True))
    else:
        print(format_report(rep, args.stats))
    return 0 if rep["result"] == "holds" else 1


def _write_or_print(X, out: Optional[str]) -> None:
    text = format_model(X)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def parse_word(text: str) -> tuple:
    """'a:1 a:2' or 'a:1,a:2' -> (('a','1'), ('a','2'))."""
    out = []
    for tok in text.replace(",", " ").split():
        if ":" not in tok:
            raise ValueError(f"word letters are symbol:color, got {tok!r}")
        a, c = tok.rsplit(":", 1)
        out.append((a, c))
    return tuple(out)


def _stages_from_files(paths, m) -> list:
    out = []
    for p in paths:
        out.extend(_load_stage(p, Path("."), m))
    return out


def cmd_eval(args) -> int:
    A = _load_swta(args.model, args.m)
    t = evaluate(A, A.root, parse_word(args.word))
    if args.json:
        print(json.dumps({"schema": REPORT_SCHEMA, "defined": t is not None,
                          "tree": None if t is None else format_tree(t, args.style)}))
    else:
        print("undefined" if t is None else format_tree(t, args.style))
    return 0 if t is not None else 1


def cmd_accepts(args) -> int:
    A = _load_swta(args.model, args.m)
    t = parse_tree(args.tree, A.m)
    ok = accepts(A, t)
    print(json.dumps({"schema": REPORT_SCHEMA, "accepted": ok}) if args.json else ("accepted" if ok else "rejected"))
    return 0 if ok else 1


def cmd_empty(args) -> int:
    A = _load_swta(args.model, args.m)
    w = emptiness_witness(A)
    if args.json:
        print(json.dumps({"schema": REPORT_SCHEMA, "empty": w is None, "witness": _word(w)}))
    else:
        print("empty" if w is None else "nonempty, e.g. " + (" ".join(f"{a}:{c}" for a, c in w) or "(empty word)"))
    return 0 if w is None else 1


def cmd_union(args) -> int:
    _write_or_print(union(_load_swta(args.a, args.m), _load_swta(args.b, args.m)), args.output)
    return 0


def cmd_image(args) -> int:
    A = _load_swta(args.swta, args.m)
    for T in _stages_from_files(args.transducers, args.m):
        A = image(T, A)
    _write_or_print(A, args.output)
    return 0


def cmd_compose(args) -> int:
    _write_or_print(compose_all(_stages_from_files(args.transducers, args.m)), args.output)
    return 0


def cmd_param(args) -> int:
    box = load_model(args.box, args.m)
    if not isinstance(box, Wtt):
        raise TaskError(f"{args.box} is not a transducer")
    T = parameterize(validate_box(box, args.id), args.offset, args.dir, args.max_tuple)
    _write_or_print(T, args.output)
    return 0


def cmd_gate(args) -> int:
    m = args.m or gates.DEFAULT_M
    if args.name.upper() == "QFT":
        T = gates.qft_wtt(args.qubits, m=args.m)
    else:
        U = gates.named_gate(args.name, m)
        if args.broadcast:
            T = gates.broadcast_wtt(U, args.broadcast.split(","))
        elif args.controls:
            T = gates.controlled_wtt(U, args.target, args.controls, args.qubits)
        else:
            T = gates.single_qubit_wtt(U, args.target, args.qubits)
    _write_or_print(T, args.output)
    return 0


def cmd_prime_tail(args) -> int:
    _write_or_print(prime_tail(_load_swta(args.model, args.m), args.levels), args.output)
    return 0


def cmd_verify(args) -> int:
    rep = run_pipeline(
        "verify",
        args.name,
        pre=_load_swta(args.pre, args.m),
        post=_load_swta(args.post, args.m),
        circuit=_stages_from_files(args.circuit, args.m),
        mode=args.mode,
        oracle_depth=args.max_oracle_depth,
    )
    return _emit(args, rep)


def cmd_equiv(args) -> int:
    rep = run_pipeline(
        "equiv",
        args.name,
        bases=_load_swta(args.bases, args.m),
        left=_stages_from_files(args.left, args.m),
        right=_stages_from_files(args.right, args.m),
        oracle_depth=args.max_oracle_depth,
    )
    return _emit(args, rep)


def cmd_oracle(args) -> int:
    A, B = _load_swta(args.a, args.m), _load_swta(args.b, args.m)
    depth = args.depth if args.depth is not None else (args.max_oracle_depth or 4)
    v = bounded_oracle(A, B, depth, args.mode)
    rep = {
        "schema": REPORT_SCHEMA,
        "task": "oracle",
        "result": v.result,
        "reason": v.reason,
        "witness": _word(v.witness),
        "words": v.stats["words"],
    }
    return _emit(args, rep)


def cmd_run(args) -> int:
    jobs = [(p, args.max_oracle_depth) for p in args.tasks]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            reports = list(ex.map(_run_task_safe, jobs))
    else:
        reports = [_run_task_safe(j) for j in jobs]
    if args.json:
        print(json.dumps(reports if len(reports) > 1 else reports[0], indent=2, sort_keys=True))
    else:
        for rep in reports:
            print(format_report(rep, args.stats))
    if any(r["result"] == "error" for r in reports):
        return 2
    return 0 if all(r["result"] == "holds" for r in reports) else 1


def cmd_bench(args) -> int:
    names = args.cases or list(benchmarks.CASES)
    rows = []
    code = 0
    for name in names:
        case = benchmarks.build(name)
        t0 = time.perf_counter()
        v = benchmarks.run_case(case)
        secs = time.perf_counter() - t0
        row = {"case": name, "result": v.result, "seconds": secs, "reference_seconds": REFERENCE_SECONDS.get(name)}
        if args.dense:
            row["dense"] = [benchmarks.dense_agreement(case, j) for j in range(1, args.dense + 1)]
        rows.append(row)
        if not v.holds:
            code = 1
    if args.json:
        print(json.dumps({"schema": REPORT_SCHEMA, "bench": rows}, indent=2, sort_keys=True, default=str))
    else:
        print(f"{'case':<12} {'result':<7} {'time':>9} {'reference':>10}")
        for r in rows:
            ref = f"{r['reference_seconds']:.3f}s" if r["reference_seconds"] is not None else "-"
            line = f"{r['case']:<12} {r['result']:<7} {r['seconds']:>8.3f}s {ref:>10}"
            if "dense" in r:
                line += "  dense " + " ".join(
                    f"{d['qubits']}q:{'ok' if d['agree'] else 'MISMATCH'}" for d in r["dense"]
                )
            print(line)
    return code


def cmd_bundle(args) -> int:
    names = args.cases or list(benchmarks.CASES) + ["bv-mutated"]
    for name in names:
        path = benchmarks.write_bundle(benchmarks.build(name), Path(args.directory) / name)
        print(path)
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="paramqv", description="Parameterized quantum circuit verification with SWTAs and WTTs.")
    p.add_argument("--m", type=int, default=None, help="modulus of omega = exp(i pi / m) for parsed models")
    p.add_argument("--jobs", type=int, default=1, help="parallel tasks for 'run'")
    p.add_argument("--stats", action="store_true", help="print sizes, Karr counters and timings")
    p.add_argument("--max-oracle-depth", type=int, default=0, help="also run the bounded oracle up to this word length")
    p.add_argument("--json", action="store_true", help="structured output")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", help="tree of an SWTA at a word")
    s.add_argument("model")
    s.add_argument("word", help="letters symbol:color, space or comma separated")
    s.add_argument("--style", choices=("vector", "dirac"), default="vector")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("accepts", help="tree membership")
    s.add_argument("model")
    s.add_argument("tree", help="'tree h=.. labels=.. leaves=[..]'")
    s.set_defaults(func=cmd_accepts)

    s = sub.add_parser("empty", help="is the tree function nowhere defined")
    s.add_argument("model")
    s.set_defaults(func=cmd_empty)

    s = sub.add_parser("union", help="union of two SWTAs")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_union)

    s = sub.add_parser("image", help="apply transducers to an SWTA")
    s.add_argument("swta")
    s.add_argument("transducers", nargs="+", help=".wtt or .circ files in application order")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_image)

    s = sub.add_parser("compose", help="compose transducers (application order)")
    s.add_argument("transducers", nargs="+")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_compose)

    s = sub.add_parser("param", help="staircase transducer from a box")
    s.add_argument("box")
    s.add_argument("--offset", type=int, required=True)
    s.add_argument("--dir", choices=("left", "right"), default="right")
    s.add_argument("--id", default=None, help="name of the identity state (default: the only leaf)")
    s.add_argument("--max-tuple", type=int, default=64)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_param)

    s = sub.add_parser("gate", help="transducer of a gate")
    s.add_argument("name", help="X Y Z H S SDG T TDG RX RZ SX I, or QFT")
    s.add_argument("--qubits", type=int, default=1)
    s.add_argument("--target", type=int, default=1)
    s.add_argument("--controls", type=int, nargs="*", default=[])
    s.add_argument("--broadcast", help="comma-separated symbols: apply to every level with these labels")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gate)

    s = sub.add_parser("prime-tail", help="prime the labels of the last levels")
    s.add_argument("model")
    s.add_argument("--levels", type=int, required=True)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_prime_tail)

    s = sub.add_parser("verify", help="{pre} circuit {post}")
    s.add_argument("--pre", required=True)
    s.add_argument("--post", required=True)
    s.add_argument("--circuit", nargs="+", required=True)
    s.add_argument("--mode", choices=("equal", "include", "included"), default="included")
    s.add_argument("--name", default="verify")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("equiv", help="two circuits agree on a set of inputs")
    s.add_argument("--bases", required=True)
    s.add_argument("--left", nargs="+", required=True)
    s.add_argument("--right", nargs="+", required=True)
    s.add_argument("--name", default="equiv")
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("oracle", help="brute-force comparison up to a word length")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--depth", type=int, default=None)
    s.add_argument("--mode", choices=("equal", "include", "included"), default="equal")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("run", help="run task files")
    s.add_argument("tasks", nargs="+")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("bench", help="run the built-in case studies")
    s.add_argument("cases", nargs="*")
    s.add_argument("--dense", type=int, default=0, help="cross-check instances 1..N by dense simulation")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("bundle", help="write the case studies as task directories")
    s.add_argument("directory")
    s.add_argument("cases", nargs="*")
    s.set_defaults(func=cmd_bundle)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, TaskError, ValueError, OSError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
