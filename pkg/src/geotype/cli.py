"""Command-line surface: validation, decision, census, transforms, reports.

Every invocation assembles a RunReport: the command tokens, SHA-256 digests
of the input and output files, the machine-readable result of the operation,
the exit code and the wall time.  ``--json`` prints the report to stdout;
otherwise a short human summary is printed.  Transform subcommands always
write their output types in canonical serialization plus one report sidecar
(``<output minus .gt>.report.json``).  Reports are byte-stable across runs on
identical inputs except for the wall-time field.

Exit codes: 0 = success / accepted / compatible; 1 = honest negative outcome
(invalid file for ``validate``, not-pseudo-Anosov for ``check``, refusal of a
non-pseudo-Anosov input to ``genus``/``compare``, "necessarily distinct" for
``compare``, precondition refusals with a mathematical reason); 2 = I/O
problems, malformed inputs to non-``validate`` commands, exhausted cell
budgets, inconclusive decisions.

Caps are flags with documented defaults: ``--max-cells`` bounds every power
sweep (default from :mod:`geotype.algebra`), ``--max-period`` bounds orbit
enumeration (default 6), ``--jobs`` bounds scan parallelism (default 1; the
output is deterministic regardless).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from collections import Counter
from pathlib import Path

from . import __version__
from .algebra import DEFAULT_CELL_LIMIT, CellLimitExceeded, horizontal_type, power
from .core import (
    GeometricTypeError,
    incidence_matrix,
    inverse,
    is_binary,
    is_mixing,
    parse_type,
    save_type,
)
from .paclass import decide_pseudo_anosov
from .refine import (
    compare_invariants,
    corner_refine,
    joint_refine,
    perron_root,
    s_refine,
    u_refine,
)
from .singular import genus
from .symbolic import (
    enumerate_periodic_orbits,
    is_s_boundary_orbit,
    is_u_boundary_orbit,
)

REPORT_SCHEMA = "geotype.run-report/1"

_OK = 0
_NEGATIVE = 1
_ERROR = 2


class _Fail(Exception):
    """Internal: abort the handler with an exit code and a result payload."""

    def __init__(self, code: int, message: str, result: dict | None = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.result = result if result is not None else {"error": message}


class _Run:
    """Per-invocation context: tracked inputs and outputs for the report."""

    def __init__(self) -> None:
        self.inputs: list[Path] = []
        self.outputs: list[Path] = []

    def load(self, path: str, invalid_code: int = _ERROR):
        p = Path(path)
        self.inputs.append(p)
        if p.is_dir():
            raise _Fail(_ERROR, f"{p}: is a directory, expected a type file")
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as err:
            raise _Fail(_ERROR, f"{p}: {err.strerror or err}") from None
        try:
            return parse_type(text)
        except GeometricTypeError as err:
            raise _Fail(
                invalid_code,
                f"{p}: {err}",
                {"valid": False,
                 "violations": [{"kind": type(err).__name__, "message": str(err)}]},
            ) from None

    def save(self, t, path: Path) -> Path:
        try:
            save_type(t, path)
        except OSError as err:
            raise _Fail(_ERROR, f"{path}: {err.strerror or err}") from None
        self.outputs.append(path)
        return path


def _digest(path: Path) -> str | None:
    try:
        return hashlib.sha256(path.read_bytes()).hexdigest()
    except OSError:
        return None


def _out_path(inp: str, tag: str, override: str | None) -> Path:
    if override:
        return Path(override)
    p = Path(inp)
    return p.with_name(f"{p.stem}.{tag}.gt")


def _sidecar_path(out: Path) -> Path:
    name = out.name[:-3] if out.name.endswith(".gt") else out.name
    return out.with_name(name + ".report.json")


def _render_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _class_lines(census: dict) -> list[str]:
    counts = Counter(
        (c["size"], c["prongs"], c["spine"]) for c in census["classes"]
    )
    lines = []
    for (size, prongs, spine), mult in sorted(counts.items()):
        kind = "spine" if spine else f"{prongs}-prong"
        lines.append(f"  {mult} x (size {size}, {kind})")
    return lines


def _decide_gate(run: _Run, t, args, path: str):
    """Shared pA gate for genus/compare; refuses non-accepted inputs."""
    if args.trust_pa:
        return None
    verdict = decide_pseudo_anosov(t, max_cells=args.max_cells, jobs=args.jobs)
    if verdict.status == "pseudo-anosov":
        return verdict
    code = _NEGATIVE if verdict.status == "not-pseudo-anosov" else _ERROR
    raise _Fail(
        code,
        f"{path}: refused — the decision procedure returned "
        f"{verdict.status}"
        + (f" (witness: {verdict.witness.kind} at m={verdict.witness.m})"
           if verdict.witness else "")
        + "; pass --trust-pa to skip the gate for construction-certified types",
        {"refused": True, "verdict": verdict.to_json()},
    )


# -- handlers ----------------------------------------------------------------

def _cmd_validate(args, run: _Run):
    t = run.load(args.path, invalid_code=_NEGATIVE)
    cells = sum(h for h, _ in t.hv)
    mixing, first = is_mixing(t)
    result = {
        "valid": True,
        "n": t.n,
        "cells": cells,
        "binary": is_binary(t),
        "mixing": mixing,
    }
    text = (f"{args.path}: valid geometric type "
            f"(n={t.n}, cells={cells}, binary={is_binary(t)}, mixing={mixing})")
    return result, _OK, text


def _cmd_matrix(args, run: _Run):
    t = run.load(args.path)
    a = incidence_matrix(t)
    result = {"n": t.n, "matrix": [list(row) for row in a]}
    text = "\n".join(" ".join(str(x) for x in row) for row in a)
    return result, _OK, text


def _cmd_check(args, run: _Run):
    t = run.load(args.path)
    verdict = decide_pseudo_anosov(t, max_cells=args.max_cells, jobs=args.jobs)
    code = {"pseudo-anosov": _OK,
            "not-pseudo-anosov": _NEGATIVE,
            "inconclusive": _ERROR}[verdict.status]
    result = {"verdict": verdict.to_json()}
    if verdict.status == "pseudo-anosov":
        text = (f"{args.path}: pseudo-Anosov "
                f"(all sweeps clean through m={verdict.iterates_checked})")
    elif verdict.status == "not-pseudo-anosov":
        w = verdict.witness
        text = (f"{args.path}: not pseudo-Anosov — {w.kind} at m={w.m}, "
                f"indices {list(w.indices)}")
    else:
        text = (f"{args.path}: inconclusive — cell budget {args.max_cells} "
                f"exhausted after m={verdict.iterates_checked}; raise --max-cells")
    return result, code, text


def _cmd_genus(args, run: _Run):
    t = run.load(args.path)
    gate = _decide_gate(run, t, args, args.path)
    report = genus(t)
    result = {"census": report.to_json(),
              "gate": gate.to_json() if gate else "trusted"}
    lines = [f"{args.path}: genus {report.genus}, "
             f"euler characteristic {report.euler_characteristic}, "
             f"spines {report.spine_count}, "
             f"singular prongs {list(report.prongs)}"]
    lines += _class_lines(result["census"])
    return result, _OK, "\n".join(lines)


def _cmd_power(args, run: _Run):
    if args.m < 1:
        raise _Fail(_ERROR, f"power exponent must be >= 1, got {args.m}")
    t = run.load(args.path)
    out = _out_path(args.path, f"power{args.m}", args.output)
    try:
        tp = power(t, args.m, max_cells=args.max_cells)
    except CellLimitExceeded as err:
        raise _Fail(_ERROR, f"{args.path}: {err}; raise --max-cells") from None
    run.save(tp, out)
    result = {"m": args.m, "n": tp.n, "output": str(out)}
    return result, _OK, f"wrote {out} (n={tp.n})"


def _cmd_inverse(args, run: _Run):
    t = run.load(args.path)
    out = _out_path(args.path, "inverse", args.output)
    run.save(inverse(t), out)
    return {"output": str(out), "n": t.n}, _OK, f"wrote {out} (n={t.n})"


def _cmd_hrefine(args, run: _Run):
    t = run.load(args.path)
    out = _out_path(args.path, "hrefine", args.output)
    th = horizontal_type(t)
    run.save(th, out)
    result = {"output": str(out), "n": th.n, "binary": True}
    return result, _OK, f"wrote {out} (n={th.n}, binary)"


def _parse_orbits(raw: list[str]) -> list[tuple[int, ...]]:
    words = []
    for spec in raw:
        try:
            word = tuple(int(tok) for tok in spec.replace(",", " ").split())
        except ValueError:
            raise _Fail(_ERROR,
                        f"--orbit expects integers, got {spec!r}") from None
        if not word:
            raise _Fail(_ERROR, "--orbit must name at least one rectangle")
        words.append(word)
    return words


def _cmd_refine_side(args, run: _Run, side: str):
    t = run.load(args.path)
    words = _parse_orbits(args.orbit)
    refine_fn = s_refine if side == "s" else u_refine
    refined, bookkeeping = refine_fn(t, words)
    out = _out_path(args.path, f"{side}refine", args.output)
    run.save(refined, out)
    result = {"output": str(out), "n": refined.n,
              "bookkeeping": bookkeeping.to_json()}
    skipped = result["bookkeeping"]["skipped_boundary_orbits"]
    note = f", skipped boundary orbits: {skipped}" if skipped else ""
    return result, _OK, f"wrote {out} (n={refined.n}{note})"


def _cmd_refine_s(args, run: _Run):
    return _cmd_refine_side(args, run, "s")


def _cmd_refine_u(args, run: _Run):
    return _cmd_refine_side(args, run, "u")


def _cmd_corner(args, run: _Run):
    t = run.load(args.path)
    binarized = not is_binary(t)
    base = horizontal_type(t) if binarized else t
    refined = corner_refine(base)
    out = _out_path(args.path, "corner", args.output)
    run.save(refined, out)
    result = {"output": str(out), "n": refined.n, "binarized": binarized,
              "already_corner": refined == base}
    return result, _OK, f"wrote {out} (n={refined.n})"


def _cmd_joint(args, run: _Run):
    ta = run.load(args.path_first)
    tb = run.load(args.path_second)
    prepared = []
    binarized = []
    for t in (ta, tb):
        flag = not is_binary(t)
        binarized.append(flag)
        prepared.append(horizontal_type(t) if flag else t)
    ra, rb = joint_refine(prepared[0], prepared[1])
    if args.output:
        out_a, out_b = Path(args.output[0]), Path(args.output[1])
    else:
        out_a = _out_path(args.path_first, "joint", None)
        out_b = _out_path(args.path_second, "joint", None)
        if out_b == out_a:
            out_b = out_a.with_name(out_a.name[:-3] + "2.gt")
    run.save(ra, out_a)
    run.save(rb, out_b)
    result = {
        "outputs": [str(out_a), str(out_b)],
        "n": [ra.n, rb.n],
        "binarized": binarized,
        "comparison": "not computed — run `geotype compare` on the inputs",
    }
    text = (f"wrote {out_a} (n={ra.n}) and {out_b} (n={rb.n}); "
            f"run `geotype compare` for the invariant verdict")
    return result, _OK, text


def _cmd_compare(args, run: _Run):
    ta = run.load(args.path_first)
    tb = run.load(args.path_second)
    gate_a = _decide_gate(run, ta, args, args.path_first)
    gate_b = _decide_gate(run, tb, args, args.path_second)
    pa = horizontal_type(ta) if not is_binary(ta) else ta
    pb = horizontal_type(tb) if not is_binary(tb) else tb
    ra, rb = joint_refine(pa, pb)
    comparison = compare_invariants(ra, rb)
    code = _OK if comparison.verdict.startswith("compatible") else _NEGATIVE
    result = {
        "comparison": comparison.to_json(),
        "gates": [g.to_json() if g else "trusted" for g in (gate_a, gate_b)],
    }
    left, right = comparison.left, comparison.right
    text = "\n".join([
        f"left:  {args.path_first}: genus {left.genus}, "
        f"spines {left.spine_count}, singular prongs {list(left.prongs)}, "
        f"dilatation {comparison.left_dilatation:.9f}",
        f"right: {args.path_second}: genus {right.genus}, "
        f"spines {right.spine_count}, singular prongs {list(right.prongs)}, "
        f"dilatation {comparison.right_dilatation:.9f}",
        comparison.verdict,
    ])
    return result, code, text


def _cmd_orbits(args, run: _Run):
    t = run.load(args.path)
    if args.max_period < 1:
        raise _Fail(_ERROR, "--max-period must be >= 1")
    orbits = enumerate_periodic_orbits(t, args.max_period, cap=args.max_period)
    rows = []
    for orb in orbits:
        rows.append({
            "word": list(orb.word),
            "period": len(orb.word),
            "s_boundary": is_s_boundary_orbit(t, orb),
            "u_boundary": is_u_boundary_orbit(t, orb),
        })
    by_period = Counter(r["period"] for r in rows)
    result = {
        "period_bound": args.max_period,
        "count": len(rows),
        "counts_by_period": {str(p): c for p, c in sorted(by_period.items())},
        "orbits": rows,
    }
    lines = [f"{args.path}: {len(rows)} primitive orbits up to period "
             f"{args.max_period}"]
    for p, c in sorted(by_period.items()):
        lines.append(f"  period {p}: {c}")
    for r in rows:
        marks = "".join(
            s for s, flag in (("s", r["s_boundary"]), ("u", r["u_boundary"]))
            if flag)
        lines.append("  " + "-".join(str(x) for x in r["word"])
                     + (f"  [{marks}-boundary]" if marks else ""))
    return result, _OK, "\n".join(lines)


# -- parser ------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geotype",
        description="Finite algorithms on the combinatorial types of "
                    "Markov partitions.",
    )
    parser.add_argument("--version", action="version",
                        version=f"geotype {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, handler, help_text, sidecar=False):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler, sidecar=sidecar)
        p.add_argument("--json", action="store_true",
                       help="print the full RunReport as JSON on stdout")
        return p

    def add_decide_flags(p):
        p.add_argument("--max-cells", type=int, default=DEFAULT_CELL_LIMIT,
                       help="cell budget for power sweeps "
                            f"(default {DEFAULT_CELL_LIMIT})")
        p.add_argument("--jobs", type=int, default=1,
                       help="threads for the per-power obstruction scans "
                            "(default 1; result is identical)")

    p = add("validate", _cmd_validate,
            "parse and validate a type file (exit 0 iff valid)")
    p.add_argument("path")

    p = add("matrix", _cmd_matrix, "print the incidence matrix")
    p.add_argument("path")

    p = add("check", _cmd_check,
            "decide pseudo-Anosov (exit 0 = yes, 1 = no + witness, "
            "2 = inconclusive)")
    p.add_argument("path")
    add_decide_flags(p)

    p = add("genus", _cmd_genus,
            "singularity census and genus (refuses non-pseudo-Anosov input)")
    p.add_argument("path")
    add_decide_flags(p)
    p.add_argument("--trust-pa", action="store_true",
                   help="skip the decision gate (construction-certified input)")

    p = add("power", _cmd_power, "write the m-th power type", sidecar=True)
    p.add_argument("path")
    p.add_argument("-m", type=int, required=True, help="exponent (>= 1)")
    p.add_argument("-o", "--output", help="output path (default <stem>.powerM.gt)")
    p.add_argument("--max-cells", type=int, default=DEFAULT_CELL_LIMIT,
                   help=f"cell budget (default {DEFAULT_CELL_LIMIT})")

    p = add("inverse", _cmd_inverse, "write the inverse type", sidecar=True)
    p.add_argument("path")
    p.add_argument("-o", "--output")

    p = add("hrefine", _cmd_hrefine,
            "write the horizontal (binary) refinement", sidecar=True)
    p.add_argument("path")
    p.add_argument("-o", "--output")

    for side in ("s", "u"):
        p = add(f"refine-{side}",
                _cmd_refine_s if side == "s" else _cmd_refine_u,
                f"cut along the {side}-segments of periodic orbits "
                "(binary input; run hrefine first if needed)", sidecar=True)
        p.add_argument("path")
        p.add_argument("--orbit", action="append", required=True,
                       metavar="W1,W2,...",
                       help="orbit word, 1-based rectangle labels; repeatable")
        p.add_argument("-o", "--output")

    p = add("corner", _cmd_corner,
            "corner refinement (cell-splits non-binary input first)",
            sidecar=True)
    p.add_argument("path")
    p.add_argument("-o", "--output")

    p = add("joint", _cmd_joint,
            "jointly corner-refine two types to a common period bound",
            sidecar=True)
    p.add_argument("path_first")
    p.add_argument("path_second")
    p.add_argument("-o", "--output", nargs=2, metavar=("OUT1", "OUT2"))

    p = add("compare", _cmd_compare,
            "joint refinement + invariant comparison (exit 0 compatible, "
            "1 necessarily distinct)")
    p.add_argument("path_first")
    p.add_argument("path_second")
    add_decide_flags(p)
    p.add_argument("--trust-pa", action="store_true",
                   help="skip the decision gates (construction-certified inputs)")

    p = add("orbits", _cmd_orbits,
            "enumerate primitive periodic orbits of a binary type")
    p.add_argument("path")
    p.add_argument("--max-period", type=int, default=6,
                   help="largest period to enumerate (default 6)")

    return parser


def main(argv: list[str] | None = None) -> int:
    tokens = list(sys.argv[1:]) if argv is None else list(argv)
    parser = _build_parser()
    args = parser.parse_args(tokens)
    run = _Run()
    start = time.perf_counter()
    failed_message = None
    try:
        result, code, text = args.handler(args, run)
    except _Fail as fail:
        result, code, failed_message = fail.result, fail.code, fail.message
    except CellLimitExceeded as err:
        result, code = {"error": str(err)}, _ERROR
        failed_message = f"{err}; raise --max-cells"
    except GeometricTypeError as err:
        result, code, failed_message = {"error": str(err)}, _NEGATIVE, str(err)

    report = {
        "schema": REPORT_SCHEMA,
        "tool": {"name": "geotype", "version": __version__},
        "command": tokens,
        "inputs": [{"path": str(p), "sha256": _digest(p)} for p in run.inputs],
        "outputs": [{"path": str(p), "sha256": _digest(p)} for p in run.outputs],
        "result": result,
        "exit_code": code,
        "wall_time_s": round(time.perf_counter() - start, 6),
    }

    if code == _OK and args.sidecar and run.outputs:
        sidecar = _sidecar_path(run.outputs[0])
        sidecar.write_text(_render_report(report), encoding="utf-8")

    if args.json:
        sys.stdout.write(_render_report(report))
    elif failed_message is None:
        print(text)
    if failed_message is not None:
        print(f"geotype {args.subcommand}: {failed_message}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
