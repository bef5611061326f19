"""Command line interface.

Exit codes: 0 true/success, 1 false, 2 input error, 3 brute-force cap
exceeded, 4 inconclusive verification.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__, solvers
from .characterization import CLASS_CHECKS
from .generators import (
    FIGURE_2_SIGMA,
    SigmaSpec,
    gen_basic,
    gen_equivalence_example,
    gen_example_1_4,
    gen_sigma,
    enumerate_posets,
)
from .poset import (
    Poset,
    PosetError,
    block_decomposition,
    canonical_form,
    component_decomposition,
    covers,
    format_poset,
    parse_poset,
)
from .representation import (
    InvalidRepresentation,
    Representation,
    canonical_representation,
    require_valid,
    validate_representation,
)
from .verify import SCHEMA, VerifyConfig, run_verify

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_CAP, EXIT_INCONCLUSIVE = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


def _read_text(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _load_poset(path: str) -> Poset:
    return parse_poset(_read_text(path))


def _load_rep(p: Poset, path: str) -> Representation:
    try:
        data = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc.msg})") from exc
    return Representation.from_json(p, data)


def _emit(obj: dict) -> None:
    print(json.dumps({"schema": SCHEMA, **obj}, indent=2, sort_keys=False))


def _rep_json(p: Poset, r: Representation) -> dict:
    return r.to_json(p)


# ---------------------------------------------------------------------------
# subcommands


def cmd_params(args) -> int:
    p = _load_poset(args.file)
    rep = solvers.params(p, args.method, args.cap)
    if args.json:
        out = {"n": p.n, **rep.as_dict()}
        if args.witness:
            out["witnesses"] = {k: _rep_json(p, w) for k, w in rep.witnesses.items()}
        _emit(out)
        return EXIT_OK
    print(f"{'parameter':<10} value")
    for key in ("ch", "dim2", "cw", "iir"):
        print(f"{key:<10} {getattr(rep, key)}")
    print(f"{'method':<10} {rep.method}")
    if args.witness:
        for key, w in rep.witnesses.items():
            print(f"witness {key}: {json.dumps(_rep_json(p, w), sort_keys=False)}")
    return EXIT_OK


def cmd_check(args) -> int:
    p = _load_poset(args.file)
    report = CLASS_CHECKS[args.property](p)
    witness = report.witness
    if isinstance(witness, tuple):
        witness = list(witness)
    _emit({"property": args.property, "holds": report.holds, "witness": _labelled(p, args.property, witness)})
    return EXIT_OK if report.holds else EXIT_FALSE


def _labelled(p: Poset, prop: str, witness):
    # name the offending elements instead of printing bare ids
    if witness is None:
        return None
    if prop in ("no-chain-block", "no-block-is-chain", "two-down") and isinstance(witness, int):
        return p.labels[witness]
    if prop == "parallel-pair" and isinstance(witness, list):
        return [p.labels[x] for x in witness]
    if prop == "miir" and isinstance(witness, list):
        inner = witness[1]
        return [witness[0], _labelled(p, witness[0], list(inner) if isinstance(inner, tuple) else inner)]
    return witness


def cmd_decompose(args) -> int:
    p = _load_poset(args.file)
    dec = component_decomposition(p) if args.components else block_decomposition(p)
    parts = []
    for q, emb in zip(dec.parts, dec.embedding):
        parts.append({"elements": [p.labels[v] for v in emb], "chain": q.is_chain(), "size": q.n})
    _emit({"kind": dec.kind, "parts": parts})
    return EXIT_OK


def cmd_rep(args) -> int:
    p = _load_poset(args.file)
    action = args.action
    if action == "canonical":
        _emit({"representation": _rep_json(p, canonical_representation(p))})
        return EXIT_OK
    if action == "max-irreducible":
        value, w = solvers.iir(p, args.cap)
        _emit({"iir": value, "representation": _rep_json(p, w)})
        return EXIT_OK
    if args.rep is None:
        raise InputError(f"rep {action} needs a representation file")
    r = _load_rep(p, args.rep)
    if action == "validate":
        check = validate_representation(p, r)
        pair = None if check.pair is None else [p.labels[v] for v in check.pair]
        _emit({"valid": check.valid, "violating_pair": pair})
        return EXIT_OK if check.valid else EXIT_FALSE
    require_valid(p, r)
    if action == "reduce":
        _emit({"representation": _rep_json(p, solvers.reduce_to_irreducible(p, r, args.cap))})
        return EXIT_OK
    if action == "irreducible":
        verdict = solvers.is_irreducible(p, r, args.cap)
        witness = None if verdict.witness is None else _rep_json(p, verdict.witness)
        _emit({"irreducible": verdict.irreducible, "strict_reduction": witness})
        return EXIT_OK if verdict.irreducible else EXIT_FALSE
    raise InputError(f"unknown action {action}")


def _parse_sigma(text: str) -> SigmaSpec:
    try:
        n_part, a_part = text.split(":", 1)
        return SigmaSpec(int(n_part), tuple(int(v) for v in a_part.split(",")))
    except ValueError as exc:
        raise InputError(f"bad sigma spec {text!r}: expected N:a1,a2,... ({exc})") from exc


def cmd_gen(args) -> int:
    kind = args.kind
    rep = None
    if kind in ("chain", "antichain", "v", "lambda", "z", "b"):
        p = gen_basic(kind, args.size)
    elif kind == "example-1-4":
        p = gen_example_1_4(args.t)
    elif kind == "sigma":
        p = gen_sigma(_parse_sigma(args.sigma) if args.sigma else FIGURE_2_SIGMA)
    elif kind == "equivalence":
        p, rep = gen_equivalence_example(args.s, args.i)
    else:
        raise InputError(f"unknown kind {kind}")
    text = format_poset(p)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if rep is not None:
        payload = json.dumps(_rep_json(p, rep), indent=2)
        if args.rep_output:
            Path(args.rep_output).write_text(payload + "\n", encoding="utf-8")
        else:
            print("# representation", file=sys.stderr)
            print(payload, file=sys.stderr)
    return EXIT_OK


def poset_file_name(p: Poset) -> str:
    digest = hashlib.sha256(repr(canonical_form(p)).encode()).hexdigest()[:16]
    return f"{p.n}-{digest}.poset"


def cmd_enumerate(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    count = 0
    for p in enumerate_posets(args.n):
        (out / poset_file_name(p)).write_text(format_poset(p), encoding="utf-8")
        count += 1
    _emit({"n": args.n, "count": count, "directory": str(out)})
    return EXIT_OK


def cmd_verify(args) -> int:
    config = VerifyConfig(args.max_n, args.sample_n6, args.seed, args.time_budget)

    def progress(c):
        if not args.json:
            line = f"{c.name:<26} {c.status:<12} passed={c.passed} failed={c.failed} inconclusive={c.inconclusive}"
            if c.failure:
                line += f"  first failure: {c.failure}"
            print(line, flush=True)

    report = run_verify(config, progress)
    if args.json:
        print(json.dumps(report.as_dict(), indent=2))
    else:
        print(f"posets checked: {report.posets_checked}; overall: {report.status}")
        if args.summary:
            Path(args.summary).write_text(json.dumps(report.as_dict(), indent=2) + "\n", encoding="utf-8")
    return {"pass": EXIT_OK, "fail": EXIT_FALSE, "inconclusive": EXIT_INCONCLUSIVE}[report.status]


def _quote(s: str) -> str:
    return '"{}"'.format(s.replace("\\", "\\\\").replace('"', r"\""))


def hasse_dot(p: Poset, r: Representation | None = None) -> str:
    """DOT text of the Hasse diagram, bottom to top, one rank per height."""
    lines = ["digraph poset {", "  rankdir=BT;", "  node [shape=box];"]
    for x in range(p.n):
        label = p.labels[x]
        if r is not None:
            label += " {" + ",".join(sorted(r.label_set(x), key=_sort_key)) + "}"
        lines.append(f"  {_quote(p.labels[x])} [label={_quote(label)}];")
    ranks: dict[int, list[int]] = {}
    for x in range(p.n):
        ranks.setdefault(p.height_of(x), []).append(x)
    for h in sorted(ranks):
        names = " ".join(_quote(p.labels[x]) + ";" for x in ranks[h])
        lines.append(f"  {{ rank=same; {names} }}")
    for x, y in sorted(covers(p)):
        lines.append(f"  {_quote(p.labels[x])} -> {_quote(p.labels[y])};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _sort_key(a: str):
    return (0, int(a), a) if a.isdigit() else (1, 0, a)


def cmd_dot(args) -> int:
    p = _load_poset(args.file)
    r = None
    if args.rep:
        r = _load_rep(p, args.rep)
        require_valid(p, r)
    sys.stdout.write(hasse_dot(p, r))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="poset-cube", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=None,
                        help="largest poset for exhaustive search (default $POSET_CUBE_CAP or 8)")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("params", parents=[common], help="cube height, 2-dimension, cube width and iir")
    sp.add_argument("file")
    sp.add_argument("--method", choices=("auto", "brute", "decompose"), default="auto")
    sp.add_argument("--witness", action="store_true", help="print a witness representation per parameter")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_params)

    sp = sub.add_parser("check", parents=[common], help="test a property or class; exit 0 if it holds, 1 if not")
    sp.add_argument("file")
    sp.add_argument("--property", "-p", required=True, choices=sorted(CLASS_CHECKS))
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("decompose", parents=[common], help="block or component decomposition")
    sp.add_argument("file")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--blocks", action="store_true", help="vertical blocks (default)")
    g.add_argument("--components", action="store_true")
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("rep", parents=[common], help="work with inclusion representations")
    sp.add_argument("action", choices=("canonical", "validate", "reduce", "irreducible", "max-irreducible"))
    sp.add_argument("file")
    sp.add_argument("rep", nargs="?", help="representation JSON file")
    sp.set_defaults(func=cmd_rep)

    sp = sub.add_parser("gen", parents=[common], help="write a named poset in the poset v1 format")
    sp.add_argument("kind", choices=("chain", "antichain", "v", "lambda", "z", "b",
                                     "example-1-4", "sigma", "equivalence"))
    sp.add_argument("--size", type=int, default=1, help="size for chain, antichain and b")
    sp.add_argument("-t", type=int, default=3, help="parameter of example-1-4")
    sp.add_argument("--sigma", help="sigma spec N:a1,a2,... (default: the 20-element instance)")
    sp.add_argument("-s", type=int, default=4, help="s for the equivalence example")
    sp.add_argument("-i", type=int, default=3, help="i for the equivalence example")
    sp.add_argument("-o", "--output")
    sp.add_argument("--rep-output", help="where to write the equivalence example's representation")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("enumerate", parents=[common], help="one file per isomorphism type of n-element posets")
    sp.add_argument("n", type=int)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("verify", parents=[common], help="run the exhaustive invariant suite")
    sp.add_argument("--max-n", type=int, default=5)
    sp.add_argument("--sample-n6", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--time-budget", type=float, default=None, help="seconds per checked item")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--summary", help="also write the JSON summary to this file")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("dot", parents=[common], help="Hasse diagram in DOT")
    sp.add_argument("file")
    sp.add_argument("rep", nargs="?", help="annotate nodes with the sets of this representation")
    sp.set_defaults(func=cmd_dot)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except solvers.CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, PosetError, InvalidRepresentation, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
