"""Command-line front end: `kleinsig <command> ...`.

Exit status is 0 on success, 1 on invalid input or usage, 2 when a chain
report finds the signature side above a script's realized cost.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .bounds import (HypothesisError, chain_report, constituent_bound, gordian_lower_bound,
                     theta_unknotting_bound)
from .corpus import run_checks
from .diagram import ColoredDiagram, DiagramError, parse, serialize
from .foam import FoamError, ScriptError, cobordism_ledger, parse_script
from .invariants import compute, constituents, orientation_sweep
from .orientation import (OrientationError, TotalOrientation, enumerate_orientations,
                          parse_orientation, reverse, vertex_types)
from .transform import edge_sum, generate, mirror, vertex_sum

SCHEMA = 1
EXIT_OK, EXIT_INVALID, EXIT_VIOLATION = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


class InputError(Exception):
    """Bad user input, already phrased for the terminal."""


# ---------------------------------------------------------------- output helpers


def _rational(x) -> str:
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        d = x.denominator
        while d % 2 == 0:
            d //= 2
        while d % 5 == 0:
            d //= 5
        if d == 1:
            return f"{float(x):g}"
        return f"{x.numerator}/{x.denominator}"
    if x is None:
        return "-"
    return str(x)


def _json_default(obj):
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator}
    raise TypeError(f"cannot encode {type(obj).__name__}")


def _emit_json(command: str, payload: dict) -> None:
    body = {"schema": SCHEMA, "command": command, **payload}
    sys.stdout.write(json.dumps(body, default=_json_default, ensure_ascii=False, indent=2))
    sys.stdout.write("\n")


def _color_on() -> bool:
    mode = os.environ.get("KLEINSIG_COLOR", "auto").lower()
    if mode == "never":
        return False
    if mode == "always":
        return True
    return sys.stdout.isatty()


def _paint(text: str, code: str) -> str:
    return f"\033[{code}m{text}\033[0m" if _color_on() else text


def _table(headers: list[str], rows: list[list]) -> str:
    cells = [[str(h) for h in headers]] + [[_rational(c) for c in row] for row in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(headers))]
    lines = []
    for i, row in enumerate(cells):
        line = "  ".join(c.rjust(w) if i and c.lstrip("-").replace("/", "").isdigit()
                         else c.ljust(w) for c, w in zip(row, widths))
        lines.append(line.rstrip())
        if i == 0:
            lines[0] = _paint(lines[0], "1")
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- input helpers


def _read(path: str | None) -> tuple[str, str]:
    if path in (None, "-"):
        return sys.stdin.read(), "<stdin>"
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read(), path
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _load(path: str | None) -> ColoredDiagram:
    text, label = _read(path)
    try:
        return parse(text)
    except DiagramError as exc:
        raise InputError(f"{label}: {exc}") from None


def _orient(d: ColoredDiagram, spec: str | None) -> TotalOrientation:
    return parse_orientation(spec or d.orient, d)


def _script(path: str, d: ColoredDiagram):
    text, label = _read(path)
    try:
        return parse_script(text, d)
    except ScriptError as exc:
        raise InputError(f"{label}: {exc}") from None


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(text)


def _with_orientation(d: ColoredDiagram, t: TotalOrientation | None) -> ColoredDiagram:
    return d.with_orient(t.format()) if t is not None else d


# ---------------------------------------------------------------- commands


def cmd_validate(args) -> int:
    d = _load(args.file)
    info = {"file": args.file, "valid": True, "name": d.name, "V": d.vertex_count,
            "crossings": d.crossing_count, "arcs": len(d.colors),
            "edges": len(d.edges)}
    if args.json:
        _emit_json("validate", info)
    else:
        print(f"{args.file}: ok ({info['V']} vertices, {info['crossings']} crossings, "
              f"{info['arcs']} arcs, {info['edges']} edges)")
    return EXIT_OK


_INV_HEADERS = ["orientation", "V", "mu", "lambda", "sigma", "zeta", "beta", "sv", "hamiltonian"]


def _inv_row(t: TotalOrientation, inv) -> list:
    return [t.format(), inv.V, inv.mu, inv.lam, inv.sigma, inv.zeta, inv.beta, inv.sv,
            "yes" if inv.hamiltonian else "no"]


def cmd_invariants(args) -> int:
    d = _load(args.file)
    if args.sweep:
        sweep = orientation_sweep(d)
        if args.json:
            _emit_json("invariants", {
                "name": d.name,
                "rows": [{"orientation": t.format(), **inv.to_json()} for t, inv in sweep.rows],
                "min_abs_sigma": sweep.min_abs_sigma, "max_abs_sigma": sweep.max_abs_sigma})
        else:
            sys.stdout.write(_table(_INV_HEADERS, [_inv_row(t, i) for t, i in sweep.rows]))
            print(f"|sigma| ranges over [{sweep.min_abs_sigma}, {sweep.max_abs_sigma}] "
                  f"across {len(sweep.rows)} orientations")
        return EXIT_OK
    t = _orient(d, args.orient)
    inv = compute(d, t)
    if args.json:
        payload = {"orientation": t.format(), **inv.to_json()}
        payload["constituents"] = {k: {"sigma": b.sigma, "beta": b.beta, "mu": b.mu}
                                   for k, b in constituents(d, t).items()}
        _emit_json("invariants", payload)
    else:
        sys.stdout.write(_table(_INV_HEADERS, [_inv_row(t, inv)]))
    return EXIT_OK


def cmd_bound(args) -> int:
    if args.kind == "theta":
        if len(args.files) != 1:
            raise UsageError("bound theta takes one file")
        d = _load(args.files[0])
        t = _orient(d, args.orient)
        inv = compute(d, t)
        uy, u = theta_unknotting_bound(inv)
        mcu = None
        if inv.hamiltonian:
            mcu = constituent_bound(constituents(d, t))
        if args.json:
            _emit_json("bound theta", {"sigma": inv.sigma, "uY_lower": uy, "u_lower": u,
                                       "constituent_bound": mcu})
        else:
            print(f"u_Y ≥ {_rational(uy)}, u ≥ {u}")
            if mcu is not None:
                print(f"constituent bound: u ≥ {mcu}")
        return EXIT_OK
    if len(args.files) != 2:
        raise UsageError("bound gordian takes two files")
    d1, d2 = _load(args.files[0]), _load(args.files[1])
    i1 = compute(d1, _orient(d1, args.orient))
    i2 = compute(d2, _orient(d2, args.orient2))
    b = gordian_lower_bound(i1, i2)
    if args.json:
        _emit_json("bound gordian", {"sigma": [i1.sigma, i2.sigma], "gordian_lower": b})
    else:
        print(f"d_Y ≥ {_rational(b)}")
    return EXIT_OK


def cmd_chain(args) -> int:
    d1, d2 = _load(args.file1), _load(args.file2)
    t1, t2 = _orient(d1, args.orient), _orient(d2, args.orient2)
    i1, i2 = compute(d1, t1), compute(d2, t2)
    script = _script(args.script, d1) if args.script else None
    parts = constituents(d1, t1)
    rep = chain_report(i1, i2, script, t1, parts)
    if args.json:
        _emit_json("chain", rep.to_json())
    else:
        rows = [["signature side", rep.chain_lines["left"]],
                ["vertex-sum slice term", rep.chain_lines["vertex_sum"]],
                ["seamed term (realized)", rep.chain_lines["seamed"]],
                ["4 x script cost", rep.chain_lines["distance"]]]
        sys.stdout.write(_table(["chain line", "value"], rows))
        print(f"d_Y ≥ {_rational(rep.gordian_bound)}"
              + (f", cost {_rational(rep.cost)}, gap {_rational(rep.gap)}"
                 if rep.cost is not None else ""))
        if rep.theta_bound_uY is not None:
            print(f"u_Y ≥ {_rational(rep.theta_bound_uY)}, u ≥ {rep.theta_bound_u}")
        if rep.mcu_style_bound is not None:
            print(f"constituent bound: {rep.mcu_style_bound}")
        for w in rep.ledger.warnings if rep.ledger else ():
            print(f"warning: {w}", file=sys.stderr)
    if rep.violation:
        print(_paint("FAILURE: chain violation (signature side exceeds 4 x cost)", "31"),
              file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_foam(args) -> int:
    d = _load(args.file)
    t = _orient(d, args.orient)
    rep = cobordism_ledger(_script(args.script, d), t)
    if args.json:
        _emit_json("foam ledger", rep.to_json())
        return EXIT_OK
    f = rep.descriptor
    rows = [["V", rep.V], ["same steps", rep.s], ["mixed steps", rep.m], ["cost", rep.cost],
            ["chi_orb", rep.chi_orb], ["-V/2 - cost", rep.closed_form],
            ["chi(F)", f.chi], ["chi(s(F))", f.chi_s], ["seam circles", f.seam_circles]]
    sys.stdout.write(_table(["quantity", "value"], rows))
    for w in rep.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        g = generate(args.family, args.params)
    except IndexError:
        raise InputError(f"gen {args.family}: missing parameters") from None
    except ValueError as exc:
        raise InputError(f"gen {args.family}: {exc}") from None
    _write(serialize(g.diagram), args.output)
    if args.script:
        if g.script is None:
            raise InputError(f"no bundled script for family {args.family!r}")
        _write(g.script, args.script)
    return EXIT_OK


def _edge_ref(d: ColoredDiagram, ref: str) -> int:
    k = int(ref[1:]) if ref.startswith("e") else int(ref)
    if not 0 <= k < len(d.edges):
        raise InputError(f"no edge {ref}")
    return k


def _opposite_type(d1, v1, t1, d2, v2) -> TotalOrientation:
    """First orientation of d2 whose type at v2 is opposite to t1's type at v1."""
    want = next(v for v in vertex_types(d1, t1) if v.vertex == v1).pattern
    for t2 in enumerate_orientations(d2):
        got = next((v for v in vertex_types(d2, t2) if v.vertex == v2), None)
        if got is None:
            raise InputError(f"no vertex {v2}")
        if all(a != b for a, b in zip(want, got.pattern)):
            return t2
    raise InputError(f"no orientation of the second graph gives vertex {v2} the opposite type")


def cmd_transform(args) -> int:
    op = args.op
    if op in ("mirror", "reverse"):
        if len(args.operands) != 1:
            raise UsageError(f"transform {op} takes one file")
        d = _load(args.operands[0])
        t = _orient(d, args.orient)
        if op == "mirror":
            out, tout = mirror(d, t)
        else:
            out, tout = d, reverse(t)
    else:
        if len(args.operands) != 4:
            raise UsageError(f"transform {op} takes <file1> <ref1> <file2> <ref2>")
        f1, r1, f2, r2 = args.operands
        d1, d2 = _load(f1), _load(f2)
        t1, t2 = _orient(d1, args.orient), _orient(d2, args.orient2)
        try:
            if op == "sum2":
                out, tout = edge_sum(d1, _edge_ref(d1, r1), d2, _edge_ref(d2, r2), t1, t2)
            else:
                v1, v2 = int(r1.lstrip("v")), int(r2.lstrip("v"))
                if not (args.orient2 or d2.orient):
                    t2 = _opposite_type(d1, v1, t1, d2, v2)
                out, tout = vertex_sum(d1, v1, d2, v2, t1, t2)
        except ValueError as exc:
            if isinstance(exc, (OrientationError, DiagramError)):
                raise
            raise InputError(f"transform {op}: {exc}") from None
    _write(serialize(_with_orientation(out, tout)), args.output)
    return EXIT_OK


def cmd_corpus(args) -> int:
    results = run_checks(args.seed)
    if args.json:
        _emit_json("corpus check", {"seed": args.seed, "results": [
            {"criterion": k + 1, "label": r.label, "passed": r.passed, "detail": r.detail}
            for k, r in enumerate(results)]})
    else:
        rows = [[k + 1, _paint("PASS", "32") if r.passed else _paint("FAIL", "31"), r.label,
                 f"{r.seconds:.2f}s", r.detail] for k, r in enumerate(results)]
        sys.stdout.write(_table(["#", "result", "check", "time", "detail"], rows))
    if all(r.passed for r in results):
        return EXIT_OK
    failed = {r.label for r in results if not r.passed}
    return EXIT_VIOLATION if "bound consistency" in failed else EXIT_INVALID


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kleinsig", description="Signature invariants and unknotting bounds "
                                             "for Klein graphs.")
    p.add_argument("--version", action="version", version=f"kleinsig {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, two=False):
        sp.add_argument("--json", action="store_true", help="emit JSON (schema 1)")
        sp.add_argument("--orient", help="total orientation, e.g. 'rb:c0=+ bg:c0=- rg:c0=+'"
                        + (" (first graph)" if two else ""))
        if two:
            sp.add_argument("--orient2", help="total orientation of the second graph")

    sp = sub.add_parser("validate", help="check a .ksg file")
    sp.add_argument("file")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("invariants", help="V, μ, λ, σ, ζ, β, sv of a totally oriented graph")
    sp.add_argument("file", nargs="?", help="input file (default: standard input)")
    common(sp)
    sp.add_argument("--sweep", action="store_true", help="all 2^μ total orientations")
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("bound", help="theta unknotting or Gordian distance lower bounds")
    sp.add_argument("kind", choices=["theta", "gordian"])
    sp.add_argument("files", nargs="+")
    common(sp, two=True)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("chain", help="evaluate the bound chain against a change script")
    sp.add_argument("file1")
    sp.add_argument("file2")
    sp.add_argument("--script", help="crossing-change script from file1 to file2")
    common(sp, two=True)
    sp.set_defaults(func=cmd_chain)

    sp = sub.add_parser("foam", help="foam ledgers for crossing-change scripts")
    sp.add_argument("action", choices=["ledger"])
    sp.add_argument("file")
    sp.add_argument("--script", required=True)
    common(sp)
    sp.set_defaults(func=cmd_foam)

    sp = sub.add_parser("gen", help="generate example graphs (theta-n N, kinoshita P Q R, "
                                    "torus2k K, basic NAME)")
    sp.add_argument("family")
    sp.add_argument("params", nargs="*")
    sp.add_argument("-o", "--output")
    sp.add_argument("--script", help="also write the bundled unknotting script here")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("transform", help="mirror, reverse, edge sum (sum2), vertex sum (sum3)")
    sp.add_argument("op", choices=["mirror", "reverse", "sum2", "sum3"])
    sp.add_argument("operands", nargs="+")
    sp.add_argument("-o", "--output")
    sp.add_argument("--orient")
    sp.add_argument("--orient2")
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("corpus", help="run the property suite over the generator corpus")
    sp.add_argument("action", choices=["check"])
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_corpus)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            parser.print_help(sys.stderr)
            return EXIT_INVALID
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (DiagramError, OrientationError, ScriptError, HypothesisError, FoamError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
