"""Command-line driver.

Exit status: 0 success, 1 validation or domain failure, 2 usage error,
3 size budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__
from .arrows import LevelTower, arrow_category, arrow_label, comma_lift_functor, comma_lift_nat, leaf_count, peano
from .core import FiniteCategory, budget, validate_category
from .dot import emit_dot
from .dsl import Workspace, parse, serialize, serialize_category
from .errors import CommaForgeError, SizeBudgetExceeded
from .fixtures import INDEX_CATEGORIES
from .functors import check_iso, validate_functor, validate_nat_trans
from .propagation import (
    CSElement,
    PropagationCase,
    base_concept,
    cs_act,
    equivalence_level_two,
    general_diagonal,
    is_diagonal,
    propagate_functor,
    propagate_nat,
)
from .universal import (
    adjunction_from_order,
    check_adjunction,
    check_limit,
    colimit,
    lift_adjunction,
    limit,
    propagate_limit,
)

EXIT_OK, EXIT_FAILURE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class Outcome:
    """What a command reports: a JSON-ready document, human lines and a pass flag."""

    def __init__(self, doc: dict[str, Any], lines: list[str], ok: bool = True):
        self.doc = doc
        self.lines = lines
        self.ok = ok


def plural(n: int, word: str) -> str:
    return f"{n} {word}" if n == 1 else f"{n} {word}s"


def size_line(cat: FiniteCategory) -> str:
    return f"{plural(len(cat.objects), 'object')}, {plural(len(cat.arrows), 'arrow')}"


def size_doc(cat: FiniteCategory) -> dict[str, Any]:
    return {"name": cat.name, "objects": len(cat.objects), "arrows": len(cat.arrows)}


def load(path: str) -> Workspace:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file: {path}")
    return parse(p.read_text(encoding="utf-8"))


def pick(table: dict, name: str | None, kind: str):
    if name is None:
        if not table:
            raise UsageError(f"the document defines no {kind}")
        return next(iter(table.values()))
    if name not in table:
        raise UsageError(f"no {kind} named {name!r}")
    return table[name]


# -- commands ---------------------------------------------------------------------------


def cmd_validate(args) -> Outcome:
    ws = load(args.file)
    doc = {
        "categories": [dict(size_doc(c), name=k) for k, c in ws.categories.items()],
        "functors": list(ws.functors),
        "nats": list(ws.nats),
        "adjunctions": list(ws.adjunctions),
        "towers": list(ws.towers),
        "valid": True,
    }
    lines = [f"category {k}: {size_line(c)}" for k, c in ws.categories.items()]
    lines += [f"functor {k}: {F.src.name} -> {F.dst.name}" for k, F in ws.functors.items()]
    lines += [f"nat {k}: {t.F.name} => {t.G.name}" for k, t in ws.nats.items()]
    lines += [f"adjunction {k}: {a.F.name} -| {a.G.name}" for k, a in ws.adjunctions.items()]
    lines += [f"tower {k}: over {t.base.name}" for k, t in ws.towers.items()]
    lines.append("valid")
    return Outcome(doc, lines)


def cmd_lift(args) -> Outcome:
    ws = load(args.file)
    if args.functor:
        F = comma_lift_functor(pick(ws.functors, args.functor, "functor"))
        rep = validate_functor(F)
        doc = {"functor": args.functor, "src": size_doc(F.src), "dst": size_doc(F.dst), "valid": rep.ok}
        return Outcome(doc, [f"lifted {args.functor}: {F.src.name} -> {F.dst.name}",
                             "valid" if rep.ok else f"invalid: {rep.violations[0]}"], rep.ok)
    if args.nat:
        tau = comma_lift_nat(pick(ws.nats, args.nat, "nat"))
        rep = validate_nat_trans(tau)
        doc = {"nat": args.nat, "components": len(tau.components), "valid": rep.ok}
        return Outcome(doc, [f"lifted {args.nat}: {len(tau.components)} components",
                             "valid" if rep.ok else f"invalid: {rep.violations[0]}"], rep.ok)
    cat = arrow_category(pick(ws.categories, args.category, "category"))
    rep = validate_category(cat)
    lines = [size_line(cat)]
    if args.emit:
        lines.append(serialize_category(cat))
    return Outcome(dict(size_doc(cat), valid=rep.ok), lines, rep.ok)


def cmd_level(args) -> Outcome:
    ws = load(args.file)
    cat = LevelTower(pick(ws.categories, args.category, "category")).level(args.n)
    return Outcome(dict(size_doc(cat), level=args.n), [size_line(cat)])


def peano_doc(n: int) -> tuple[dict[str, Any], str]:
    cat = peano(n)
    doc: dict[str, Any] = {"n": n, "objects": len(cat.objects), "arrows": len(cat.arrows)}
    line = size_line(cat)
    if cat.arrows:
        doc["leaf_count"] = leaf_count(arrow_label(cat, cat.arrows[0]))
        line += f", leaf-count {doc['leaf_count']}"
    return doc, line


def cmd_peano(args) -> Outcome:
    doc, line = peano_doc(args.n)
    return Outcome(doc, [line])


def cmd_naturals_report(args) -> Outcome:
    rows = [peano_doc(n) for n in range(args.max + 1)]
    return Outcome({"naturals": [d for d, _ in rows]}, [f"{d['n']}: {line}" for d, line in rows])


def _limit_outcome(args, co: bool) -> Outcome:
    ws = load(args.file)
    diagram = pick(ws.functors, args.diagram, "functor")
    if co:
        cert = colimit(diagram)
    elif args.level > 1:
        cert = propagate_limit(diagram, args.level)
    else:
        cert = limit(diagram)
    kind = "colimit" if co else "limit"
    if cert is None:
        return Outcome({"diagram": diagram.name, kind: None}, [f"no {kind}"])
    rep = check_limit(cert)
    doc = {
        "diagram": diagram.name,
        kind: {"apex": cert.apex, "legs": dict(cert.cone.legs), "mediators": len(cert.mediators)},
        "certified": rep.ok,
    }
    lines = [f"{kind} apex {cert.apex}"]
    lines += [f"  leg {a}: {x}" for a, x in cert.cone.legs]
    lines.append("certified" if rep.ok else f"not certified: {rep.violations[0]}")
    return Outcome(doc, lines, rep.ok)


def cmd_limit(args) -> Outcome:
    return _limit_outcome(args, co=False)


def cmd_colimit(args) -> Outcome:
    return _limit_outcome(args, co=True)


def _adjunction(ws: Workspace, args):
    if args.left or args.right:
        if not (args.left and args.right):
            raise UsageError("--left and --right go together")
        F = pick(ws.functors, args.left, "functor")
        G = pick(ws.functors, args.right, "functor")
        return adjunction_from_order(F, G, name=f"{args.left}-|{args.right}")
    return pick(ws.adjunctions, args.adjunction, "adjunction")


def _adjunction_outcome(adj, level: int) -> Outcome:
    rep = check_adjunction(adj)
    doc = {"adjunction": adj.name, "level": level, "ok": rep.ok,
           "violations": sorted({v.law for v in rep.violations})}
    line = f"level {level}: {adj.F.name} -| {adj.G.name} " + ("ok" if rep.ok else f"fails {rep.violations[0]}")
    return Outcome(doc, [line], rep.ok)


def cmd_adjoint_check(args) -> Outcome:
    ws = load(args.file)
    return _adjunction_outcome(_adjunction(ws, args), 1)


def cmd_lift_adjunction(args) -> Outcome:
    ws = load(args.file)
    adj = _adjunction(ws, args)
    reports = [_adjunction_outcome(adj, 1)]
    for k in range(args.times):
        adj = lift_adjunction(adj)
        reports.append(_adjunction_outcome(adj, k + 2))
    return Outcome({"levels": [r.doc for r in reports]}, [r.lines[0] for r in reports],
                   all(r.ok for r in reports))


def _case(args) -> PropagationCase:
    index = INDEX_CATEGORIES[args.index] if args.index else None
    return PropagationCase(args.case, index, index)


def cmd_propagate(args) -> Outcome:
    if args.diagonal:
        ws = load(args.file)
        D = pick(ws.categories, args.diagonal, "category")
        J = INDEX_CATEGORIES[args.index or "2"]
        F = propagate_functor(general_diagonal(D, J, 1), PropagationCase("ascending", J), args.n)
        rep = validate_functor(F) + is_diagonal(F)
        doc = {"diagonal": D.name, "index": J.name, "level": args.n, "src": size_doc(F.src),
               "dst": size_doc(F.dst), "ok": rep.ok}
        return Outcome(doc, [f"level {args.n}: {F.src.name} -> {F.dst.name}",
                             "diagonal property holds" if rep.ok else f"fails {rep.violations[0]}"], rep.ok)
    ws = load(args.file)
    case = _case(args)
    if args.nat:
        tau = propagate_nat(pick(ws.nats, args.nat, "nat"), case, args.n)
        doc = {"nat": args.nat, "case": case.kind, "level": args.n, "src": size_doc(tau.src),
               "dst": size_doc(tau.dst), "ok": True}
        return Outcome(doc, [f"level {args.n}: {tau.F.name} => {tau.G.name}", "natural"])
    F = propagate_functor(pick(ws.functors, args.functor, "functor"), case, args.n)
    doc = {"functor": F.name, "case": case.kind, "level": args.n, "src": size_doc(F.src),
           "dst": size_doc(F.dst), "ok": True}
    return Outcome(doc, [f"level {args.n}: {F.src.name} -> {F.dst.name}", "functorial"])


def cmd_cs_act(args) -> Outcome:
    ws = load(args.file)
    if args.functor:
        x = base_concept(pick(ws.functors, args.functor, "functor"))
    elif args.nat:
        x = base_concept(pick(ws.nats, args.nat, "nat"))
    else:
        x = base_concept(pick(ws.categories, args.category, "category"))
    trail = []
    for n in args.g:
        x = cs_act(CSElement(n), x)
        trail.append({"g": n, "level": x.level})
    doc = {"kind": x.kind, "level": x.level, "steps": trail}
    lines = [f"g_{s['g']}: level {s['level']}" for s in trail]
    if x.kind == "category":
        doc["size"] = size_doc(x.payload)
        lines.append(size_line(x.payload))
    return Outcome(doc, lines)


def cmd_iso_2(args) -> Outcome:
    ws = load(args.file)
    C = pick(ws.categories, args.category, "category")
    w = equivalence_level_two(C)
    rep = check_iso(w)
    doc = {"category": C.name, "functor_category": size_doc(w.forward.src),
           "arrow_category": size_doc(w.forward.dst), "iso": rep.ok}
    lines = [f"{w.forward.src.name}: {size_line(w.forward.src)}",
             f"{w.forward.dst.name}: {size_line(w.forward.dst)}",
             "isomorphic" if rep.ok else f"not isomorphic: {rep.violations[0]}"]
    return Outcome(doc, lines, rep.ok)


def cmd_dot(args) -> Outcome:
    ws = load(args.file)
    cat = LevelTower(pick(ws.categories, args.category, "category")).level(args.level)
    text = emit_dot(cat, identities=args.identities)
    return Outcome({"dot": text}, [text.rstrip("\n")])


def cmd_fmt(args) -> Outcome:
    text = serialize(load(args.file))
    return Outcome({"text": text}, [text.rstrip("\n")] if text else [])


# -- argument parsing ---------------------------------------------------------------------


def _common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--budget", type=int, default=default, metavar="ARROWS",
                        help="cap on the arrows of any constructed category")
    parser.add_argument("--json", action="store_true", default=argparse.SUPPRESS if suppress else False,
                        help="print a machine-readable document")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="commaforge", description="Finite categories and their arrow-category tower.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def command(name: str, handler: Callable, help: str, file: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        _common(p, suppress=True)
        if file:
            p.add_argument("file", help=".cat document")
        p.set_defaults(handler=handler)
        return p

    p = command("validate", cmd_validate, "parse and validate a document")

    p = command("lift", cmd_lift, "arrow category of a category, or lift a functor or transformation")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--category")
    group.add_argument("--functor")
    group.add_argument("--nat")
    p.add_argument("--emit", action="store_true", help="also print the lifted category as a document")

    p = command("level", cmd_level, "size of level n of the tower")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--category")

    p = command("peano", cmd_peano, "the categorial natural number n", file=False)
    p.add_argument("--n", type=int, required=True)

    p = command("naturals-report", cmd_naturals_report, "table of the categorial naturals 0..max", file=False)
    p.add_argument("--max", type=int, default=5)

    for name, handler in (("limit", cmd_limit), ("colimit", cmd_colimit)):
        p = command(name, handler, f"certified {name} of a diagram functor")
        p.add_argument("--diagram", help="functor name (defaults to the first functor)")
        if name == "limit":
            p.add_argument("--level", type=int, default=1, help="propagate the limit to this level")
        else:
            p.set_defaults(level=1)

    for name, handler in (("adjoint-check", cmd_adjoint_check), ("lift-adjunction", cmd_lift_adjunction)):
        p = command(name, handler, "check an adjunction" if name == "adjoint-check" else "lift an adjunction")
        p.add_argument("--adjunction")
        p.add_argument("--left", help="left adjoint; unit and counit come from the order")
        p.add_argument("--right", help="right adjoint")
        if name == "lift-adjunction":
            p.add_argument("--times", type=int, default=1)

    p = command("propagate", cmd_propagate, "comma-propagate a functor or transformation")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--functor")
    group.add_argument("--nat")
    group.add_argument("--diagonal", metavar="CATEGORY", help="propagate the general diagonal of CATEGORY")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--case", choices=["basic", "descending", "ascending", "balanced"], default="basic")
    p.add_argument("--index", choices=sorted(INDEX_CATEGORIES), help="index category J")

    p = command("cs-act", cmd_cs_act, "shift a concept along the level tower")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--category")
    group.add_argument("--functor")
    group.add_argument("--nat")
    p.add_argument("--g", type=int, action="append", required=True,
                   help="shift by this many levels; repeat to act in sequence")

    p = command("iso-2", cmd_iso_2, "check C^2 against the arrow category")
    p.add_argument("--category")

    p = command("dot", cmd_dot, "Graphviz rendering of a category")
    p.add_argument("--category")
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--identities", action="store_true", help="draw identity loops")

    command("fmt", cmd_fmt, "print the canonical form of a document")
    return parser


def _emit(outcome: Outcome, as_json: bool) -> None:
    if as_json:
        print(json.dumps(outcome.doc, sort_keys=True, indent=2, ensure_ascii=False))
    else:
        for line in outcome.lines:
            print(line)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    as_json = bool(getattr(args, "json", False))
    try:
        for field in ("n", "max", "times", "level"):
            if getattr(args, field, 0) is not None and getattr(args, field, 0) < 0:
                raise UsageError(f"--{field} must be nonnegative")
        if getattr(args, "command", "") in ("level", "propagate", "dot") and \
                (getattr(args, "n", 1) < 1 or getattr(args, "level", 1) < 1):
            raise UsageError("levels are numbered from 1")
        with budget(arrows=args.budget):
            outcome = args.handler(args)
    except UsageError as exc:
        print(f"commaforge: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SizeBudgetExceeded as exc:
        print(f"commaforge: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CommaForgeError as exc:
        print(f"commaforge: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    _emit(outcome, as_json)
    return EXIT_OK if outcome.ok else EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
