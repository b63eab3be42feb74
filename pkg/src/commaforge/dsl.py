"""The ``.cat`` text format: tokenizer, recursive-descent parser and canonical printer.

Example::

    // the walking arrow
    category Two {
      objects: 0, 1;
      arrows: e: 0 -> 1;
    }

Identities ``id_<obj>`` are implicit.  Composition entries that are forced
(identity composites, or a target hom-set with a single arrow) may be left
out; everything else must be listed as ``g . f = h`` (``g`` after ``f``).
Identifiers that are not plain words can be written as JSON strings.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .arrows import LevelTower
from .core import FiniteCategory, ValidationReport, categories_equal, identity_name, make_category, validate_category
from .errors import DSLSyntaxError, UnknownReference, ValidationFailure
from .functors import Functor, NatTrans, compose_functors, identity_functor, validate_functor, validate_nat_trans
from .universal import Adjunction, check_adjunction


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int


@dataclass(frozen=True)
class Token:
    kind: str  # "word", "punct" or "eof"
    text: str
    span: SourceSpan


_TOKEN = re.compile(
    r"""
    (?P<newline>\n)
  | (?P<space>[ \t\r]+)
  | (?P<comment>//[^\n]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<punct>\|->|->|=>|[{}:;,.=])
  | (?P<word>[A-Za-z0-9_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)
_BARE = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_']*")


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        span = SourceSpan(line, pos - line_start + 1, 1)
        if m is None:
            raise DSLSyntaxError(f"unexpected character {text[pos]!r}", span)
        kind, raw = m.lastgroup, m.group()
        span = SourceSpan(line, pos - line_start + 1, len(raw))
        if kind == "newline":
            line += 1
            line_start = m.end()
        elif kind == "string":
            tokens.append(Token("word", json.loads(raw), span))
        elif kind in ("punct", "word"):
            tokens.append(Token(kind, raw, span))
        pos = m.end()
    tokens.append(Token("eof", "", SourceSpan(line, pos - line_start + 1, 0)))
    return tokens


@dataclass
class Workspace:
    """Named entities in definition order, one namespace per kind."""

    categories: dict[str, FiniteCategory] = field(default_factory=dict)
    functors: dict[str, Functor] = field(default_factory=dict)
    nats: dict[str, NatTrans] = field(default_factory=dict)
    adjunctions: dict[str, Adjunction] = field(default_factory=dict)
    towers: dict[str, LevelTower] = field(default_factory=dict)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Workspace):
            return NotImplemented
        return workspaces_equal(self, other)

    def is_empty(self) -> bool:
        return not (self.categories or self.functors or self.nats or self.adjunctions or self.towers)


def workspaces_equal(a: Workspace, b: Workspace) -> bool:
    """Extensional equality: same names in the same order, equal underlying data."""
    if list(a.categories) != list(b.categories) or list(a.functors) != list(b.functors):
        return False
    if list(a.nats) != list(b.nats) or list(a.adjunctions) != list(b.adjunctions):
        return False
    if list(a.towers) != list(b.towers):
        return False
    if not all(categories_equal(a.categories[k], b.categories[k]) for k in a.categories):
        return False
    if not all(a.functors[k] == b.functors[k] for k in a.functors):
        return False
    if not all(a.nats[k] == b.nats[k] for k in a.nats):
        return False
    for k, x in a.adjunctions.items():
        y = b.adjunctions[k]
        if (x.F, x.G, x.unit, x.counit) != (y.F, y.G, y.unit, y.counit):
            return False
    return all(categories_equal(a.towers[k].base, b.towers[k].base) for k in a.towers)


def _first_failure(report: ValidationReport, span: SourceSpan, entity: str) -> None:
    if not report.ok:
        v = report.violations[0]
        raise ValidationFailure(v.law, tuple(v.witnesses), span, entity)


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.ws = Workspace()

    # -- token plumbing

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind != "eof" and self.tok.text == text and self.tok.kind in ("punct", "word")

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise DSLSyntaxError(f"expected {text!r}, found {self.tok.text or 'end of input'!r}", self.tok.span)
        return self.advance()

    def word(self, what: str = "identifier") -> Token:
        if self.tok.kind != "word":
            raise DSLSyntaxError(f"expected {what}, found {self.tok.text or 'end of input'!r}", self.tok.span)
        return self.advance()

    def listing(self, item):
        """Comma-separated items up to ``;`` or ``}``; may be empty."""
        out = []
        if self.at(";") or self.at("}"):
            return out
        out.append(item())
        while self.at(","):
            self.advance()
            out.append(item())
        return out

    def block(self, section) -> None:
        """``{ section (; section)* [;] }``; sections may be empty."""
        self.expect("{")
        while not self.at("}"):
            if self.at(";"):
                self.advance()
                continue
            section()
            if not self.at("}"):
                self.expect(";")
        self.expect("}")

    # -- lookups

    def lookup(self, table: dict, kind: str, tok: Token):
        if tok.text not in table:
            raise UnknownReference(f"unknown {kind} {tok.text!r}", tok.span)
        return table[tok.text]

    def fresh(self, table: dict, kind: str, tok: Token) -> None:
        if tok.text in table:
            raise ValidationFailure("unique names", (tok.text,), tok.span, f"{kind} {tok.text}")

    # -- statements

    def parse(self) -> Workspace:
        while self.tok.kind != "eof":
            t = self.tok
            handler = {
                "category": self.category,
                "functor": self.functor,
                "nat": self.nat,
                "adjunction": self.adjunction,
                "tower": self.tower,
            }.get(t.text if t.kind == "word" else "")
            if handler is None:
                raise DSLSyntaxError(f"expected a definition, found {t.text!r}", t.span)
            self.advance()
            handler()
        return self.ws

    def category(self) -> None:
        name = self.word("category name")
        self.fresh(self.ws.categories, "category", name)
        objects: list[Token] = []
        arrows: list[tuple[Token, Token, Token]] = []
        compose: list[tuple[Token, Token, Token]] = []

        def arrow_decl():
            f = self.word("arrow name")
            self.expect(":")
            a = self.word("object")
            self.expect("->")
            return f, a, self.word("object")

        def compose_decl():
            g = self.word("arrow")
            self.expect(".")
            f = self.word("arrow")
            self.expect("=")
            return g, f, self.word("arrow")

        def section():
            key = self.word("section name")
            self.expect(":")
            if key.text == "objects":
                objects.extend(self.listing(lambda: self.word("object")))
            elif key.text == "arrows":
                arrows.extend(self.listing(arrow_decl))
            elif key.text == "compose":
                compose.extend(self.listing(compose_decl))
            else:
                raise DSLSyntaxError(f"unknown section {key.text!r}", key.span)

        self.block(section)
        label = f"category {name.text}"
        seen: set[str] = set()
        for o in objects:
            if o.text in seen:
                raise ValidationFailure("unique ids", (o.text,), o.span, label)
            seen.add(o.text)
        identities = {identity_name(o) for o in seen}
        typed: dict[str, tuple[str, str]] = {}
        for f, a, b in arrows:
            if f.text in typed or f.text in identities or f.text in seen:
                raise ValidationFailure("unique ids", (f.text,), f.span, label)
            for end in (a, b):
                if end.text not in seen:
                    raise UnknownReference(f"unknown object {end.text!r} in {label}", end.span)
            typed[f.text] = (a.text, b.text)
        known = set(typed) | identities
        table = {}
        for g, f, h in compose:
            for t in (g, f, h):
                if t.text not in known:
                    raise UnknownReference(f"unknown arrow {t.text!r} in {label}", t.span)
            key = (f.text, g.text)
            if key in table and table[key] != h.text:
                raise ValidationFailure("unique composites", (g.text, f.text), g.span, label)
            table[key] = h.text
        cat = make_category(name.text, [o.text for o in objects], typed, table)
        _first_failure(validate_category(cat), name.span, label)
        self.ws.categories[name.text] = cat

    def functor_ref(self) -> Functor:
        """``NAME (. NAME)*`` or ``id CAT``."""
        t = self.word("functor")
        if t.text == "id" and self.tok.kind == "word":
            return identity_functor(self.lookup(self.ws.categories, "category", self.advance()))
        F = self.lookup(self.ws.functors, "functor", t)
        while self.at("."):
            self.advance()
            nxt = self.word("functor")
            G = self.lookup(self.ws.functors, "functor", nxt)
            if G.dst.name != F.src.name:
                raise ValidationFailure("boundary", (F.name, G.name), nxt.span, "functor composite")
            F = compose_functors(F, G)
        return F

    def functor(self) -> None:
        name = self.word("functor name")
        self.fresh(self.ws.functors, "functor", name)
        label = f"functor {name.text}"
        if self.at("="):
            self.advance()
            F = self.functor_ref()
            if self.at(";"):
                self.advance()
            self.ws.functors[name.text] = Functor(F.src, F.dst, F.obj_map, F.arr_map, name=name.text)
            return
        self.expect(":")
        src = self.lookup(self.ws.categories, "category", self.word("category"))
        self.expect("->")
        dst = self.lookup(self.ws.categories, "category", self.word("category"))
        obj_map: dict[str, str] = {}
        arr_map: dict[str, str] = {}

        def entry(domain: set, codomain: set, kind: str, into: dict):
            x = self.word(kind)
            self.expect("|->")
            y = self.word(kind)
            if x.text not in domain:
                raise UnknownReference(f"unknown {kind} {x.text!r} in {src.name}", x.span)
            if y.text not in codomain:
                raise UnknownReference(f"unknown {kind} {y.text!r} in {dst.name}", y.span)
            into[x.text] = y.text

        def section():
            key = self.word("'obj' or 'arr'")
            if key.text == "obj":
                self.listing(lambda: entry(src.object_set, dst.object_set, "object", obj_map))
            elif key.text == "arr":
                self.listing(lambda: entry(src.arrow_set, dst.arrow_set, "arrow", arr_map))
            else:
                raise DSLSyntaxError(f"unknown section {key.text!r}", key.span)

        self.block(section)
        # identities, and arrows whose target hom-set is a singleton, are forced
        for f in src.arrows:
            if f in arr_map:
                continue
            a, b = src.dom[f], src.cod[f]
            if a in obj_map and b in obj_map:
                if src.is_identity(f):
                    arr_map[f] = dst.id_of[obj_map[a]]
                else:
                    hom = dst.hom(obj_map[a], obj_map[b])
                    if len(hom) == 1:
                        arr_map[f] = hom[0]
        F = Functor(src, dst, obj_map, arr_map, name=name.text)
        _first_failure(validate_functor(F), name.span, label)
        self.ws.functors[name.text] = F

    def nat(self) -> None:
        name = self.word("transformation name")
        self.fresh(self.ws.nats, "nat", name)
        label = f"nat {name.text}"
        self.expect(":")
        F = self.functor_ref()
        self.expect("=>")
        G = self.functor_ref()
        comps: dict[str, str] = {}

        def entry():
            a = self.word("object")
            self.expect(":")
            x = self.word("arrow")
            if a.text not in F.src.object_set:
                raise UnknownReference(f"unknown object {a.text!r} in {F.src.name}", a.span)
            if x.text not in F.dst.arrow_set:
                raise UnknownReference(f"unknown arrow {x.text!r} in {F.dst.name}", x.span)
            comps[a.text] = x.text

        def section():
            key = self.word("'at'")
            if key.text != "at":
                raise DSLSyntaxError(f"unknown section {key.text!r}", key.span)
            self.listing(entry)

        self.block(section)
        tau = NatTrans(F, G, comps, name=name.text)
        _first_failure(validate_nat_trans(tau), name.span, label)
        self.ws.nats[name.text] = tau

    def adjunction(self) -> None:
        name = self.word("adjunction name")
        self.fresh(self.ws.adjunctions, "adjunction", name)
        parts: dict[str, object] = {}
        tables = {"left": (self.ws.functors, "functor"), "right": (self.ws.functors, "functor"),
                  "unit": (self.ws.nats, "nat"), "counit": (self.ws.nats, "nat")}

        def section():
            key = self.word("adjunction field")
            if key.text not in tables:
                raise DSLSyntaxError(f"unknown field {key.text!r}", key.span)
            self.expect(":")
            table, kind = tables[key.text]
            parts[key.text] = self.lookup(table, kind, self.word(kind))

        self.block(section)
        missing = [k for k in tables if k not in parts]
        if missing:
            raise DSLSyntaxError(f"adjunction {name.text} lacks {', '.join(missing)}", name.span)
        adj = Adjunction(parts["left"], parts["right"], parts["unit"], parts["counit"], name.text)
        _first_failure(check_adjunction(adj), name.span, f"adjunction {name.text}")
        self.ws.adjunctions[name.text] = adj

    def tower(self) -> None:
        name = self.word("tower name")
        self.fresh(self.ws.towers, "tower", name)
        self.expect(":")
        base = self.lookup(self.ws.categories, "category", self.word("category"))
        if self.at(";"):
            self.advance()
        self.ws.towers[name.text] = LevelTower(base)


def parse(text: str) -> Workspace:
    """Parse and validate a ``.cat`` document."""
    return _Parser(text).parse()


# -- canonical printing ---------------------------------------------------------------


def quote(x: str) -> str:
    return x if _BARE.fullmatch(x) else json.dumps(x, ensure_ascii=False)


def _joined(items) -> str:
    return ", ".join(items)


def _ref(cat: FiniteCategory, f: str) -> str:
    """Arrow as the text format names it; identities are always ``id_<obj>``."""
    return quote(identity_name(cat.dom[f]) if cat.is_identity(f) else f)


def serialize_category(cat: FiniteCategory) -> str:
    lines = [f"category {quote(cat.name)} {{"]
    if cat.objects:
        lines.append(f"  objects: {_joined(quote(a) for a in cat.objects)};")
    ids = cat.identity_set
    arrows = [f for f in cat.arrows if f not in ids]
    if arrows:
        decls = (f"{quote(f)}: {quote(cat.dom[f])} -> {quote(cat.cod[f])}" for f in arrows)
        lines.append(f"  arrows: {_joined(decls)};")
    entries = sorted((f, g, h) for (f, g), h in cat.comp.items() if f not in ids and g not in ids)
    if entries:
        lines.append(f"  compose: {_joined(f'{quote(g)} . {quote(f)} = {_ref(cat, h)}' for f, g, h in entries)};")
    lines.append("}")
    return "\n".join(lines)


def serialize_functor(F: Functor, name: str | None = None) -> str:
    lines = [f"functor {quote(name or F.name)}: {quote(F.src.name)} -> {quote(F.dst.name)} {{"]
    if F.src.objects:
        lines.append(f"  obj {_joined(f'{quote(a)} |-> {quote(F.ob(a))}' for a in F.src.objects)};")
    arrows = [f for f in F.src.arrows if not F.src.is_identity(f)]
    if arrows:
        lines.append(f"  arr {_joined(f'{quote(f)} |-> {_ref(F.dst, F.ar(f))}' for f in arrows)};")
    lines.append("}")
    return "\n".join(lines)


def functor_expression(F: Functor, ws: Workspace | None = None) -> str:
    """A name, ``id CAT`` or ``G . F`` denoting ``F`` in ``ws``."""
    named = ws.functors if ws is not None else {}
    if named.get(F.name) == F:
        return quote(F.name)
    if F.src.name == F.dst.name and F == identity_functor(F.src):
        return f"id {quote(F.src.name)}"
    for k, G in named.items():
        if G == F:
            return quote(k)
    for k, G in named.items():
        for m, H in named.items():
            if H.dst.name == G.src.name and compose_functors(G, H) == F:
                return f"{quote(k)} . {quote(m)}"
    if ws is None:
        return quote(F.name)
    raise ValueError(f"{F.name} cannot be expressed in this workspace")


def serialize_nat(tau: NatTrans, name: str | None = None, ws: Workspace | None = None) -> str:
    src, dst = functor_expression(tau.F, ws), functor_expression(tau.G, ws)
    lines = [f"nat {quote(name or tau.name)}: {src} => {dst} {{"]
    if tau.src.objects:
        lines.append(f"  at {_joined(f'{quote(a)}: {_ref(tau.dst, tau(a))}' for a in tau.src.objects)};")
    lines.append("}")
    return "\n".join(lines)


def serialize(ws: Workspace) -> str:
    """Canonical text for ``ws``: definition order, sorted ids, one entry per line."""
    blocks = [serialize_category(c) for c in ws.categories.values()]
    blocks += [serialize_functor(F, k) for k, F in ws.functors.items()]
    blocks += [serialize_nat(t, k, ws) for k, t in ws.nats.items()]
    for k, adj in ws.adjunctions.items():
        blocks.append(
            f"adjunction {quote(k)} {{\n  left: {quote(adj.F.name)};\n  right: {quote(adj.G.name)};\n"
            f"  unit: {quote(adj.unit.name)};\n  counit: {quote(adj.counit.name)};\n}}"
        )
    blocks += [f"tower {quote(k)}: {quote(t.base.name)};" for k, t in ws.towers.items()]
    return "\n\n".join(blocks) + ("\n" if blocks else "")
