import random

import pytest
from hypothesis import given, strategies as st

from commaforge.arrows import arrow_category
from commaforge.core import categories_equal
from commaforge.dot import emit_dot
from commaforge.dsl import SourceSpan, Workspace, parse, quote, serialize, tokenize
from commaforge.errors import DSLError, DSLSyntaxError, UnknownReference, ValidationFailure
from commaforge.fixtures import DIAMOND, ONE, THREE, TWO, random_category

from corpus import CAT_FILES, PATHS, Z3, functor_corpus


def with_plain_identities(C):
    """``C`` with every identity renamed to ``id_<obj>``, as the text format spells it."""
    from commaforge.core import make_category

    ren = {C.id_of[a]: f"id_{a}" for a in C.objects}
    r = lambda f: ren.get(f, f)
    arrows = {f: (C.dom[f], C.cod[f]) for f in C.arrows if f not in ren}
    comp = {(r(f), r(g)): r(h) for (f, g), h in C.comp.items()}
    return make_category(C.name, C.objects, arrows, comp)


def read(path):
    return path.read_text(encoding="utf-8")


class TestTokenizer:
    def test_spans(self):
        toks = tokenize("category A {\n  objects: x;\n}")
        assert [t.text for t in toks[:4]] == ["category", "A", "{", "objects"]
        assert toks[3].span == SourceSpan(2, 3, 7)
        assert toks[-1].kind == "eof"

    def test_comments_and_strings(self):
        toks = tokenize('// hello\n"J(f)" |-> x')
        assert [(t.kind, t.text) for t in toks[:3]] == [("word", "J(f)"), ("punct", "|->"), ("word", "x")]

    def test_bad_character(self):
        with pytest.raises(DSLSyntaxError) as err:
            tokenize("category A { objects: x# }")
        assert err.value.span.column == 24
        assert str(err.value).startswith("1:24: ")


class TestParse:
    def test_minimal(self):
        ws = parse("category One { objects: x }")
        C = ws.categories["One"]
        assert C.objects == ("x",) and C.arrows == ("id_x",)

    def test_fixture_one(self):
        ws = parse(read(CAT_FILES[0].parent / "one.cat"))
        assert ws.categories["One"].objects == ("x",)
        assert ws.categories["One"].arrows == ("id_x",)

    def test_walking_arrow(self):
        ws = parse("category Two { objects: 0, 1; arrows: e: 0 -> 1 }")
        C = ws.categories["Two"]
        assert C.hom("0", "1") == ("e",)

    def test_omitted_and_trailing_sections(self):
        ws = parse("category A { ; objects: x, y; ; }")
        assert ws.categories["A"].objects == ("x", "y")

    def test_explicit_composition(self):
        text = """category M { objects: pt;
          arrows: r1: pt -> pt, r2: pt -> pt;
          compose: r1 . r1 = r2, r1 . r2 = id_pt, r2 . r1 = id_pt, r2 . r2 = r1 }"""
        assert categories_equal(parse(text).categories["M"], Z3)

    def test_closure_failure(self):
        text = "category C { objects: a; arrows: f: a -> a }"
        with pytest.raises(ValidationFailure) as err:
            parse(text)
        assert err.value.law == "closure"
        assert err.value.span.line == 1

    def test_duplicate_object(self):
        with pytest.raises(ValidationFailure) as err:
            parse("category C { objects: a, b, a }")
        assert err.value.law == "unique ids"
        assert err.value.span.column == 29

    def test_duplicate_name(self):
        with pytest.raises(ValidationFailure) as err:
            parse("category C { objects: a }\ncategory C { objects: b }")
        assert err.value.law == "unique names"
        assert err.value.span.line == 2

    def test_unknown_object(self):
        with pytest.raises(UnknownReference) as err:
            parse("category C {\n  objects: a;\n  arrows: f: a -> b;\n}")
        assert err.value.span == SourceSpan(3, 19, 1)

    def test_unknown_category_in_functor(self):
        with pytest.raises(UnknownReference) as err:
            parse("category A { objects: x }\nfunctor F: A -> B { obj x |-> x }")
        assert err.value.span.line == 2 and "B" in str(err.value)

    def test_functor_law_failure(self):
        text = "category A { objects: x, y; arrows: f: x -> y }\nfunctor F: A -> A { obj x |-> y, y |-> x }"
        with pytest.raises(ValidationFailure) as err:
            parse(text)
        assert err.value.law == "totality"

    def test_forced_arrows_are_filled(self):
        text = read(CAT_FILES[0].parent / "galois.cat")
        ws = parse(text)
        F = ws.functors["F"]
        assert F.ar("e") == "e02"
        from commaforge.functors import identity_functor

        assert ws.functors["GF"] == identity_functor(ws.categories["Two"])

    @pytest.mark.parametrize("text, where", [
        ("category", (1, 9)),
        ("category A objects: x }", (1, 12)),
        ("category A { objects x }", (1, 22)),
        ("category A { colors: x }", (1, 14)),
        ("widget A {}", (1, 1)),
        ("category A { objects: x, }", (1, 26)),
    ])
    def test_syntax_errors(self, text, where):
        with pytest.raises(DSLSyntaxError) as err:
            parse(text)
        assert (err.value.span.line, err.value.span.column) == where

    def test_errors_share_a_base(self):
        assert issubclass(ValidationFailure, DSLError) and issubclass(UnknownReference, DSLError)

    def test_empty_document(self):
        assert parse("").is_empty()
        assert parse("// nothing\n").is_empty()

    def test_unnatural_transformation(self):
        text = """category A { objects: x, y; arrows: f: x -> y }
        functor I: A -> A { obj x |-> x, y |-> y }
        functor K: A -> A { obj x |-> y, y |-> y }
        nat t: I => K { at x: f, y: f }"""
        with pytest.raises(ValidationFailure) as err:
            parse(text)
        assert err.value.law == "typing"

    def test_adjunction_triangles_are_checked(self):
        text = read(CAT_FILES[0].parent / "galois.cat")
        ws = parse(text)
        assert "FG" in ws.adjunctions

    def test_adjunction_missing_field(self):
        text = read(CAT_FILES[0].parent / "galois.cat").replace("  counit: counit;\n", "")
        with pytest.raises(DSLSyntaxError):
            parse(text)

    def test_tower(self):
        ws = parse("category Two { objects: 0, 1; arrows: e: 0 -> 1 }\ntower T: Two;")
        assert len(ws.towers["T"].level(3).arrows) == 20


class TestPrinter:
    def test_one(self):
        ws = parse("category One { objects: x }")
        assert serialize(ws) == "category One {\n  objects: x;\n}\n"

    def test_empty_workspace(self):
        assert serialize(Workspace()) == ""

    def test_quoting(self):
        assert quote("x") == "x"
        assert quote("J(f)") == '"J(f)"'
        assert quote('a"b') == '"a\\"b"'

    @pytest.mark.parametrize("path", CAT_FILES, ids=lambda p: p.name)
    def test_round_trip(self, path):
        ws = parse(read(path))
        assert parse(serialize(ws)) == ws

    @pytest.mark.parametrize("path", CAT_FILES, ids=lambda p: p.name)
    def test_idempotent(self, path):
        once = serialize(parse(read(path)))
        assert serialize(parse(once)) == once

    @pytest.mark.parametrize("C", [ONE, TWO, THREE, DIAMOND, Z3, PATHS], ids=lambda c: c.name)
    def test_round_trip_of_fixtures(self, C):
        ws = Workspace(categories={C.name: C})
        assert categories_equal(parse(serialize(ws)).categories[C.name], C)

    @pytest.mark.parametrize("C", [THREE, Z3], ids=lambda c: c.name)
    def test_arrow_category_round_trips_up_to_identity_names(self, C):
        A = arrow_category(C)
        back = parse(serialize(Workspace(categories={A.name: A}))).categories[A.name]
        assert categories_equal(back, with_plain_identities(A))

    def test_functors_round_trip(self):
        for F in functor_corpus():
            cats = {F.src.name: F.src, F.dst.name: F.dst}
            ws = Workspace(categories=cats, functors={F.name: F})
            assert parse(serialize(ws)).functors[F.name] == F


@given(st.integers(0, 10**6))
def test_random_categories_round_trip(seed):
    C = random_category(random.Random(seed), name="R")
    text = serialize(Workspace(categories={"R": C}))
    assert categories_equal(parse(text).categories["R"], C)
    assert serialize(parse(text)) == text


class TestDot:
    def test_terminal(self):
        out = emit_dot(ONE)
        assert out.count(";") == 1 and "->" not in out

    def test_walking_arrow(self):
        out = emit_dot(TWO)
        assert out.splitlines() == ['digraph "2" {', '  "0";', '  "1";', '  "0" -> "1" [label="e"];', "}"]

    def test_arrow_category(self):
        lines = emit_dot(arrow_category(TWO)).splitlines()
        assert sum(1 for x in lines if "->" not in x and x.endswith(";")) == 3
        assert sum(1 for x in lines if "->" in x) == 3

    def test_identities(self):
        assert emit_dot(TWO, identities=True).count("->") == 3


def test_readme_documents_parse():
    import re
    from pathlib import Path

    readme = Path(__file__).parent.parent / "README.md"
    blocks = re.findall(r"```cat\n(.*?)```", readme.read_text(encoding="utf-8"), re.S)
    assert blocks
    for text in blocks:
        ws = parse(text)
        assert parse(serialize(ws)) == ws
