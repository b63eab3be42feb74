"""Built-in small categories and generators used by tests, docs and the CLI."""

from __future__ import annotations

import random
from typing import Mapping

from .arrows import terminal_category
from .core import (
    FiniteCategory,
    ObjId,
    chain_category,
    discrete_category,
    empty_category,
    make_category,
    make_poset_category,
    validate_category,
)
from .errors import BoundaryMismatch
from .functors import Functor, NatTrans

ONE = terminal_category()
TWO = make_poset_category(["0", "1"], lambda a, b: a <= b, name="2", arrow_name=lambda a, b: "e")
THREE = chain_category(3)
TWO_D = discrete_category("2_D", ["a1", "a2"])
EMPTY = empty_category("0")

_DIAMOND_ORDER = {("bot", "a"), ("bot", "b"), ("bot", "top"), ("a", "top"), ("b", "top")}
DIAMOND = make_poset_category(
    ["bot", "a", "b", "top"],
    lambda x, y: x == y or (x, y) in _DIAMOND_ORDER,
    name="Diamond",
)

# Index shape for equalizers, and a target in which the two arrows have no equalizer.
PARALLEL = make_category("Par", ["s", "t"], {"u": ("s", "t"), "v": ("s", "t")})
PARALLEL_TARGET = make_category("ParC", ["a", "b"], {"f": ("a", "b"), "g": ("a", "b")})

INDEX_CATEGORIES = {"1": ONE, "2": TWO, "2_D": TWO_D}


def thin_functor(src: FiniteCategory, dst: FiniteCategory, obj_map: Mapping[ObjId, ObjId],
                 name: str = "F") -> Functor:
    """Functor into a thin category, arrows forced by the object map."""
    arr = {}
    for f in src.arrows:
        hom = dst.hom(obj_map[src.dom[f]], obj_map[src.cod[f]])
        if len(hom) != 1:
            raise BoundaryMismatch(f"{name}: no unique image for {f} in {dst.name}")
        arr[f] = hom[0]
    return Functor(src, dst, dict(obj_map), arr, name=name)


def thin_nat(F: Functor, G: Functor, name: str = "tau") -> NatTrans:
    """The unique transformation ``F => G`` into a thin category, if the order allows it."""
    comps = {}
    for a in F.src.objects:
        hom = F.dst.hom(F.ob(a), G.ob(a))
        if len(hom) != 1:
            raise BoundaryMismatch(f"{name}: no arrow {F.ob(a)} -> {G.ob(a)}")
        comps[a] = hom[0]
    return NatTrans(F, G, comps, name=name)


def galois_pair() -> tuple[Functor, Functor]:
    """``F: 2 -> 3`` (0->0, 1->2) left adjoint to ``G: 3 -> 2`` (0,1->0, 2->1)."""
    F = thin_functor(TWO, THREE, {"0": "0", "1": "2"}, name="F")
    G = thin_functor(THREE, TWO, {"0": "0", "1": "0", "2": "1"}, name="G")
    return F, G


def inclusion_two_three() -> Functor:
    return thin_functor(TWO, THREE, {"0": "0", "1": "1"}, name="incl")


def pick(C: FiniteCategory, a: ObjId) -> Functor:
    """The functor ``1 -> C`` picking object ``a``."""
    return Functor(ONE, C, {"pt": a}, {"id_pt": C.id_of[a]}, name=f"pick_{a}")


def cyclic_monoid(n: int, name: str | None = None) -> FiniteCategory:
    """One-object category of the cyclic group of order ``n``."""
    arrows = {f"r{i}": ("pt", "pt") for i in range(1, n)}

    def el(i: int) -> str:
        return "id_pt" if i % n == 0 else f"r{i % n}"

    table = {(el(i), el(j)): el(i + j) for i in range(n) for j in range(n)}
    return make_category(name or f"Z{n}", ["pt"], arrows, table)


def truncated_monoid(n: int, name: str | None = None) -> FiniteCategory:
    """One object, arrows ``0..n`` composing by truncated addition."""
    arrows = {f"t{i}": ("pt", "pt") for i in range(1, n + 1)}

    def el(i: int) -> str:
        return "id_pt" if i == 0 else f"t{min(i, n)}"

    table = {(el(i), el(j)): el(i + j) for i in range(n + 1) for j in range(n + 1)}
    return make_category(name or f"Trunc{n}", ["pt"], arrows, table)


def free_dag_category(edges: Mapping[str, tuple[str, str]], objects, name: str = "Free") -> FiniteCategory:
    """Path category of an acyclic graph; arrows are nonempty edge paths."""
    out: dict[str, list[str]] = {}
    for e, (a, _) in sorted(edges.items()):
        out.setdefault(a, []).append(e)
    paths: dict[str, tuple[str, str, tuple[str, ...]]] = {}
    frontier = [((e,), a, b) for e, (a, b) in sorted(edges.items())]
    while frontier:
        nxt = []
        for path, a, b in frontier:
            paths["p_" + "_".join(path)] = (a, b, path)
            for e in out.get(b, []):
                nxt.append((path + (e,), a, edges[e][1]))
        frontier = nxt
    by_path = {p[2]: name_ for name_, p in paths.items()}
    table = {}
    for f, (a, b, p) in paths.items():
        for g, (c, d, q) in paths.items():
            if b == c:
                table[(f, g)] = by_path[p + q]
    return make_category(name, objects, {f: (a, b) for f, (a, b, _) in paths.items()}, table)


def disjoint_union(left: FiniteCategory, right: FiniteCategory, name: str | None = None) -> FiniteCategory:
    def rename(cat: FiniteCategory, tag: str):
        ob = {a: f"{tag}{a}" for a in cat.objects}
        ids = set(cat.id_of.values())
        ar = {f: (f"id_{ob[cat.dom[f]]}" if f in ids else f"{tag}{f}") for f in cat.arrows}
        arrows = {ar[f]: (ob[cat.dom[f]], ob[cat.cod[f]]) for f in cat.arrows if f not in ids}
        table = {(ar[f], ar[g]): ar[h] for (f, g), h in cat.comp.items()}
        return list(ob.values()), arrows, table

    lo, la, lt = rename(left, "l")
    ro, ra, rt = rename(right, "r")
    return make_category(name or f"({left.name}+{right.name})", lo + ro, {**la, **ra}, {**lt, **rt})


def random_poset(rng: random.Random, size: int, density: float, name: str) -> FiniteCategory:
    elems = [str(i) for i in range(size)]
    rel = {(a, a) for a in elems}
    for i in range(size):
        for j in range(i + 1, size):
            if rng.random() < density:
                rel.add((elems[i], elems[j]))
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            for c, d in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    return make_poset_category(elems, rel, name=name)


def random_category(rng: random.Random, max_objects: int = 6, max_arrows: int = 20,
                    name: str = "R") -> FiniteCategory:
    """Draw a valid finite category within the size bounds.

    Mixes thin categories, path categories of acyclic graphs (with parallel
    edges), one-object monoids and disjoint unions of these.
    """
    while True:
        kind = rng.choice(["poset", "free", "monoid", "union", "discrete"])
        if kind == "poset":
            cat = random_poset(rng, rng.randint(1, max_objects), rng.random(), name)
        elif kind == "free":
            n = rng.randint(2, max_objects)
            objs = [f"o{i}" for i in range(n)]
            edges = {}
            for k in range(rng.randint(1, 5)):
                i = rng.randrange(n - 1)
                j = rng.randrange(i + 1, n)
                edges[f"x{k}"] = (objs[i], objs[j])
            cat = free_dag_category(edges, objs, name)
        elif kind == "monoid":
            n = rng.randint(1, 6)
            cat = cyclic_monoid(n, name) if rng.random() < 0.5 else truncated_monoid(n, name)
        elif kind == "discrete":
            cat = discrete_category(name, [f"d{i}" for i in range(rng.randint(0, max_objects))])
        else:
            left = random_poset(rng, rng.randint(1, 3), rng.random(), "L")
            right = cyclic_monoid(rng.randint(1, 4)) if rng.random() < 0.5 else \
                random_poset(rng, rng.randint(1, 3), rng.random(), "R")
            cat = disjoint_union(left, right, name)
        if len(cat.objects) <= max_objects and len(cat.arrows) <= max_arrows:
            assert validate_category(cat).ok, kind
            return cat
