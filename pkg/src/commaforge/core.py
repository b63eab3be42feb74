"""Finite categories as explicit, validated combinatorial data.

A :class:`FiniteCategory` stores its objects, arrows, typing maps, identities
and a full composition table.  Composition is written in diagrammatic order:
``comp[(f, g)]`` is "f then g", i.e. ``g . f`` in the usual notation.

Ids are plain strings and every enumeration runs in sorted string order, so
every derived construction is reproducible byte for byte.
"""

from __future__ import annotations

import contextlib
import contextvars
import threading
import weakref
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence

from .errors import (
    EndpointMismatch,
    InvalidFactor,
    NotAPartialOrder,
    NotComposable,
    SizeBudgetExceeded,
    UnknownArrow,
    UnknownObject,
)

ObjId = str
ArrId = str
ArrowPath = Sequence[ArrId]

DEFAULT_ARROW_BUDGET = 20_000
DEFAULT_ENUMERATION_BUDGET = 1_000_000

_arrow_budget: contextvars.ContextVar[int] = contextvars.ContextVar(
    "arrow_budget", default=DEFAULT_ARROW_BUDGET
)
_enumeration_budget: contextvars.ContextVar[int] = contextvars.ContextVar(
    "enumeration_budget", default=DEFAULT_ENUMERATION_BUDGET
)


def arrow_budget() -> int:
    return _arrow_budget.get()


def enumeration_budget() -> int:
    return _enumeration_budget.get()


@contextlib.contextmanager
def budget(arrows: int | None = None, enumeration: int | None = None) -> Iterator[None]:
    """Temporarily override the size caps used by the level and functor builders."""
    tokens = []
    if arrows is not None:
        tokens.append((_arrow_budget, _arrow_budget.set(arrows)))
    if enumeration is not None:
        tokens.append((_enumeration_budget, _enumeration_budget.set(enumeration)))
    try:
        yield
    finally:
        for var, token in reversed(tokens):
            var.reset(token)


def check_arrow_budget(what: str, size: int, cap: int | None = None) -> None:
    cap = arrow_budget() if cap is None else cap
    if size > cap:
        raise SizeBudgetExceeded(what, size, cap)


# -- validation reports -------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    law: str
    witnesses: tuple

    def __str__(self) -> str:
        return f"{self.law}: {', '.join(map(str, self.witnesses))}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def laws(self) -> set[str]:
        return {v.law for v in self.violations}

    def __add__(self, other: "ValidationReport") -> "ValidationReport":
        return ValidationReport(self.violations + other.violations)

    @classmethod
    def of(cls, violations: Iterable[Violation]) -> "ValidationReport":
        return cls(tuple(violations))


# -- the category type --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FiniteCategory:
    """A finite category with an explicit composition table.

    ``structure`` optionally decodes ids of derived categories (arrow
    categories, products, functor categories); ``origin`` records which
    construction produced the category and from what.
    """

    name: str
    objects: tuple[ObjId, ...]
    arrows: tuple[ArrId, ...]
    dom: Mapping[ArrId, ObjId]
    cod: Mapping[ArrId, ObjId]
    id_of: Mapping[ObjId, ArrId]
    comp: Mapping[tuple[ArrId, ArrId], ArrId]
    structure: Mapping[str, Any] = field(default_factory=dict, repr=False)
    origin: tuple | None = field(default=None, repr=False)

    def __repr__(self) -> str:
        return (
            f"FiniteCategory({self.name!r}, {len(self.objects)} objects, "
            f"{len(self.arrows)} arrows)"
        )

    @cached_property
    def object_set(self) -> frozenset[ObjId]:
        return frozenset(self.objects)

    @cached_property
    def arrow_set(self) -> frozenset[ArrId]:
        return frozenset(self.arrows)

    @cached_property
    def _homs(self) -> dict[tuple[ObjId, ObjId], tuple[ArrId, ...]]:
        homs: dict[tuple[ObjId, ObjId], list[ArrId]] = {}
        for f in self.arrows:
            homs.setdefault((self.dom[f], self.cod[f]), []).append(f)
        return {k: tuple(v) for k, v in homs.items()}

    @cached_property
    def _out(self) -> dict[ObjId, tuple[ArrId, ...]]:
        out: dict[ObjId, list[ArrId]] = {a: [] for a in self.objects}
        for f in self.arrows:
            out.setdefault(self.dom[f], []).append(f)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def identity_set(self) -> frozenset[ArrId]:
        return frozenset(self.id_of.values())

    def hom(self, a: ObjId, b: ObjId) -> tuple[ArrId, ...]:
        return self._homs.get((a, b), ())

    def outgoing(self, a: ObjId) -> tuple[ArrId, ...]:
        return self._out.get(a, ())

    def then(self, f: ArrId, g: ArrId) -> ArrId:
        """Unchecked table lookup for ``g . f``."""
        return self.comp[(f, g)]

    def is_identity(self, f: ArrId) -> bool:
        return f in self.identity_set

    def composable_pairs(self) -> Iterator[tuple[ArrId, ArrId]]:
        for f in self.arrows:
            for g in self.outgoing(self.cod[f]):
                yield f, g


# One lock for every memo: nested materializations across memos cannot deadlock.
_MEMO_LOCK = threading.RLock()


class Memo:
    """Per-instance memo for constructions derived from immutable values.

    Materialization of one key happens under a lock, so concurrent callers see
    exactly one construction per (instance, key).
    """

    def __init__(self) -> None:
        self._table: weakref.WeakKeyDictionary[Any, dict] = weakref.WeakKeyDictionary()

    def get(self, owner: Any, key: Any, build: Callable[[], Any]) -> Any:
        with _MEMO_LOCK:
            slot = self._table.setdefault(owner, {})
            if key not in slot:
                slot[key] = build()
            return slot[key]


# -- construction helpers ------------------------------------------------------


def identity_name(obj: ObjId) -> ArrId:
    return f"id_{obj}"


def make_category(
    name: str,
    objects: Iterable[ObjId],
    arrows: Mapping[ArrId, tuple[ObjId, ObjId]] | Iterable[tuple[ArrId, ObjId, ObjId]] = (),
    compose_table: Mapping[tuple[ArrId, ArrId], ArrId] | None = None,
    *,
    complete: bool = True,
) -> FiniteCategory:
    """Build a category from generators-with-table data.

    Identities ``id_<obj>`` are synthesized.  With ``complete`` set, the
    table is extended by every forced entry: compositions with an identity,
    and composable pairs whose target hom-set has a single arrow.  Nothing
    is validated here; call :func:`validate_category`.
    """
    objs = sorted(set(objects))
    if isinstance(arrows, Mapping):
        typed = dict(arrows)
    else:
        typed = {f: (a, b) for f, a, b in arrows}
    dom = {f: ab[0] for f, ab in typed.items()}
    cod = {f: ab[1] for f, ab in typed.items()}
    id_of = {}
    for a in objs:
        i = identity_name(a)
        id_of[a] = i
        dom[i] = a
        cod[i] = a
    comp = dict(compose_table or {})
    if complete:
        all_arrows = sorted(dom)
        homs: dict[tuple[ObjId, ObjId], list[ArrId]] = {}
        for f in all_arrows:
            homs.setdefault((dom[f], cod[f]), []).append(f)
        ids = set(id_of.values())
        for f in all_arrows:
            for g in all_arrows:
                if cod[f] != dom[g] or (f, g) in comp:
                    continue
                if f in ids:
                    comp[(f, g)] = g
                elif g in ids:
                    comp[(f, g)] = f
                else:
                    target = homs.get((dom[f], cod[g]), [])
                    if len(target) == 1:
                        comp[(f, g)] = target[0]
    return FiniteCategory(
        name=name,
        objects=tuple(objs),
        arrows=tuple(sorted(dom)),
        dom=dom,
        cod=cod,
        id_of=id_of,
        comp=comp,
    )


def empty_category(name: str = "0") -> FiniteCategory:
    return make_category(name, [])


def discrete_category(name: str, objects: Iterable[ObjId]) -> FiniteCategory:
    return make_category(name, objects)


# -- core operations -----------------------------------------------------------


def validate_category(cat: FiniteCategory) -> ValidationReport:
    """Exhaustively check typing, identities, closure and associativity."""
    out: list[Violation] = []
    objs = set(cat.objects)
    arrs = set(cat.arrows)
    if len(objs) != len(cat.objects):
        out.append(Violation("unique ids", ("objects",)))
    if len(arrs) != len(cat.arrows):
        out.append(Violation("unique ids", ("arrows",)))
    typed = True
    for f in cat.arrows:
        if f not in cat.dom or f not in cat.cod:
            out.append(Violation("typing", (f,)))
            typed = False
        elif cat.dom[f] not in objs or cat.cod[f] not in objs:
            out.append(Violation("typing", (f, cat.dom[f], cat.cod[f])))
            typed = False
    for a in cat.objects:
        i = cat.id_of.get(a)
        if i is None or i not in arrs:
            out.append(Violation("identity existence", (a,)))
            typed = False
        elif cat.dom.get(i) != a or cat.cod.get(i) != a:
            out.append(Violation("identity typing", (a, i)))
    if not typed:
        return ValidationReport.of(out)

    outgoing: dict[ObjId, list[ArrId]] = {a: [] for a in cat.objects}
    for f in cat.arrows:
        outgoing[cat.dom[f]].append(f)

    closed = True
    for f in cat.arrows:
        for g in outgoing[cat.cod[f]]:
            h = cat.comp.get((f, g))
            if h is None:
                out.append(Violation("closure", (f, g)))
                closed = False
            elif h not in arrs or cat.dom[h] != cat.dom[f] or cat.cod[h] != cat.cod[g]:
                out.append(Violation("closure", (f, g, h)))
                closed = False
    for (f, g), h in cat.comp.items():
        if f not in arrs or g not in arrs or cat.cod[f] != cat.dom[g]:
            out.append(Violation("spurious composition", (f, g, h)))
    if not closed:
        return ValidationReport.of(out)

    for f in cat.arrows:
        if cat.comp[(cat.id_of[cat.dom[f]], f)] != f:
            out.append(Violation("identity law", (cat.id_of[cat.dom[f]], f)))
        if cat.comp[(f, cat.id_of[cat.cod[f]])] != f:
            out.append(Violation("identity law", (f, cat.id_of[cat.cod[f]])))
    for f in cat.arrows:
        for g in outgoing[cat.cod[f]]:
            fg = cat.comp[(f, g)]
            for h in outgoing[cat.cod[g]]:
                if cat.comp[(fg, h)] != cat.comp[(f, cat.comp[(g, h)])]:
                    out.append(Violation("associativity", (f, g, h)))
    return ValidationReport.of(out)


def _require_arrow(cat: FiniteCategory, f: ArrId) -> None:
    if f not in cat.arrow_set:
        raise UnknownArrow(f"{f!r} is not an arrow of {cat.name}")


def _require_object(cat: FiniteCategory, a: ObjId) -> None:
    if a not in cat.object_set:
        raise UnknownObject(f"{a!r} is not an object of {cat.name}")


def compose(cat: FiniteCategory, f: ArrId, g: ArrId) -> ArrId:
    """Return ``g . f`` (first ``f``, then ``g``)."""
    _require_arrow(cat, f)
    _require_arrow(cat, g)
    if cat.cod[f] != cat.dom[g]:
        raise NotComposable(f"cod({f}) = {cat.cod[f]} but dom({g}) = {cat.dom[g]}")
    return cat.comp[(f, g)]


def identity(cat: FiniteCategory, a: ObjId) -> ArrId:
    _require_object(cat, a)
    return cat.id_of[a]


def hom_set(cat: FiniteCategory, a: ObjId, b: ObjId) -> tuple[ArrId, ...]:
    _require_object(cat, a)
    _require_object(cat, b)
    return cat.hom(a, b)


def fold_path(cat: FiniteCategory, path: ArrowPath) -> ArrId:
    if not path:
        raise ValueError("arrow paths are nonempty")
    return reduce(lambda f, g: compose(cat, f, g), path)


def path_endpoints(cat: FiniteCategory, path: ArrowPath) -> tuple[ObjId, ObjId]:
    for f in path:
        _require_arrow(cat, f)
    for f, g in zip(path, path[1:]):
        if cat.cod[f] != cat.dom[g]:
            raise NotComposable(f"path breaks between {f} and {g}")
    return cat.dom[path[0]], cat.cod[path[-1]]


def is_commutative(cat: FiniteCategory, p: ArrowPath, q: ArrowPath) -> bool:
    """True iff both paths fold to the same arrow."""
    if path_endpoints(cat, p) != path_endpoints(cat, q):
        raise EndpointMismatch(f"paths {list(p)} and {list(q)} have different endpoints")
    return fold_path(cat, p) == fold_path(cat, q)


def categories_equal(a: FiniteCategory, b: FiniteCategory) -> bool:
    """Structural equality of the underlying data (names are ignored)."""
    if a is b:
        return True
    return (
        a.objects == b.objects
        and a.arrows == b.arrows
        and dict(a.dom) == dict(b.dom)
        and dict(a.cod) == dict(b.cod)
        and dict(a.id_of) == dict(b.id_of)
        and dict(a.comp) == dict(b.comp)
    )


def same_category(a: FiniteCategory, b: FiniteCategory) -> bool:
    """Boundary identity: categories are referenced by their name token."""
    return a is b or a.name == b.name


# -- factories -------------------------------------------------------------------


def _default_arrow_name(elems: Sequence[ObjId]) -> Callable[[ObjId, ObjId], ArrId]:
    if all(len(e) == 1 for e in elems):
        return lambda a, b: f"e{a}{b}"
    return lambda a, b: f"e_{a}_{b}"


def make_poset_category(
    elems: Sequence[Any],
    leq: Callable[[Any, Any], bool] | Iterable[tuple[Any, Any]],
    name: str | None = None,
    arrow_name: Callable[[ObjId, ObjId], ArrId] | None = None,
) -> FiniteCategory:
    """The thin category of a partial order: one arrow ``a -> b`` iff ``a <= b``."""
    elems = [str(e) for e in elems]
    if len(set(elems)) != len(elems):
        raise NotAPartialOrder("duplicate elements")
    if callable(leq):
        rel = {(a, b) for a in elems for b in elems if leq(a, b)}
    else:
        rel = {(str(a), str(b)) for a, b in leq}
    known = set(elems)
    for a, b in rel:
        if a not in known or b not in known:
            raise NotAPartialOrder(f"relation mentions unknown element in ({a}, {b})")
    for a in elems:
        if (a, a) not in rel:
            raise NotAPartialOrder(f"not reflexive at {a}")
    for a, b in rel:
        if a != b and (b, a) in rel:
            raise NotAPartialOrder(f"not antisymmetric at ({a}, {b})")
        for c in elems:
            if (b, c) in rel and (a, c) not in rel:
                raise NotAPartialOrder(f"not transitive at ({a}, {b}, {c})")
    naming = arrow_name or _default_arrow_name(elems)
    arrows = {naming(a, b): (a, b) for a, b in rel if a != b}
    if len(arrows) != len(rel) - len(elems):
        raise NotAPartialOrder("arrow naming collides")
    cat = make_category(name or f"Poset{len(elems)}", elems, arrows)
    return cat


def chain_category(n: int, name: str | None = None) -> FiniteCategory:
    """The ordinal ``0 <= 1 <= ... <= n-1`` as a thin category."""
    elems = [str(i) for i in range(n)]
    return make_poset_category(elems, lambda a, b: int(a) <= int(b), name=name or str(n))


def product_id(parts: Sequence[str]) -> str:
    return "<" + ",".join(parts) + ">"


def product_category(cats: Sequence[FiniteCategory], name: str | None = None) -> FiniteCategory:
    """Componentwise product; a single factor is returned unchanged."""
    cats = list(cats)
    if not cats:
        raise InvalidFactor("product of an empty list of categories")
    for c in cats:
        report = validate_category(c)
        if not report.ok:
            raise InvalidFactor(f"factor {c.name} is invalid: {report.violations[0]}")
    if len(cats) == 1:
        return cats[0]
    n_arrows = 1
    for c in cats:
        n_arrows *= len(c.arrows)
    check_arrow_budget("product category", n_arrows)

    def tuples(seqs: list[tuple[str, ...]]) -> list[tuple[str, ...]]:
        acc: list[tuple[str, ...]] = [()]
        for seq in seqs:
            acc = [t + (x,) for t in acc for x in seq]
        return acc

    obj_tuples = tuples([c.objects for c in cats])
    arr_tuples = tuples([c.arrows for c in cats])
    structure: dict[str, Any] = {}
    dom, cod, id_of, comp = {}, {}, {}, {}
    for t in obj_tuples:
        oid = product_id(t)
        structure[oid] = t
        id_of[oid] = product_id([c.id_of[x] for c, x in zip(cats, t)])
    for t in arr_tuples:
        aid = product_id(t)
        structure[aid] = t
        dom[aid] = product_id([c.dom[x] for c, x in zip(cats, t)])
        cod[aid] = product_id([c.cod[x] for c, x in zip(cats, t)])
    by_dom: dict[str, list[tuple[str, ...]]] = {}
    for t in arr_tuples:
        by_dom.setdefault(dom[product_id(t)], []).append(t)
    for t in arr_tuples:
        f = product_id(t)
        for u in by_dom.get(cod[f], []):
            comp[(f, product_id(u))] = product_id(
                [c.comp[(x, y)] for c, x, y in zip(cats, t, u)]
            )
    return FiniteCategory(
        name=name or "(" + "x".join(c.name for c in cats) + ")",
        objects=tuple(sorted(product_id(t) for t in obj_tuples)),
        arrows=tuple(sorted(dom)),
        dom=dom,
        cod=cod,
        id_of=id_of,
        comp=comp,
        structure=structure,
        origin=("product", tuple(cats)),
    )


def power_category(cat: FiniteCategory, m: int) -> FiniteCategory:
    if m < 1:
        raise InvalidFactor("power must be at least 1")
    return _power_memo.get(cat, m, lambda: product_category([cat] * m))


_power_memo = Memo()


def opposite_category(cat: FiniteCategory) -> FiniteCategory:
    def build() -> FiniteCategory:
        return FiniteCategory(
            name=f"{cat.name}^op",
            objects=cat.objects,
            arrows=cat.arrows,
            dom=cat.cod,
            cod=cat.dom,
            id_of=cat.id_of,
            comp={(g, f): h for (f, g), h in cat.comp.items()},
            structure=cat.structure,
            origin=("opposite", (cat,)),
        )

    return _op_memo.get(cat, "op", build)


_op_memo = Memo()
