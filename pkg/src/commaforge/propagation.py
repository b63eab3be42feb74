"""Functor categories, modulators and comma-propagation across levels.

A functor category ``C^J`` is realized as an ordinary :class:`FiniteCategory`
whose objects are canonical encodings of functors ``J -> C`` and whose arrows
encode natural transformations, composed vertically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Literal

from .arrows import (
    arrow_category,
    comma_lift_functor,
    comma_lift_nat,
    encapsulated,
    square_id,
    square_of,
)
from .core import (
    ArrId,
    FiniteCategory,
    Memo,
    ObjId,
    ValidationReport,
    Violation,
    categories_equal,
    check_arrow_budget,
    enumeration_budget,
    power_category,
    product_id,
    same_category,
)
from .errors import (
    CaseShapeMismatch,
    CertificationFailed,
    SizeBudgetExceeded,
    UndefinedAction,
    UnknownArrow,
    UnknownObject,
)
from .functors import (
    Functor,
    IsoWitness,
    NatTrans,
    compose_functors,
    horizontal_compose,
    validate_functor,
    validate_nat_trans,
    vertical_compose,
    whisker_left,
    whisker_right,
)


# -- functor categories ----------------------------------------------------------


def functor_id(J: FiniteCategory, F: Functor) -> ObjId:
    objs = ",".join(f"{a}:{F.obj_map[a]}" for a in J.objects)
    arrs = ",".join(f"{l}:{F.arr_map[l]}" for l in J.arrows if not J.is_identity(l))
    return f"[{objs}|{arrs}]"


def nat_id(J: FiniteCategory, tau: NatTrans, src: ObjId, dst: ObjId) -> ArrId:
    comps = ",".join(f"{a}:{tau.components[a]}" for a in J.objects)
    return f"<{comps}>@{src}->{dst}"


@dataclass(frozen=True, eq=False)
class FunctorCategory:
    index: FiniteCategory
    target: FiniteCategory
    realized: FiniteCategory = field(repr=False)

    def functor(self, x: ObjId) -> Functor:
        try:
            return self.realized.structure[x]
        except KeyError:
            raise UnknownObject(f"{x!r} is not an object of {self.realized.name}") from None

    def transformation(self, s: ArrId) -> NatTrans:
        try:
            return self.realized.structure[s]
        except KeyError:
            raise UnknownArrow(f"{s!r} is not an arrow of {self.realized.name}") from None

    def object_of(self, F: Functor) -> ObjId:
        x = functor_id(self.index, F)
        if x not in self.realized.object_set:
            raise UnknownObject(f"{F.name} is not a functor {self.index.name} -> {self.target.name}")
        return x

    def arrow_of(self, tau: NatTrans) -> ArrId:
        s = nat_id(self.index, tau, self.object_of(tau.F), self.object_of(tau.G))
        if s not in self.realized.arrow_set:
            raise UnknownArrow(f"{tau.name} is not a transformation in {self.realized.name}")
        return s


class _Counter:
    def __init__(self, what: str, cap: int):
        self.what = what
        self.cap = cap
        self.n = 0

    def tick(self) -> None:
        self.n += 1
        if self.n > self.cap:
            raise SizeBudgetExceeded(self.what, self.n, self.cap)


def _enumerate_functors(J: FiniteCategory, C: FiniteCategory, counter: _Counter) -> list[Functor]:
    nonid = [l for l in J.arrows if not J.is_identity(l)]
    position = {l: i for i, l in enumerate(nonid)}
    # each composition constraint is checked once its last non-identity arrow is assigned
    checks: dict[int, list[tuple[ArrId, ArrId, ArrId]]] = {}
    for (f, g), h in J.comp.items():
        idx = [position[x] for x in (f, g, h) if x in position]
        if idx:
            checks.setdefault(max(idx), []).append((f, g, h))
    found: list[Functor] = []
    objs = J.objects
    obj_map: dict[ObjId, ObjId] = {}

    def assign_objects(i: int) -> None:
        if i == len(objs):
            arr_map = {J.id_of[a]: C.id_of[obj_map[a]] for a in objs}
            assign_arrows(0, arr_map)
            return
        for c in C.objects:
            counter.tick()
            obj_map[objs[i]] = c
            assign_objects(i + 1)
        obj_map.pop(objs[i], None)

    def assign_arrows(i: int, arr_map: dict[ArrId, ArrId]) -> None:
        if i == len(nonid):
            found.append(Functor(J, C, dict(obj_map), dict(arr_map)))
            return
        l = nonid[i]
        for x in C.hom(obj_map[J.dom[l]], obj_map[J.cod[l]]):
            counter.tick()
            arr_map[l] = x
            if all(C.comp[(arr_map[f], arr_map[g])] == arr_map[h] for f, g, h in checks.get(i, ())):
                assign_arrows(i + 1, arr_map)
        arr_map.pop(l, None)

    if objs:
        assign_objects(0)
    else:
        found.append(Functor(J, C, {}, {}))
    return found


def _enumerate_nats(J: FiniteCategory, C: FiniteCategory, F: Functor, G: Functor,
                    counter: _Counter) -> list[dict[ObjId, ArrId]]:
    objs = J.objects
    position = {a: i for i, a in enumerate(objs)}
    checks: dict[int, list[ArrId]] = {}
    for l in J.arrows:
        checks.setdefault(max(position[J.dom[l]], position[J.cod[l]]), []).append(l)
    found: list[dict[ObjId, ArrId]] = []
    comps: dict[ObjId, ArrId] = {}

    def natural(l: ArrId) -> bool:
        a, b = J.dom[l], J.cod[l]
        return C.comp[(F.arr_map[l], comps[b])] == C.comp[(comps[a], G.arr_map[l])]

    def assign(i: int) -> None:
        if i == len(objs):
            found.append(dict(comps))
            return
        a = objs[i]
        for x in C.hom(F.obj_map[a], G.obj_map[a]):
            counter.tick()
            comps[a] = x
            if all(natural(l) for l in checks.get(i, ())):
                assign(i + 1)
        comps.pop(a, None)

    assign(0)
    return found


_functor_cat_memo = Memo()


def functor_category(J: FiniteCategory, C: FiniteCategory) -> FunctorCategory:
    """All functors ``J -> C`` and all transformations between them.

    Enumeration is a pruned backtracking search in canonical order; the
    number of visited candidates is capped by the enumeration budget.
    """
    cap = enumeration_budget()
    return _functor_cat_memo.get(C, ("functors", J), lambda: _build_functor_category(J, C, cap))


def _build_functor_category(J: FiniteCategory, C: FiniteCategory, cap: int) -> FunctorCategory:
    counter = _Counter(f"functor category {C.name}^{J.name}", cap)
    functors = _enumerate_functors(J, C, counter)
    structure: dict[str, Any] = {}
    fids = []
    for F in functors:
        x = functor_id(J, F)
        F = Functor(J, C, F.obj_map, F.arr_map, name=x)
        structure[x] = F
        fids.append(x)
    dom, cod, id_of = {}, {}, {}
    by_src: dict[ObjId, list[ArrId]] = {x: [] for x in fids}
    for x in fids:
        for y in fids:
            F, G = structure[x], structure[y]
            for comps in _enumerate_nats(J, C, F, G, counter):
                tau = NatTrans(F, G, comps)
                s = nat_id(J, tau, x, y)
                structure[s] = NatTrans(F, G, comps, name=s)
                dom[s], cod[s] = x, y
                by_src[x].append(s)
        check_arrow_budget(counter.what, len(dom))
    for x in fids:
        F = structure[x]
        ident = NatTrans(F, F, {a: C.id_of[F.obj_map[a]] for a in J.objects})
        id_of[x] = nat_id(J, ident, x, x)
    table = {}
    for s in dom:
        t1 = structure[s]
        for u in by_src[cod[s]]:
            t2 = structure[u]
            comps = {a: C.comp[(t1.components[a], t2.components[a])] for a in J.objects}
            table[(s, u)] = nat_id(J, NatTrans(t1.F, t2.G, comps), dom[s], cod[u])
    realized = FiniteCategory(
        name=f"{C.name}^{J.name}",
        objects=tuple(sorted(fids)),
        arrows=tuple(sorted(dom)),
        dom=dom,
        cod=cod,
        id_of=id_of,
        comp=table,
        structure=structure,
        origin=("functors", (J, C)),
    )
    return FunctorCategory(J, C, realized)


def functor_category_of(cat: FiniteCategory) -> FunctorCategory | None:
    """Recover the :class:`FunctorCategory` a realized category came from."""
    if cat.origin and cat.origin[0] == "functors":
        J, C = cat.origin[1]
        return functor_category(J, C)
    return None


# -- level two equivalence, diagonals, modulators -----------------------------------


def _two_parts(J: FiniteCategory) -> tuple[ObjId, ObjId, ArrId]:
    nonid = [l for l in J.arrows if not J.is_identity(l)]
    if len(J.objects) != 2 or len(nonid) != 1:
        raise CaseShapeMismatch(f"{J.name} is not the walking arrow")
    l = nonid[0]
    return J.dom[l], J.cod[l], l


def equivalence_level_two(C: FiniteCategory, index: FiniteCategory | None = None) -> IsoWitness:
    """Witness ``C^2 ~ C|C``: forward sends ``F`` to ``J(F(e))``, backward sends ``(h;k)`` to ``(h, k)``."""
    from .fixtures import TWO

    J = index or TWO
    a1, a2, l = _two_parts(J)
    FC = functor_category(J, C)
    A = arrow_category(C)
    fwd_obj = {x: encapsulated(FC.functor(x).ar(l)) for x in FC.realized.objects}
    fwd_arr = {}
    for s in FC.realized.arrows:
        tau = FC.transformation(s)
        fwd_arr[s] = square_id(tau(a1), tau(a2), fwd_obj[FC.realized.dom[s]], fwd_obj[FC.realized.cod[s]])
    forward = Functor(FC.realized, A, fwd_obj, fwd_arr, name="E")

    def as_functor(f: ArrId) -> Functor:
        return Functor(J, C, {a1: C.dom[f], a2: C.cod[f]},
                       {J.id_of[a1]: C.id_of[C.dom[f]], J.id_of[a2]: C.id_of[C.cod[f]], l: f})

    bwd_obj = {x: FC.object_of(as_functor(A.structure[x])) for x in A.objects}
    bwd_arr = {}
    for s in A.arrows:
        sq = A.structure[s]
        F, G = as_functor(A.structure[sq.src]), as_functor(A.structure[sq.dst])
        bwd_arr[s] = FC.arrow_of(NatTrans(F, G, {a1: sq.h, a2: sq.k}))
    backward = Functor(A, FC.realized, bwd_obj, bwd_arr, name="E^-1")
    return IsoWitness(forward, backward)


def general_diagonal(D: FiniteCategory, J: FiniteCategory, m: int = 1) -> Functor:
    """Constant-functor embedding ``D -> (D^m)^J``."""
    P = power_category(D, m)
    FC = functor_category(J, P)

    def tup(x: str) -> str:
        return x if m == 1 else product_id([x] * m)

    obj, const = {}, {}
    for c in D.objects:
        t = tup(c)
        F = Functor(J, P, {a: t for a in J.objects}, {l: P.id_of[t] for l in J.arrows})
        const[c] = F
        obj[c] = FC.object_of(F)
    arr = {}
    for g in D.arrows:
        tau = NatTrans(const[D.dom[g]], const[D.cod[g]], {a: tup(g) for a in J.objects})
        arr[g] = FC.arrow_of(tau)
    return Functor(D, FC.realized, obj, arr, name="Delta")


def is_diagonal(F: Functor) -> ValidationReport:
    """Check ``F(c)(a) = c``, ``F(c)(l) = id_c`` and ``F(g)(a) = g`` for ``F: C -> C^J``."""
    FC = functor_category_of(F.dst)
    if FC is None or not same_category(FC.target, F.src):
        return ValidationReport.of([Violation("shape", (F.name,))])
    C, J = F.src, FC.index
    out = []
    for c in C.objects:
        G = FC.functor(F.ob(c))
        if any(G.ob(a) != c for a in J.objects):
            out.append(Violation("constant object", (c,)))
        if any(G.ar(l) != C.id_of[c] for l in J.arrows):
            out.append(Violation("constant object", (c,)))
    for g in C.arrows:
        tau = FC.transformation(F.ar(g))
        if any(tau(a) != g for a in J.objects):
            out.append(Violation("constant arrow", (g,)))
    return ValidationReport.of(out)


_modulator_memo = Memo()


def modulator_L(Cn: FiniteCategory, J: FiniteCategory) -> Functor:
    """``L: (C^J | C^J) -> (C|C)^J``, ``J(h) -> (a -> J(h a))``, ``(g1;g2) -> (a -> (g1 a; g2 a))``."""
    return _modulator_memo.get(Cn, ("L", J), lambda: _build_L(Cn, J))


def _build_L(Cn: FiniteCategory, J: FiniteCategory) -> Functor:
    FC = functor_category(J, Cn)
    src = arrow_category(FC.realized)
    A = arrow_category(Cn)
    B = functor_category(J, A)
    images: dict[ObjId, Functor] = {}
    obj = {}
    for X in src.objects:
        h = FC.transformation(src.structure[X])
        G, H = h.F, h.G
        F = Functor(
            J,
            A,
            {a: encapsulated(h(a)) for a in J.objects},
            {l: square_id(G.ar(l), H.ar(l), encapsulated(h(J.dom[l])), encapsulated(h(J.cod[l])))
             for l in J.arrows},
        )
        images[X] = F
        obj[X] = B.object_of(F)
    arr = {}
    for S in src.arrows:
        sq = src.structure[S]
        g1, g2 = FC.transformation(sq.h), FC.transformation(sq.k)
        h, k = FC.transformation(src.structure[sq.src]), FC.transformation(src.structure[sq.dst])
        alpha = NatTrans(
            images[sq.src],
            images[sq.dst],
            {a: square_id(g1(a), g2(a), encapsulated(h(a)), encapsulated(k(a))) for a in J.objects},
        )
        arr[S] = B.arrow_of(alpha)
    return Functor(src, B.realized, obj, arr, name="L")


def modulator_K(Cn: FiniteCategory, J: FiniteCategory) -> Functor:
    """``K: (C|C)^J -> (C^J | C^J)``, reading each component back through ``psi``."""
    return _modulator_memo.get(Cn, ("K", J), lambda: _build_K(Cn, J))


def _build_K(Cn: FiniteCategory, J: FiniteCategory) -> Functor:
    FC = functor_category(J, Cn)
    dst = arrow_category(FC.realized)
    A = arrow_category(Cn)
    B = functor_category(J, A)
    obj = {}
    parts: dict[ObjId, tuple[Functor, Functor]] = {}
    for x in B.realized.objects:
        F = B.functor(x)
        comps = {a: A.structure[F.ob(a)] for a in J.objects}
        G = Functor(J, Cn, {a: Cn.dom[comps[a]] for a in J.objects},
                    {l: square_of(A, F.ar(l)).h for l in J.arrows})
        H = Functor(J, Cn, {a: Cn.cod[comps[a]] for a in J.objects},
                    {l: square_of(A, F.ar(l)).k for l in J.arrows})
        parts[x] = (G, H)
        obj[x] = encapsulated(FC.arrow_of(NatTrans(G, H, comps)))
    arr = {}
    for s in B.realized.arrows:
        alpha = B.transformation(s)
        x, y = B.realized.dom[s], B.realized.cod[s]
        (G, H), (G2, H2) = parts[x], parts[y]
        g1 = NatTrans(G, G2, {a: square_of(A, alpha(a)).h for a in J.objects})
        g2 = NatTrans(H, H2, {a: square_of(A, alpha(a)).k for a in J.objects})
        arr[s] = square_id(FC.arrow_of(g1), FC.arrow_of(g2), obj[x], obj[y])
    return Functor(B.realized, dst, obj, arr, name="K")


def modulator_iso(Cn: FiniteCategory, J: FiniteCategory) -> IsoWitness:
    return IsoWitness(modulator_L(Cn, J), modulator_K(Cn, J))


def transported_modulators(Cn: FiniteCategory) -> tuple[Functor, Functor]:
    """``L`` and ``K`` for ``J = 2`` carried onto ``C_{n+2}`` along the level-two equivalences.

    Both come out as endofunctors of ``C_{n+2}``; they coincide.
    """
    from .fixtures import TWO

    inner = equivalence_level_two(Cn)
    outer = equivalence_level_two(arrow_category(Cn))
    L, K = modulator_L(Cn, TWO), modulator_K(Cn, TWO)
    L_t = compose_functors(outer.forward, compose_functors(L, comma_lift_functor(inner.backward)))
    K_t = compose_functors(comma_lift_functor(inner.forward), compose_functors(K, outer.backward))
    return L_t, K_t


# -- propagation cases ---------------------------------------------------------------

CaseKind = Literal["basic", "descending", "ascending", "balanced"]


@dataclass(frozen=True)
class PropagationCase:
    kind: CaseKind = "basic"
    J: FiniteCategory | None = None
    J2: FiniteCategory | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("basic", "descending", "ascending", "balanced"):
            raise ValueError(f"unknown propagation case {self.kind!r}")


BASIC = PropagationCase("basic")


def _source_index(F: Functor, case: PropagationCase) -> FunctorCategory:
    FC = functor_category_of(F.src)
    if FC is None:
        raise CaseShapeMismatch(f"{case.kind} case needs a source of the form D^J, got {F.src.name}")
    if case.J is not None and not same_category(case.J, FC.index):
        raise CaseShapeMismatch(f"source index is {FC.index.name}, case names {case.J.name}")
    return FC


def _target_index(F: Functor, case: PropagationCase) -> FunctorCategory:
    FC = functor_category_of(F.dst)
    if FC is None:
        raise CaseShapeMismatch(f"{case.kind} case needs a target of the form C^J, got {F.dst.name}")
    want = case.J2 if case.kind == "balanced" else case.J
    if want is not None and not same_category(want, FC.index):
        raise CaseShapeMismatch(f"target index is {FC.index.name}, case names {want.name}")
    return FC


def _modulators(F: Functor, case: PropagationCase) -> tuple[Functor | None, Functor | None]:
    K = L = None
    if case.kind in ("descending", "balanced"):
        S = _source_index(F, case)
        K = modulator_K(S.target, S.index)
    if case.kind in ("ascending", "balanced"):
        T = _target_index(F, case)
        L = modulator_L(T.target, T.index)
    return K, L


def propagate_functor_step(F: Functor, case: PropagationCase = BASIC) -> Functor:
    K, L = _modulators(F, case)
    out = comma_lift_functor(F)
    if K is not None:
        out = compose_functors(out, K)
    if L is not None:
        out = compose_functors(L, out)
    return out


def propagate_nat_step(tau: NatTrans, case: PropagationCase = BASIC) -> NatTrans:
    K, L = _modulators(tau.F, case)
    out = comma_lift_nat(tau)
    if K is not None:
        out = whisker_left(out, K)
    if L is not None:
        out = whisker_right(L, out)
    return out


_validated = Memo()


def _validate_once(F: Functor) -> ValidationReport:
    # functor equality goes by category name, so also insist on the same target object
    bucket = _validated.get(F.src, ("validated", hash(F)), list)
    for G, report in bucket:
        if G.dst is F.dst and G == F:
            return report
    report = validate_functor(F)
    bucket.append((F, report))
    return report


def propagate_functor(F: Functor, case: PropagationCase = BASIC, n: int = 2,
                      check: bool = True) -> Functor:
    """``F_n``: the one-step rule of ``case`` applied ``n - 1`` times to ``F_1 = F``."""
    if n < 1:
        raise ValueError("levels are numbered from 1")
    for _ in range(n - 1):
        F = propagate_functor_step(F, case)
        if check:
            report = _validate_once(F)
            if not report.ok:
                raise CertificationFailed(f"propagated functor {F.name} is not a functor", report)
    return F


def propagate_nat(tau: NatTrans, case: PropagationCase = BASIC, n: int = 2,
                  check: bool = True) -> NatTrans:
    if n < 1:
        raise ValueError("levels are numbered from 1")
    for _ in range(n - 1):
        tau = propagate_nat_step(tau, case)
        if check:
            report = validate_nat_trans(tau)
            if not report.ok:
                raise CertificationFailed(f"propagated transformation {tau.name} is not natural", report)
    return tau


def check_distributive_laws(
    n: int,
    *,
    functors: tuple[Functor, Functor] | None = None,
    horizontal: tuple[NatTrans, NatTrans] | None = None,
    vertical: tuple[NatTrans, NatTrans] | None = None,
) -> ValidationReport:
    """Compare propagating composites with composing propagations, Basic case, at level ``n``.

    Each pair is composed as its respective ``compose_*`` function expects;
    a pair that does not compose raises :class:`BoundaryMismatch`.
    """
    out: list[Violation] = []
    if functors is not None:
        F, G = functors
        whole = propagate_functor(compose_functors(F, G), BASIC, n)
        if whole != compose_functors(propagate_functor(F, BASIC, n), propagate_functor(G, BASIC, n)):
            out.append(Violation("functor composition", (F.name, G.name, n)))
    if horizontal is not None:
        tau, eta = horizontal
        whole = propagate_nat(horizontal_compose(tau, eta), BASIC, n)
        if whole != horizontal_compose(propagate_nat(tau, BASIC, n), propagate_nat(eta, BASIC, n)):
            out.append(Violation("horizontal composition", (tau.name, eta.name, n)))
    if vertical is not None:
        tau, eta = vertical
        whole = propagate_nat(vertical_compose(tau, eta), BASIC, n)
        if whole != vertical_compose(propagate_nat(tau, BASIC, n), propagate_nat(eta, BASIC, n)):
            out.append(Violation("vertical composition", (tau.name, eta.name, n)))
    return ValidationReport.of(out)


# -- categorial symmetry -----------------------------------------------------------


@dataclass(frozen=True)
class CSElement:
    """``g_n``; products add exponents, so ``n >= 0`` spans the monoid."""

    n: int

    def __mul__(self, other: "CSElement") -> "CSElement":
        return CSElement(self.n + other.n)

    def inverse(self) -> "CSElement":
        return CSElement(-self.n)

    @property
    def in_monoid(self) -> bool:
        return self.n >= 0


@dataclass(frozen=True)
class ProvenanceRecord:
    case: PropagationCase
    previous: Any


Kind = Literal["category", "functor", "nat-trans"]


@dataclass(frozen=True, eq=False)
class LeveledConcept:
    kind: Kind
    payload: Any
    level: int = 1
    provenance: tuple[ProvenanceRecord, ...] = ()
    case: PropagationCase = BASIC

    def __post_init__(self) -> None:
        if self.level != 1 + len(self.provenance):
            raise ValueError("level must equal 1 + provenance depth")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LeveledConcept):
            return NotImplemented
        if (self.kind, self.level) != (other.kind, other.level):
            return False
        if self.kind == "category":
            return categories_equal(self.payload, other.payload)
        return self.payload == other.payload

    __hash__ = None  # type: ignore[assignment]


def base_concept(payload: Any, case: PropagationCase = BASIC) -> LeveledConcept:
    if isinstance(payload, FiniteCategory):
        kind = "category"
    elif isinstance(payload, Functor):
        kind = "functor"
    elif isinstance(payload, NatTrans):
        kind = "nat-trans"
    else:
        raise TypeError(f"cannot level {type(payload).__name__}")
    return LeveledConcept(kind, payload, 1, (), case)


def _step(x: LeveledConcept) -> LeveledConcept:
    if x.kind == "category":
        nxt = arrow_category(x.payload)
    elif x.kind == "functor":
        nxt = propagate_functor_step(x.payload, x.case)
    else:
        nxt = propagate_nat_step(x.payload, x.case)
    record = ProvenanceRecord(x.case, x.payload)
    return LeveledConcept(x.kind, nxt, x.level + 1, x.provenance + (record,), x.case)


def cs_act(g: CSElement, x: LeveledConcept) -> LeveledConcept:
    """Shift ``x`` by ``g.n`` levels; downward shifts undo recorded lifts only."""
    if g.n >= 0:
        for _ in range(g.n):
            x = _step(x)
        return x
    depth = -g.n
    if depth > len(x.provenance):
        raise UndefinedAction(
            f"g_{g.n} on a level-{x.level} concept would land at level {x.level + g.n}"
        )
    keep = len(x.provenance) - depth
    payload = x.provenance[keep].previous
    return LeveledConcept(x.kind, payload, keep + 1, x.provenance[:keep], x.case)
