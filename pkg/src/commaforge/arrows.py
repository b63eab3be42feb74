"""Arrow categories, comma lifting and the tower of n-dimensional levels.

Canonical ids: the object of ``C|C`` encapsulating ``f`` is ``J(f)``; the
commutative square ``(h;k): J(f) -> J(g)`` is ``(h;k)@J(f)->J(g)``.  Every
derived category carries a ``structure`` table decoding those ids, so no id
is ever parsed back from text.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import NamedTuple, Union

from .core import (
    ArrId,
    FiniteCategory,
    Memo,
    ObjId,
    arrow_budget,
    check_arrow_budget,
    empty_category,
    is_commutative,
    make_category,
)
from .errors import MalformedLabel, NotCommutative, UnknownArrow, UnknownObject
from .functors import Functor, NatTrans


class Square(NamedTuple):
    """Decoded arrow ``(h;k): J(f) -> J(g)`` of an arrow category."""

    h: ArrId
    k: ArrId
    src: ObjId
    dst: ObjId


def encapsulated(f: ArrId) -> ObjId:
    return f"J({f})"


def square_id(h: ArrId, k: ArrId, src: ObjId, dst: ObjId) -> ArrId:
    return f"({h};{k})@{src}->{dst}"


_arrow_memo = Memo()


def arrow_category(C: FiniteCategory, budget: int | None = None) -> FiniteCategory:
    """The arrow category ``C|C``: arrows of ``C`` as objects, commutative squares as arrows."""
    cap = arrow_budget() if budget is None else budget
    A = _arrow_memo.get(C, "arrow", lambda: _build_arrow_category(C, cap))
    check_arrow_budget(f"arrow category of {C.name}", len(A.arrows), cap)
    return A


def _build_arrow_category(C: FiniteCategory, cap: int) -> FiniteCategory:
    comp = C.comp
    squares: list[Square] = []
    for f in C.arrows:
        a, b = C.dom[f], C.cod[f]
        src = encapsulated(f)
        for h in C.outgoing(a):
            c = C.cod[h]
            for g in C.outgoing(c):
                hg = comp[(h, g)]
                d = C.cod[g]
                for k in C.hom(b, d):
                    if comp[(f, k)] == hg:
                        squares.append(Square(h, k, src, encapsulated(g)))
        check_arrow_budget(f"arrow category of {C.name}", len(squares), cap)

    structure: dict[str, object] = {}
    objects = []
    id_of = {}
    for f in C.arrows:
        x = encapsulated(f)
        objects.append(x)
        structure[x] = f
        id_of[x] = square_id(C.id_of[C.dom[f]], C.id_of[C.cod[f]], x, x)
    dom, cod = {}, {}
    by_src: dict[ObjId, list[tuple[ArrId, Square]]] = {}
    for sq in squares:
        sid = square_id(*sq)
        structure[sid] = sq
        dom[sid] = sq.src
        cod[sid] = sq.dst
        by_src.setdefault(sq.src, []).append((sid, sq))
    table = {}
    for sid, s1 in ((square_id(*s), s) for s in squares):
        for tid, s2 in by_src.get(s1.dst, ()):
            table[(sid, tid)] = square_id(
                comp[(s1.h, s2.h)], comp[(s1.k, s2.k)], s1.src, s2.dst
            )
    return FiniteCategory(
        name=f"Arr({C.name})",
        objects=tuple(sorted(objects)),
        arrows=tuple(sorted(dom)),
        dom=dom,
        cod=cod,
        id_of=id_of,
        comp=table,
        structure=structure,
        origin=("arrow", (C,)),
    )


def is_arrow_category_of(A: FiniteCategory) -> FiniteCategory | None:
    if A.origin and A.origin[0] == "arrow":
        return A.origin[1][0]
    return None


def square_of(A: FiniteCategory, s: ArrId) -> Square:
    try:
        sq = A.structure[s]
    except KeyError:
        raise UnknownArrow(f"{s!r} is not a square of {A.name}") from None
    if not isinstance(sq, Square):
        raise UnknownArrow(f"{s!r} is not a square of {A.name}")
    return sq


# -- projections, psi, J ------------------------------------------------------------


def proj_fst(C: FiniteCategory) -> Functor:
    A = arrow_category(C)
    return Functor(
        A,
        C,
        {x: C.dom[A.structure[x]] for x in A.objects},
        {s: A.structure[s].h for s in A.arrows},
        name="F_st",
    )


def proj_snd(C: FiniteCategory) -> Functor:
    A = arrow_category(C)
    return Functor(
        A,
        C,
        {x: C.cod[A.structure[x]] for x in A.objects},
        {s: A.structure[s].k for s in A.arrows},
        name="S_nd",
    )


def psi(C: FiniteCategory) -> NatTrans:
    """``F_st => S_nd``; the component at ``J(f)`` is ``f`` itself."""
    A = arrow_category(C)
    return NatTrans(proj_fst(C), proj_snd(C), {x: decapsulate(C, x) for x in A.objects},
                    name="psi")


def encapsulate(C: FiniteCategory, f: ArrId) -> ObjId:
    if f not in C.arrow_set:
        raise UnknownArrow(f"{f!r} is not an arrow of {C.name}")
    return encapsulated(f)


def decapsulate(C: FiniteCategory, x: ObjId) -> ArrId:
    A = arrow_category(C)
    if x not in A.object_set:
        raise UnknownObject(f"{x!r} is not an object of {A.name}")
    return A.structure[x]


def arrow_diagonal(C: FiniteCategory) -> Functor:
    """``a -> J(id_a)``, ``f -> (f;f)``."""
    A = arrow_category(C)
    obj = {a: encapsulated(C.id_of[a]) for a in C.objects}
    arr = {f: square_id(f, f, obj[C.dom[f]], obj[C.cod[f]]) for f in C.arrows}
    return Functor(C, A, obj, arr, name="diag")


# -- comma lifting --------------------------------------------------------------------


def comma_lift_functor(F: Functor) -> Functor:
    """Pointwise lift ``J(f) -> J(F f)``, ``(h;k) -> (F h; F k)``."""
    B = arrow_category(F.src)
    D = arrow_category(F.dst)
    Fa = F.arr_map
    obj = {x: encapsulated(Fa[B.structure[x]]) for x in B.objects}
    arr = {}
    for s in B.arrows:
        sq = B.structure[s]
        arr[s] = square_id(Fa[sq.h], Fa[sq.k], obj[sq.src], obj[sq.dst])
    return Functor(B, D, obj, arr, name=f"^{F.name}")


def comma_lift_functor_compositional(F: Functor) -> Functor:
    """The lift assembled from projections: objects via ``J F psi``, arrows via ``(F F_st; F S_nd)``.

    Kept apart from :func:`comma_lift_functor` so the two can be compared.
    """
    B = arrow_category(F.src)
    D = arrow_category(F.dst)
    ps, fst, snd = psi(F.src), proj_fst(F.src), proj_snd(F.src)
    obj = {x: encapsulate(F.dst, F.ar(ps(x))) for x in B.objects}
    arr = {}
    for s in B.arrows:
        h, k = F.ar(fst.ar(s)), F.ar(snd.ar(s))
        arr[s] = square_id(h, k, obj[B.dom[s]], obj[B.cod[s]])
    return Functor(B, D, obj, arr, name=f"^{F.name}")


def comma_lift_nat(tau: NatTrans) -> NatTrans:
    """Component at ``J(f: a -> b)`` is the square ``(tau a; tau b)``."""
    F, G = tau.F, tau.G
    B = arrow_category(F.src)
    Fh, Gh = comma_lift_functor(F), comma_lift_functor(G)
    comps = {}
    for x in B.objects:
        f = B.structure[x]
        comps[x] = square_id(
            tau.components[F.src.dom[f]],
            tau.components[F.src.cod[f]],
            Fh.obj_map[x],
            Gh.obj_map[x],
        )
    return NatTrans(Fh, Gh, comps, name=f"^{tau.name}")


def nat_functor(tau: NatTrans) -> Functor:
    """``N_tau: B -> D|D`` with ``a -> J(tau a)`` and ``f -> (F f; G f)``."""
    F, G = tau.F, tau.G
    B = F.src
    D = arrow_category(F.dst)
    obj = {a: encapsulated(tau.components[a]) for a in B.objects}
    arr = {
        f: square_id(F.ar(f), G.ar(f), obj[B.dom[f]], obj[B.cod[f]])
        for f in B.arrows
    }
    return Functor(B, D, obj, arr, name=f"N_{tau.name}")


# -- cube equations ---------------------------------------------------------------------


@dataclass(frozen=True)
class Equation:
    label: str
    lhs: tuple[ArrId, ...]
    rhs: tuple[ArrId, ...]

    def __str__(self) -> str:
        def show(p: tuple[ArrId, ...]) -> str:
            return " . ".join(reversed(p))

        return f"{show(self.lhs)} = {show(self.rhs)}"


@dataclass(frozen=True)
class CubeEquations:
    """Six commutative faces; paths are listed first-arrow-first."""

    category: FiniteCategory
    equations: tuple[Equation, ...]

    def __len__(self) -> int:
        return len(self.equations)

    def __iter__(self):
        return iter(self.equations)

    def all_commute(self) -> bool:
        return all(is_commutative(self.category, e.lhs, e.rhs) for e in self.equations)


def _checked(cat: FiniteCategory, eqs: list[Equation]) -> CubeEquations:
    for e in eqs:
        if not is_commutative(cat, e.lhs, e.rhs):
            raise NotCommutative(f"face {e.label} fails: {e}")
    return CubeEquations(cat, tuple(eqs))


def cube_equations(tau: NatTrans, sq: ArrId) -> CubeEquations:
    """The six faces in ``D`` cut out by ``tau`` along a square ``(h;k): J(f) -> J(g)`` of ``B``."""
    F, G = tau.F, tau.G
    B = F.src
    s = square_of(arrow_category(B), sq)
    f, g = decapsulate(B, s.src), decapsulate(B, s.dst)
    h, k = s.h, s.k
    a, b, c, d = B.dom[f], B.cod[f], B.dom[g], B.cod[g]
    t = tau.components
    F1, G1 = F.ar, G.ar
    eqs = [
        Equation("F square", (F1(f), F1(k)), (F1(h), F1(g))),
        Equation("G square", (G1(f), G1(k)), (G1(h), G1(g))),
        Equation("naturality at f", (t[a], G1(f)), (F1(f), t[b])),
        Equation("naturality at g", (t[c], G1(g)), (F1(g), t[d])),
        Equation("naturality at h", (t[a], G1(h)), (F1(h), t[c])),
        Equation("naturality at k", (t[b], G1(k)), (F1(k), t[d])),
    ]
    return _checked(F.dst, eqs)


def level_cube_equations(C: FiniteCategory, x: ArrId) -> CubeEquations:
    """The six base equations of a level-3 arrow ``((l1;l2);(l3;l4)): J(h1;k1) -> J(h2;k2)``."""
    C2 = arrow_category(C)
    C3 = arrow_category(C2)
    outer = square_of(C3, x)
    s1 = square_of(C2, decapsulate(C2, outer.src))
    s2 = square_of(C2, decapsulate(C2, outer.dst))
    top = square_of(C2, outer.h)
    bottom = square_of(C2, outer.k)
    f1, g1 = decapsulate(C, s1.src), decapsulate(C, s1.dst)
    f2, g2 = decapsulate(C, s2.src), decapsulate(C, s2.dst)
    h1, k1, h2, k2 = s1.h, s1.k, s2.h, s2.k
    l1, l2, l3, l4 = top.h, top.k, bottom.h, bottom.k
    eqs = [
        Equation("source face", (h1, g1), (f1, k1)),
        Equation("target face", (h2, g2), (f2, k2)),
        Equation("top face", (l1, f2), (f1, l2)),
        Equation("left face", (l1, h2), (h1, l3)),
        Equation("right face", (l2, k2), (k1, l4)),
        Equation("bottom face", (l3, g2), (g1, l4)),
    ]
    return _checked(C, eqs)


# -- the level tower --------------------------------------------------------------------


class LevelTower:
    """Lazily materialized levels ``C_1 = C``, ``C_{n+1} = C_n | C_n``."""

    def __init__(self, base: FiniteCategory, budget: int | None = None):
        self.base = base
        self.budget = budget
        self._levels: list[FiniteCategory] = [base]
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"LevelTower({self.base.name}, materialized={len(self._levels)})"

    @property
    def materialized(self) -> int:
        return len(self._levels)

    def level(self, n: int) -> FiniteCategory:
        if n < 1:
            raise ValueError("levels are numbered from 1")
        with self._lock:
            while len(self._levels) < n:
                self._levels.append(arrow_category(self._levels[-1], self.budget))
            return self._levels[n - 1]

    def encapsulate(self, n: int, f: ArrId) -> ObjId:
        """Level-``n`` arrow to level-``n+1`` object."""
        return encapsulate(self.level(n), f)

    def decapsulate(self, n: int, x: ObjId) -> ArrId:
        """Level-``n+1`` object back to the level-``n`` arrow."""
        self.level(n + 1)
        return decapsulate(self.level(n), x)


def level(tower: LevelTower, n: int) -> FiniteCategory:
    return tower.level(n)


def terminal_category() -> FiniteCategory:
    return _TERMINAL


_TERMINAL = make_category("1", ["pt"])
_PEANO_TOWER = LevelTower(_TERMINAL)


def peano(n: int) -> FiniteCategory:
    """``0`` is the empty category; ``n >= 1`` is level ``n`` of the tower over ``1``."""
    if n < 0:
        raise ValueError("peano numbers are nonnegative")
    if n == 0:
        return empty_category("0")
    return _PEANO_TOWER.level(n)


# -- arrow labels -------------------------------------------------------------------------

ArrowLabel = Union[str, tuple]


def arrow_label(cat: FiniteCategory, f: ArrId) -> ArrowLabel:
    """Binary tree of base arrows under a (possibly nested) square."""
    base = is_arrow_category_of(cat)
    if base is None:
        if f not in cat.arrow_set:
            raise UnknownArrow(f"{f!r} is not an arrow of {cat.name}")
        return f
    sq = square_of(cat, f)
    return (arrow_label(base, sq.h), arrow_label(base, sq.k))


def _depth(label: ArrowLabel) -> int:
    if isinstance(label, str):
        return 0
    if not (isinstance(label, tuple) and len(label) == 2):
        raise MalformedLabel(f"label node must be a pair, got {label!r}")
    left, right = _depth(label[0]), _depth(label[1])
    if left != right:
        raise MalformedLabel("label tree is not complete")
    return left + 1


def leaf_count(label: ArrowLabel) -> int:
    return 2 ** _depth(label)
