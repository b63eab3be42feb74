"""Functors and natural transformations between finite categories."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .core import (
    ArrId,
    FiniteCategory,
    ObjId,
    ValidationReport,
    Violation,
    same_category,
)
from .errors import BoundaryMismatch


@dataclass(frozen=True, eq=False)
class Functor:
    src: FiniteCategory
    dst: FiniteCategory
    obj_map: Mapping[ObjId, ObjId]
    arr_map: Mapping[ArrId, ArrId]
    name: str = field(default="F", compare=False)

    def __call__(self, x: str) -> str:
        """Apply to an object or an arrow id (objects take precedence)."""
        if x in self.obj_map:
            return self.obj_map[x]
        return self.arr_map[x]

    def ob(self, a: ObjId) -> ObjId:
        return self.obj_map[a]

    def ar(self, f: ArrId) -> ArrId:
        return self.arr_map[f]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Functor):
            return NotImplemented
        return (
            same_category(self.src, other.src)
            and same_category(self.dst, other.dst)
            and dict(self.obj_map) == dict(other.obj_map)
            and dict(self.arr_map) == dict(other.arr_map)
        )

    def __hash__(self) -> int:
        return hash((self.src.name, self.dst.name, tuple(sorted(self.obj_map.items()))))

    def __repr__(self) -> str:
        return f"Functor({self.name}: {self.src.name} -> {self.dst.name})"


@dataclass(frozen=True, eq=False)
class NatTrans:
    """A natural transformation ``F => G`` given by its components."""

    F: Functor
    G: Functor
    components: Mapping[ObjId, ArrId]
    name: str = field(default="tau", compare=False)

    @property
    def src(self) -> FiniteCategory:
        return self.F.src

    @property
    def dst(self) -> FiniteCategory:
        return self.F.dst

    def __call__(self, a: ObjId) -> ArrId:
        return self.components[a]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NatTrans):
            return NotImplemented
        return (
            self.F == other.F
            and self.G == other.G
            and dict(self.components) == dict(other.components)
        )

    def __hash__(self) -> int:
        return hash((hash(self.F), hash(self.G), tuple(sorted(self.components.items()))))

    def __repr__(self) -> str:
        return f"NatTrans({self.name}: {self.F.name} => {self.G.name})"


@dataclass(frozen=True)
class IsoWitness:
    forward: Functor
    backward: Functor


def validate_functor(F: Functor) -> ValidationReport:
    out: list[Violation] = []
    src, dst = F.src, F.dst
    for a in src.objects:
        if a not in F.obj_map:
            out.append(Violation("totality", (a,)))
        elif F.obj_map[a] not in dst.object_set:
            out.append(Violation("typing", (a, F.obj_map[a])))
    for f in src.arrows:
        if f not in F.arr_map:
            out.append(Violation("totality", (f,)))
        elif F.arr_map[f] not in dst.arrow_set:
            out.append(Violation("typing", (f, F.arr_map[f])))
    if out:
        return ValidationReport.of(out)
    for f in src.arrows:
        Ff = F.arr_map[f]
        if dst.dom[Ff] != F.obj_map[src.dom[f]] or dst.cod[Ff] != F.obj_map[src.cod[f]]:
            out.append(Violation("dom/cod coherence", (f, Ff)))
    if out:
        return ValidationReport.of(out)
    for a in src.objects:
        if F.arr_map[src.id_of[a]] != dst.id_of[F.obj_map[a]]:
            out.append(Violation("identity", (a,)))
    for (f, g), h in src.comp.items():
        if dst.comp[(F.arr_map[f], F.arr_map[g])] != F.arr_map[h]:
            out.append(Violation("composition", (f, g)))
    return ValidationReport.of(out)


def identity_functor(C: FiniteCategory) -> Functor:
    return Functor(
        C,
        C,
        {a: a for a in C.objects},
        {f: f for f in C.arrows},
        name=f"Id_{C.name}",
    )


def constant_functor(src: FiniteCategory, dst: FiniteCategory, c: ObjId) -> Functor:
    i = dst.id_of[c]
    return Functor(
        src,
        dst,
        {a: c for a in src.objects},
        {f: i for f in src.arrows},
        name=f"const_{c}",
    )


def compose_functors(F: Functor, G: Functor) -> Functor:
    """``F . G``: apply ``G`` first."""
    if not same_category(G.dst, F.src):
        raise BoundaryMismatch(f"cannot compose {F.name} after {G.name}: "
                               f"{G.dst.name} != {F.src.name}")
    return Functor(
        G.src,
        F.dst,
        {a: F.obj_map[b] for a, b in G.obj_map.items()},
        {f: F.arr_map[g] for f, g in G.arr_map.items()},
        name=f"{F.name}.{G.name}",
    )


def validate_nat_trans(tau: NatTrans) -> ValidationReport:
    F, G = tau.F, tau.G
    out: list[Violation] = []
    if not (same_category(F.src, G.src) and same_category(F.dst, G.dst)):
        return ValidationReport.of([Violation("boundary", (F.name, G.name))])
    src, dst = F.src, F.dst
    for a in src.objects:
        t = tau.components.get(a)
        if t is None or t not in dst.arrow_set:
            out.append(Violation("typing", (a, t)))
        elif dst.dom[t] != F.obj_map[a] or dst.cod[t] != G.obj_map[a]:
            out.append(Violation("typing", (a, t)))
    if out:
        return ValidationReport.of(out)
    for f in src.arrows:
        a, b = src.dom[f], src.cod[f]
        if dst.comp[(F.arr_map[f], tau.components[b])] != dst.comp[(tau.components[a], G.arr_map[f])]:
            out.append(Violation("naturality", (f,)))
    return ValidationReport.of(out)


def identity_nat(F: Functor) -> NatTrans:
    return NatTrans(F, F, {a: F.dst.id_of[F.obj_map[a]] for a in F.src.objects},
                    name=f"id_{F.name}")


def vertical_compose(tau: NatTrans, eta: NatTrans) -> NatTrans:
    """``tau: F => G`` followed by ``eta: G => H`` gives ``F => H``."""
    if tau.G != eta.F:
        raise BoundaryMismatch(f"{tau.name} ends at {tau.G.name}, {eta.name} starts at {eta.F.name}")
    dst = tau.dst
    return NatTrans(
        tau.F,
        eta.G,
        {a: dst.comp[(tau.components[a], eta.components[a])] for a in tau.src.objects},
        name=f"{eta.name}*{tau.name}",
    )


def horizontal_compose(tau: NatTrans, eta: NatTrans) -> NatTrans:
    """Godement product ``tau o eta`` for ``eta: H => K: B -> C`` and ``tau: F => G: C -> D``.

    The result runs ``F.H => G.K``; the component at ``b`` is
    ``G(eta_b) . tau_{H b}``.
    """
    if not same_category(eta.dst, tau.src):
        raise BoundaryMismatch(f"{eta.name} lands in {eta.dst.name}, {tau.name} starts at {tau.src.name}")
    F, G = tau.F, tau.G
    H, K = eta.F, eta.G
    D = tau.dst
    comps = {
        b: D.comp[(tau.components[H.obj_map[b]], G.arr_map[eta.components[b]])]
        for b in eta.src.objects
    }
    return NatTrans(compose_functors(F, H), compose_functors(G, K), comps,
                    name=f"{tau.name}o{eta.name}")


def whisker_left(tau: NatTrans, H: Functor) -> NatTrans:
    """``tau H``: precompose every component with ``H`` (``F.H => G.H``)."""
    return horizontal_compose(tau, identity_nat(H))


def whisker_right(L: Functor, tau: NatTrans) -> NatTrans:
    """``L tau``: apply ``L`` to every component (``L.F => L.G``)."""
    return horizontal_compose(identity_nat(L), tau)


def check_iso(w: IsoWitness) -> ValidationReport:
    out: list[Violation] = []
    fwd, bwd = w.forward, w.backward
    if not (same_category(fwd.dst, bwd.src) and same_category(bwd.dst, fwd.src)):
        return ValidationReport.of([Violation("boundary", (fwd.name, bwd.name))])
    for label, F in (("forward", fwd), ("backward", bwd)):
        rep = validate_functor(F)
        out.extend(Violation(f"{label} {v.law}", v.witnesses) for v in rep.violations)
    if out:
        return ValidationReport.of(out)
    for a in fwd.src.objects:
        if bwd.obj_map[fwd.obj_map[a]] != a:
            out.append(Violation("backward.forward identity", (a,)))
    for f in fwd.src.arrows:
        if bwd.arr_map[fwd.arr_map[f]] != f:
            out.append(Violation("backward.forward identity", (f,)))
    for b in bwd.src.objects:
        if fwd.obj_map[bwd.obj_map[b]] != b:
            out.append(Violation("forward.backward identity", (b,)))
    for g in bwd.src.arrows:
        if fwd.arr_map[bwd.arr_map[g]] != g:
            out.append(Violation("forward.backward identity", (g,)))
    return ValidationReport.of(out)
