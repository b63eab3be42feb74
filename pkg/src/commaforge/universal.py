"""Universal arrows, limits, colimits and adjunctions, found and certified by exhaustive search."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .arrows import arrow_category, arrow_diagonal, comma_lift_functor, comma_lift_nat, encapsulated, square_id
from .core import (
    ArrId,
    FiniteCategory,
    ObjId,
    ValidationReport,
    Violation,
    opposite_category,
    same_category,
)
from .errors import CertificationFailed, NoBaseLimit
from .fixtures import thin_nat
from .functors import (
    Functor,
    NatTrans,
    compose_functors,
    identity_functor,
    validate_functor,
    validate_nat_trans,
)
from .propagation import (
    BASIC,
    FunctorCategory,
    PropagationCase,
    functor_category,
    functor_category_of,
    modulator_L,
    propagate_functor_step,
    propagate_nat_step,
)

# -- universal arrows --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class UniversalArrow:
    """``(d, g)`` universal from ``c`` to ``G``; with ``dual`` set, ``g: G(d) -> c`` is co-universal.

    ``mediators`` maps each ``(d', f)`` to the unique factorizing arrow
    (``d -> d'``, or ``d' -> d`` for the dual).
    """

    G: Functor
    c: ObjId
    d: ObjId
    g: ArrId
    mediators: Mapping[tuple[ObjId, ArrId], ArrId] = field(default_factory=dict)
    dual: bool = False


def _factorizations(G: Functor, c: ObjId, d: ObjId, g: ArrId,
                    dual: bool) -> Iterator[tuple[ObjId, ArrId, list[ArrId]]]:
    C, D = G.dst, G.src
    for d2 in D.objects:
        if dual:
            for f in C.hom(G.ob(d2), c):
                yield d2, f, [u for u in D.hom(d2, d) if C.comp[(G.ar(u), g)] == f]
        else:
            for f in C.hom(c, G.ob(d2)):
                yield d2, f, [u for u in D.hom(d, d2) if C.comp[(g, G.ar(u))] == f]


def _universal_report(G: Functor, c: ObjId, d: ObjId, g: ArrId, dual: bool,
                      mediators: Mapping | None = None) -> tuple[ValidationReport, dict]:
    C, D = G.dst, G.src
    if c not in C.object_set or d not in D.object_set or g not in C.arrow_set:
        return ValidationReport.of([Violation("typing", (c, d, g))]), {}
    ends = (G.ob(d), c) if dual else (c, G.ob(d))
    if (C.dom[g], C.cod[g]) != ends:
        return ValidationReport.of([Violation("typing", (g,))]), {}
    out: list[Violation] = []
    table = {}
    for d2, f, us in _factorizations(G, c, d, g, dual):
        if not us:
            out.append(Violation("existence", (d2, f)))
        elif len(us) > 1:
            out.append(Violation("uniqueness", (d2, f, *us)))
        else:
            table[(d2, f)] = us[0]
            if mediators is not None and mediators.get((d2, f), us[0]) != us[0]:
                out.append(Violation("mediator", (d2, f)))
    return ValidationReport.of(out), table


def check_universal_arrow(ua: UniversalArrow) -> ValidationReport:
    report, _ = _universal_report(ua.G, ua.c, ua.d, ua.g, ua.dual, ua.mediators)
    return report


def find_universal_arrow(G: Functor, c: ObjId, dual: bool = False) -> UniversalArrow | None:
    C, D = G.dst, G.src
    for d in D.objects:
        cands = C.hom(G.ob(d), c) if dual else C.hom(c, G.ob(d))
        for g in cands:
            report, table = _universal_report(G, c, d, g, dual)
            if report.ok:
                return UniversalArrow(G, c, d, g, table, dual)
    return None


def _certified(G: Functor, c: ObjId, d: ObjId, g: ArrId, dual: bool) -> UniversalArrow:
    report, table = _universal_report(G, c, d, g, dual)
    if not report.ok:
        raise CertificationFailed(f"({d}, {g}) is not universal for {G.name}", report)
    return UniversalArrow(G, c, d, g, table, dual)


def _lift_point(x: ObjId, cat: FiniteCategory, lifted_fc: FunctorCategory | None) -> ObjId:
    """``J(id_x)``, carried through ``L`` when ``cat`` is a functor category."""
    point = encapsulated(cat.id_of[x])
    if lifted_fc is None:
        return point
    return modulator_L(lifted_fc.target, lifted_fc.index).ob(point)


def propagate_universal_arrow(ua: UniversalArrow, case: PropagationCase = BASIC) -> UniversalArrow:
    """Carry ``(d, g)`` one level up as ``(J(id_d), (g;g))`` against the propagated functor.

    In the cases whose source (target) is a functor category, ``d`` (``c``)
    and the square are pushed through the modulator ``L``.
    """
    G = ua.G
    G2 = propagate_functor_step(G, case)
    descends = case.kind in ("descending", "balanced")
    ascends = case.kind in ("ascending", "balanced")
    src_fc = functor_category_of(G.src) if descends else None
    dst_fc = functor_category_of(G.dst) if ascends else None
    c2 = _lift_point(ua.c, G.dst, dst_fc)
    d2 = _lift_point(ua.d, G.src, src_fc)
    C = G.dst
    ic, igd = encapsulated(C.id_of[ua.c]), encapsulated(C.id_of[G.ob(ua.d)])
    g2 = square_id(ua.g, ua.g, igd, ic) if ua.dual else square_id(ua.g, ua.g, ic, igd)
    if dst_fc is not None:
        g2 = modulator_L(dst_fc.target, dst_fc.index).ar(g2)
    return _certified(G2, c2, d2, g2, ua.dual)


# -- cones, limits, colimits ---------------------------------------------------------


@dataclass(frozen=True)
class Cone:
    """Apex and legs; for a cocone the legs point into the apex."""

    diagram: Functor = field(compare=False)
    apex: ObjId
    legs: tuple[tuple[ObjId, ArrId], ...]

    def leg(self, a: ObjId) -> ArrId:
        return dict(self.legs)[a]

    @property
    def key(self) -> tuple[ObjId, tuple[tuple[ObjId, ArrId], ...]]:
        return self.apex, self.legs


@dataclass(frozen=True, eq=False)
class LimitCertificate:
    cone: Cone
    mediators: Mapping[tuple, ArrId]
    dual: bool = False

    @property
    def apex(self) -> ObjId:
        return self.cone.apex


def enumerate_cones(diagram: Functor, co: bool = False) -> list[Cone]:
    """All cones (or cocones) over ``diagram``, apexes in canonical order."""
    J, C = diagram.src, diagram.dst
    objs = J.objects
    position = {a: i for i, a in enumerate(objs)}
    checks: dict[int, list[ArrId]] = {}
    for l in J.arrows:
        checks.setdefault(max(position[J.dom[l]], position[J.cod[l]]), []).append(l)
    cones: list[Cone] = []

    def commutes(legs: dict, l: ArrId) -> bool:
        a, b = J.dom[l], J.cod[l]
        if co:
            return C.comp[(diagram.ar(l), legs[b])] == legs[a]
        return C.comp[(legs[a], diagram.ar(l))] == legs[b]

    for apex in C.objects:
        legs: dict[ObjId, ArrId] = {}

        def assign(i: int) -> None:
            if i == len(objs):
                cones.append(Cone(diagram, apex, tuple((a, legs[a]) for a in objs)))
                return
            a = objs[i]
            hom = C.hom(diagram.ob(a), apex) if co else C.hom(apex, diagram.ob(a))
            for x in hom:
                legs[a] = x
                if all(commutes(legs, l) for l in checks.get(i, ())):
                    assign(i + 1)
            legs.pop(a, None)

        assign(0)
    return cones


def _mediators_into(top: Cone, cones: list[Cone], co: bool) -> tuple[dict, list[Violation]]:
    C = top.diagram.dst
    table, out = {}, []
    for other in cones:
        if co:
            cands = [u for u in C.hom(top.apex, other.apex)
                     if all(C.comp[(t, u)] == o for (_, t), (_, o) in zip(top.legs, other.legs))]
        else:
            cands = [u for u in C.hom(other.apex, top.apex)
                     if all(C.comp[(u, t)] == o for (_, t), (_, o) in zip(top.legs, other.legs))]
        if len(cands) == 1:
            table[other.key] = cands[0]
        else:
            law = "existence" if not cands else "uniqueness"
            out.append(Violation(law, (other.apex, other.legs)))
    return table, out


def _universal_cone(diagram: Functor, co: bool) -> LimitCertificate | None:
    cones = enumerate_cones(diagram, co)
    for cand in cones:
        table, bad = _mediators_into(cand, cones, co)
        if not bad:
            return LimitCertificate(cand, table, co)
    return None


def limit(diagram: Functor) -> LimitCertificate | None:
    """Terminal cone over ``diagram``; the first in canonical order, or ``None``."""
    return _universal_cone(diagram, co=False)


def colimit(diagram: Functor) -> LimitCertificate | None:
    """Initial cocone over ``diagram``; the first in canonical order, or ``None``."""
    return _universal_cone(diagram, co=True)


def opposite_functor(F: Functor) -> Functor:
    return Functor(opposite_category(F.src), opposite_category(F.dst), F.obj_map, F.arr_map,
                   name=f"{F.name}^op")


def check_limit(cert: LimitCertificate) -> ValidationReport:
    """Re-verify cone equations and every mediator against a fresh cone enumeration."""
    cone, co = cert.cone, cert.dual
    D = cone.diagram
    J, C = D.src, D.dst
    out: list[Violation] = []
    legs = dict(cone.legs)
    for a in J.objects:
        x = legs.get(a)
        ends = (D.ob(a), cone.apex) if co else (cone.apex, D.ob(a))
        if x is None or x not in C.arrow_set or (C.dom[x], C.cod[x]) != ends:
            out.append(Violation("leg typing", (a, x)))
    if out:
        return ValidationReport.of(out)
    for l in J.arrows:
        a, b = J.dom[l], J.cod[l]
        ok = (C.comp[(D.ar(l), legs[b])] == legs[a]) if co else (C.comp[(legs[a], D.ar(l))] == legs[b])
        if not ok:
            out.append(Violation("cone", (l,)))
    table, bad = _mediators_into(cone, enumerate_cones(D, co), co)
    out.extend(bad)
    for key, u in table.items():
        if cert.mediators.get(key) != u:
            out.append(Violation("mediator", key))
    return ValidationReport.of(out)


def _level_diagonal(C: FiniteCategory, n: int) -> Functor:
    """``C -> C_n``, ``c |-> J(id ... J(id_c))``, the arrow diagonal iterated."""
    F = identity_functor(C)
    cat = C
    for _ in range(n - 1):
        F = compose_functors(arrow_diagonal(cat), F)
        cat = arrow_category(cat)
    return F


def propagate_limit(diagram: Functor, n: int) -> LimitCertificate:
    """Limit of ``diagram`` pushed to level ``n`` along the iterated arrow diagonal.

    The arrow diagonal has a left adjoint (the codomain functor), so it
    preserves limits; the level-``n`` apex is the encapsulated base apex.
    """
    base = limit(diagram)
    if base is None:
        raise NoBaseLimit(f"{diagram.name} has no limit in {diagram.dst.name}")
    if n == 1:
        return base
    lifted = compose_functors(_level_diagonal(diagram.dst, n), diagram)
    cert = limit(lifted)
    if cert is None:
        raise CertificationFailed(f"no terminal cone over {diagram.name} at level {n}")
    report = check_limit(cert)
    if not report.ok:
        raise CertificationFailed(f"level-{n} limit failed re-verification", report)
    return cert


# -- adjunctions ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Adjunction:
    """``F -| G`` with ``F: C -> D``, unit ``Id_C => G.F`` and counit ``F.G => Id_D``."""

    F: Functor
    G: Functor
    unit: NatTrans
    counit: NatTrans
    name: str = "adj"


def check_adjunction(adj: Adjunction) -> ValidationReport:
    F, G, eta, eps = adj.F, adj.G, adj.unit, adj.counit
    if not (same_category(F.dst, G.src) and same_category(G.dst, F.src)):
        return ValidationReport.of([Violation("boundary", (F.name, G.name))])
    out: list[Violation] = []
    for label, Fn in (("left functor", F), ("right functor", G)):
        out.extend(Violation(f"{label} {v.law}", v.witnesses) for v in validate_functor(Fn).violations)
    if out:
        return ValidationReport.of(out)
    C, D = F.src, F.dst
    if eta.F != identity_functor(C) or eta.G != compose_functors(G, F):
        out.append(Violation("unit boundary", (eta.name,)))
    if eps.F != compose_functors(F, G) or eps.G != identity_functor(D):
        out.append(Violation("counit boundary", (eps.name,)))
    if out:
        return ValidationReport.of(out)
    for label, t in (("unit", eta), ("counit", eps)):
        out.extend(Violation(f"{label} {v.law}", v.witnesses) for v in validate_nat_trans(t).violations)
    if out:
        return ValidationReport.of(out)
    for c in C.objects:
        if D.comp[(F.ar(eta(c)), eps(F.ob(c)))] != D.id_of[F.ob(c)]:
            out.append(Violation("left triangle", (c,)))
    for d in D.objects:
        if C.comp[(eta(G.ob(d)), G.ar(eps(d)))] != C.id_of[G.ob(d)]:
            out.append(Violation("right triangle", (d,)))
    return ValidationReport.of(out)


def adjunction_from_order(F: Functor, G: Functor, name: str = "adj") -> Adjunction:
    """Unit and counit between thin categories, forced by the order.

    Raises :class:`BoundaryMismatch` when ``c <= G F c`` or ``F G d <= d`` fails.
    """
    C, D = F.src, F.dst
    unit = thin_nat(identity_functor(C), compose_functors(G, F), name="eta")
    counit = thin_nat(compose_functors(F, G), identity_functor(D), name="eps")
    return Adjunction(F, G, unit, counit, name)


def _rebased(F2: Functor, G2: Functor, unit: NatTrans, counit: NatTrans, name: str) -> Adjunction:
    C2, D2 = F2.src, F2.dst
    return Adjunction(
        F2,
        G2,
        NatTrans(identity_functor(C2), compose_functors(G2, F2), dict(unit.components), name=unit.name),
        NatTrans(compose_functors(F2, G2), identity_functor(D2), dict(counit.components), name=counit.name),
        name,
    )


def lift_adjunction(adj: Adjunction) -> Adjunction:
    """Comma-lift all four pieces; the boundaries are re-expressed on the lifted functors."""
    return _rebased(
        comma_lift_functor(adj.F),
        comma_lift_functor(adj.G),
        comma_lift_nat(adj.unit),
        comma_lift_nat(adj.counit),
        f"{adj.name}^",
    )


def infer_case(F: Functor) -> PropagationCase:
    """Pick the propagation case from which ends of ``F`` are functor categories."""
    s, t = functor_category_of(F.src), functor_category_of(F.dst)
    if s and t:
        return PropagationCase("balanced", s.index, t.index)
    if s:
        return PropagationCase("descending", s.index)
    if t:
        return PropagationCase("ascending", t.index)
    return BASIC


def propagate_adjunction(adj: Adjunction) -> Adjunction:
    """Propagate each piece with the case its boundary shape calls for."""
    F2 = propagate_functor_step(adj.F, infer_case(adj.F))
    G2 = propagate_functor_step(adj.G, infer_case(adj.G))
    unit = propagate_nat_step(adj.unit, infer_case(adj.unit.F))
    counit = propagate_nat_step(adj.counit, infer_case(adj.counit.F))
    return _rebased(F2, G2, unit, counit, f"{adj.name}_2")


def limit_adjunction(J: FiniteCategory, C: FiniteCategory) -> Adjunction:
    """Constant-diagram functor left adjoint to the chosen limit functor ``C^J -> C``.

    Raises :class:`NoBaseLimit` if some diagram ``J -> C`` has no limit.
    """
    from .propagation import general_diagonal

    FC = functor_category(J, C)
    E = FC.realized
    certs = {}
    for x in E.objects:
        cert = limit(FC.functor(x))
        if cert is None:
            raise NoBaseLimit(f"{x} has no limit in {C.name}")
        certs[x] = cert
    lim_obj = {x: certs[x].apex for x in E.objects}
    lim_arr = {}
    for s in E.arrows:
        tau = FC.transformation(s)
        src = certs[E.dom[s]].cone
        legs = tuple((a, C.comp[(x, tau(a))]) for a, x in src.legs)
        lim_arr[s] = certs[E.cod[s]].mediators[(src.apex, legs)]
    lim = Functor(E, C, lim_obj, lim_arr, name="lim")
    diag = general_diagonal(C, J, 1)
    counit = {}
    for x in E.objects:
        const = FC.functor(diag.ob(lim_obj[x]))
        counit[x] = FC.arrow_of(NatTrans(const, FC.functor(x), dict(certs[x].cone.legs)))
    unit = {}
    for c in C.objects:
        cert = certs[diag.ob(c)]
        legs = tuple((a, C.id_of[c]) for a in J.objects)
        unit[c] = cert.mediators[(c, legs)]
    return Adjunction(
        diag,
        lim,
        NatTrans(identity_functor(C), compose_functors(lim, diag), unit, name="eta"),
        NatTrans(compose_functors(diag, lim), identity_functor(E), counit, name="eps"),
        name=f"const-lim({J.name},{C.name})",
    )
