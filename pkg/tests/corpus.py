"""Shared fixture corpus: categories, functors and transformations used across the suite."""

from __future__ import annotations

import random
from pathlib import Path

from commaforge.arrows import arrow_category
from commaforge.core import product_category
from commaforge.fixtures import (
    DIAMOND,
    ONE,
    THREE,
    TWO,
    TWO_D,
    cyclic_monoid,
    free_dag_category,
    galois_pair,
    inclusion_two_three,
    pick,
    random_category,
    thin_functor,
    thin_nat,
    truncated_monoid,
)
from commaforge.functors import Functor, NatTrans, constant_functor, identity_functor, identity_nat

FIXTURE_DIR = Path(__file__).parent / "fixtures"
CAT_FILES = sorted(FIXTURE_DIR.glob("*.cat"))

Z3 = cyclic_monoid(3)
TRUNC2 = truncated_monoid(2)
PATHS = free_dag_category({"f": ("a", "b"), "g": ("a", "b"), "h": ("b", "c")}, ["a", "b", "c"], name="Paths")

NAMED_CATEGORIES = {
    "1": ONE,
    "2": TWO,
    "3": THREE,
    "2_D": TWO_D,
    "Diamond": DIAMOND,
    "Z3": Z3,
    "Trunc2": TRUNC2,
    "Paths": PATHS,
}


def random_corpus(count: int = 24, seed: int = 20261015):
    rng = random.Random(seed)
    return [random_category(rng, name=f"R{i}") for i in range(count)]


def chain_map(lo: str, hi: str, name: str) -> Functor:
    """Thin functor ``2 -> 3`` picking the pair ``lo <= hi``."""
    return thin_functor(TWO, THREE, {"0": lo, "1": hi}, name=name)


def z3_inverse() -> Functor:
    return Functor(Z3, Z3, {"pt": "pt"}, {"id_pt": "id_pt", "r1": "r2", "r2": "r1"}, name="inv")


def functor_corpus() -> list[Functor]:
    F, G = galois_pair()
    out = [F, G, inclusion_two_three(), z3_inverse(), pick(DIAMOND, "a"),
           constant_functor(PATHS, TWO, "1"), chain_map("1", "2", "hi")]
    out += [identity_functor(C) for C in NAMED_CATEGORIES.values()]
    return out


def nat_corpus() -> list[NatTrans]:
    lo, mid, hi = chain_map("0", "1", "lo"), chain_map("0", "2", "mid"), chain_map("1", "2", "hi")
    F, G = galois_pair()
    from commaforge.universal import adjunction_from_order

    adj = adjunction_from_order(F, G)
    swap = Functor(TWO_D, TWO_D, {"a1": "a2", "a2": "a1"}, {"id_a1": "id_a2", "id_a2": "id_a1"}, name="swap")
    return [
        thin_nat(lo, mid, "lo_mid"),
        thin_nat(mid, hi, "mid_hi"),
        thin_nat(lo, hi, "lo_hi"),
        adj.unit,
        adj.counit,
        identity_nat(z3_inverse()),
        identity_nat(swap),
        NatTrans(identity_functor(Z3), identity_functor(Z3), {"pt": "r1"}, name="rot"),
    ]


def product_diagonal(C) -> Functor:
    P = product_category([C, C])
    from commaforge.core import product_id

    return Functor(
        C, P,
        {a: product_id([a, a]) for a in C.objects},
        {f: product_id([f, f]) for f in C.arrows},
        name="pair",
    )


def level(C, n: int):
    for _ in range(n - 1):
        C = arrow_category(C)
    return C
