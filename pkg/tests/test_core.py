import random
from dataclasses import replace

import pytest
from hypothesis import given, strategies as st

from commaforge.core import (
    budget,
    categories_equal,
    chain_category,
    compose,
    discrete_category,
    empty_category,
    hom_set,
    identity,
    is_commutative,
    make_category,
    make_poset_category,
    opposite_category,
    power_category,
    product_category,
    validate_category,
)
from commaforge.errors import (
    EndpointMismatch,
    InvalidFactor,
    NotAPartialOrder,
    NotComposable,
    UnknownArrow,
    UnknownObject,
)
from commaforge.fixtures import DIAMOND, ONE, THREE, TWO, random_category

from corpus import NAMED_CATEGORIES, PATHS, Z3


# two candidate composites for f then g, so closure cannot be completed
AMBIGUOUS = {"f": ("a", "b"), "g": ("b", "c"), "h1": ("a", "c"), "h2": ("a", "c")}


def seeds():
    return st.integers(min_value=0, max_value=10**6)


class TestConstruction:
    def test_terminal(self):
        assert ONE.objects == ("pt",)
        assert ONE.arrows == ("id_pt",)
        assert validate_category(ONE).ok

    def test_walking_arrow(self):
        assert TWO.objects == ("0", "1")
        assert set(TWO.arrows) == {"e", "id_0", "id_1"}
        assert TWO.hom("0", "1") == ("e",)
        assert TWO.hom("1", "0") == ()

    def test_chain_of_three_has_six_arrows(self):
        assert len(THREE.arrows) == 6
        assert THREE.comp[("e01", "e12")] == "e02"

    def test_diamond(self):
        assert len(DIAMOND.arrows) == 9
        assert validate_category(DIAMOND).ok

    def test_empty_category_is_valid(self):
        E = empty_category()
        assert E.objects == () and E.arrows == ()
        assert validate_category(E).ok

    def test_discrete(self):
        D = discrete_category("D", ["x", "y", "z"])
        assert len(D.arrows) == 3
        assert all(D.is_identity(f) for f in D.arrows)

    def test_forced_compositions_are_completed(self):
        C = make_category("C", ["a", "b", "c"], {"f": ("a", "b"), "g": ("b", "c"), "h": ("a", "c")})
        assert C.comp[("f", "g")] == "h"
        assert C.comp[("id_a", "f")] == "f"

    def test_ambiguous_composition_is_left_open(self):
        C = make_category("C", ["a", "b", "c"], AMBIGUOUS)
        assert ("f", "g") not in C.comp
        assert validate_category(C).laws() == {"closure"}

    def test_canonical_ordering(self):
        C = make_category("C", ["z", "a", "m"])
        assert C.objects == ("a", "m", "z")
        assert list(C.arrows) == sorted(C.arrows)


class TestValidation:
    def test_closure_failure(self):
        C = make_category("C", ["a"], {"f": ("a", "a")}, complete=True)
        assert "closure" in validate_category(C).laws()

    def test_associativity_failure(self):
        # a one-object magma that is unital but not associative
        table = {}
        els = ["id_pt", "x", "y"]
        for a in els:
            for b in els:
                if a == "id_pt":
                    table[(a, b)] = b
                elif b == "id_pt":
                    table[(a, b)] = a
                else:
                    table[(a, b)] = "x" if (a, b) != ("x", "y") else "y"
        C = make_category("M", ["pt"], {"x": ("pt", "pt"), "y": ("pt", "pt")}, table)
        assert "associativity" in validate_category(C).laws()

    def test_identity_law_failure(self):
        C = make_category("C", ["a"], {"f": ("a", "a")}, {("f", "f"): "f", ("id_a", "f"): "id_a"})
        assert "identity law" in validate_category(C).laws()

    def test_typing_failure(self):
        C = replace(TWO, dom={**TWO.dom, "e": "nowhere"})
        assert "typing" in validate_category(C).laws()

    def test_missing_identity(self):
        C = replace(TWO, id_of={"0": "id_0"})
        assert "identity existence" in validate_category(C).laws()

    def test_spurious_composition(self):
        C = replace(TWO, comp={**TWO.comp, ("e", "e"): "e"})
        assert "spurious composition" in validate_category(C).laws()

    def test_duplicate_ids(self):
        C = replace(TWO, objects=("0", "0", "1"))
        assert "unique ids" in validate_category(C).laws()

    def test_report_is_falsy_on_failure(self):
        C = make_category("C", ["a", "b", "c"], AMBIGUOUS)
        assert not validate_category(C)
        assert validate_category(TWO)


class TestOperations:
    def test_compose_is_diagrammatic(self):
        assert compose(THREE, "e01", "e12") == "e02"

    def test_not_composable(self):
        with pytest.raises(NotComposable):
            compose(THREE, "e12", "e01")

    def test_unknown_arrow(self):
        with pytest.raises(UnknownArrow):
            compose(THREE, "nope", "e01")

    def test_identity_and_unknown_object(self):
        assert identity(TWO, "1") == "id_1"
        with pytest.raises(UnknownObject):
            identity(TWO, "7")
        with pytest.raises(UnknownObject):
            hom_set(TWO, "0", "7")

    def test_hom_set(self):
        assert hom_set(PATHS, "a", "b") == ("p_f", "p_g")
        assert hom_set(PATHS, "b", "a") == ()

    def test_commutativity(self):
        assert is_commutative(THREE, ["e01", "e12"], ["e02"])
        assert not is_commutative(PATHS, ["p_f"], ["p_g"])

    def test_endpoint_mismatch(self):
        with pytest.raises(EndpointMismatch):
            is_commutative(THREE, ["e01"], ["e02"])


class TestPosets:
    def test_not_reflexive(self):
        with pytest.raises(NotAPartialOrder):
            make_poset_category(["a", "b"], [("a", "b")])

    def test_not_antisymmetric(self):
        with pytest.raises(NotAPartialOrder):
            make_poset_category(["a", "b"], [("a", "a"), ("b", "b"), ("a", "b"), ("b", "a")])

    def test_not_transitive(self):
        rel = [("a", "a"), ("b", "b"), ("c", "c"), ("a", "b"), ("b", "c")]
        with pytest.raises(NotAPartialOrder):
            make_poset_category(["a", "b", "c"], rel)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_chain_arrow_count(self, n):
        assert len(chain_category(n).arrows) == n * (n + 1) // 2


class TestProducts:
    def test_single_factor_is_returned(self):
        assert product_category([TWO]) is TWO

    def test_empty_product(self):
        with pytest.raises(InvalidFactor):
            product_category([])

    def test_invalid_factor(self):
        bad = make_category("Bad", ["a", "b", "c"], AMBIGUOUS)
        with pytest.raises(InvalidFactor):
            product_category([TWO, bad])

    def test_sizes(self):
        P = product_category([TWO, THREE])
        assert len(P.objects) == 6 and len(P.arrows) == 18
        assert validate_category(P).ok

    def test_power_is_memoized(self):
        assert power_category(TWO, 2) is power_category(TWO, 2)

    def test_product_respects_budget(self):
        from commaforge.errors import SizeBudgetExceeded

        with budget(arrows=10):
            with pytest.raises(SizeBudgetExceeded):
                product_category([THREE, THREE])


class TestOpposite:
    def test_swaps_direction(self):
        op = opposite_category(TWO)
        assert op.hom("1", "0") == ("e",)
        assert validate_category(op).ok

    def test_name(self):
        assert opposite_category(TWO).name == "2^op"


@given(seeds())
def test_random_categories_validate(seed):
    assert validate_category(random_category(random.Random(seed))).ok


@given(seeds())
def test_opposite_is_involutive(seed):
    C = random_category(random.Random(seed))
    assert categories_equal(opposite_category(opposite_category(C)), C)


@given(seeds(), seeds())
def test_product_counts_multiply(s1, s2):
    A = random_category(random.Random(s1), max_objects=3, max_arrows=6, name="A")
    B = random_category(random.Random(s2), max_objects=3, max_arrows=6, name="B")
    P = product_category([A, B])
    assert len(P.objects) == len(A.objects) * len(B.objects)
    assert len(P.arrows) == len(A.arrows) * len(B.arrows)
    assert validate_category(P).ok


@pytest.mark.parametrize("name", sorted(NAMED_CATEGORIES))
def test_named_fixtures_validate(name):
    assert validate_category(NAMED_CATEGORIES[name]).ok


def test_cyclic_monoid_table():
    assert Z3.comp[("r1", "r2")] == "id_pt"
    assert Z3.comp[("r2", "r2")] == "r1"
