import json
import os
import subprocess
import sys

import pytest

from commaforge.cli import main
from commaforge.dsl import parse, serialize

from corpus import FIXTURE_DIR


def fx(name):
    return str(FIXTURE_DIR / name)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestExamples:
    def test_validate(self, capsys):
        code, out, _ = run(capsys, "validate", fx("two.cat"))
        assert code == 0
        assert out.splitlines()[-1] == "valid"

    def test_level(self, capsys):
        code, out, _ = run(capsys, "level", "--n", "2", fx("two.cat"))
        assert (code, out) == (0, "3 objects, 6 arrows\n")

    def test_peano(self, capsys):
        code, out, _ = run(capsys, "peano", "--n", "5")
        assert (code, out) == (0, "1 object, 1 arrow, leaf-count 16\n")

    def test_peano_zero(self, capsys):
        assert run(capsys, "peano", "--n", "0")[1] == "0 objects, 0 arrows\n"

    def test_naturals_report(self, capsys):
        code, out, _ = run(capsys, "naturals-report", "--max", "3")
        assert code == 0
        assert out.splitlines()[-1] == "3: 1 object, 1 arrow, leaf-count 4"


class TestCommands:
    @pytest.mark.parametrize("name", sorted(p.name for p in FIXTURE_DIR.glob("*.cat")))
    def test_every_fixture_validates(self, capsys, name):
        assert run(capsys, "validate", fx(name))[0] == 0

    def test_lift(self, capsys):
        code, out, _ = run(capsys, "lift", fx("three.cat"))
        assert (code, out) == (0, "6 objects, 20 arrows\n")

    def test_lift_emit_reparses(self, capsys):
        code, out, _ = run(capsys, "lift", "--emit", fx("two.cat"))
        doc = out.split("\n", 1)[1]
        ws = parse(doc)
        assert len(next(iter(ws.categories.values())).arrows) == 6

    def test_lift_functor_and_nat(self, capsys):
        assert run(capsys, "lift", "--functor", "F", fx("galois.cat"))[0] == 0
        code, out, _ = run(capsys, "lift", "--nat", "up", fx("nat.cat"))
        assert code == 0 and out.endswith("valid\n")

    def test_limit_and_colimit(self, capsys):
        assert run(capsys, "limit", "--diagram", "ab", fx("diamond.cat"))[1].startswith("limit apex bot\n")
        assert run(capsys, "colimit", "--diagram", "ab", fx("diamond.cat"))[1].startswith("colimit apex top\n")

    def test_limit_at_level_three(self, capsys):
        code, out, _ = run(capsys, "limit", "--diagram", "ab", "--level", "3", fx("diamond.cat"))
        assert code == 0 and out.endswith("certified\n")

    def test_missing_limit(self, capsys):
        code, out, _ = run(capsys, "limit", "--diagram", "fg", fx("parallel.cat"))
        assert (code, out) == (0, "no limit\n")

    def test_missing_limit_cannot_propagate(self, capsys):
        assert run(capsys, "limit", "--diagram", "fg", "--level", "2", fx("parallel.cat"))[0] == 1

    def test_adjunction(self, capsys):
        code, out, _ = run(capsys, "adjoint-check", fx("galois.cat"))
        assert (code, out) == (0, "level 1: F -| G ok\n")

    def test_lift_adjunction(self, capsys):
        code, out, _ = run(capsys, "lift-adjunction", "--times", "2", fx("galois.cat"))
        assert code == 0 and len(out.splitlines()) == 3
        assert all(line.endswith(" ok") for line in out.splitlines())

    def test_adjunction_from_order(self, capsys):
        assert run(capsys, "adjoint-check", "--left", "F", "--right", "G", fx("galois.cat"))[0] == 0

    def test_wrong_way_adjunction(self, capsys):
        assert run(capsys, "adjoint-check", "--left", "G", "--right", "F", fx("galois.cat"))[0] == 1

    def test_propagate_diagonal(self, capsys):
        code, out, _ = run(capsys, "propagate", "--diagonal", "Two", "--n", "3", fx("two.cat"))
        assert code == 0 and out.endswith("diagonal property holds\n")

    def test_propagate_functor_and_nat(self, capsys):
        assert run(capsys, "propagate", "--functor", "F", "--n", "3", fx("galois.cat"))[0] == 0
        assert run(capsys, "propagate", "--nat", "up", "--n", "2", fx("nat.cat"))[0] == 0

    def test_cs_act(self, capsys):
        code, out, _ = run(capsys, "cs-act", "--g", "2", "--g", "-1", fx("two.cat"))
        assert code == 0
        assert out.splitlines() == ["g_2: level 3", "g_-1: level 2", "3 objects, 6 arrows"]

    def test_iso_2(self, capsys):
        code, out, _ = run(capsys, "iso-2", fx("three.cat"))
        assert code == 0 and out.endswith("isomorphic\n")

    def test_dot(self, capsys):
        code, out, _ = run(capsys, "dot", fx("two.cat"))
        assert code == 0 and out.startswith('digraph "Two" {')
        assert out.count("->") == 1
        lines = run(capsys, "dot", "--level", "2", fx("two.cat"))[1].splitlines()
        assert sum(1 for x in lines if "[label=" in x) == 3

    def test_fmt(self, capsys):
        code, out, _ = run(capsys, "fmt", fx("galois.cat"))
        assert code == 0
        assert out == serialize(parse((FIXTURE_DIR / "galois.cat").read_text()))

    def test_fmt_of_empty_document(self, capsys):
        assert run(capsys, "fmt", fx("empty.cat"))[:2] == (0, "")


class TestExitCodes:
    def test_validation_failure(self, capsys, tmp_path):
        bad = tmp_path / "bad.cat"
        bad.write_text("category C { objects: a; arrows: f: a -> a }")
        code, _, err = run(capsys, "validate", str(bad))
        assert code == 1 and "closure" in err

    def test_syntax_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.cat"
        bad.write_text("category C {")
        code, _, err = run(capsys, "validate", str(bad))
        assert code == 1 and "1:13" in err

    def test_domain_failures(self, capsys):
        assert run(capsys, "cs-act", "--g", "-1", fx("two.cat"))[0] == 1
        assert run(capsys, "propagate", "--functor", "F", "--case", "ascending", "--n", "2", fx("galois.cat"))[0] == 1

    @pytest.mark.parametrize("argv", [
        [],
        ["frobnicate"],
        ["level", fx("two.cat")],
        ["level", "--n", "0", fx("two.cat")],
        ["peano", "--n", "-1"],
        ["validate", "/nonexistent/x.cat"],
        ["lift", "--functor", "nope", fx("galois.cat")],
        ["limit", fx("two.cat")],
        ["propagate", "--n", "2", "--case", "sideways", fx("two.cat")],
        ["adjoint-check", "--left", "F", fx("galois.cat")],
    ])
    def test_usage(self, capsys, argv):
        assert run(capsys, *argv)[0] == 2

    def test_budget(self, capsys):
        code, _, err = run(capsys, "--budget", "10", "level", "--n", "3", fx("two.cat"))
        assert code == 3 and "budget" in err

    def test_budget_after_subcommand(self, capsys):
        assert run(capsys, "level", "--n", "3", "--budget", "10", fx("two.cat"))[0] == 3

    def test_budget_large_enough(self, capsys):
        assert run(capsys, "level", "--n", "3", "--budget", "20", fx("two.cat"))[0] == 0


class TestJson:
    def test_document(self, capsys):
        code, out, _ = run(capsys, "level", "--n", "2", "--json", fx("two.cat"))
        assert code == 0
        assert json.loads(out) == {"arrows": 6, "level": 2, "name": "Arr(Two)", "objects": 3}

    def test_flag_position(self, capsys):
        a = run(capsys, "--json", "peano", "--n", "4")[1]
        b = run(capsys, "peano", "--n", "4", "--json")[1]
        assert a == b and json.loads(a)["leaf_count"] == 8

    def test_limit_document(self, capsys):
        doc = json.loads(run(capsys, "limit", "--json", "--diagram", "ab", fx("diamond.cat"))[1])
        assert doc["limit"]["apex"] == "bot" and doc["certified"] is True

    @pytest.mark.parametrize("argv", [
        ["validate", fx("galois.cat")],
        ["limit", "--level", "2", fx("diamond.cat")],
        ["iso-2", fx("three.cat")],
        ["lift-adjunction", "--times", "2", fx("galois.cat")],
        ["dot", "--level", "2", fx("quoted.cat")],
    ])
    def test_byte_stable_across_processes(self, argv):
        outs = []
        for seed in ("1", "2"):
            env = dict(os.environ, PYTHONHASHSEED=seed)
            proc = subprocess.run([sys.executable, "-m", "commaforge", "--json", *argv],
                                  capture_output=True, env=env, check=True)
            outs.append(proc.stdout)
        assert outs[0] == outs[1]
        json.loads(outs[0])
