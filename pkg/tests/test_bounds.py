import itertools
import json

import numpy as np
import pytest

from hyperramsey import bounds as B
from hyperramsey.direct import EdgeColoring
from hyperramsey.pasting import verify_pasting_coloring

TABLE_ROWS = {(5, 6): 67, (6, 6): 133, (6, 7): 661, (6, 13): 50689, (7, 7): 3961, (8, 8): 194041}


@pytest.fixture(scope="module")
def k4_table():
    limits = B.Limits(k_max=4, p_max=13, q_max=13, k_min=4)
    facts = B.seed_facts(limits, assumed=[(4, 5, 5, 34)])
    return B.compute_table(facts, B.builtin_rules(), limits)


@pytest.fixture(scope="module")
def wide_table():
    limits = B.Limits(k_max=12, p_max=16, q_max=16, k_min=2)
    facts = B.seed_facts(limits, assumed=[(4, 5, 5, 34)])
    return B.compute_table(facts, B.builtin_rules(), limits)


class TestRules:
    def rule(self, rid):
        return {r.id: r for r in B.builtin_rules()}[rid]

    def test_r6_factor(self):
        assert self.rule("R6").factor(4, 6, 13) == 6

    def test_guards(self):
        assert not self.rule("R2").applies(4, 6, 6)
        assert self.rule("R2").applies(4, 6, 7)
        assert not self.rule("R4").applies(9, 11, 10)
        assert self.rule("R4").applies(8, 10, 9)
        assert not self.rule("R3").applies(26, 28, 28)
        assert self.rule("R1").applies(4, 6, 5) and not self.rule("R1").applies(5, 7, 6)
        r5 = self.rule("R5")
        assert r5.applies(6, 8, 7) and not r5.applies(7, 9, 8) and r5.applies(7, 9, 9)

    def test_r6_needs_factor_two(self):
        # k=12, q=13: (13-1)//10 = 1 is no improvement, so the rule does not fire
        assert not self.rule("R6").applies(12, 14, 13)

    def test_factor_at_least_two_when_guard_holds(self):
        for r in B.builtin_rules():
            for k in range(2, 14):
                for p in range(k, 30):
                    for q in range(k, 30):
                        if r.applies(k, p, q):
                            assert r.factor(k, p, q) >= 2


class TestSeeds:
    def test_base_and_trivial(self):
        facts = B.seed_facts(B.Limits(7, 9, 9, 6))
        assert str(facts[(6, 7, 7)]) == "r_6(7,7) >= 7"
        assert facts[(6, 9, 6)].value == 9 and facts[(6, 6, 9)].value == 9

    def test_certificate(self, tmp_path):
        # pentagon: r_2(3,3) >= 6
        edges = sorted(itertools.combinations(range(1, 6), 2), key=lambda e: e[::-1])
        col = EdgeColoring(5, 2, np.array([(b - a) in (1, 4) for a, b in edges], dtype=np.uint8))
        path = tmp_path / "r2.cert"
        path.write_text(col.to_text(3, 3))
        facts = B.seed_facts(B.Limits(2, 5, 5, 2), [path])
        assert facts[(2, 3, 3)].value == 6 and facts[(2, 3, 3)].rule == "cert"

    def test_rejected_certificate(self):
        col = EdgeColoring(5, 2, np.ones(10, dtype=np.uint8))
        with pytest.raises(B.CertificateRejected) as exc:
            B.seed_facts(B.Limits(2, 5, 5, 2), [(col, 3, 3, "all-blue")])
        assert "blue clique" in str(exc.value)


class TestTable:
    @pytest.mark.parametrize("cell,value", sorted(TABLE_ROWS.items()))
    def test_reproduces_rows(self, k4_table, cell, value):
        assert k4_table.value(4, *cell) == value

    def test_derivation_of_5_6(self, k4_table):
        f = k4_table[(4, 5, 6)]
        assert f.chain() == ["SYM", "R1", "assumed"]
        text = B.derivation(f)
        assert text.splitlines()[0].startswith("r_4(5,6) >= 67  [SYM")
        assert "2*(34-1)+1 = 67" in text

    def test_derivation_of_8_8(self, k4_table):
        f = k4_table[(4, 8, 8)]
        assert [x for x in f.chain()[:3]] == ["R2", "SYM", "R2"]
        assert f.factor == 7 and f.premises[0].premises[0].factor == 7
        assert 7 * (7 * 3960 + 1 - 1) + 1 == 194041

    def test_trivial_derivation_is_a_leaf(self, k4_table):
        f = k4_table[(4, 6, 4)]
        assert f.is_seed and B.derivation(f).count("\n") == 1

    @pytest.mark.criterion(6)
    def test_replay(self, wide_table):
        rules = B.builtin_rules()
        for f in wide_table.facts.values():
            assert B.replay(f, rules) == f.value

    def test_replay_catches_tampering(self, k4_table):
        f = k4_table[(4, 7, 7)]
        bad = B.BoundFact(f.k, f.p, f.q, f.value + 1, f.rule, f.detail, f.factor, f.premises, f.rank)
        with pytest.raises(AssertionError):
            B.replay(bad, B.builtin_rules())

    def test_idempotent(self, wide_table):
        again = B.compute_table(wide_table.facts, B.builtin_rules(), wide_table.limits)
        assert {c: f.value for c, f in again.facts.items()} == {c: f.value for c, f in wide_table.facts.items()}
        assert all(again.facts[c] is f for c, f in wide_table.facts.items())

    def test_symmetric_and_monotone(self, wide_table):
        lim = wide_table.limits
        for k in range(lim.k_min, lim.k_max + 1):
            for p in range(k, lim.side + 1):
                for q in range(k, lim.side + 1):
                    v = wide_table.value(k, p, q)
                    assert v == wide_table.value(k, q, p)
                    if p > k:
                        assert v >= wide_table.value(k, p - 1, q)
                    if q > k:
                        assert v >= wide_table.value(k, p, q - 1)
                    assert v >= max(p, q)
                    if p > k and q > k:
                        assert v >= k + 1

    def test_small_k_only_seeds(self, wide_table):
        for (k, p, q), f in wide_table.facts.items():
            if k <= 3:
                assert set(f.chain()) <= {"trivial", "base", "SYM", "PAD"}

    def test_outputs(self, k4_table):
        csv_text = k4_table.to_csv()
        assert csv_text.splitlines()[0] == "k,p,q,value,chain"
        assert "4,7,7,3961," in csv_text
        grid = k4_table.to_text()
        assert grid.startswith("k=4 p\\q")
        assert "194041" in grid

    def test_without_seed_fact(self):
        limits = B.Limits(4, 8, 8, 4)
        t = B.compute_table(B.seed_facts(limits), B.builtin_rules(), limits)
        assert t.value(4, 5, 5) == 5
        assert t.value(4, 6, 5) == 9  # R1 from the trivial base


class TestExtension:
    def test_k26(self):
        out = B.extend_rules(26)
        assert out.installed and out.rule.id == "R3@k26"
        assert [s.name for _, s in out.statuses] == ["SAT", "SAT"]
        assert out.rule.applies(26, 28, 28) and not out.rule.applies(27, 29, 29)
        # stored colorings re-verify
        for (k, p, q, d), chi in zip([s for s, _ in out.statuses], out.rule.colorings):
            assert verify_pasting_coloring(chi, p, q, d).valid
        limits = B.Limits(26, 30, 30, 26)
        facts = B.seed_facts(limits)
        plain = B.compute_table(facts, B.builtin_rules(), limits)
        extended = B.compute_table(facts, B.builtin_rules() + [out.rule], limits)
        assert extended.value(26, 29, 29) > plain.value(26, 29, 29)

    def test_k9_analog_rejected(self):
        out = B.try_pasting_rule(9, "R4")
        assert not out.installed and out.statuses[0][1].name == "UNSAT"

    def test_budget_exhaustion_installs_nothing(self):
        out = B.try_pasting_rule(20, "R3", budget=0)
        assert not out.installed and out.statuses[0][1].name == "BUDGET_EXCEEDED"

    def test_builtin_range(self):
        with pytest.raises(ValueError):
            B.extend_rules(25)


def test_load_config(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"k_max": 4, "assume": [[4, 5, 5, 34]]}))
    assert B.load_config(path)["assume"] == [[4, 5, 5, 34]]
    path.write_text("[1, 2]")
    with pytest.raises(ValueError):
        B.load_config(path)
