"""
框架公理檢查單元測試
"""

import json
from dataclasses import replace

import pytest

from src.core.checks import check_framework, check_transformer, sample_checks
from src.core.exceptions import InputError
from src.core.framework import TransformerSpec
from src.core.report import CheckReport, PropertyRecord
from src.instances import prop

SAMPLES = ["p", "q & r", "~(p | q)", "true", "p | q & r"]


@pytest.fixture
def broken_prop(prop_framework):
    """把每個公式都引號成 p 的壞框架"""
    return replace(prop_framework, quotation=lambda e: prop.parse("p"))


class TestCheckFramework:
    """check_framework 測試類"""

    def test_prop_all_pass(self, prop_framework):
        report = check_framework(prop_framework, SAMPLES, [prop.parse("p")], seed=5)

        assert report.all_passed
        names = [record.name for record in report.properties]
        assert names[:3] == ["quotation_axiom", "evaluation_axiom", "disquotation"]
        assert "syntactic_disquotation" in names
        assert "direct_evaluation_totality" in names
        assert "evaluation_totality" in names
        assert all(record.seed == 5 for record in report.properties)
        assert report.get("quotation_axiom").trials == len(SAMPLES)

    def test_empty_samples(self, prop_framework):
        report = check_framework(prop_framework, [])

        assert report.all_passed
        for record in report.properties:
            assert record.trials == 0
            assert record.passes == 0
            assert record.counterexample is None
        assert report.get("evaluation_totality") is None

    def test_rejects_non_object_sample(self, prop_framework):
        from src.core.exceptions import MembershipError
        with pytest.raises(MembershipError):
            check_framework(prop_framework, ["p&q"])

    def test_broken_quotation_recorded(self, broken_prop):
        report = check_framework(broken_prop, SAMPLES)

        assert not report.all_passed
        axiom = report.get("quotation_axiom")
        assert axiom.passes == 1
        assert axiom.counterexample == "q & r"
        assert not report.get("quote_injectivity").passed
        assert report.get("representation_injectivity").passed

    def test_counterexample_is_shrunk(self, broken_prop):
        def shrink(e, fails):
            return "q" if fails("q") else e

        report = check_framework(broken_prop, SAMPLES, shrink=shrink)
        assert report.get("quotation_axiom").counterexample == "q"

    def test_shrinker_errors_keep_original(self, broken_prop):
        def shrink(e, fails):
            raise RecursionError()

        report = check_framework(broken_prop, SAMPLES, shrink=shrink)
        assert report.get("quotation_axiom").counterexample == "q & r"

    def test_evaluation_axiom_covers_syntax_outside_quote_image(self):
        from src.instances import goedel
        from src.instances.goedel import ZERO, Plus, Succ

        inst = goedel.build_framework()
        honest = inst.evaluation

        def evaluate(t):
            # Q 的像上正確，其餘語法運算式給錯的結果
            result = honest(t)
            if result is None or inst.same_expr(inst.quote(result), t):
                return result
            return goedel.numeral(5)

        samples = [ZERO, goedel.numeral(2), Succ(ZERO)]
        off_image = Plus(Succ(ZERO), ZERO)
        assert not inst.same_expr(inst.quote(inst.evaluate(off_image)), off_image)

        assert check_framework(inst, samples, [off_image]).get("evaluation_axiom").passed

        broken = replace(inst, evaluation=evaluate)
        record = check_framework(broken, samples).get("evaluation_axiom")
        assert record.passed

        record = check_framework(broken, samples, [off_image]).get("evaluation_axiom")
        assert record.trials == len(samples) + 1
        assert record.passes == len(samples)
        assert record.counterexample == goedel.show(off_image)

    def test_syntax_samples_outside_syntax_skipped(self, prop_framework):
        report = check_framework(prop_framework, SAMPLES, ["p"])
        assert report.get("evaluation_axiom").trials == len(SAMPLES)

    def test_partiality_needs_witness(self, prop_framework):
        partial = replace(prop_framework, total_evaluation=False)
        report = check_framework(partial, ["p"], [prop.parse("p")])

        record = report.get("evaluation_partiality")
        assert record.trials == 1
        assert record.passes == 0

    def test_builtin_separation_only_for_builtin(self, prop_framework, lisp_framework):
        prop_names = [name for name, _ in sample_checks(prop_framework)]
        lisp_names = [name for name, _ in sample_checks(lisp_framework)]
        assert "builtin_separation" not in prop_names
        assert "builtin_separation" in lisp_names
        assert "syntactic_disquotation" not in lisp_names

    def test_lisp_samples_pass(self, lisp_framework):
        from src.instances import minilisp
        samples = [minilisp.read(s) for s in ("(+ 1 2)", "x", "(car (quote (1 2)))", "()")]
        report = check_framework(lisp_framework, samples)
        assert report.all_passed

    def test_json_shape(self, prop_framework):
        data = json.loads(check_framework(prop_framework, SAMPLES, seed=1).to_json())
        assert data["instance"] == "prop"
        assert set(data["properties"][0]) == {"name", "trials", "passes", "counterexample", "seed"}


class TestCheckTransformer:
    """check_transformer 測試類"""

    @staticmethod
    def negation():
        return TransformerSpec(
            "negate", 1,
            transformer=lambda e: prop.print_formula(prop.Neg(prop.parse(e))),
            lifted=lambda q: prop.Neg(q),
        )

    def test_unary(self, prop_framework):
        report = check_transformer(prop_framework, self.negation(), [("p",), ("p & q",)])
        record = report.get("transformer_specification")
        assert (record.trials, record.passes) == (2, 2)

    def test_arity_zero(self, prop_framework):
        spec = TransformerSpec("const", 0, lambda: "true", lambda: prop.TRUE)
        report = check_transformer(prop_framework, spec, [()])
        assert report.all_passed
        assert report.get("transformer_specification").trials == 1

    def test_arity_mismatch(self, prop_framework):
        with pytest.raises(InputError):
            check_transformer(prop_framework, self.negation(), [("p", "q")])

    def test_outside_domain_recorded(self, prop_framework):
        spec = replace(self.negation(), accepts=lambda e: e != "q")
        report = check_transformer(prop_framework, spec, [("p",), ("q",)])
        record = report.get("transformer_specification")
        assert record.passes == 1
        assert record.counterexample == "(q)"

    def test_wrong_lift_recorded(self, prop_framework):
        spec = replace(self.negation(), lifted=lambda q: q)
        report = check_transformer(prop_framework, spec, [("p",)])
        assert not report.all_passed


class TestReport:

    def test_record_invariant(self):
        with pytest.raises(InputError):
            PropertyRecord("x", trials=2, passes=3)
        with pytest.raises(InputError):
            PropertyRecord("x", trials=2, passes=1)
        with pytest.raises(InputError):
            PropertyRecord("x", trials=2, passes=2, counterexample="p")

    def test_merge(self):
        a = CheckReport("prop", (PropertyRecord("a", 1, 1),))
        b = CheckReport("prop", (PropertyRecord("b", 2, 1, "q"),), elapsed=1.5)
        merged = a.merge(b)
        assert [r.name for r in merged.properties] == ["a", "b"]
        assert not merged.all_passed
        assert merged == CheckReport("prop", merged.properties)

    def test_merge_other_instance(self):
        with pytest.raises(InputError):
            CheckReport("prop").merge(CheckReport("ring"))

    def test_text(self):
        text = CheckReport("prop", (PropertyRecord("a", 2, 1, "q"),)).to_text()
        assert "[FAIL] a: 1/2" in text
        assert "counterexample: q" in text
