import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from mcimbias.errors import InvalidCombination, RiskOutOfRange
from mcimbias.params import (
    ParameterPoint,
    derive_conditionals,
    format_number,
    is_valid,
    joint_distribution,
    parse_number,
)
from mcimbias.sweep import default_grid

from conftest import valid_points


def _exact_conditionals(p_e, p_c, rr_ec):
    p_e, p_c, rr_ec = (Fraction(x) for x in (p_e, p_c, rr_ec))
    scale = rr_ec * p_c + 1 - p_c
    c1 = rr_ec * p_c / scale
    return p_e / scale, rr_ec * p_e / scale, (p_c - c1 * p_e) / (1 - p_e)


class TestParameterPoint:
    @pytest.mark.parametrize("kwargs", [
        dict(p_e=0.0), dict(p_e=1.0), dict(p_c=0.0), dict(p_c=1.2),
        dict(p_miss=1.0), dict(p_miss=-0.1), dict(rr_c=0.0), dict(rr_ec=-1.0),
        dict(rr_c=float("inf")),
    ])
    def test_rejects_out_of_range(self, kwargs):
        base = dict(p_e=0.1, p_c=0.2, p_miss=0.1, rr_c=2.0, rr_ec=2.0)
        base.update(kwargs)
        with pytest.raises(ValueError):
            ParameterPoint(**base)

    def test_zero_missingness_allowed(self):
        assert ParameterPoint(0.1, 0.2, 0.0, 2.0, 2.0).p_miss == 0.0


class TestDeriveConditionals:
    def test_printed_conditionals_at_one_fifth(self):
        # These are the printed probabilities; they come from RR(E|C) = 1/5.
        with pytest.raises(InvalidCombination) as info:
            derive_conditionals(ParameterPoint(0.75, 0.5, 0.1, 2.0, 1 / 5))
        v = info.value.values
        assert v["Pr(C=1|E=0)"] == pytest.approx(1.5)
        assert v["Pr(E=1|C=0)"] == pytest.approx(1.25)
        assert v["Pr(E=1|C=1)"] == pytest.approx(0.25)

    def test_boundary_example_at_half(self):
        # RR(E|C) = 0.5 lands exactly on the boundary, also invalid.
        with pytest.raises(InvalidCombination) as info:
            derive_conditionals(ParameterPoint(0.75, 0.5, 0.3, 3.0, 0.5))
        v = info.value.values
        assert v["Pr(C=1|E=0)"] == pytest.approx(1.0)
        assert v["Pr(E=1|C=0)"] == pytest.approx(1.0)
        assert v["Pr(E=1|C=1)"] == pytest.approx(0.5)

    def test_independence_when_rr_ec_is_one(self):
        cond = derive_conditionals(ParameterPoint(0.25, 0.1, 0.2, 3.0, 1.0))
        assert cond.p_e_given_c1 == cond.p_e_given_c0 == 0.25
        assert cond.p_c_given_e1 == pytest.approx(0.1, abs=1e-15)
        assert cond.p_c_given_e0 == pytest.approx(0.1, abs=1e-15)

    def test_worked_example(self):
        cond = derive_conditionals(ParameterPoint(0.1, 0.25, 0.25, 2.0, 2.0))
        assert cond.p_e_given_c0 == pytest.approx(0.08, abs=1e-15)
        assert cond.p_e_given_c1 == pytest.approx(0.16, abs=1e-15)
        assert cond.p_c_given_e1 == pytest.approx(0.4, abs=1e-15)
        assert cond.p_c_given_e0 == pytest.approx(0.21 / 0.9, abs=1e-15)
        # total probability reconstructs the marginals
        assert cond.p_e_given_c1 * 0.25 + cond.p_e_given_c0 * 0.75 == pytest.approx(0.1, abs=1e-12)
        assert cond.p_c_given_e1 * 0.1 + cond.p_c_given_e0 * 0.9 == pytest.approx(0.25, abs=1e-12)

    @given(valid_points())
    def test_invariants(self, point):
        cond = derive_conditionals(point)
        for v in (cond.p_e_given_c1, cond.p_e_given_c0, cond.p_c_given_e1, cond.p_c_given_e0):
            assert 0.0 <= v <= 1.0
        assert abs(cond.p_e_given_c1 * point.p_c + cond.p_e_given_c0 * (1 - point.p_c) - point.p_e) <= 1e-12
        assert abs(cond.p_c_given_e1 * point.p_e + cond.p_c_given_e0 * (1 - point.p_e) - point.p_c) <= 1e-12
        assert abs(cond.p_e_given_c1 - point.rr_ec * cond.p_e_given_c0) <= 1e-12


class TestIsValid:
    def test_worked_example(self):
        assert not is_valid(ParameterPoint(0.75, 0.5, 0.1, 2.0, 0.5))

    @given(valid_points())
    def test_rr_ec_one_always_valid(self, point):
        assert is_valid(point.replace(rr_ec=1.0))

    def test_invariant_to_pmiss_and_rr_c(self):
        g = default_grid()
        for p_e, p_c, rr_ec in itertools.product(g.values_p_e, g.values_p_c, g.values_rr_ec):
            verdicts = {
                is_valid(ParameterPoint(p_e, p_c, pm, rc, rr_ec))
                for pm in g.values_p_miss for rc in g.values_rr_c
            }
            assert len(verdicts) == 1

    def test_invalid_triples_on_default_grid(self):
        g = default_grid()
        bad = [
            t for t in itertools.product(g.values_p_e, g.values_p_c, g.values_rr_ec)
            if not is_valid(ParameterPoint(t[0], t[1], 0.1, 2.0, t[2]))
        ]
        assert len(bad) == 38
        assert 36504 - 33540 == 38 * 6 * 13

    def test_matches_exact_rational_classification(self):
        # independent oracle: exact rational arithmetic on the labels
        labels_p = ["0.01", "0.05", "0.1", "0.25", "0.5", "0.75"]
        labels_rr = ["1/5", "1/3", "1/2", "2/3", "4/5", "20/23", "1", "1.15", "1.25", "1.5", "2", "3", "5"]
        for pe, pc, r in itertools.product(labels_p, labels_p, labels_rr):
            exact = _exact_conditionals(Fraction(pe), Fraction(pc), Fraction(r))
            expected = all(0 < v < 1 for v in exact)
            point = ParameterPoint(float(Fraction(pe)), float(Fraction(pc)), 0.1, 2.0, parse_number(r))
            assert is_valid(point) == expected, (pe, pc, r)


class TestJointDistribution:
    def test_null_effects_give_flat_risk(self):
        jd = joint_distribution(ParameterPoint(0.3, 0.4, 0.1, 1.0, 2.0), 0.07, 1.0)
        assert np.allclose(jd.risks, 0.07)

    def test_worked_example(self):
        point = ParameterPoint(0.1, 0.25, 0.25, 2.0, 2.0)
        jd = joint_distribution(point, 0.05, 2.0)
        assert jd.risk(1, 1) == pytest.approx(0.2)
        assert jd.probs.sum() == pytest.approx(1.0, abs=1e-12)
        assert jd.marginal_e() == pytest.approx(0.1, abs=1e-12)
        assert jd.marginal_c() == pytest.approx(0.25, abs=1e-12)

    def test_risk_out_of_range(self):
        with pytest.raises(RiskOutOfRange):
            joint_distribution(ParameterPoint(0.1, 0.25, 0.25, 2.0, 2.0), 0.3, 2.0)

    def test_propagates_invalid_combination(self):
        with pytest.raises(InvalidCombination):
            joint_distribution(ParameterPoint(0.75, 0.5, 0.1, 2.0, 0.2), 0.05, 2.0)

    @settings(max_examples=50)
    @given(valid_points())
    def test_marginals_recover_parameters(self, point):
        jd = joint_distribution(point, 0.02, 1.5)
        cond = derive_conditionals(point)
        p = jd.probs
        assert abs(p.sum() - 1) <= 1e-12
        assert abs(jd.marginal_e() - point.p_e) <= 1e-12
        assert abs(jd.marginal_c() - point.p_c) <= 1e-12
        assert abs(p[1, 1].sum() / p[1].sum() - cond.p_e_given_c1) <= 1e-12
        assert abs(p[0, 1].sum() / p[0].sum() - cond.p_e_given_c0) <= 1e-12
        assert abs(p[1, 1].sum() / p[:, 1].sum() - cond.p_c_given_e1) <= 1e-12


class TestNumberParsing:
    @pytest.mark.parametrize("label", ["1/5", "1/3", "1/2", "1/1.5", "1/1.25", "1/1.15", "1", "1.15", "5"])
    def test_round_trip_rr_labels(self, label):
        assert format_number(parse_number(label), fraction=True) == label

    def test_fraction_value(self):
        assert parse_number("1/1.15") == 1 / 1.15
        assert parse_number(" 0.25 ") == 0.25

    @pytest.mark.parametrize("bad", ["", "abc", "1/0", "nan", "1//2"])
    def test_bad_numbers(self, bad):
        with pytest.raises(ValueError):
            parse_number(bad)
