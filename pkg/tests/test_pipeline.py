"""End-to-end pipeline: reduced inputs, the two surgery-invariant routes,
the comparison report, and file-knot handling."""

import json
from fractions import Fraction as Q

import pytest

from lmo_kernel.balg import omega, strut, theta, wheeling_inverse
from lmo_kernel.diagrams import DiagramSeries, series_of
from lmo_kernel.pipeline import (
    SurgeryInput,
    _framing_series,
    compare,
    hat_scalar,
    lie_pair,
    lmo_via_definition,
    lmo_via_lemma,
    reduced_input,
    taupg_route,
    unknot_qdata,
    verify_suite,
)
from lmo_kernel.qseries import HSeries
from lmo_kernel import balg


class TestSurgeryInput:
    def test_zero_framing_rejected(self):
        with pytest.raises(ValueError):
            SurgeryInput("unknot", 0)

    def test_h1_order(self):
        assert SurgeryInput("unknot", -5).h1_order == 5
        assert SurgeryInput("unknot", 3).sign == 1


class TestReducedInput:
    def test_unknot_unframed_part(self):
        # with framing part removed, the series is the squared wheeled Omega
        got = reduced_input(SurgeryInput("unknot", 1), 4)
        w = wheeling_inverse(omega(4))
        expected = w.union(w).union(_framing_series(Q(1), 4, with_theta=True))
        assert got == expected

    def test_reference_object_is_same_construction(self):
        assert reduced_input(SurgeryInput("unknot", 1), 4) == \
            reduced_input(SurgeryInput("unknot", 1), 4)

    def test_framing_theta_correction(self):
        # exp((f/2)(strut - theta/24)) carries a -f/48 theta coefficient
        fs = _framing_series(Q(3), 6, with_theta=True)
        from lmo_kernel.diagrams import canonicalize
        th = canonicalize(theta())
        assert fs.coeff(th.form) * th.sign == Q(-3, 48)

    def test_strutful_file_rejected(self, tmp_path):
        s = series_of(strut(), 4)
        p = tmp_path / "bad.json"
        p.write_text(json.dumps(s.to_json()))
        with pytest.raises(Exception):
            reduced_input(SurgeryInput(str(p), 2), 4)


class TestRoutes:
    def test_sphere_both_signs(self):
        for f in (1, -1):
            for lab in ("A1", "A2"):
                assert lmo_via_definition(SurgeryInput("unknot", f), lab, 2) \
                    == HSeries.one(2)
                assert lmo_via_lemma(SurgeryInput("unknot", f), lab, 2) \
                    == HSeries.one(2)

    def test_first_order_gaussian_value(self):
        # by hand: the integral of the reduced unknot at framing f equals
        # 1 - (2 + f^2) h / (4 f) + O(h^2) for sl2
        _, g = lie_pair("A1")
        for f in (1, -1, 2, 3):
            got = hat_scalar(balg.fg_integral(
                reduced_input(SurgeryInput("unknot", f), 2)), g, 1)
            assert got == HSeries({0: 1, 1: Q(-(2 + f * f), 4 * f)}, 1)

    def test_route_equality_low_order(self):
        for lab in ("A1", "A2"):
            for f in (2, -2, 3):
                inp = SurgeryInput("unknot", f)
                assert lmo_via_definition(inp, lab, 2) == \
                    lmo_via_lemma(inp, lab, 2)


class TestTauRoute:
    def test_sphere(self):
        assert taupg_route(SurgeryInput("unknot", 1), "A1", 3) == \
            HSeries.one(3)

    def test_file_knot_requires_qdata(self):
        with pytest.raises(ValueError):
            taupg_route(SurgeryInput("somEfile.json", 2), "A1", 2)

    def test_qdata_file_round_trip(self, tmp_path):
        E = unknot_qdata("A1", 3)
        p = tmp_path / "q.json"
        p.write_text(json.dumps(E.to_json()))
        a = taupg_route(SurgeryInput("unknot", 2), "A1", 3, qdata_path=str(p))
        b = taupg_route(SurgeryInput("unknot", 2), "A1", 3)
        assert a == b


class TestCompare:
    def test_main_equality_flagship(self):
        rep = compare(SurgeryInput("unknot", 2), "A1", 3)
        assert rep.routes_equal and rep.equal
        assert rep.h1_power == 2
        assert rep.certified_order == 3

    def test_h1_power_law(self):
        rep = compare(SurgeryInput("unknot", 3), "A2", 2)
        assert rep.h1_power == 27
        assert rep.equal

    def test_sphere_cases(self):
        for f in (1, -1):
            rep = compare(SurgeryInput("unknot", f), "A1", 2)
            assert rep.equal and rep.h1_power == 1
            assert rep.lmo_definition == HSeries.one(2)
            assert rep.taupg == HSeries.one(2)

    def test_report_json_shape(self):
        rep = compare(SurgeryInput("unknot", 2), "A1", 2)
        obj = rep.to_json()
        assert obj["equal"] is True and obj["routes_equal"] is True
        assert obj["h1_power"] == "2/1"
        assert set(obj["lmo_definition"]) == {"min_exp", "coeffs", "cap"}

    def test_file_knot_lmo_only(self, tmp_path):
        # the unknot's own wheeled invariant, shipped as a file
        p = tmp_path / "unknot.json"
        p.write_text(json.dumps(omega(4).to_json()))
        inp = SurgeryInput(str(p), 2, declared_valid_degree=2)
        rep = compare(inp, "A1", 2)
        assert rep.lmo_only and rep.taupg is None and rep.equal is None
        assert rep.routes_equal
        builtin = compare(SurgeryInput("unknot", 2), "A1", 2)
        assert rep.lmo_definition == builtin.lmo_definition

    def test_file_knot_with_qdata_closes_comparison(self, tmp_path):
        p = tmp_path / "unknot.json"
        p.write_text(json.dumps(omega(4).to_json()))
        q = tmp_path / "q.json"
        q.write_text(json.dumps(unknot_qdata("A1", 2).to_json()))
        rep = compare(SurgeryInput(str(p), 2, declared_valid_degree=2),
                      "A1", 2, qdata_path=str(q))
        assert rep.equal and not rep.lmo_only

    def test_declared_degree_bounds_certificate(self):
        rep = compare(SurgeryInput("unknot", 2), "A1", 2)
        assert rep.certified_order == 2


class TestVerifySuite:
    def test_unknown_suite_rejected(self):
        with pytest.raises(ValueError):
            verify_suite("nonsense")

    def test_bernoulli_suite(self):
        assert all(r.passed for r in verify_suite("bernoulli"))

    def test_weyl_suite(self):
        assert all(r.passed for r in verify_suite("weyl"))

    def test_theta_suite(self):
        assert all(r.passed for r in verify_suite("theta"))
