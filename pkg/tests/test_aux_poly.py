import cmath
import io
import math
import random

import numpy as np
import pytest

from liouville_sums.aux_poly import (
    AuxPolynomial,
    AuxTerm,
    build_polynomial,
    evaluate_at,
    residue_r0,
    residue_rn,
    scan_u,
)
from liouville_sums.zeros import ZeroTable, bundled_zero_table
from liouville_sums.zeta import zeta_with_prime

import oracles


@pytest.fixture(scope="module")
def table100():
    t = bundled_zero_table()
    return ZeroTable(gammas=t.gammas[:100], source=t.source, stated_precision=t.stated_precision)


@pytest.fixture(scope="module")
def poly_half(table100):
    # cutoff at the 100th ordinate keeps 99 terms (strict inequality)
    return build_polynomial(table100, table100.gammas[-1], 0.5)


@pytest.fixture(scope="module")
def poly_zero_alpha(table100):
    return build_polynomial(table100, 100.0, 0.0)


class TestResidueR0:
    def test_oracle_values(self):
        assert residue_r0(0.0) == pytest.approx(oracles.R0_AT_0, abs=1e-9)
        assert residue_r0(0.5) == pytest.approx(oracles.R0_AT_HALF, abs=1e-9)
        assert residue_r0(0.75) == pytest.approx(oracles.R0_AT_3_QUARTERS, abs=1e-9)
        assert residue_r0(1.0) == pytest.approx(oracles.R0_AT_1, abs=1e-9)

    def test_case_split_continuity_gap(self):
        # the +1 branch applies strictly between 1/2 and 1
        below = residue_r0(0.499999)
        above = residue_r0(0.500001)
        assert above - below > 0.9  # jump from the extra +1 dominates

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            residue_r0(-0.1)
        with pytest.raises(ValueError):
            residue_r0(1.5)
        with pytest.raises(ValueError):
            residue_r0(2.0)


class TestResidueRn:
    def test_gamma1_alpha0_against_oracle(self):
        r = residue_rn(oracles.GAMMA_1, 0.0)
        assert abs(r.value - oracles.R1_AT_0) < 1e-8

    def test_gamma1_alpha_half_structure(self):
        # at alpha = 1/2 the denominator reduces to i*gamma*zeta'(rho)
        g = oracles.GAMMA_1
        r = residue_rn(g, 0.5)
        assert abs(r.value - oracles.R1_AT_HALF) < 1e-8
        from liouville_sums.zeta import zeta

        num = zeta(complex(1.0, 2 * g)).value
        _, dz = zeta_with_prime(complex(0.5, g))
        manual = num / (1j * g * dz.value)
        assert abs(r.value - manual) < 1e-13

    def test_rejects_non_ordinate(self):
        with pytest.raises(ValueError, match="not a zero ordinate"):
            residue_rn(15.0, 0.0)

    def test_rejects_bad_alpha(self):
        with pytest.raises(ValueError):
            residue_rn(oracles.GAMMA_1, 1.5)


class TestBuildPolynomial:
    def test_cutoff_arithmetic(self):
        t3 = ZeroTable(
            gammas=(14.134725141735, 21.022039638772, 25.010857580146),
            source="t3",
            stated_precision=12,
        )
        poly = build_polynomial(t3, 22.0, 0.0)
        assert len(poly.terms) == 2

    def test_cutoff_at_first_ordinate_keeps_nothing(self, table100):
        poly = build_polynomial(table100, table100.gammas[0], 0.5)
        assert len(poly.terms) == 0
        assert evaluate_at(poly, 12.34) == poly.r0

    def test_rejects_zero_cutoff(self, table100):
        with pytest.raises(ValueError):
            build_polynomial(table100, 0.0, 0.5)

    def test_warns_beyond_coverage(self, table100):
        with pytest.warns(UserWarning, match="coverage"):
            build_polynomial(table100, table100.gammas[-1] + 50.0, 0.5)

    def test_weights_decrease_and_bounded(self, poly_half):
        ws = [t.weight for t in poly_half.terms]
        assert all(0.0 < w <= 1.0 for w in ws)
        assert ws == sorted(ws, reverse=True)
        for t in poly_half.terms:
            assert t.weight == 1.0 - t.gamma / poly_half.cutoff  # exact arithmetic

    def test_cutoff_monotonicity(self, table100):
        # enlarging T never drops a term and never changes a residue
        small = build_polynomial(table100, 50.0, 0.25)
        large = build_polynomial(table100, 80.0, 0.25)
        assert len(large.terms) >= len(small.terms)
        for ts, tl in zip(small.terms, large.terms):
            assert ts.gamma == tl.gamma
            assert ts.residue == tl.residue
            assert tl.weight > ts.weight  # same gamma, larger T


class TestEvaluateAt:
    def test_zero_term_polynomial_returns_r0_exactly(self):
        poly = AuxPolynomial(alpha=0.5, cutoff=10.0, r0=-0.25, terms=())
        assert evaluate_at(poly, 0.0) == -0.25
        assert evaluate_at(poly, 123.456) == -0.25

    def test_folded_form_equals_conjugate_pairs(self, poly_half):
        rng = random.Random(99)
        for _ in range(300):
            u = rng.uniform(0.0, 300.0)
            folded = evaluate_at(poly_half, u)
            paired = poly_half.r0 + math.fsum(
                (
                    t.weight * t.residue * cmath.exp(1j * t.gamma * u)
                    + t.weight * t.residue.conjugate() * cmath.exp(-1j * t.gamma * u)
                ).real
                for t in poly_half.terms
            )
            assert abs(folded - paired) < 1e-12

    def test_result_is_real_float(self, poly_half):
        v = evaluate_at(poly_half, 1.0)
        assert isinstance(v, float)

    def test_u_zero_direct_sum(self, poly_zero_alpha):
        direct = poly_zero_alpha.r0 + 2.0 * sum(
            t.weight * t.residue.real for t in poly_zero_alpha.terms
        )
        assert evaluate_at(poly_zero_alpha, 0.0) == pytest.approx(direct, abs=1e-12)

    def test_rejects_bad_u(self, poly_half):
        with pytest.raises(ValueError):
            evaluate_at(poly_half, -1.0)
        with pytest.raises(ValueError):
            evaluate_at(poly_half, math.inf)


class TestScanU:
    def test_constant_polynomial(self):
        poly = AuxPolynomial(alpha=0.5, cutoff=10.0, r0=-0.25, terms=())
        rep = scan_u(poly, 0.0, 10.0, 0.5)
        assert rep.maximum.value == rep.minimum.value == -0.25
        assert rep.sign_changes == ()

    def test_single_point_when_step_exceeds_range(self, poly_half):
        rep = scan_u(poly_half, 1.0, 2.0, 5.0)
        assert rep.n_points == 1
        assert rep.maximum.u == rep.minimum.u == 1.0

    def test_extrema_reproduced_by_direct_reevaluation(self, poly_zero_alpha):
        rep = scan_u(poly_zero_alpha, 0.0, 50.0, 0.01)
        assert evaluate_at(poly_zero_alpha, rep.maximum.u) == pytest.approx(
            rep.maximum.value, abs=1e-10
        )
        assert evaluate_at(poly_zero_alpha, rep.minimum.u) == pytest.approx(
            rep.minimum.value, abs=1e-10
        )

    def test_x_equivalents(self, poly_zero_alpha):
        rep = scan_u(poly_zero_alpha, 2.0, 4.0, 0.5)
        assert rep.maximum.x_equiv == pytest.approx(math.exp(rep.maximum.u))

    def test_rotation_matches_direct_path(self, poly_half):
        from liouville_sums.aux_poly import _grid_values_direct, _grid_values_rotation

        us = np.arange(0.0, 1000.0, 0.13)
        direct = _grid_values_direct(poly_half, us)
        rotated = _grid_values_rotation(poly_half, 0.0, 0.13, len(us))
        assert float(np.abs(direct - rotated).max()) < 1e-10

    def test_rotation_scan_report_agrees(self, poly_half):
        a = scan_u(poly_half, 0.0, 30.0, 0.01)
        b = scan_u(poly_half, 0.0, 30.0, 0.01, use_rotation=True)
        assert a.maximum.u == b.maximum.u
        assert a.maximum.value == pytest.approx(b.maximum.value, abs=1e-10)
        assert len(a.sign_changes) == len(b.sign_changes)

    def test_sign_changes_bracket_roots(self, poly_half):
        rep = scan_u(poly_half, 0.0, 30.0, 0.01)
        for lo, hi in rep.sign_changes:
            if lo == hi:
                continue
            assert evaluate_at(poly_half, lo) * evaluate_at(poly_half, hi) < 0.0

    def test_trace_stream(self, poly_zero_alpha):
        buf = io.StringIO()
        rep = scan_u(poly_zero_alpha, 0.0, 1.0, 0.25, trace=buf)
        lines = buf.getvalue().strip().splitlines()
        assert lines[0] == "u,X_equiv,value"
        assert len(lines) == 1 + rep.n_points
        u0, x0, v0 = lines[1].split(",")
        assert float(u0) == 0.0 and float(x0) == 1.0
        assert float(v0) == pytest.approx(evaluate_at(poly_zero_alpha, 0.0), abs=1e-14)

    def test_grid_cap(self, poly_half):
        with pytest.raises(ValueError, match="cap"):
            scan_u(poly_half, 0.0, 1e9, 1e-10)

    def test_invalid_args(self, poly_half):
        with pytest.raises(ValueError):
            scan_u(poly_half, 5.0, 1.0, 0.1)
        with pytest.raises(ValueError):
            scan_u(poly_half, 0.0, 1.0, 0.0)


class TestAlphaHalfSummandStructure:
    def test_fejer_weight_plays_theta_role(self, poly_half):
        # each summand is Re(zeta(1+2i*g) / (i*g*zeta'(1/2+ig))) * theta with
        # |theta| <= 1, theta being the triangular weight
        from liouville_sums.zeta import zeta

        u = 0.0
        for t in poly_half.terms[:10]:
            assert abs(t.weight) <= 1.0
            base = zeta(complex(1.0, 2 * t.gamma)).value
            _, dz = zeta_with_prime(complex(0.5, t.gamma))
            summand = (base / (1j * t.gamma * dz.value)).real * t.weight
            contribution = (t.weight * t.residue * cmath.exp(1j * t.gamma * u)).real
            assert summand == pytest.approx(contribution, abs=1e-12)
