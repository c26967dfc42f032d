import math

import numpy as np
import pytest

from orbitsym import (
    graph_routes,
    iwasawa_potential,
    kks,
    mat_exp,
    omega_kks_chart,
    omega_std_chart,
    orbit_chart,
    orbit_point,
    section_one_form,
    tangent_vector,
    tautological,
    to_cotangent,
)
from orbitsym.iwasawa import infinitesimal_iwasawa, iwasawa
from orbitsym.numerics import commutator


def unit(n, i, j):
    m = np.zeros((n, n))
    m[i, j] = 1.0
    return m


def bracket_tangent(x, z):
    return tangent_vector(x, commutator(z, x.point), generator=z)


class TestKks:
    def test_mixed_pair_value_by_hand(self, chamber2):
        x = orbit_point(chamber2, np.eye(2))
        zv = unit(2, 0, 1) - unit(2, 1, 0)
        zw = unit(2, 0, 1)
        value = kks(x, bracket_tangent(x, zv), bracket_tangent(x, zw))
        assert value == pytest.approx(8.0, abs=1e-12)

    def test_vertical_pairs_vanish(self, chamber3):
        g = chamber3.model.random_group_element(3, 0.4)
        x = orbit_point(chamber3, g)
        g_inv = np.linalg.inv(g)
        gens = [g @ y @ g_inv for y in chamber3.n_basis]
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                vi = bracket_tangent(x, gens[i])
                vj = bracket_tangent(x, gens[j])
                assert abs(kks(x, vi, vj)) <= 1e-10 * max(1.0, np.linalg.norm(x.point))

    def test_flag_tangent_pairs_vanish(self, chamber3):
        model = chamber3.model
        g = model.random_group_element(5, 0.4)
        x = orbit_point(chamber3, g)
        g_inv = np.linalg.inv(g)
        gens = [g @ e @ g_inv for e in model.k_basis]
        scale = max(1.0, np.linalg.norm(x.point) * max(np.linalg.norm(z) for z in gens) ** 2)
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                vi = bracket_tangent(x, gens[i])
                vj = bracket_tangent(x, gens[j])
                assert abs(kks(x, vi, vj)) <= 1e-10 * scale

    def test_generator_ambiguity_is_killed(self, wall3):
        model = wall3.model
        rng = np.random.default_rng(7)
        for i in range(50):
            g = model.random_group_element(rng, 0.4)
            x = orbit_point(wall3, g)
            g_inv = np.linalg.inv(g)
            z1 = g @ model.random_algebra_element(rng, 0.5) @ g_inv
            z2 = g @ model.random_algebra_element(rng, 0.5) @ g_inv
            shift = g @ wall3.random_centralizer(rng, 0.5) @ g_inv
            v1 = tangent_vector(x, commutator(z1, x.point))
            v2 = tangent_vector(x, commutator(z2, x.point))
            a = kks(x, bracket_tangent(x, z1), v2)
            b = kks(x, bracket_tangent(x, z1 + shift), v2)
            scale = max(1.0, abs(a))
            assert abs(a - b) <= 1e-9 * scale
            # generators recovered by least squares give the same value
            c = kks(x, v1, v2)
            assert abs(c - a) <= 1e-9 * scale

    def test_conjugation_invariance(self, chamber3):
        model = chamber3.model
        rng = np.random.default_rng(9)
        g = model.random_group_element(rng, 0.4)
        a = model.random_group_element(rng, 0.4)
        x = orbit_point(chamber3, g)
        z1 = model.random_algebra_element(rng, 0.6)
        z2 = model.random_algebra_element(rng, 0.6)
        before = kks(x, bracket_tangent(x, z1), bracket_tangent(x, z2))
        moved = orbit_point(chamber3, a @ g)
        a_inv = np.linalg.inv(a)
        after = kks(
            moved,
            bracket_tangent(moved, a @ z1 @ a_inv),
            bracket_tangent(moved, a @ z2 @ a_inv),
        )
        assert abs(before - after) <= 1e-9 * max(1.0, abs(before))


class TestTautological:
    def test_vanishes_on_zero_section(self, chamber3):
        model = chamber3.model
        k = model.random_orthogonal(11, 0.5)
        x = orbit_point(chamber3, k)
        for z in model.algebra_basis[:6]:
            v = bracket_tangent(x, z)
            assert abs(tautological(x, v)) <= 1e-12

    def test_vanishes_on_vertical_directions(self, chamber3):
        rng = np.random.default_rng(13)
        g = chamber3.model.random_group_element(rng, 0.4)
        x = orbit_point(chamber3, g)
        g_inv = np.linalg.inv(g)
        for y in chamber3.n_basis:
            v = bracket_tangent(x, g @ y @ g_inv)
            assert abs(tautological(x, v)) <= 1e-10 * max(1.0, np.linalg.norm(x.point))

    def test_matches_covector_route(self, chamber3):
        model = chamber3.model
        rng = np.random.default_rng(15)
        g = model.random_group_element(rng, 0.4)
        k = model.random_orthogonal(rng, 0.5)
        gk = g @ k
        x = orbit_point(chamber3, gk)
        rep = to_cotangent(x)
        fac = iwasawa(gk)
        for direction in chamber3.m_basis:
            v = bracket_tangent(x, gk @ direction @ np.linalg.inv(gk))
            inf = infinitesimal_iwasawa(direction, gk, factors=fac)
            covector = rep.pair(fac.k_factor @ inf.k_deriv @ fac.k_factor.T)
            assert abs(tautological(x, v) - covector) <= 1e-10 * max(1.0, abs(covector))

    @pytest.mark.parametrize("chamber_name", ["chamber2", "chamber3"])
    def test_matches_section_one_form_on_displaced_flag(self, chamber_name, request):
        """On tangents of a displaced flag, the transported one-form
        reduces to minus the pairing with the diagonal factor velocity."""
        chamber = request.getfixturevalue(chamber_name)
        model = chamber.model
        rng = np.random.default_rng(16)
        g = model.random_group_element(rng, 0.4)
        k = model.random_orthogonal(rng, 0.5)
        gk = g @ k
        x = orbit_point(chamber, gk)
        for direction in chamber.m_basis:
            v = bracket_tangent(x, gk @ direction @ np.linalg.inv(gk))
            expected = section_one_form(chamber, g, k, direction)
            assert abs(tautological(x, v) - expected) <= 1e-10 * max(1.0, abs(expected))


class TestPotential:
    def test_identity_witness_vanishes(self, chamber3):
        model = chamber3.model
        for seed in range(5):
            k = model.random_orthogonal(seed, 0.6)
            assert abs(iwasawa_potential(chamber3, np.eye(3), k)) <= 1e-12

    def test_diagonal_witness_by_hand(self, chamber2):
        a = np.diag([math.e, 1.0 / math.e])
        value = iwasawa_potential(chamber2, a, np.eye(2))
        log_a = np.diag([1.0, -1.0])
        assert value == pytest.approx(chamber2.model.killing(chamber2.matrix, log_a))
        assert value == pytest.approx(8.0)

    @pytest.mark.parametrize("chamber_name", ["wall3", "wall4"])
    def test_descends_through_compact_centralizer(self, chamber_name, request):
        chamber = request.getfixturevalue(chamber_name)
        model = chamber.model
        for i in range(50):
            rng = np.random.default_rng([29, i])
            g = model.random_group_element(rng, 0.4)
            k = model.random_orthogonal(rng, 0.5)
            z = mat_exp(chamber.random_compact_centralizer(rng, 0.8))
            f1 = iwasawa_potential(chamber, g, k)
            f2 = iwasawa_potential(chamber, g, k @ z)
            assert abs(f1 - f2) <= 1e-10 * max(1.0, abs(f1))


class TestSectionOneForm:
    def test_identity_witness_vanishes(self, chamber3):
        model = chamber3.model
        k = model.random_orthogonal(33, 0.5)
        for direction in chamber3.m_basis:
            assert abs(section_one_form(chamber3, np.eye(3), k, direction)) <= 1e-12

    def test_compact_centralizer_directions_are_degenerate(self, wall3):
        model = wall3.model
        rng = np.random.default_rng(35)
        g = model.random_group_element(rng, 0.4)
        k = model.random_orthogonal(rng, 0.5)
        for direction in wall3.zk_basis:
            a_val, b_val, _ = graph_routes(wall3, g, k, direction)
            assert abs(a_val - b_val) <= 1e-9 * max(1.0, abs(a_val))

    @pytest.mark.parametrize("chamber_name", ["chamber2", "chamber3", "wall3"])
    def test_three_routes_agree(self, chamber_name, request):
        chamber = request.getfixturevalue(chamber_name)
        model = chamber.model
        rng = np.random.default_rng(37)
        for g in (np.eye(model.n), model.random_group_element(rng, 0.4)):
            k = model.random_orthogonal(rng, 0.6)
            for direction in chamber.m_basis:
                a_val, b_val, c_val = graph_routes(chamber, g, k, direction)
                scale = max(1.0, abs(a_val), abs(b_val), abs(c_val))
                assert abs(a_val - b_val) <= 1e-9 * scale
                assert abs(a_val - c_val) <= 1e-5 * scale
                assert abs(b_val - c_val) <= 1e-5 * scale


class TestMixedPairIdentity:
    @pytest.mark.parametrize("chamber_name", ["chamber3", "wall3", "chamber4"])
    def test_closed_form_chain(self, chamber_name, request):
        chamber = request.getfixturevalue(chamber_name)
        model = chamber.model
        rng = np.random.default_rng(41)
        for _ in range(10):
            g = model.random_group_element(rng, 0.4)
            fac = iwasawa(g)
            an = fac.an_factor()
            an_inv = np.linalg.inv(an)
            h_moved = an @ chamber.matrix @ an_inv
            for x_dir in model.k_basis:
                inf = infinitesimal_iwasawa(x_dir, g, factors=fac)
                for y_dir in chamber.n_basis:
                    lhs = model.killing(
                        commutator(an @ y_dir @ an_inv, h_moved), inf.k_deriv
                    )
                    rhs = model.killing(commutator(y_dir, chamber.matrix), x_dir)
                    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))
                    assert rhs == pytest.approx(
                        model.killing(chamber.matrix, commutator(x_dir, y_dir)), abs=1e-12
                    )


class TestFormMatrices:
    def test_antisymmetry_exact(self, chamber3):
        g = chamber3.model.random_group_element(43, 0.4)
        chart = orbit_chart(orbit_point(chamber3, g))
        for form in (omega_std_chart(chart), omega_kks_chart(chart)):
            assert np.array_equal(form.entries, -form.entries.T)

    def test_two_by_two_value_by_hand(self, chamber2):
        chart = orbit_chart(orbit_point(chamber2, np.eye(2)))
        std = omega_std_chart(chart)
        kks_form = omega_kks_chart(chart)
        assert kks_form.entries[0, 1] == pytest.approx(8.0, abs=1e-12)
        assert std.entries[0, 1] == pytest.approx(8.0, abs=1e-5)

    def test_kks_diagonal_blocks_vanish(self, chamber3):
        g = chamber3.model.random_group_element(45, 0.4)
        chart = orbit_chart(orbit_point(chamber3, g))
        entries = omega_kks_chart(chart).entries
        m = chamber3.dim_n
        assert np.max(np.abs(entries[:m, :m])) <= 1e-12  # both directions lowered
        assert np.max(np.abs(entries[m:, m:])) <= 1e-12  # both directions raised

    def test_std_diagonal_blocks_vanish_at_zero_section(self, chamber3):
        chart = orbit_chart(orbit_point(chamber3, np.eye(3)))
        entries = omega_std_chart(chart).entries
        m = chamber3.dim_n
        assert np.max(np.abs(entries[:m, :m])) <= 1e-6
        assert np.max(np.abs(entries[m:, m:])) <= 1e-6

    def test_kks_chart_constant_across_parameters(self, wall3):
        g = wall3.model.random_group_element(47, 0.4)
        chart = orbit_chart(orbit_point(wall3, g))
        base = omega_kks_chart(chart).entries
        rng = np.random.default_rng(49)
        for _ in range(5):
            t = rng.uniform(-1e-3, 1e-3, chart.dim)
            moved = omega_kks_chart(chart, t).entries
            assert np.max(np.abs(moved - base)) <= 1e-9 * max(1.0, np.max(np.abs(base)))

    def test_forms_agree_on_independent_direction_basis(self, chamber3):
        """Chart independence: a different complement of the centralizer
        gives the same equality of forms."""
        model = chamber3.model
        g = model.random_group_element(51, 0.4)
        x = orbit_point(chamber3, g)
        rng = np.random.default_rng(53)
        mix = rng.uniform(-0.3, 0.3, (6, 6)) + np.eye(6)
        default = list(chamber3.theta_n_basis) + list(chamber3.n_basis)
        directions = [
            sum(c * d for c, d in zip(row, default)) for row in mix
        ]
        chart = orbit_chart(x, directions=directions)
        std = omega_std_chart(chart).entries
        kks_form = omega_kks_chart(chart).entries
        scale = max(1.0, np.max(np.abs(kks_form)))
        assert np.max(np.abs(std - kks_form)) <= 1e-5 * scale

    def test_smallest_singular_value(self, chamber2):
        chart = orbit_chart(orbit_point(chamber2, np.eye(2)))
        form = omega_kks_chart(chart)
        assert form.smallest_singular_value() == pytest.approx(8.0)
