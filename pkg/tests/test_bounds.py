"""Bound evaluation: frozen hand-computed cases, cross-variant identities
and the exact-rational rate exponents."""

import math
from fractions import Fraction

import pytest

from motif_poisson import (
    GraphonSpec,
    IncompleteNuTable,
    NotStrictlyBalanced,
    NuTable,
    SbmParams,
    TooManyTerms,
    UnnormalizedHistogram,
    bound_graphon,
    bound_independent_edges,
    bound_nu,
    bound_sbm,
    bound_scaled,
    builtin_motif,
    compute_stats,
    erdos_renyi,
    graphon_to_sbm,
    lambda_value,
    max_copy_capacity,
    motif_from_edge_list,
    mu_graphon,
    mu_graphon_with_error,
    mu_sbm,
    poisson_pmf,
    poisson_tail,
    rate_exponent,
    tv_distance_empirical,
)

from conftest import random_motif

F = Fraction
K3 = builtin_motif("complete", 3)
P3 = builtin_motif("tree_path", 3)
C4 = builtin_motif("cycle", 4)
NOT_BALANCED = motif_from_edge_list([(0, 1), (2, 3)])


def single_block(p: float) -> GraphonSpec:
    return GraphonSpec(
        family="piecewise_constant", breakpoints=(0.0, 1.0), values=((p,),)
    )


class TestMuSbm:
    def test_single_class_power(self):
        for p in (0.0, 0.2, 0.7, 1.0):
            assert mu_sbm(erdos_renyi(p), K3) == pytest.approx(p**3, rel=1e-14)

    def test_constant_matrix_collapses(self):
        params = SbmParams(2, (0.5, 0.5), ((0.2, 0.2), (0.2, 0.2)))
        assert mu_sbm(params, K3) == pytest.approx(0.008, rel=1e-13)

    def test_diagonal_blocks_hand_enumeration(self):
        # 8 class tuples; only the two monochromatic ones contribute:
        # 2 * (1/2)^3 * 0.2^3 = 0.002
        params = SbmParams(2, (0.5, 0.5), ((0.2, 0.0), (0.0, 0.2)))
        assert mu_sbm(params, K3) == pytest.approx(0.002, rel=1e-13)

    def test_term_budget(self):
        params = SbmParams(10, (0.1,) * 10, ((0.5,) * 10,) * 10)
        with pytest.raises(TooManyTerms):
            mu_sbm(params, builtin_motif("cycle", 9))

    def test_mu_ceiling(self, rng):
        # mu never exceeds (max edge probability)^e
        for _ in range(100):
            m = random_motif(rng, v_max=5)
            q = int(rng.integers(1, 4))
            raw = rng.random((q, q))
            pi = tuple(
                tuple(float(raw[min(a, b), max(a, b)]) for b in range(q))
                for a in range(q)
            )
            f = rng.random(q) + 0.05
            f = tuple(float(x) for x in f / f.sum())
            params = SbmParams(q, f, pi)
            assert (
                mu_sbm(params, m)
                <= params.pi_star ** m.edge_count * (1 + 1e-12) + 1e-300
            )


class TestMuGraphon:
    def test_product_triangle(self):
        spec = GraphonSpec(family="product", scale=1.0)
        assert abs(mu_graphon(spec, K3, 64) - 1 / 27) < 1e-6

    def test_product_path(self):
        # degrees 2,1,1: closed form 1/(3*2*2)
        spec = GraphonSpec(family="product", scale=1.0)
        assert abs(mu_graphon(spec, P3, 64) - 1 / 12) < 1e-6

    def test_affine_closed_forms(self):
        # hand integration: E[(X+Y)(Y+Z)]/4 = 13/48 and
        # E[(X+Y)(Y+Z)(X+Z)]/8 = 5/32
        spec = GraphonSpec(family="affine_mean", scale=1.0)
        assert abs(mu_graphon(spec, P3, 64) - 13 / 48) < 1e-6
        assert abs(mu_graphon(spec, K3, 64) - 5 / 32) < 1e-6

    def test_piecewise_exact(self):
        p = 0.37
        assert mu_graphon(single_block(p), K3, 8) == pytest.approx(
            p**3, rel=1e-15
        )
        assert mu_graphon_with_error(single_block(p), K3, 8)[1] == 0.0

    def test_refinement_error_estimate(self):
        spec = GraphonSpec(family="product", scale=1.0)
        value, err = mu_graphon_with_error(spec, K3, 64)
        assert 0 < err < 1e-4
        assert abs(value - 1 / 27) < err

    def test_term_budget(self):
        spec = GraphonSpec(family="product", scale=1.0)
        with pytest.raises(TooManyTerms):
            mu_graphon(spec, builtin_motif("complete", 5), 64)


class TestLambda:
    def test_triangle_at_ten(self):
        assert lambda_value(K3, 10, 0.008) == pytest.approx(0.96, rel=1e-12)

    def test_zero_mu(self):
        assert lambda_value(K3, 50, 0.0) == 0.0

    def test_capacity_cross_check(self):
        assert lambda_value(P3, 4, 1.0) == pytest.approx(
            max_copy_capacity(P3, 4), rel=1e-12
        )


class TestBoundSbm:
    def test_hand_assembled_triangle(self):
        # independent spreadsheet-style evaluation, n=100, p=0.01
        n, p = 100, 0.01
        lam = math.comb(n, 3) * 1 * p**3
        pair = 2 * (9 / 6) * n**2 * p**3
        same = p
        overlap = 3 * n * p**2  # kappa(K3, 2) = 2
        expected = -math.expm1(-lam) * 1 * (pair + same + overlap)
        report = bound_sbm(erdos_renyi(p), K3, n)
        assert report.bound == pytest.approx(expected, rel=1e-12)
        assert report.pair_term == pytest.approx(pair, rel=1e-12)
        assert report.same_position_term == same
        assert report.overlap_terms[2] == pytest.approx(overlap, rel=1e-12)
        assert report.lam == pytest.approx(lam, rel=1e-12)

    def test_zero_probability(self):
        report = bound_sbm(erdos_renyi(0.0), K3, 50)
        assert report.bound == 0.0 and report.lam == 0.0

    def test_requires_strict_balance(self):
        with pytest.raises(NotStrictlyBalanced):
            bound_sbm(erdos_renyi(0.1), NOT_BALANCED, 50)

    def test_monotone_in_each_entry(self):
        base = SbmParams(2, (0.5, 0.5), ((0.05, 0.02), (0.02, 0.04)))
        b0 = bound_sbm(base, K3, 200).bound
        for a, b in ((0, 0), (0, 1), (1, 1)):
            pi = [list(row) for row in base.edge_probs]
            pi[a][b] += 0.01
            pi[b][a] = pi[a][b]
            bumped = SbmParams(2, (0.5, 0.5), tuple(map(tuple, pi)))
            assert bound_sbm(bumped, K3, 200).bound >= b0

    def test_prefactor_never_exceeds_min_one_lambda(self, rng):
        for _ in range(20):
            p = float(rng.random() * 0.2)
            report = bound_sbm(erdos_renyi(p), K3, 80)
            assert report.prefactor <= min(1.0, report.lam) + 1e-15
            assert report.prefactor <= 1.0

    def test_report_reassembles_from_own_terms(self, rng):
        # bound = prefactor * rho * factor * (pair + same + sum of overlaps)
        for _ in range(10):
            m = random_motif(rng, v_max=5)
            if not compute_stats(m).strictly_balanced:
                continue
            report = bound_sbm(erdos_renyi(0.04), m, 300)
            rebuilt = (
                report.prefactor
                * report.rho
                * report.dependence_factor
                * math.fsum(
                    [
                        report.pair_term,
                        report.same_position_term,
                        *report.overlap_terms.values(),
                    ]
                )
            )
            assert rebuilt == report.bound
            assert report.bound >= 0 and 0 <= report.mu <= 1

    def test_lambda_sandwich_under_critical_scaling(self, rng):
        # with every entry in [c n^{-1/d}, C n^{-1/d}] the expected count is
        # pinched between rho/v^v c^e and rho/v! C^e
        for _ in range(20):
            m = random_motif(rng, v_max=5)
            stats = compute_stats(m)
            if not stats.strictly_balanced:
                continue
            c = 0.2 + 0.8 * float(rng.random())
            C = c + float(rng.random())
            n = int(rng.integers(50, 5000))
            scale = float(n) ** (-1.0 / float(stats.density))
            if C * scale > 1.0:
                continue
            q = int(rng.integers(1, 4))
            raw = c * scale + (C - c) * scale * rng.random((q, q))
            pi = tuple(
                tuple(float(raw[min(a, b), max(a, b)]) for b in range(q))
                for a in range(q)
            )
            f = rng.random(q) + 0.1
            f = tuple(float(x) for x in f / f.sum())
            lam = lambda_value(m, n, mu_sbm(SbmParams(q, f, pi), m), stats)
            v, e = m.vertex_count, m.edge_count
            lo = stats.rho / v**v * c**e
            hi = stats.rho / math.factorial(v) * C**e
            assert lo * (1 - 1e-9) <= lam <= hi * (1 + 1e-9)


class TestScaled:
    def test_triangle_envelopes(self):
        # c = C = 1: both envelopes reduce to 4/n
        for n in (100, 10_000):
            report = bound_scaled(K3, n, 1.0, 1.0)
            assert report.A == pytest.approx(4.0 / n, rel=1e-12)
            assert report.B == pytest.approx(4.0 / n, rel=1e-12)
            assert report.lambda_lower == pytest.approx(1 / 27, rel=1e-12)
            assert report.lambda_upper == pytest.approx(1 / 6, rel=1e-12)

    def test_decreasing_in_n(self):
        assert (
            bound_scaled(K3, 10**6, 0.5, 2.0).bound
            < bound_scaled(K3, 10**3, 0.5, 2.0).bound
        )

    def test_cycle_rate_one_decade(self):
        # four-cycle decays like 1/n: one decade in n is a factor ~10
        ratio = (
            bound_scaled(C4, 10**5, 1.0, 1.0).bound
            / bound_scaled(C4, 10**4, 1.0, 1.0).bound
        )
        assert abs(ratio - 0.1) < 0.01

    def test_validation(self):
        with pytest.raises(ValueError):
            bound_scaled(K3, 100, 2.0, 1.0)
        with pytest.raises(NotStrictlyBalanced):
            bound_scaled(NOT_BALANCED, 100, 1.0, 1.0)


class TestNuTable:
    def test_power_table_matches_constant_sbm(self):
        p, n = 0.03, 150
        table = NuTable.from_power(p, C4)
        via_nu = bound_nu(C4, n, 1, p**4, table)
        via_sbm = bound_sbm(erdos_renyi(p), C4, n)
        assert via_nu.bound == pytest.approx(via_sbm.bound, rel=1e-14)

    def test_all_ones_degenerate_ceiling(self):
        m = C4
        n, mu = 40, 0.01
        table = NuTable.from_power(1.0, m)
        report = bound_nu(m, n, 1, mu, table)
        lam = lambda_value(m, n, mu)
        v = 4
        expected = -math.expm1(-lam) * 3 * (
            2 * v**2 / math.factorial(v) * n ** (v - 1)
            + 1
            + sum(
                math.comb(v, s) * n ** (v - s) / math.factorial(v - s)
                for s in (2, 3)
            )
        )
        assert report.bound == pytest.approx(expected, rel=1e-12)

    def test_missing_entry(self):
        table = NuTable({(F(4), 4, 1): 0.1})
        with pytest.raises(IncompleteNuTable):
            bound_nu(C4, 100, 1, 0.001, table)

    def test_fractional_exponent_keys(self):
        # kappa can be a non-integer rational; the table is keyed exactly
        ac5 = builtin_motif("almost_complete", 5)
        stats = compute_stats(ac5)
        assert stats.kappa[3] == F(16, 3)  # (v-s) * alpha with alpha = 8/3
        triples = NuTable.required_triples(ac5)
        assert (F(16, 3), 9, 3) in triples

    def test_json_round_trip(self):
        table = NuTable.from_power(0.2, builtin_motif("tree_path", 4))
        again = NuTable.from_dict(table.to_dict())
        assert again == table

    def test_value_range(self):
        with pytest.raises(ValueError):
            NuTable({(F(1), 2, 1): 1.5})


class TestConsistencyWeb:
    def test_four_paths_agree(self, rng):
        # constant-p block model, the independent-edge form, the table form
        # and the graphon form are one formula
        for _ in range(10):
            m = random_motif(rng, v_max=5)
            stats = compute_stats(m)
            if not stats.strictly_balanced:
                continue
            p = float(0.01 + rng.random() * 0.3)
            n = int(rng.integers(m.vertex_count, 4000))
            via_sbm = bound_sbm(erdos_renyi(p), m, n)
            via_ind = bound_independent_edges(m, n, p)
            via_nu = bound_nu(m, n, 1, p**m.edge_count, NuTable.from_power(p, m))
            assert via_ind.bound == pytest.approx(via_sbm.bound, rel=1e-12)
            assert via_nu.bound == pytest.approx(via_sbm.bound, rel=1e-12)
            via_graphon = bound_graphon(single_block(p), m, n)
            assert via_graphon.bound == pytest.approx(2 * via_sbm.bound, rel=1e-12)
            assert via_graphon.lam == pytest.approx(via_sbm.lam, rel=1e-12)

    def test_independent_via_nu_identity(self):
        p, n = 0.07, 500
        a = bound_independent_edges(C4, n, p)
        b = bound_nu(C4, n, 1, p**4, NuTable.from_power(p, C4))
        assert a.bound == pytest.approx(b.bound, rel=1e-15)

    def test_graphon_equals_nu_with_width_two(self):
        spec = GraphonSpec(family="product", scale=0.4)
        n = 300
        mu = mu_graphon(spec, K3)
        direct = bound_graphon(spec, K3, n)
        via_nu = bound_nu(K3, n, 2, mu, NuTable.from_power(0.4, K3))
        assert direct.bound == pytest.approx(via_nu.bound, rel=1e-14)

    def test_piecewise_lambda_equals_converted_sbm(self):
        spec = GraphonSpec(
            family="piecewise_constant",
            breakpoints=(0.0, 0.4, 1.0),
            values=((0.05, 0.01), (0.01, 0.03)),
        )
        params = graphon_to_sbm(spec)
        n = 120
        lam_g = bound_graphon(spec, K3, n).lam
        lam_s = bound_sbm(params, K3, n).lam
        assert lam_g == pytest.approx(lam_s, rel=1e-12)


class TestBoundGraphon:
    def test_zero_surface(self):
        report = bound_graphon(single_block(0.0), K3, 60)
        assert report.bound == 0.0

    def test_unscaled_product_is_vacuous(self):
        # h* = 1 makes the bound grow with n; the report flags it
        report = bound_graphon(GraphonSpec(family="product", scale=1.0), K3, 50)
        assert report.bound > 1.0 and report.vacuous

    def test_requires_strict_balance(self):
        with pytest.raises(NotStrictlyBalanced):
            bound_graphon(single_block(0.1), NOT_BALANCED, 50)


class TestIndependentEdges:
    def test_zero(self):
        assert bound_independent_edges(K3, 100, 0.0).bound == 0.0

    def test_range(self):
        with pytest.raises(ValueError):
            bound_independent_edges(K3, 100, 1.5)


class TestRateExponent:
    @pytest.mark.parametrize("v", range(3, 8))
    def test_cycle_is_one(self, v):
        assert rate_exponent(builtin_motif("cycle", v)) == F(1)

    @pytest.mark.parametrize("v", range(3, 8))
    def test_tree(self, v):
        assert rate_exponent(builtin_motif("tree_path", v)) == F(1, v - 1)

    @pytest.mark.parametrize("v", range(3, 8))
    def test_complete(self, v):
        assert rate_exponent(builtin_motif("complete", v)) == F(2, v - 1)

    def test_requires_strict_balance(self):
        with pytest.raises(NotStrictlyBalanced):
            rate_exponent(NOT_BALANCED)

    @pytest.mark.parametrize(
        "motif",
        [K3, builtin_motif("tree_path", 4), builtin_motif("cycle", 5)],
        ids=["K3", "tree4", "cycle5"],
    )
    def test_matches_numerical_slope(self, motif):
        stats = compute_stats(motif)
        d = float(stats.density)

        def bound_at(n):
            return bound_sbm(erdos_renyi(float(n) ** (-1.0 / d)), motif, n).bound

        slope = math.log10(bound_at(10**6) / bound_at(10**7))
        assert abs(slope - float(rate_exponent(motif))) < 0.05


class TestPoissonUtilities:
    def test_pmf_at_zero(self):
        assert poisson_pmf(0.0, 0) == 1.0
        assert poisson_pmf(0.0, 3) == 0.0

    def test_pmf_closed_form(self):
        assert poisson_pmf(1.0, 1) == pytest.approx(math.exp(-1), rel=1e-12)

    def test_normalisation(self):
        total = math.fsum(poisson_pmf(5.0, k) for k in range(201))
        assert abs(total - 1.0) < 1e-12

    def test_tail_complements_cdf(self):
        for lam, k in ((0.5, 0), (3.0, 4), (10.0, 25)):
            cdf = math.fsum(poisson_pmf(lam, j) for j in range(k + 1))
            assert poisson_tail(lam, k) == pytest.approx(1 - cdf, abs=1e-14)


class TestTvDistance:
    def test_exact_pmf_is_zero(self):
        lam = 2.5
        hist = {k: poisson_pmf(lam, k) for k in range(80)}
        hist[0] += 1.0 - sum(hist.values())  # absorb truncation remainder
        assert tv_distance_empirical(hist, lam) < 1e-9

    def test_point_mass_at_zero(self):
        for lam in (0.3, 1.0, 4.0):
            assert tv_distance_empirical({0: 1.0}, lam) == pytest.approx(
                -math.expm1(-lam), abs=1e-12
            )

    def test_matches_direct_half_l1(self):
        # histogram = a different Poisson law, truncated far out
        lam_hist, lam_ref = 2.0, 3.5
        support = range(0, 60)
        hist = {k: poisson_pmf(lam_hist, k) for k in support}
        hist[0] += 1.0 - math.fsum(hist.values())
        direct = 0.5 * (
            math.fsum(
                abs(hist.get(k, 0.0) - poisson_pmf(lam_ref, k)) for k in range(400)
            )
            + poisson_tail(lam_ref, 399)
        )
        assert tv_distance_empirical(hist, lam_ref) == pytest.approx(
            direct, abs=1e-12
        )

    def test_unnormalised_rejected(self):
        with pytest.raises(UnnormalizedHistogram):
            tv_distance_empirical({0: 0.5, 1: 0.4}, 1.0)
