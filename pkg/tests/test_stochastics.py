import math

import numpy as np
import pytest
from scipy import stats

from deanonlab.stochastics import (
    NEG_INF,
    UID_CHANNEL,
    EdgeJointDistribution,
    InfoMeasures,
    JointUYZ,
    QueryChannel,
    VictimPrior,
    build_joint_uyz,
    entropy,
    info_density,
    make_prior,
    mutual_information,
    sample_victim,
)


def bsc_style_model():
    # p0=0.5, scan flip 0.1, response flip 0.2: the workhorse noisy example.
    edge = EdgeJointDistribution.from_marginal_flip(0.5, 0.1)
    gm = QueryChannel.bsc(0.2)
    return edge, gm


def oracle_joint_table(p0, edge_flip, gm_flip):
    """Direct multiplication over all 8 (u, y, z) triples."""
    p_z = [1.0 - p0, p0]
    u_given_z = [[1.0 - edge_flip, edge_flip], [edge_flip, 1.0 - edge_flip]]
    y_given_z = [[1.0 - gm_flip, gm_flip], [gm_flip, 1.0 - gm_flip]]
    table = np.zeros((2, 2, 2))
    for u in range(2):
        for y in range(2):
            for z in range(2):
                table[u, y, z] = p_z[z] * u_given_z[z][u] * y_given_z[z][y]
    return table


class TestEdgeJoint:
    def test_marginals_from_flip(self):
        edge = EdgeJointDistribution.from_marginal_flip(0.3, 0.1)
        assert edge.p0 == pytest.approx(0.3, abs=1e-15)
        assert edge.p1 == pytest.approx(0.3 * 0.9 + 0.7 * 0.1, abs=1e-15)

    def test_product_law(self):
        edge = EdgeJointDistribution.product(0.3, 0.6)
        assert edge.table[1, 1] == pytest.approx(0.18, abs=1e-15)
        assert edge.p0 == pytest.approx(0.3)
        assert edge.p1 == pytest.approx(0.6)

    def test_rejects_bad_tables(self):
        with pytest.raises(ValueError):
            EdgeJointDistribution(np.array([[0.5, 0.5], [0.5, 0.5]]))
        with pytest.raises(ValueError):
            EdgeJointDistribution(np.array([[1.2, -0.2], [0.0, 0.0]]))

    def test_table_is_read_only(self):
        edge = EdgeJointDistribution.from_marginal_flip(0.5, 0.0)
        with pytest.raises(ValueError):
            edge.table[0, 0] = 1.0


class TestQueryChannel:
    def test_bsc_rows(self):
        ch = QueryChannel.bsc(0.2)
        assert np.allclose(ch.table, [[0.8, 0.2], [0.2, 0.8]])

    def test_uid_channel_is_identity(self):
        assert np.array_equal(UID_CHANNEL.table, np.eye(2))

    def test_rejects_non_stochastic_rows(self):
        with pytest.raises(ValueError):
            QueryChannel(np.array([[0.7, 0.2], [0.2, 0.8]]))


class TestJointUYZ:
    def test_deterministic_coupling(self):
        edge = EdgeJointDistribution.from_marginal_flip(0.5, 0.0)
        joint = build_joint_uyz(edge, QueryChannel.identity())
        expected = np.zeros((2, 2, 2))
        expected[0, 0, 0] = 0.5
        expected[1, 1, 1] = 0.5
        assert np.allclose(joint.table, expected, atol=1e-15)

    def test_independent_edges_factorize(self):
        edge = EdgeJointDistribution.product(0.5, 0.3)
        joint = build_joint_uyz(edge, QueryChannel.bsc(0.2))
        p_u = joint.p_u()
        p_yz = joint.table.sum(axis=0)
        assert np.allclose(joint.table, p_u[:, None, None] * p_yz[None, :, :], atol=1e-14)

    def test_matches_direct_multiplication(self):
        edge, gm = bsc_style_model()
        joint = build_joint_uyz(edge, gm)
        assert np.allclose(joint.table, oracle_joint_table(0.5, 0.1, 0.2), atol=1e-14)

    @pytest.mark.parametrize("p0", [0.0, 1.0])
    def test_rejects_degenerate_p0(self, p0):
        edge = EdgeJointDistribution.from_marginal_flip(p0, 0.1)
        with pytest.raises(ValueError, match="degenerate"):
            build_joint_uyz(edge, QueryChannel.bsc(0.2))

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            JointUYZ(np.full((2, 2, 2), 0.2))


class TestInfoDensity:
    def test_independent_is_zero(self):
        edge = EdgeJointDistribution.product(0.4, 0.7)
        joint = build_joint_uyz(edge, QueryChannel.bsc(0.1))
        for u in range(2):
            for y in range(2):
                assert info_density(joint, u, y) == pytest.approx(0.0, abs=1e-12)

    def test_noiseless_correlated(self):
        edge = EdgeJointDistribution.from_marginal_flip(0.5, 0.0)
        joint = build_joint_uyz(edge, QueryChannel.identity())
        assert info_density(joint, 1, 1) == pytest.approx(1.0, abs=1e-12)
        assert info_density(joint, 0, 1) == NEG_INF

    def test_matches_conditional_oracle(self):
        edge, gm = bsc_style_model()
        joint = build_joint_uyz(edge, gm)
        table = oracle_joint_table(0.5, 0.1, 0.2)
        p_uy = table.sum(axis=2)
        p_u = p_uy.sum(axis=1)
        p_y = p_uy.sum(axis=0)
        expected = math.log2((p_uy[1, 1] / p_u[1]) / p_y[1])
        assert info_density(joint, 1, 1) == pytest.approx(expected, abs=1e-12)

    def test_zero_probability_symbol_rejected(self):
        # Channel that always answers 1 makes y=0 a zero-mass observation.
        edge = EdgeJointDistribution.from_marginal_flip(0.5, 0.1)
        always_one = QueryChannel(np.array([[0.0, 1.0], [0.0, 1.0]]))
        joint = build_joint_uyz(edge, always_one)
        with pytest.raises(ValueError):
            info_density(joint, 1, 0)


class TestMutualInformation:
    def test_independent_is_zero(self):
        edge = EdgeJointDistribution.product(0.5, 0.5)
        joint = build_joint_uyz(edge, QueryChannel.bsc(0.2))
        assert mutual_information(joint) == pytest.approx(0.0, abs=1e-12)

    def test_noiseless_correlated_is_one_bit(self):
        edge = EdgeJointDistribution.from_marginal_flip(0.5, 0.0)
        joint = build_joint_uyz(edge, QueryChannel.identity())
        assert mutual_information(joint) == pytest.approx(1.0, abs=1e-12)

    def test_matches_exhaustive_sum(self):
        edge, gm = bsc_style_model()
        joint = build_joint_uyz(edge, gm)
        p_uy = oracle_joint_table(0.5, 0.1, 0.2).sum(axis=2)
        p_u = p_uy.sum(axis=1)
        p_y = p_uy.sum(axis=0)
        expected = sum(
            p_uy[u, y] * math.log2(p_uy[u, y] / (p_u[u] * p_y[y]))
            for u in range(2)
            for y in range(2)
        )
        assert mutual_information(joint) == pytest.approx(expected, abs=1e-12)


class TestInfoMeasures:
    def test_i_max_cases(self):
        independent = build_joint_uyz(EdgeJointDistribution.product(0.5, 0.5), QueryChannel.bsc(0.1))
        assert InfoMeasures.from_joint(independent).i_max == pytest.approx(0.0, abs=1e-12)
        noiseless = build_joint_uyz(
            EdgeJointDistribution.from_marginal_flip(0.5, 0.0), QueryChannel.identity()
        )
        assert InfoMeasures.from_joint(noiseless).i_max == pytest.approx(1.0, abs=1e-12)

    def test_i_max_matches_density_table(self):
        edge, gm = bsc_style_model()
        joint = build_joint_uyz(edge, gm)
        measures = InfoMeasures.from_joint(joint)
        expected = max(
            info_density(joint, u, y)
            for u in range(2)
            for y in range(2)
            if info_density(joint, u, y) > NEG_INF
        )
        assert measures.i_max == pytest.approx(expected, abs=1e-12)

    def test_density_expectation_equals_mutual_info(self):
        # Exact algebraic identity, so the tolerance is tight.
        rng = np.random.default_rng(1234)
        for _ in range(50):
            p0 = rng.uniform(0.05, 0.95)
            edge = EdgeJointDistribution.from_marginal_flip(p0, rng.uniform(0.0, 0.45))
            joint = build_joint_uyz(edge, QueryChannel.bsc(rng.uniform(0.0, 0.45)))
            measures = InfoMeasures.from_joint(joint)
            p_uy = joint.p_uy()
            mask = p_uy > 0
            assert measures.mutual_info == pytest.approx(
                float((p_uy[mask] * measures.density[mask]).sum()), abs=1e-12
            )
            if measures.mutual_info > 0.0:
                assert measures.i_max >= measures.mutual_info

    def test_mismatched_candidate_drift_nonpositive(self):
        # Expectation of the density under independent P_U x P_Y never exceeds 0.
        rng = np.random.default_rng(99)
        for _ in range(50):
            edge = EdgeJointDistribution.from_marginal_flip(
                rng.uniform(0.1, 0.9), rng.uniform(0.01, 0.45)
            )
            joint = build_joint_uyz(edge, QueryChannel.bsc(rng.uniform(0.01, 0.45)))
            measures = InfoMeasures.from_joint(joint)
            p_uy = joint.p_uy()
            p_u = p_uy.sum(axis=1)
            p_y = p_uy.sum(axis=0)
            outer = p_u[:, None] * p_y[None, :]
            finite = np.isfinite(measures.density)
            drift = float((outer[finite] * measures.density[finite]).sum())
            assert drift <= 1e-12

    def test_extra_noise_never_helps(self):
        # Post-composing the response channel with more symmetric noise can
        # only lose information.
        rng = np.random.default_rng(4321)
        for _ in range(30):
            edge = EdgeJointDistribution.from_marginal_flip(
                rng.uniform(0.1, 0.9), rng.uniform(0.0, 0.4)
            )
            gm = QueryChannel.bsc(rng.uniform(0.0, 0.4))
            extra = QueryChannel.bsc(rng.uniform(0.05, 0.45))
            base = mutual_information(build_joint_uyz(edge, gm))
            degraded = mutual_information(build_joint_uyz(edge, gm.compose(extra)))
            assert degraded <= base + 1e-12


class TestPriors:
    def test_uniform(self):
        prior = make_prior("uniform", 4)
        assert np.allclose(prior.probs, 0.25)

    def test_zipf_zero_exponent_is_uniform(self):
        assert np.allclose(make_prior("zipf:0", 6).probs, 1.0 / 6.0)

    def test_zipf_one_hand_normalization(self):
        # Weights (1, 1/2, 1/3, 1/4) normalized by 25/12.
        prior = make_prior("zipf:1", 4)
        assert np.allclose(prior.probs, np.array([12, 6, 4, 3]) / 25.0, atol=1e-15)

    def test_explicit_vector_normalized(self):
        prior = make_prior([2.0, 1.0, 1.0])
        assert np.allclose(prior.probs, [0.5, 0.25, 0.25])

    def test_rejects_zero_entries(self):
        with pytest.raises(ValueError):
            make_prior([0.5, 0.5, 0.0])
        with pytest.raises(ValueError):
            VictimPrior(np.array([1.0, 0.0]) / 1.0)

    def test_rejects_unknown_kind(self):
        with pytest.raises(ValueError):
            make_prior("powerlaw", 4)

    def test_rejects_unnormalized_direct_construction(self):
        with pytest.raises(ValueError):
            VictimPrior(np.array([0.5, 0.6]))

    def test_entropy_uniform(self):
        assert entropy(make_prior("uniform", 8)) == pytest.approx(3.0, abs=1e-12)

    def test_entropy_near_degenerate(self):
        eps0 = 1e-12
        m = 4
        probs = np.full(m, eps0)
        probs[0] = 1.0 - (m - 1) * eps0
        assert entropy(VictimPrior(probs)) < 1e-9

    def test_entropy_zipf_direct_sum(self):
        prior = make_prior("zipf:1.0", 16)
        expected = -sum(p * math.log2(p) for p in prior.probs.tolist())
        assert entropy(prior) == pytest.approx(expected, abs=1e-12)


class TestSampleVictim:
    def test_near_degenerate_always_hits_the_mass_point(self):
        probs = np.array([1e-13, 1e-13, 1.0 - 2e-13])
        prior = VictimPrior(probs)
        assert all(sample_victim(prior, seed) == 3 for seed in range(1000))

    def test_uniform_two_frequencies(self):
        prior = make_prior("uniform", 2)
        draws = np.array([sample_victim(prior, seed) for seed in range(100_000)])
        assert abs((draws == 1).mean() - 0.5) < 0.01

    def test_zipf_chi_square_fit(self):
        prior = make_prior("zipf:1", 4)
        draws = np.array([sample_victim(prior, seed) for seed in range(100_000)])
        counts = np.bincount(draws, minlength=5)[1:]
        result = stats.chisquare(counts, prior.probs * draws.size)
        assert result.pvalue > 0.001

    def test_deterministic_given_seed(self):
        prior = make_prior("zipf:0.5", 10)
        assert sample_victim(prior, 42) == sample_victim(prior, 42)
