import math
import time

import numpy as np
import pytest

from naqc import qlin, states
from naqc.coherence import (BasisTriad, COMPLEMENTARITY_BOUND,
                            MeasurementAxis, l1_coherence, max_coherence_sum)
from naqc.functionals import (DIRECTION_AB, DIRECTION_BA, NaqcOptions,
                              monogamy_sum, naqc_generalized,
                              naqc_lower_bound, naqc_standard, objective)
from naqc.steering import condition, swap_parties

from gridtools import zoom_grid_max

SQRT6 = COMPLEMENTARITY_BOUND
X = MeasurementAxis(math.pi / 2, 0.0)
Y = MeasurementAxis(math.pi / 2, math.pi / 2)
Z = MeasurementAxis(0.0, 0.0)

FAST = NaqcOptions(restarts=8)


def bell_density():
    return qlin.pure_to_density(states.phi_plus())


def random_axes(rng):
    return [MeasurementAxis(rng.uniform(0, math.pi),
                            rng.uniform(0, 2 * math.pi)) for _ in range(3)]


def random_triad(rng):
    return BasisTriad(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi),
                      rng.uniform(0, 2 * math.pi))


class TestObjective:
    def test_product_state_reduces_to_marginal_coherences(self, rng):
        rho_b = states.random_density(2, rng)
        corr = qlin.to_corr(qlin.kron(states.random_density(2, rng), rho_b))
        triad = random_triad(rng)
        val = objective(corr, [X, Y, Z], triad, (0, 1, 2))
        r = qlin.bloch_vector(rho_b)
        expected = sum(math.sqrt(max(float(r @ r) - float(ax @ r) ** 2, 0.0))
                       for ax in triad.axes())
        assert val == pytest.approx(expected, abs=1e-12)
        assert val <= SQRT6 + 1e-9

    def test_bell_coordinate_configuration(self):
        corr = qlin.to_corr(bell_density())
        triad = BasisTriad(math.pi / 2, math.pi / 2, 0.0)  # axes (y, z, x)
        assert objective(corr, [X, Y, Z], triad, (0, 1, 2)) == pytest.approx(
            3.0, abs=1e-12)

    def test_maximally_mixed_is_zero(self, rng):
        corr = qlin.to_corr(np.eye(4) / 4)
        assert objective(corr, random_axes(rng), random_triad(rng),
                         (2, 0, 1)) == 0.0

    def test_rejects_bad_pairing(self, rng):
        corr = qlin.to_corr(bell_density())
        with pytest.raises(ValueError, match="permutation"):
            objective(corr, [X, Y, Z], random_triad(rng), (0, 0, 1))

    def test_matches_projector_path(self, rng):
        for _ in range(100):
            rho = states.random_density(4, rng)
            corr = qlin.to_corr(rho)
            axes = random_axes(rng)
            triad = random_triad(rng)
            pairing = tuple(rng.permutation(3))
            fast = objective(corr, axes, triad, pairing)
            bases = triad.bases()
            slow = 0.0
            for i, axis in enumerate(axes):
                for p, state in condition(rho, "A", axis).members:
                    if p > 0.0:
                        slow += p * l1_coherence(state, bases[pairing[i]])
            assert abs(fast - slow) < 1e-10


class TestStandard:
    def test_bell_state_value_and_runtime(self):
        t0 = time.perf_counter()
        res = naqc_standard(bell_density())
        elapsed = time.perf_counter() - t0
        assert res.value == pytest.approx(3.0, abs=1e-4)
        assert res.exhibits
        assert elapsed < 1.0

    @pytest.mark.parametrize("p", [0.0, 0.1, 0.2, 0.25])
    def test_bell_mixture_isotropic_regime(self, p):
        s = 1.0 - 2.0 * p
        expected = math.sqrt(3.0 * (1.0 + 2.0 * s * s))
        res = naqc_standard(states.bell_mixture(p))
        assert res.value == pytest.approx(expected, abs=1e-4)

    @pytest.mark.parametrize("p", [0.3, 0.4, 0.5])
    def test_bell_mixture_anisotropic_regime(self, p):
        # beyond s = 1/2 no MUB triad is orthogonal to all three conditional
        # directions and the maximum drops to sqrt(2) (1 + s); confirmed
        # against the refined-grid oracle below
        s = 1.0 - 2.0 * p
        expected = math.sqrt(2.0) * (1.0 + s)
        res = naqc_standard(states.bell_mixture(p))
        assert res.value == pytest.approx(expected, abs=1e-4)

    @pytest.mark.parametrize("p,expected", [
        (0.1, 2.6153393666),
        (0.3, 1.9798989873),
    ])
    def test_grid_oracle_confirms_values(self, p, expected):
        corr = qlin.to_corr(states.bell_mixture(p))
        grid = zoom_grid_max(corr.r_b, corr.tmat)
        assert grid == pytest.approx(expected, abs=1e-4)
        assert grid <= naqc_standard(states.bell_mixture(p)).value + 1e-6

    def test_werner(self):
        res = naqc_standard(states.werner(0.9))
        assert res.value == pytest.approx(2.7, abs=1e-4)

    def test_monotone_under_restarts(self):
        rho = states.bell_mixture(0.47)
        vals = [naqc_generalized(rho, opts=NaqcOptions(restarts=r)).value
                for r in (2, 6, 14, 24)]
        assert all(a <= b + 1e-15 for a, b in zip(vals, vals[1:]))

    def test_deterministic(self):
        rho = states.bell_mixture(0.31)
        r1 = naqc_standard(rho)
        r2 = naqc_standard(rho)
        assert r1.value == r2.value
        assert r1.pairing == r2.pairing

    def test_degenerate_state_short_circuits(self):
        res = naqc_standard(np.eye(4) / 4)
        assert res.value == 0.0
        assert not res.exhibits

    def test_verdict_boundary(self):
        assert naqc_standard(bell_density()).exhibits
        assert not naqc_generalized(states.bell_mixture(0.5)).exhibits

    def test_result_reports_optimizing_configuration(self):
        res = naqc_standard(bell_density())
        corr = qlin.to_corr(bell_density())
        replay = objective(corr, res.alice_axes, res.coherence_triad,
                           res.pairing)
        assert replay == pytest.approx(res.value, abs=1e-9)
        assert res.restarts_agreeing >= 1
        assert res.restarts_converged == 24

    def test_rejects_bad_direction(self):
        with pytest.raises(ValueError, match="direction"):
            naqc_standard(bell_density(), "sideways")


class TestGeneralized:
    def test_detects_beyond_standard(self):
        rho = states.bell_mixture(0.3)
        std = naqc_standard(rho).value
        gen = naqc_generalized(rho).value
        assert std < SQRT6
        assert gen > SQRT6
        assert gen == pytest.approx(2.5455844122, abs=1e-4)

    def test_werner_equals_standard(self):
        rho = states.werner(0.9)
        assert abs(naqc_generalized(rho).value
                   - naqc_standard(rho).value) < 1e-4

    def test_pure_product_state(self, rng):
        psi_b = states.haar_pure(2, rng)
        rho = qlin.kron(states.random_density(2, rng),
                        qlin.pure_to_density(psi_b))
        res = naqc_generalized(rho)
        assert res.value == pytest.approx(SQRT6, abs=1e-4)

    def test_dominates_standard_on_random_states(self, rng):
        for _ in range(25):
            rho = states.random_density(4, rng)
            lb = naqc_lower_bound(rho)
            std = naqc_standard(rho, opts=FAST).value
            gen = naqc_generalized(rho, opts=FAST).value
            assert lb <= std + 5e-4
            assert std <= gen + 5e-4
            assert gen <= 3.0 + 5e-4
            assert 0.0 <= std

    def test_local_unitary_invariance(self, rng):
        for _ in range(10):
            rho = states.random_density(4, rng)
            u = qlin.haar_unitary(2, rng)
            v = qlin.haar_unitary(2, rng)
            rho2 = qlin.apply_local_unitary(rho, u, v)
            for fn in (naqc_standard, naqc_generalized):
                assert abs(fn(rho).value - fn(rho2).value) < 5e-4

    def test_separable_states_stay_below_bound(self, rng):
        for i in range(20):
            rho = states.sample(states.FamilySpec("separable", seed=i),
                                states.substream(17, i))
            assert naqc_generalized(rho, opts=FAST).value <= SQRT6 + 5e-4

    def test_pairing_optimization_helps(self, rng):
        for _ in range(10):
            rho = states.random_density(4, rng)
            fixed = naqc_generalized(
                rho, opts=NaqcOptions(restarts=8, pairing="fixed-identity"))
            free = naqc_generalized(rho, opts=FAST)
            assert free.value >= fixed.value - 1e-9

    def test_swap_consistency(self, rng):
        for _ in range(10):
            rho = states.random_density(4, rng)
            forward = naqc_generalized(rho, DIRECTION_AB, FAST).value
            swapped = naqc_generalized(swap_parties(rho), DIRECTION_BA,
                                       FAST).value
            assert abs(forward - swapped) < 1e-5

    def test_two_angle_family_never_exceeds_full(self):
        rho = states.bell_mixture(0.3)
        limited = naqc_generalized(
            rho, opts=NaqcOptions(mub_family="two-angle")).value
        assert limited <= naqc_generalized(rho).value + 1e-6


class TestLowerBound:
    def test_bell_is_zero(self):
        assert naqc_lower_bound(bell_density()) == 0.0

    def test_product_with_pure_marginal(self, rng):
        rho = qlin.kron(states.random_density(2, rng),
                        qlin.pure_to_density(states.haar_pure(2, rng)))
        assert naqc_lower_bound(rho) == pytest.approx(SQRT6, abs=1e-12)

    def test_directionality(self, rng):
        rho = qlin.kron(qlin.pure_to_density(states.haar_pure(2, rng)),
                        np.eye(2) / 2)
        assert naqc_lower_bound(rho, DIRECTION_AB) == pytest.approx(0.0, abs=1e-12)
        assert naqc_lower_bound(rho, DIRECTION_BA) == pytest.approx(SQRT6, abs=1e-12)

    def test_equals_marginal_coherence_maximum(self, rng):
        rho = states.random_density(4, rng)
        assert naqc_lower_bound(rho) == pytest.approx(
            max_coherence_sum(qlin.partial_trace(rho, (1,))), abs=1e-14)


class TestMonogamy:
    def test_fully_product_state(self, rng):
        psi = qlin.kron(qlin.kron(states.haar_pure(2, rng),
                                  states.haar_pure(2, rng)),
                        states.haar_pure(2, rng))
        for mode in ("fixed-coherence", "fixed-measurement"):
            rec = monogamy_sum(psi, mode, opts=FAST)
            assert rec.total == pytest.approx(2 * SQRT6, abs=2e-4)

    def test_biseparable_probe_fixed_measurement(self):
        psi = np.kron(states.phi_plus(), np.array([1.0, 0.0]))
        rec = monogamy_sum(psi, "fixed-measurement")
        assert rec.value_ab == pytest.approx(3.0, abs=1e-4)
        assert rec.value_ac == pytest.approx(SQRT6, abs=1e-4)
        assert rec.total == pytest.approx(3.0 + SQRT6, abs=2e-4)
        assert rec.total > 2 * SQRT6

    def test_ghz_saturates_exclusion_bound(self):
        s = 1.0 / math.sqrt(2.0)
        psi = states.canonical_three_qubit(
            states.CanonicalThreeQubitParams(s, 0.0, 0.0, 0.0, s))
        rec = monogamy_sum(psi, "fixed-coherence")
        assert rec.total <= 2 * SQRT6 + 1e-3
        assert rec.total == pytest.approx(2 * SQRT6, abs=1e-3)

    def test_haar_samples_respect_exclusion(self, rng):
        for i in range(6):
            psi = states.sample(states.FamilySpec("ghz-class", seed=100 + i),
                                states.substream(100, i))
            rec = monogamy_sum(psi, "fixed-coherence", opts=FAST)
            assert rec.total <= 2 * SQRT6 + 1e-3

    def test_rejects_bad_inputs(self):
        psi = np.kron(states.phi_plus(), np.array([1.0, 0.0]))
        with pytest.raises(ValueError, match="mode"):
            monogamy_sum(psi, "other")
        with pytest.raises(ValueError, match="functional"):
            monogamy_sum(psi, "fixed-coherence", functional="better")
        with pytest.raises(ValueError, match="three-qubit"):
            monogamy_sum(states.phi_plus(), "fixed-coherence")

    def test_standard_functional_variant(self):
        psi = np.kron(states.phi_plus(), np.array([1.0, 0.0]))
        rec = monogamy_sum(psi, "fixed-measurement", functional="standard",
                           opts=FAST)
        assert rec.value_ab == pytest.approx(3.0, abs=1e-4)


class TestOptions:
    def test_validation(self):
        with pytest.raises(ValueError):
            NaqcOptions(restarts=0)
        with pytest.raises(ValueError):
            NaqcOptions(tol=0.0)
        with pytest.raises(ValueError):
            NaqcOptions(mub_family="diagonal")
        with pytest.raises(ValueError):
            NaqcOptions(pairing="random")
