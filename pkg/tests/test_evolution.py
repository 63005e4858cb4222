"""Hamiltonian assembly, exact and series propagation, post-selection."""

import numpy as np
import pytest

import weakmeas as wm
from weakmeas import (
    CouplingSpec,
    FockPointerSpec,
    ObservableSpec,
    Scenario,
    SpinPointerSpec,
)

from conftest import SX, SZ, coherent_amplitudes, op, state

R2 = 1.0 / np.sqrt(2.0)


def single_scenario(gt, *, dim=12, sigma=1.0, pre=(R2, R2), post=None, kind="fock"):
    pointer = FockPointerSpec(sigma=sigma, dim=dim) if kind == "fock" else SpinPointerSpec(s=0.5)
    return Scenario(
        system_dims=(2,),
        observables=(ObservableSpec(name="sz", matrix=op(SZ), target=(0,)),),
        pointers=(pointer,),
        couplings=(CouplingSpec(gt=gt),),
        pre=state(list(pre)),
        post=state(list(post if post is not None else pre)),
    )


def pair_scenario(gt=0.02, *, dim=12, pre=None, post=None, same_qubit=False):
    if same_qubit:
        observables = (
            ObservableSpec(name="sx", matrix=op(SX), target=(0,)),
            ObservableSpec(name="sz", matrix=op(SZ), target=(0,)),
        )
        system_dims = (2,)
        pre = pre if pre is not None else [1.0, 0.0]
        post = post if post is not None else [R2, R2]
    else:
        observables = (
            ObservableSpec(name="sz1", matrix=op(SZ), target=(0,)),
            ObservableSpec(name="sz2", matrix=op(SZ), target=(1,)),
        )
        system_dims = (2, 2)
        pre = pre if pre is not None else [0.0, R2, R2, 0.0]
        post = post if post is not None else [0.5, 0.5, 0.5, 0.5]
    return Scenario(
        system_dims=system_dims,
        observables=observables,
        pointers=tuple(FockPointerSpec(sigma=1.0, dim=dim) for _ in range(2)),
        couplings=tuple(CouplingSpec(gt=gt) for _ in range(2)),
        pre=state(pre, *system_dims),
        post=state(post, *system_dims),
    )


class TestBuildHamiltonian:
    def test_single_fock_term(self):
        s = single_scenario(gt=1.0)
        p = wm.fock_operators(s.pointers[0]).p.matrix
        np.testing.assert_allclose(
            wm.build_hamiltonian(s).matrix, np.kron(SZ, p), atol=1e-15
        )

    def test_two_terms_sum_and_commute(self):
        s = pair_scenario(gt=0.3, dim=6)
        p = wm.fock_operators(s.pointers[0]).p.matrix
        i2, i6 = np.eye(2), np.eye(6)
        term1 = 0.3 * np.kron(np.kron(np.kron(SZ, i2), p), i6)
        term2 = 0.3 * np.kron(np.kron(np.kron(i2, SZ), i6), p)
        h = wm.build_hamiltonian(s).matrix
        np.testing.assert_allclose(h, term1 + term2, atol=1e-15)
        np.testing.assert_allclose(term1 @ term2, term2 @ term1, atol=1e-15)

    def test_spin_pointer_coupling_sign(self):
        # H = -g A S_y, with S_y in the ascending-m basis
        s = single_scenario(gt=0.5, kind="spin")
        sy = wm.spin_operators(s.pointers[0]).sy.matrix
        np.testing.assert_allclose(
            wm.build_hamiltonian(s).matrix, -0.5 * np.kron(SZ, sy), atol=1e-15
        )

    def test_result_is_hermitian(self):
        assert wm.build_hamiltonian(pair_scenario()).is_hermitian()


class TestEvolveExact:
    def test_zero_coupling_is_identity(self):
        s = single_scenario(gt=0.0)
        evolved = wm.evolve_exact(s)
        np.testing.assert_allclose(
            evolved.state.amps, wm.initial_composite(s).state.amps, atol=1e-15
        )

    def test_eigenstate_displaces_pointer(self):
        # +1 eigenstate input: the pointer becomes a coherent state of
        # amplitude gt/(2 sigma) and mean position gt
        gt, sigma = 0.1, 1.0
        s = single_scenario(gt, pre=(1.0, 0.0))
        evolved = wm.evolve_exact(s)
        amps = evolved.state.amps.reshape(2, 12)
        np.testing.assert_allclose(amps[1], 0.0, atol=1e-15)
        oracle = coherent_amplitudes(gt / (2 * sigma), 12)
        np.testing.assert_allclose(amps[0], oracle, atol=1e-8)
        x = wm.fock_operators(s.pointers[0]).x
        pointer_state = wm.StateVector(wm.FactorLayout((12,)), amps[0])
        assert wm.expectation(pointer_state, x).real == pytest.approx(gt, abs=1e-8)

    @pytest.mark.parametrize(
        "name", ["aav_qubit", "joint_pair_entangled", "pair_anticommuting", "aav_qubit_spinptr"]
    )
    def test_norm_preserved(self, name):
        evolved = wm.evolve_exact(wm.resolve_scenario(name))
        assert evolved.state.norm() == pytest.approx(1.0, abs=1e-10)

    def test_factorized_matches_full_propagator(self):
        s = pair_scenario(gt=0.08, dim=8)
        fast = wm.evolve_exact(s, factorize=True)
        full = wm.evolve_exact(s, factorize=False)
        np.testing.assert_allclose(fast.state.amps, full.state.amps, atol=1e-12)

    def test_factorization_requires_commuting_observables(self):
        with pytest.raises(ValueError, match="commut"):
            wm.evolve_exact(pair_scenario(same_qubit=True), factorize=True)

    def test_leakage_guard_trips(self):
        s = single_scenario(gt=1.0, dim=4)  # lambda = 0.5 on a 4-level pointer
        with pytest.raises(wm.TruncationLeakageError) as excinfo:
            wm.evolve_exact(s)
        assert excinfo.value.leakage > wm.LEAKAGE_GUARD
        assert excinfo.value.dim == 4

    def test_leakage_monotone_in_dimension(self):
        # same coupling, growing truncation: top-level population must not grow
        tops = []
        for dim in (8, 12, 16):
            s = single_scenario(gt=0.6, dim=dim)  # lambda = 0.3
            evolved = wm.evolve_exact(s)
            tops.append(wm.pointer_level_populations(evolved, 0)[-1])
        assert tops[0] >= tops[1] >= tops[2]


class TestEvolveTaylor:
    def test_first_order_displaces_one_pointer_at_a_time(self):
        # order-1 pointer sector |1 0| carries lambda_1 * A_1 |I>; |1 1| is empty
        s = pair_scenario(gt=0.04, dim=6)
        lam = 0.02
        truncated = wm.evolve_taylor(s, order=1)
        amps = truncated.state.amps.reshape(4, 6, 6)
        a1_pre = np.kron(SZ, np.eye(2)) @ s.pre.amps
        a2_pre = np.kron(np.eye(2), SZ) @ s.pre.amps
        np.testing.assert_allclose(amps[:, 1, 0], lam * a1_pre, atol=1e-15)
        np.testing.assert_allclose(amps[:, 0, 1], lam * a2_pre, atol=1e-15)
        np.testing.assert_allclose(amps[:, 1, 1], 0.0, atol=1e-15)

    def test_below_order_n_no_joint_transfer(self):
        s = pair_scenario(gt=0.04, dim=6)
        truncated = wm.evolve_taylor(s, order=1)
        amps = truncated.state.amps.reshape(4, 6, 6)
        np.testing.assert_allclose(amps[:, 1, 1], 0.0, atol=1e-16)

    def test_order_n_joint_amplitude_for_commuting_pair(self):
        # hand-multiplied second-order coefficient: lambda^2 A1 A2 |I>
        s = pair_scenario(gt=0.04, dim=6)
        lam = 0.02
        truncated = wm.evolve_taylor(s, order=2)
        amps = truncated.state.amps.reshape(4, 6, 6)
        a1 = np.kron(SZ, np.eye(2))
        a2 = np.kron(np.eye(2), SZ)
        oracle = lam**2 * (a1 @ (a2 @ s.pre.amps))
        np.testing.assert_allclose(amps[:, 1, 1], oracle, atol=1e-15)

    def test_series_converges_to_exact_on_every_catalog_scenario(self):
        for name in wm.catalog_names():
            s = wm.resolve_scenario(name)
            assert s.lambda_max <= 0.1, name
            exact = wm.evolve_exact(s)
            series = wm.evolve_taylor(s, order=12)
            assert np.linalg.norm(exact.state.amps - series.state.amps) <= 1e-10, name

    def test_order_must_be_positive(self):
        with pytest.raises(ValueError):
            wm.evolve_taylor(single_scenario(gt=0.02), order=0)


class TestPostSelect:
    def test_zero_coupling_probability_is_overlap(self):
        phi = 3 * np.pi / 8
        s = single_scenario(0.0, post=(np.cos(phi), np.sin(phi)))
        result = wm.post_select(wm.evolve_exact(s), s)
        expected = abs(s.post.inner(s.pre)) ** 2
        assert result.prob_success == pytest.approx(expected, rel=1e-12)
        np.testing.assert_allclose(result.conditioned.amps[0], 1.0, atol=1e-12)
        np.testing.assert_allclose(result.conditioned.amps[1:], 0.0, atol=1e-12)

    def test_amplified_probability_matches_overlap_limit(self):
        s = wm.resolve_scenario("aav_amplified")
        result = wm.post_select(wm.evolve_exact(s), s)
        assert result.prob_success == pytest.approx(np.sin(0.005) ** 2, rel=0.01)

    def test_trivial_post_selection_reduces_to_expectation_value(self):
        # F = I: the pointer mean reproduces gt <I|A|I> as the coupling shrinks
        gt = 0.002
        pre = (np.cos(0.3), np.sin(0.3))
        s = single_scenario(gt, pre=pre)
        result = wm.post_select(wm.evolve_exact(s), s)
        x = wm.fock_operators(s.pointers[0]).x
        mean_x = wm.expectation(result.conditioned, x).real
        a_mean = np.cos(0.3) ** 2 - np.sin(0.3) ** 2
        assert mean_x == pytest.approx(gt * a_mean, abs=5e-8)

    def test_completeness_over_post_selection_basis(self):
        s = single_scenario(0.02, post=(1.0, 0.0))
        evolved = wm.evolve_exact(s)
        total = 0.0
        for basis_state in ([1.0, 0.0], [0.0, 1.0]):
            variant = Scenario(
                system_dims=s.system_dims,
                observables=s.observables,
                pointers=s.pointers,
                couplings=s.couplings,
                pre=s.pre,
                post=state(basis_state),
            )
            total += wm.post_select(evolved, variant).prob_success
        assert total == pytest.approx(1.0, abs=1e-10)

    def test_failure_below_probability_floor(self):
        # orthogonal post-selection at tiny coupling: essentially nothing survives
        s = single_scenario(1e-8, pre=(1.0, 0.0), post=(0.0, 1.0))
        evolved = wm.evolve_exact(s)
        with pytest.raises(wm.PostSelectionFailureError):
            wm.post_select(evolved, s)

    def test_conditioned_state_is_unit_normalized(self):
        s = wm.resolve_scenario("aav_qubit")
        result = wm.post_select(wm.evolve_exact(s), s)
        assert result.conditioned.norm() == pytest.approx(1.0, abs=1e-12)
