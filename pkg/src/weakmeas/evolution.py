"""Interaction-Hamiltonian assembly, exact propagation, and post-selection.

The coupling Hamiltonian is ``H = sum_j gt_j A_j P_j`` with ``A_j`` the
system observable and ``P_j`` the momentum quadrature of Fock pointer j
(for spin pointers the coupling operator is ``-S_y``).  The interaction
time is folded into ``gt``, so states are propagated by ``exp(-i H)`` with
hbar = 1.

Propagation is by spectral decomposition, never by a truncated series, so
quadratic-in-coupling effects are exact up to Fock truncation.  Truncation
is monitored by a leakage guard: after evolution the population of the top
two levels of every Fock pointer must stay below :data:`LEAKAGE_GUARD`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PostSelectionFailureError, TruncationLeakageError
from .pointers import FockPointerSpec, initial_state, pointer_operators
from .scenario import Scenario
from .tensor import (
    FactorLayout,
    Operator,
    StateVector,
    hermitian_propagator,
    kron_state,
)

#: Maximum tolerated population in the top two levels of any Fock pointer.
LEAKAGE_GUARD = 1e-8

#: Post-selection probabilities below this floor are treated as failed runs.
PROB_FLOOR = 1e-12


@dataclass(frozen=True)
class CompositeState:
    """Joint system-pointer state on the layout [system factors, pointers]."""

    state: StateVector
    n_system_factors: int

    @property
    def system_dim(self) -> int:
        return math.prod(self.state.layout.dims[: self.n_system_factors])

    @property
    def pointer_dims(self) -> tuple[int, ...]:
        return self.state.layout.dims[self.n_system_factors :]


@dataclass(frozen=True)
class PostSelectionResult:
    """Pointer-space state conditioned on a successful post-selection.

    ``conditioned`` is stored unit-normalized; pointer expectation values do
    not depend on that choice of scalar rescaling, and ``prob_success``
    (the squared norm of the raw projection) keeps the alternative
    normalization recoverable.
    """

    conditioned: StateVector
    prob_success: float


def coupling_operator(pointer) -> Operator:
    """Pointer operator entering the interaction: P for Fock, -S_y for spin."""
    ops = pointer_operators(pointer)
    if ops.p is not None:
        return ops.p
    return -ops.sy


def build_hamiltonian(scenario: Scenario) -> Operator:
    """Assemble ``sum_j gt_j A_j P_j`` on the full layout and verify Hermiticity."""
    layout = scenario.full_layout
    terms = None
    for j, (obs_full, coupling) in enumerate(
        zip(scenario.embedded_observables(), scenario.couplings)
    ):
        term = coupling.gt * np.kron(obs_full.matrix, _pointer_block(scenario, j))
        terms = term if terms is None else terms + term
    return Operator(layout, terms).require_hermitian()


def _pointer_block(scenario: Scenario, j: int) -> np.ndarray:
    """Kron over all pointers with the coupling operator at position j."""
    block = None
    for k, pointer in enumerate(scenario.pointers):
        mat = (
            coupling_operator(pointer).matrix
            if k == j
            else np.eye(pointer.dim, dtype=np.complex128)
        )
        block = mat if block is None else np.kron(block, mat)
    return block


def initial_composite(scenario: Scenario) -> CompositeState:
    """Pre-selected system state joined with every pointer's starting state."""
    state = kron_state(
        [scenario.pre] + [initial_state(p) for p in scenario.pointers]
    )
    return CompositeState(state=state, n_system_factors=len(scenario.system_dims))


def pointer_level_populations(composite: CompositeState, pointer_index: int) -> np.ndarray:
    """Marginal level populations of one pointer in the composite state."""
    dims = composite.state.layout.dims
    axis = composite.n_system_factors + pointer_index
    tensor = composite.state.amps.reshape(dims)
    moved = np.moveaxis(tensor, axis, 0).reshape(dims[axis], -1)
    return np.sum(np.abs(moved) ** 2, axis=1)


def top_level_leakage(composite: CompositeState, scenario: Scenario) -> list[float]:
    """Population in the top two levels of each Fock pointer (0.0 for spin)."""
    out = []
    for j, pointer in enumerate(scenario.pointers):
        if isinstance(pointer, FockPointerSpec):
            pops = pointer_level_populations(composite, j)
            out.append(float(pops[-2:].sum()))
        else:
            out.append(0.0)
    return out


def _check_leakage(composite: CompositeState, scenario: Scenario, guard: float) -> None:
    for j, leak in enumerate(top_level_leakage(composite, scenario)):
        if leak > guard:
            raise TruncationLeakageError(j, leak, scenario.pointers[j].dim, guard)


def _observables_commute(scenario: Scenario) -> bool:
    # exact zero only: a rounding-level commutator would make the factorized
    # propagator subtly wrong, so anything nonzero falls back to the full build
    ops = [o.matrix for o in scenario.embedded_observables()]
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if np.any(ops[i] @ ops[j] != ops[j] @ ops[i]):
                return False
    return True


def evolve_exact(scenario: Scenario, factorize: bool | None = None) -> CompositeState:
    """Propagate the pre-selected joint state with the spectral propagator.

    When the embedded observables commute exactly, the propagator factorizes
    into per-pointer unitaries ``exp(-i gt_j A_j P_j)`` that are applied in
    sequence; this is mathematically identical to exponentiating the full
    Hamiltonian and avoids diagonalizing the composite space.  Pass
    ``factorize=False`` to force the full-space route (or ``True`` to demand
    factorization, which fails if the observables do not commute).

    Raises
    ------
    TruncationLeakageError
        If any Fock pointer ends with more than :data:`LEAKAGE_GUARD`
        population in its top two levels.
    """
    if factorize is None:
        factorize = _observables_commute(scenario)
    elif factorize and not _observables_commute(scenario):
        raise ValueError("factorized propagation requires commuting observables")

    composite = initial_composite(scenario)
    if factorize:
        evolved = _evolve_factorized(scenario, composite)
    else:
        hamiltonian = build_hamiltonian(scenario)
        propagator = hermitian_propagator(hamiltonian, 1.0)
        evolved = CompositeState(
            state=propagator @ composite.state,
            n_system_factors=composite.n_system_factors,
        )
    _check_leakage(evolved, scenario, LEAKAGE_GUARD)
    return evolved


def _evolve_factorized(scenario: Scenario, composite: CompositeState) -> CompositeState:
    n_sys = composite.n_system_factors
    dims = composite.state.layout.dims
    sys_dim = composite.system_dim
    amps = composite.state.amps.copy()
    for j, (obs_full, coupling, pointer) in enumerate(
        zip(scenario.embedded_observables(), scenario.couplings, scenario.pointers)
    ):
        d = pointer.dim
        sub_layout = FactorLayout((sys_dim, d))
        h_sub = Operator(
            sub_layout,
            coupling.gt * np.kron(obs_full.matrix, coupling_operator(pointer).matrix),
        )
        u_sub = hermitian_propagator(h_sub, 1.0)
        # contract U over the (system, pointer j) index pair
        tensor = amps.reshape((sys_dim,) + dims[n_sys:])
        tensor = np.moveaxis(tensor, 1 + j, 1).reshape(sys_dim * d, -1)
        tensor = u_sub.matrix @ tensor
        tensor = tensor.reshape((sys_dim, d) + tuple(np.delete(dims[n_sys:], j)))
        amps = np.moveaxis(tensor, 1, 1 + j).reshape(-1)
    return CompositeState(
        state=StateVector(composite.state.layout, amps),
        n_system_factors=n_sys,
    )


def evolve_taylor(scenario: Scenario, order: int) -> CompositeState:
    """Series-truncated state ``sum_{k<=order} (-i H)^k / k! |initial>``.

    Deliberately unnormalized: this is a structural diagnostic for the
    order-by-order composition of the evolved state, never an extraction
    path.
    """
    if order < 1:
        raise ValueError(f"series order must be >= 1, got {order}")
    composite = initial_composite(scenario)
    hamiltonian = build_hamiltonian(scenario)
    term = composite.state.amps.copy()
    total = term.copy()
    for k in range(1, order + 1):
        term = (-1j / k) * (hamiltonian.matrix @ term)
        total += term
    return CompositeState(
        state=StateVector(composite.state.layout, total),
        n_system_factors=composite.n_system_factors,
    )


def post_select(composite: CompositeState, scenario: Scenario) -> PostSelectionResult:
    """Project the system factors onto the post-selection state.

    Returns the unit-normalized conditioned pointer state together with the
    success probability (squared norm of the raw projection).
    """
    sys_dim = composite.system_dim
    ptr_dims = composite.pointer_dims
    matrix = composite.state.amps.reshape(sys_dim, -1)
    projected = scenario.post.amps.conj() @ matrix
    prob = float(np.vdot(projected, projected).real)
    if prob < PROB_FLOOR:
        raise PostSelectionFailureError(
            f"post-selection probability {prob:.3e} below the floor {PROB_FLOOR:.0e}"
        )
    conditioned = StateVector(FactorLayout(ptr_dims), projected / math.sqrt(prob))
    return PostSelectionResult(conditioned=conditioned, prob_success=prob)
