"""Weak-value oracles and extraction routes from conditioned pointer states.

The analytic oracle is the exact ratio ``<F|A|I> / <F|I>`` (with the
permutation-symmetrized product for several observables).  Three extraction
routes recover it from simulated pointer states:

* the lowering-operator route, ``prod_j (2 sigma_j / gt_j) <prod_j a_j>``
  on the conditioned state, a non-Hermitian expectation the simulation can
  take directly;
* the correlator route, which expands every ``a_j`` into its X and P
  quadratures and recombines the resulting 2^N Hermitian correlation
  functions, the quantities an ensemble experiment would actually measure.
  Its recombined value equals the lowering route identically (same state,
  same operator algebra), and that forced equality is a standing self-test;
* the spin route, ``prod_j 1/(gt_j s_j) <prod_j S-_j>`` for spin pointers.

Extraction always uses the exactly evolved, exactly projected state, so the
residual error measures genuine higher-order coupling effects.  The leading
correction is quadratic in the pointer expansion parameter lambda, with a
prefactor that grows with the weak value itself in strongly post-selected
(anomalously amplified) scenarios; :func:`extraction_tolerance` encodes
that error model.
"""

from __future__ import annotations

import itertools
import math
from functools import reduce

import numpy as np

from .errors import (
    CapacityError,
    DivergentWeakValueError,
    UnsupportedScenarioError,
    ZeroCouplingError,
)
from .evolution import PostSelectionResult, evolve_exact
from .pointers import FockPointerSpec, SpinPointerSpec, fock_operators, spin_operators
from .scenario import OVERLAP_FLOOR, Scenario
from .tensor import Operator, StateVector, expectation, identity, kron

#: Explicit permutation enumeration is capped at this many operators (N! terms).
SYMMETRIZATION_CAP = 8

#: Mapping of signature letters to quadrature choices in correlator tables.
QUADRATURE_LETTERS = ("X", "P")

CorrelatorTable = dict[str, float]


def analytic_weak_value(
    observable: Operator,
    pre: StateVector,
    post: StateVector,
    overlap_floor: float = OVERLAP_FLOOR,
) -> complex:
    """Exact weak value ``<F|A|I> / <F|I>``; no weak-coupling approximation."""
    denom = post.inner(pre)
    if abs(denom) <= overlap_floor:
        raise DivergentWeakValueError(
            f"pre/post overlap {abs(denom):.3e} at or below the floor {overlap_floor:.0e}"
        )
    numer = np.vdot(post.amps, observable.matrix @ pre.amps)
    return complex(numer / denom)


def symmetrized_joint_weak_value(
    observables: list[Operator] | tuple[Operator, ...],
    pre: StateVector,
    post: StateVector,
    overlap_floor: float = OVERLAP_FLOOR,
) -> complex:
    """Weak value of the symmetrized product, ``<F|P{A}|I> / (N! <F|I>)``.

    ``P{A}`` sums the product over all N! orderings, which is what the
    simultaneous coupling of N pointers actually probes; for pairwise
    commuting observables it reduces to the plain product.  Orderings are
    enumerated explicitly, so N is capped at :data:`SYMMETRIZATION_CAP`.
    """
    n = len(observables)
    if n < 1:
        raise ValueError("at least one observable is required")
    if n > SYMMETRIZATION_CAP:
        raise CapacityError(
            f"symmetrization over {n}! orderings exceeds the cap N <= {SYMMETRIZATION_CAP}"
        )
    denom = post.inner(pre)
    if abs(denom) <= overlap_floor:
        raise DivergentWeakValueError(
            f"pre/post overlap {abs(denom):.3e} at or below the floor {overlap_floor:.0e}"
        )
    acc = np.zeros_like(pre.amps)
    for ordering in itertools.permutations(observables):
        vec = pre.amps
        for op in reversed(ordering):
            vec = op.matrix @ vec
        acc = acc + vec
    value = complex(np.vdot(post.amps, acc) / (math.factorial(n) * denom))

    if _all_commute(observables):
        product = reduce(lambda a, b: a @ b, observables)
        direct = analytic_weak_value(product, pre, post, overlap_floor=overlap_floor)
        assert abs(value - direct) <= 1e-12 * (1.0 + abs(direct)), (
            "symmetrized value must reduce to the plain product for commuting observables"
        )
    return value


def _all_commute(observables) -> bool:
    mats = [op.matrix for op in observables]
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            if np.any(mats[i] @ mats[j] != mats[j] @ mats[i]):
                return False
    return True


def _require_all_fock(scenario: Scenario) -> None:
    if not all(isinstance(p, FockPointerSpec) for p in scenario.pointers):
        raise UnsupportedScenarioError("this extraction route requires Fock pointers")


def _require_finite_couplings(scenario: Scenario) -> None:
    if any(c.gt == 0.0 for c in scenario.couplings):
        raise ZeroCouplingError(
            "extraction divides by gt; the weak limit is taken by shrinking a "
            "finite coupling, not by setting it to zero"
        )


def extract_joint_fock(result: PostSelectionResult, scenario: Scenario) -> complex:
    """Joint weak value from the product of pointer lowering operators.

    Evaluates ``<prod_j a_j>`` on the conditioned pointer state (the lowering
    operators isolate the component displaced by the interaction) and
    rescales by ``prod_j (2 sigma_j / gt_j)``.
    """
    _require_all_fock(scenario)
    _require_finite_couplings(scenario)
    product = kron([fock_operators(p).lowering for p in scenario.pointers])
    value = expectation(result.conditioned, product)
    scale = math.prod(
        2.0 * p.sigma / c.gt for p, c in zip(scenario.pointers, scenario.couplings)
    )
    return complex(value * scale)


def correlator_decomposition(
    result: PostSelectionResult, scenario: Scenario
) -> tuple[CorrelatorTable, complex]:
    """All 2^N quadrature correlators of the conditioned state, plus their recombination.

    Each table entry keys a signature string (one letter per pointer, ``X``
    or ``P``) to the real expectation value of the corresponding Hermitian
    product, the quantities measurable on identically prepared ensembles.
    Recombining them with weights ``1/(2 sigma_j)`` for X and ``i sigma_j``
    for P, times the ``2 sigma_j / gt_j`` scale, reproduces the lowering
    route exactly; the recombined value is returned alongside the table.
    """
    _require_all_fock(scenario)
    _require_finite_couplings(scenario)
    pointer_ops = [fock_operators(p) for p in scenario.pointers]
    table: CorrelatorTable = {}
    recombined = 0.0 + 0.0j
    for signature in itertools.product(QUADRATURE_LETTERS, repeat=scenario.n_pointers):
        factors = []
        weight = 1.0 + 0.0j
        for letter, ops, spec in zip(signature, pointer_ops, scenario.pointers):
            if letter == "X":
                factors.append(ops.x)
                weight *= 1.0 / (2.0 * spec.sigma)
            else:
                factors.append(ops.p)
                weight *= 1j * spec.sigma
        value = expectation(result.conditioned, kron(factors))
        table["".join(signature)] = float(value.real)
        recombined += weight * value
    scale = math.prod(
        2.0 * p.sigma / c.gt for p, c in zip(scenario.pointers, scenario.couplings)
    )
    return table, complex(recombined * scale)


def pointer_shift_check(
    result: PostSelectionResult, scenario: Scenario
) -> tuple[float, float]:
    """Conditioned single-pointer quadrature means ``(<X>, <P>)``.

    Only defined for one Fock pointer; the shifts are proportional to the
    real and imaginary parts of the weak value, ``<X> = gt Re(A_w)`` and
    ``<P> = (gt / 2 sigma^2) Im(A_w)`` to leading order.
    """
    if scenario.n_pointers != 1:
        raise UnsupportedScenarioError("quadrature shifts are a single-pointer diagnostic")
    _require_all_fock(scenario)
    ops = fock_operators(scenario.pointers[0])
    x_mean = expectation(result.conditioned, ops.x).real
    p_mean = expectation(result.conditioned, ops.p).real
    return float(x_mean), float(p_mean)


def extract_joint_spin(result: PostSelectionResult, scenario: Scenario) -> complex:
    """Joint weak value from spin pointers: ``prod_j 1/(gt_j s_j) <prod_j S-_j>``."""
    if not all(isinstance(p, SpinPointerSpec) for p in scenario.pointers):
        raise UnsupportedScenarioError(
            "the spin route requires spin pointers throughout (mixed pointer "
            "kinds are unsupported)"
        )
    _require_finite_couplings(scenario)
    product = kron([spin_operators(p).lowering for p in scenario.pointers])
    value = expectation(result.conditioned, product)
    scale = math.prod(
        1.0 / (c.gt * p.s) for p, c in zip(scenario.pointers, scenario.couplings)
    )
    return complex(value * scale)


def strong_position_estimate(scenario: Scenario) -> complex:
    """Strong-measurement analog: ``prod_j (1/gt_j) <prod_j X_j>`` without post-selection.

    For commuting observables and independent zero-mean pointers the position
    correlation of the evolved (un-projected) state equals
    ``<I|prod_j A_j|I>`` exactly, up to truncation leakage.
    """
    _require_all_fock(scenario)
    _require_finite_couplings(scenario)
    if not _all_commute(scenario.embedded_observables()):
        raise UnsupportedScenarioError(
            "the strong-measurement analog requires commuting observables"
        )
    evolved = evolve_exact(scenario)
    factors = [identity(scenario.system_layout)] + [
        fock_operators(p).x for p in scenario.pointers
    ]
    value = expectation(evolved.state, kron(factors))
    scale = math.prod(1.0 / c.gt for c in scenario.couplings)
    return complex(value * scale)


def analytic_oracle(scenario: Scenario) -> complex:
    """Symmetrized joint weak value of the scenario's embedded observables."""
    return symmetrized_joint_weak_value(
        scenario.embedded_observables(), scenario.pre, scenario.post
    )


def extraction_tolerance(
    lambda_max: float, analytic: complex, coefficient: float = 3.0, floor: float = 1e-9
) -> float:
    """Absolute tolerance for comparing an extracted value with the oracle.

    The next-to-leading term in the extracted value is quadratic in the
    expansion parameter; under strong post-selection its prefactor picks up
    ratios of matrix elements that grow with the weak value (for one
    two-level observable the relative error is exactly
    ``lambda^2 |1 - A_w^2|``).  The cubic factor ``(1 + |A_w|)^3`` bounds
    that growth uniformly, and the coefficient covers the factor-2
    transition-pair correction plus truncation residue.  The floor absorbs
    double-precision noise on near-exact scenarios.
    """
    return coefficient * lambda_max**2 * (1.0 + abs(analytic)) ** 3 + floor
