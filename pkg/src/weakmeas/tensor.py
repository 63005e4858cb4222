"""Dense complex linear algebra over tensor-product Hilbert spaces.

Everything is stored as flat ``complex128`` numpy arrays tagged with a
:class:`FactorLayout` that records the ordered factor dimensions.  The
convention throughout the package is system factors first, then one factor
per measurement pointer in declaration order.  All values are immutable
after construction, so they are safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, HermiticityError, LayoutError, ZeroNormError

#: Hard cap on the total dimension of any operator or state (rows of a matrix).
MAX_TOTAL_DIM = 2**20

#: Relative tolerance of the Hermiticity check max|M - M^dag| <= tol * max|M|.
HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class FactorLayout:
    """Ordered factor dimensions of a tensor-product space."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise LayoutError("a layout needs at least one factor")
        if any(d < 1 for d in dims):
            raise LayoutError(f"factor dimensions must be positive, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        """Total dimension (product of the factor dimensions)."""
        return math.prod(self.dims)

    def __len__(self) -> int:
        return len(self.dims)

    def __add__(self, other: "FactorLayout") -> "FactorLayout":
        return FactorLayout(self.dims + other.dims)


def _frozen_complex(values, shape_kind: str) -> np.ndarray:
    arr = np.ascontiguousarray(values, dtype=np.complex128)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{shape_kind} contains non-finite entries")
    if arr.flags.writeable:
        if np.shares_memory(arr, values):
            arr = arr.copy()
        arr.flags.writeable = False
    return arr


def _require_same_layout(a, b) -> None:
    if a.layout != b.layout:
        raise LayoutError(f"layout mismatch: {a.layout.dims} vs {b.layout.dims}")


@dataclass(frozen=True, eq=False)
class Operator:
    """Square complex matrix acting on a tensor-product space.

    Parameters
    ----------
    layout : FactorLayout
        Factor structure of the space the matrix acts on.
    matrix : array_like
        Square ``layout.dim`` x ``layout.dim`` complex matrix.
    """

    layout: FactorLayout
    matrix: np.ndarray

    def __post_init__(self):
        mat = _frozen_complex(self.matrix, "operator")
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise LayoutError(f"operator matrix must be square, got shape {mat.shape}")
        if mat.shape[0] != self.layout.dim:
            raise LayoutError(
                f"matrix dimension {mat.shape[0]} does not match layout "
                f"dimension {self.layout.dim}"
            )
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.layout.dim

    def dag(self) -> "Operator":
        """Hermitian adjoint."""
        return Operator(self.layout, self.matrix.conj().T)

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        scale = np.abs(self.matrix).max()
        defect = np.abs(self.matrix - self.matrix.conj().T).max()
        return defect <= tol * scale

    def require_hermitian(self, tol: float = HERMITIAN_TOL) -> "Operator":
        if not self.is_hermitian(tol):
            defect = np.abs(self.matrix - self.matrix.conj().T).max()
            raise HermiticityError(
                f"operator fails the Hermiticity check (max|M - M^dag| = {defect:.3e})"
            )
        return self

    def __matmul__(self, other):
        if isinstance(other, Operator):
            _require_same_layout(self, other)
            return Operator(self.layout, self.matrix @ other.matrix)
        if isinstance(other, StateVector):
            _require_same_layout(self, other)
            return StateVector(self.layout, self.matrix @ other.amps)
        return NotImplemented

    def __add__(self, other: "Operator") -> "Operator":
        _require_same_layout(self, other)
        return Operator(self.layout, self.matrix + other.matrix)

    def __sub__(self, other: "Operator") -> "Operator":
        _require_same_layout(self, other)
        return Operator(self.layout, self.matrix - other.matrix)

    def __mul__(self, scalar) -> "Operator":
        return Operator(self.layout, self.matrix * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "Operator":
        return Operator(self.layout, -self.matrix)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Operator):
            return NotImplemented
        return self.layout == other.layout and np.array_equal(self.matrix, other.matrix)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitude vector over a factor layout."""

    layout: FactorLayout
    amps: np.ndarray

    def __post_init__(self):
        amps = _frozen_complex(self.amps, "state vector")
        if amps.ndim != 1:
            raise LayoutError(f"state amplitudes must be a vector, got shape {amps.shape}")
        if amps.shape[0] != self.layout.dim:
            raise LayoutError(
                f"state length {amps.shape[0]} does not match layout dimension "
                f"{self.layout.dim}"
            )
        object.__setattr__(self, "amps", amps)

    @property
    def dim(self) -> int:
        return self.layout.dim

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n == 0.0:
            raise ZeroNormError("cannot normalize a zero-norm state")
        return StateVector(self.layout, self.amps / n)

    def inner(self, other: "StateVector") -> complex:
        """Inner product <self|other>."""
        _require_same_layout(self, other)
        return complex(np.vdot(self.amps, other.amps))

    def __eq__(self, other) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.layout == other.layout and np.array_equal(self.amps, other.amps)


def identity(layout: FactorLayout | int) -> Operator:
    """Identity operator on the given layout (or single factor of that size)."""
    if isinstance(layout, int):
        layout = FactorLayout((layout,))
    return Operator(layout, np.eye(layout.dim, dtype=np.complex128))


def _check_capacity(total: int, max_dim: int | None) -> None:
    cap = MAX_TOTAL_DIM if max_dim is None else max_dim
    if total > cap:
        raise CapacityError(f"total dimension {total} exceeds the configured cap {cap}")


def kron(factors: Sequence[Operator], max_dim: int | None = None) -> Operator:
    """Kronecker product of operators, in the declared factor order.

    The result layout is the concatenation of the factor layouts.  Raises
    :class:`CapacityError` when the product dimension exceeds ``max_dim``
    (default :data:`MAX_TOTAL_DIM`).
    """
    if not factors:
        raise LayoutError("kron needs at least one factor")
    dims: tuple[int, ...] = ()
    total = 1
    for op in factors:
        dims = dims + op.layout.dims
        total *= op.dim
    _check_capacity(total, max_dim)
    matrix = factors[0].matrix
    for op in factors[1:]:
        matrix = np.kron(matrix, op.matrix)
    return Operator(FactorLayout(dims), matrix)


def kron_state(factors: Sequence[StateVector], max_dim: int | None = None) -> StateVector:
    """Tensor product of state vectors, in the declared factor order."""
    if not factors:
        raise LayoutError("kron_state needs at least one factor")
    dims: tuple[int, ...] = ()
    total = 1
    for s in factors:
        dims = dims + s.layout.dims
        total *= s.dim
    _check_capacity(total, max_dim)
    amps = factors[0].amps
    for s in factors[1:]:
        amps = np.kron(amps, s.amps)
    return StateVector(FactorLayout(dims), amps)


def embed_factors(
    op: Operator, slots: Iterable[int], layout: FactorLayout, max_dim: int | None = None
) -> Operator:
    """Embed an operator acting on the given factor slots into a larger layout.

    ``op`` must be laid out over exactly the factors named by ``slots`` (in
    that order); the result acts as the identity on every other factor.

    Parameters
    ----------
    op : Operator
        Operator on the targeted factors.
    slots : iterable of int
        Distinct factor indices of ``layout``, in the order matching
        ``op.layout``.
    layout : FactorLayout
        Layout of the enclosing space.
    """
    slots = tuple(int(s) for s in slots)
    k = len(layout)
    if not slots:
        raise LayoutError("embed needs at least one target slot")
    if len(set(slots)) != len(slots):
        raise LayoutError(f"duplicate target slots {slots}")
    if any(s < 0 or s >= k for s in slots):
        raise LayoutError(f"slot out of range for a {k}-factor layout: {slots}")
    expected = tuple(layout.dims[s] for s in slots)
    if op.layout.dims != expected:
        raise LayoutError(
            f"operator dims {op.layout.dims} do not match target factor dims {expected}"
        )
    _check_capacity(layout.dim, max_dim)

    rest = tuple(i for i in range(k) if i not in slots)
    rest_dim = math.prod(layout.dims[i] for i in rest) if rest else 1
    big = np.kron(op.matrix, np.eye(rest_dim, dtype=np.complex128))
    if not rest and len(slots) == k and slots == tuple(range(k)):
        return Operator(layout, big)

    # big is ordered (slots..., rest...); permute tensor axes back to layout order
    order_from = slots + rest
    dims_from = [layout.dims[i] for i in order_from]
    perm = [order_from.index(i) for i in range(k)]
    tensor = big.reshape(dims_from + dims_from)
    tensor = tensor.transpose(perm + [k + p for p in perm])
    return Operator(layout, np.ascontiguousarray(tensor.reshape(layout.dim, layout.dim)))


def embed(op: Operator, slot: int, layout: FactorLayout, max_dim: int | None = None) -> Operator:
    """Embed a single-factor operator at ``slot``, identity elsewhere."""
    if slot < 0 or slot >= len(layout):
        raise LayoutError(f"slot {slot} out of range for a {len(layout)}-factor layout")
    if op.dim != layout.dims[slot]:
        raise LayoutError(
            f"operator dimension {op.dim} does not match factor {slot} "
            f"dimension {layout.dims[slot]}"
        )
    return embed_factors(op, (slot,), layout, max_dim=max_dim)


def hermitian_propagator(hamiltonian: Operator, tau: float) -> Operator:
    """Unitary ``exp(-i tau H)`` of a Hermitian operator, by spectral decomposition.

    The spectral route is exact for any coupling strength, which keeps
    quadratic-in-coupling effects free of series-truncation artifacts.
    """
    hamiltonian.require_hermitian()
    eigvals, eigvecs = np.linalg.eigh(hamiltonian.matrix)
    phases = np.exp(-1j * float(tau) * eigvals)
    unitary = (eigvecs * phases) @ eigvecs.conj().T
    return Operator(hamiltonian.layout, unitary)


def expectation(state: StateVector, op: Operator) -> complex:
    """Expectation value <psi|O|psi> / <psi|psi>.

    The state need not be normalized.  The operator may be non-Hermitian,
    in which case the full complex value is returned.
    """
    _require_same_layout(state, op)
    norm_sq = float(np.vdot(state.amps, state.amps).real)
    if norm_sq == 0.0:
        raise ZeroNormError("expectation value of a zero-norm state is undefined")
    return complex(np.vdot(state.amps, op.matrix @ state.amps) / norm_sq)
