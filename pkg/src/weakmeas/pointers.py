"""Measurement-pointer factories.

Two pointer families are supported, in natural units (hbar = 1):

* truncated-Fock Gaussian pointers, whose ground state is a Gaussian of rms
  position width ``sigma``.  The lowering operator is the exact truncated
  matrix ``a[n-1, n] = sqrt(n)`` and the quadratures are derived from it,
  ``X = sigma (a + a^dag)`` and ``P = i (a^dag - a) / (2 sigma)``, so the
  identity ``a = X/(2 sigma) + i sigma P`` holds entrywise by construction
  and all truncation error is pushed into the dynamics;
* spin-s pointers in the ascending S_z eigenbasis (m = -s .. +s), starting
  in the lowest eigenstate |m = -s>.

Basis ordering conventions: Fock levels ascending, spin m ascending.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .tensor import FactorLayout, Operator, StateVector


@dataclass(frozen=True)
class FockPointerSpec:
    """Truncated harmonic-oscillator pointer with Gaussian ground state.

    Parameters
    ----------
    sigma : float
        Rms width of the ground-state position distribution.
    dim : int
        Fock truncation level (number of retained levels, >= 2).
    """

    sigma: float
    dim: int = 12

    def __post_init__(self):
        sigma = float(self.sigma)
        dim = int(self.dim)
        if not math.isfinite(sigma) or sigma <= 0.0:
            raise ValueError(f"sigma must be finite and positive, got {self.sigma}")
        if dim < 2:
            raise ValueError(f"Fock truncation needs dim >= 2, got {self.dim}")
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "dim", dim)

    @property
    def mass_frequency(self) -> float:
        """Implied oscillator m*omega, fixed by sigma = sqrt(1 / (2 m omega))."""
        return 1.0 / (2.0 * self.sigma**2)

    @property
    def layout(self) -> FactorLayout:
        return FactorLayout((self.dim,))


@dataclass(frozen=True)
class SpinPointerSpec:
    """Spin-s pointer; the Hilbert space dimension is 2s + 1."""

    s: float

    def __post_init__(self):
        s = float(self.s)
        two_s = 2.0 * s
        if not math.isfinite(s) or s <= 0 or abs(two_s - round(two_s)) > 1e-12:
            raise ValueError(f"s must be a positive half-integer, got {self.s}")
        object.__setattr__(self, "s", s)

    @property
    def dim(self) -> int:
        return int(round(2.0 * self.s)) + 1

    @property
    def layout(self) -> FactorLayout:
        return FactorLayout((self.dim,))


PointerSpec = FockPointerSpec | SpinPointerSpec


@dataclass(frozen=True)
class PointerOperators:
    """Operator set of one pointer; quadratures are Fock-only, sy is spin-only."""

    lowering: Operator
    raising: Operator
    x: Operator | None = None
    p: Operator | None = None
    sy: Operator | None = None


def fock_operators(spec: FockPointerSpec) -> PointerOperators:
    """Lowering/raising and derived X, P quadratures of a Fock pointer."""
    d = spec.dim
    lowering = Operator(spec.layout, np.diag(np.sqrt(np.arange(1, d)), 1))
    raising = lowering.dag()
    x = spec.sigma * (lowering + raising)
    p = (0.5j / spec.sigma) * (raising - lowering)
    return PointerOperators(lowering=lowering, raising=raising, x=x, p=p)


def spin_operators(spec: SpinPointerSpec) -> PointerOperators:
    """Ladder operators and S_y of a spin-s pointer, ascending-m basis.

    ``S+ |m> = sqrt(s(s+1) - m(m+1)) |m+1>`` and ``S- = (S+)^dag``;
    ``S_y = (S+ - S-) / 2i``.
    """
    s = spec.s
    m = np.arange(-s, s)  # source m values for S+
    coeffs = np.sqrt(s * (s + 1.0) - m * (m + 1.0))
    raising = Operator(spec.layout, np.diag(coeffs, -1))
    lowering = raising.dag()
    sy = (raising - lowering) * (1.0 / 2.0j)
    return PointerOperators(lowering=lowering, raising=raising, sy=sy)


def pointer_operators(spec: PointerSpec) -> PointerOperators:
    if isinstance(spec, FockPointerSpec):
        return fock_operators(spec)
    if isinstance(spec, SpinPointerSpec):
        return spin_operators(spec)
    raise TypeError(f"unknown pointer spec {type(spec).__name__}")


def initial_state(spec: PointerSpec) -> StateVector:
    """Starting state: Fock ground state |0>, or the lowest S_z eigenstate |m=-s>."""
    amps = np.zeros(spec.dim, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(spec.layout, amps)


def position_wavefunctions(spec: FockPointerSpec, x: np.ndarray) -> np.ndarray:
    """Oscillator eigenfunctions of a Fock pointer, evaluated on a grid.

    Returns an array of shape ``(dim, len(x))`` whose row ``n`` is the real
    normalized eigenfunction psi_n(x) for the oscillator implied by the
    pointer width (hbar = 1).  Uses the stable Hermite-function recurrence.

    Parameters
    ----------
    spec : FockPointerSpec
        Pointer whose basis functions are requested.
    x : ndarray
        Position grid.
    """
    x = np.asarray(x, dtype=np.float64)
    scale = spec.sigma * math.sqrt(2.0)  # 1/sqrt(m omega)
    xi = x / scale
    out = np.zeros((spec.dim, x.size), dtype=np.float64)
    out[0] = math.pi ** (-0.25) * np.exp(-0.5 * xi**2)
    if spec.dim > 1:
        out[1] = math.sqrt(2.0) * xi * out[0]
    for n in range(2, spec.dim):
        out[n] = math.sqrt(2.0 / n) * xi * out[n - 1] - math.sqrt((n - 1) / n) * out[n - 2]
    return out / math.sqrt(scale)
