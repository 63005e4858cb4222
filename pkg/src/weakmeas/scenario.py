"""Declarative description of a weak-measurement experiment.

A :class:`Scenario` names the system factors, the observables coupled to
each pointer, the pointer specs, the couplings ``g t``, and the pre- and
post-selection states.  Scenarios are plain JSON documents on disk (see
``docs/scenario_format.md``); a small catalog of named scenarios ships with
the package and can be overridden through the ``WEAKMEAS_CATALOG``
environment variable.
"""

from __future__ import annotations

import json
import math
import os
import warnings
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import (
    DivergentWeakValueError,
    ScenarioValidationError,
    SchemaError,
    WeakRegimeWarning,
)
from .pointers import FockPointerSpec, PointerSpec, SpinPointerSpec
from .tensor import FactorLayout, Operator, StateVector, embed_factors

#: Couplings whose expansion parameter exceeds this are rejected outright.
LAMBDA_HARD_LIMIT = 0.5

#: Couplings above this trigger a weak-regime warning.
LAMBDA_WARN_LIMIT = 0.2

#: Pre/post overlaps below this floor make the weak value numerically divergent.
OVERLAP_FLOOR = 1e-10

ENV_CATALOG = "WEAKMEAS_CATALOG"


@dataclass(frozen=True, eq=False)
class ObservableSpec:
    """System observable coupled to one pointer.

    ``matrix`` acts on the system factors listed in ``target`` (in that
    order); it must be Hermitian.
    """

    name: str
    matrix: Operator
    target: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "target", tuple(int(t) for t in self.target))

    def __eq__(self, other):
        if not isinstance(other, ObservableSpec):
            return NotImplemented
        return (
            self.name == other.name
            and self.target == other.target
            and self.matrix == other.matrix
        )


@dataclass(frozen=True)
class CouplingSpec:
    """Product g*t of coupling constant and interaction time for one pointer."""

    gt: float

    def __post_init__(self):
        object.__setattr__(self, "gt", float(self.gt))


def expansion_parameter(coupling: CouplingSpec, pointer: PointerSpec) -> float:
    """Dimensionless weak-coupling parameter lambda of one pointer.

    For a Fock pointer this is ``g t / (2 sigma)``.  For a spin-s pointer the
    analogous first-order transfer amplitude is ``g t sqrt(2 s) / 2``.
    """
    if isinstance(pointer, FockPointerSpec):
        return abs(coupling.gt) / (2.0 * pointer.sigma)
    return abs(coupling.gt) * math.sqrt(2.0 * pointer.s) / 2.0


def coupling_for_lambda(lam: float, pointer: PointerSpec) -> CouplingSpec:
    """Inverse of :func:`expansion_parameter`: the gt realizing a given lambda."""
    if isinstance(pointer, FockPointerSpec):
        return CouplingSpec(gt=2.0 * pointer.sigma * lam)
    return CouplingSpec(gt=2.0 * lam / math.sqrt(2.0 * pointer.s))


@dataclass(frozen=True, eq=False)
class Scenario:
    """Full experiment description; immutable once constructed."""

    system_dims: tuple[int, ...]
    observables: tuple[ObservableSpec, ...]
    pointers: tuple[PointerSpec, ...]
    couplings: tuple[CouplingSpec, ...]
    pre: StateVector
    post: StateVector
    name: str | None = None
    description: str | None = None
    expected: dict | None = None

    def __post_init__(self):
        object.__setattr__(self, "system_dims", tuple(int(d) for d in self.system_dims))
        object.__setattr__(self, "observables", tuple(self.observables))
        object.__setattr__(self, "pointers", tuple(self.pointers))
        object.__setattr__(self, "couplings", tuple(self.couplings))

    @property
    def n_pointers(self) -> int:
        return len(self.pointers)

    @property
    def system_layout(self) -> FactorLayout:
        return FactorLayout(self.system_dims)

    @property
    def pointer_layout(self) -> FactorLayout:
        return FactorLayout(tuple(p.dim for p in self.pointers))

    @property
    def full_layout(self) -> FactorLayout:
        return self.system_layout + self.pointer_layout

    @property
    def lambdas(self) -> tuple[float, ...]:
        return tuple(
            expansion_parameter(c, p) for c, p in zip(self.couplings, self.pointers)
        )

    @property
    def lambda_max(self) -> float:
        return max(self.lambdas)

    def with_lambda(self, lam: float) -> "Scenario":
        """Copy of the scenario with every coupling rescaled to the given lambda."""
        couplings = tuple(coupling_for_lambda(lam, p) for p in self.pointers)
        return replace(self, couplings=couplings)

    def with_fock_dim(self, dim: int) -> "Scenario":
        """Copy with every Fock pointer truncated at ``dim`` levels."""
        pointers = tuple(
            FockPointerSpec(sigma=p.sigma, dim=dim) if isinstance(p, FockPointerSpec) else p
            for p in self.pointers
        )
        return replace(self, pointers=pointers)

    def embedded_observables(self) -> tuple[Operator, ...]:
        """Observables embedded on the full system layout."""
        layout = self.system_layout
        return tuple(
            embed_factors(obs.matrix, obs.target, layout) for obs in self.observables
        )

    def __eq__(self, other):
        if not isinstance(other, Scenario):
            return NotImplemented
        return (
            self.system_dims == other.system_dims
            and self.observables == other.observables
            and self.pointers == other.pointers
            and self.couplings == other.couplings
            and self.pre == other.pre
            and self.post == other.post
            and self.name == other.name
            and self.description == other.description
            and self.expected == other.expected
        )


def validate(scenario: Scenario, overlap_floor: float = OVERLAP_FLOOR) -> list[str]:
    """Check every scenario invariant; an empty list means the scenario is valid.

    Never raises on a structurally well-formed scenario: each problem is
    reported as one human-readable violation string naming the offending
    field.  Couplings in the warning band (lambda above 0.2 but within the
    hard limit) emit a :class:`WeakRegimeWarning` instead of a violation.
    """
    v: list[str] = []
    n = len(scenario.observables)
    if n < 1:
        v.append("observables: N >= 1 required")
    if len(scenario.pointers) != n:
        v.append(f"pointers: expected {n} entries, got {len(scenario.pointers)}")
    if len(scenario.couplings) != n:
        v.append(f"couplings: expected {n} entries, got {len(scenario.couplings)}")

    sys_layout = scenario.system_layout
    for i, obs in enumerate(scenario.observables):
        bad_target = any(t < 0 or t >= len(sys_layout) for t in obs.target)
        if bad_target or len(set(obs.target)) != len(obs.target):
            v.append(f"observables[{i}].target: invalid factor indices {obs.target}")
            continue
        expected_dims = tuple(sys_layout.dims[t] for t in obs.target)
        if obs.matrix.layout.dims != expected_dims:
            v.append(
                f"observables[{i}].matrix: dims {obs.matrix.layout.dims} do not match "
                f"target factors {expected_dims}"
            )
        if not obs.matrix.is_hermitian():
            v.append(f"observables[{i}].matrix: observable not Hermitian")

    kinds = {type(p) for p in scenario.pointers}
    if len(kinds) > 1:
        v.append("pointers: mixed Fock/spin pointer kinds in one scenario are unsupported")

    for i, (c, p) in enumerate(zip(scenario.couplings, scenario.pointers)):
        if not math.isfinite(c.gt):
            v.append(f"couplings[{i}].gt: must be finite")
            continue
        lam = expansion_parameter(c, p)
        if lam > LAMBDA_HARD_LIMIT:
            v.append(
                f"couplings[{i}]: lambda = {lam:.3g} exceeds the hard limit "
                f"{LAMBDA_HARD_LIMIT}"
            )
        elif lam > LAMBDA_WARN_LIMIT:
            warnings.warn(
                f"couplings[{i}]: lambda = {lam:.3g} is outside the weak regime "
                f"(> {LAMBDA_WARN_LIMIT}); quadratic error estimates may be optimistic",
                WeakRegimeWarning,
                stacklevel=2,
            )

    for label, state in (("pre", scenario.pre), ("post", scenario.post)):
        if state.layout != sys_layout:
            v.append(
                f"{label}: layout {state.layout.dims} does not match system "
                f"dims {sys_layout.dims}"
            )
        elif not state.is_normalized():
            v.append(f"{label}: state not normalized (norm = {state.norm():.12g})")

    if scenario.pre.layout == scenario.post.layout:
        overlap = abs(scenario.post.inner(scenario.pre))
        if overlap <= overlap_floor:
            v.append(
                f"pre/post: overlap {overlap:.3e} at or below the floor "
                f"{overlap_floor:.0e}; the weak-value denominator diverges"
            )
    return v


def ensure_valid(scenario: Scenario, overlap_floor: float = OVERLAP_FLOOR) -> Scenario:
    """Raise on any validation violation; returns the scenario for chaining."""
    violations = validate(scenario, overlap_floor=overlap_floor)
    if any("denominator diverges" in s for s in violations):
        raise DivergentWeakValueError("; ".join(violations))
    if violations:
        raise ScenarioValidationError(violations)
    return scenario


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------


def _complex_pair(value) -> complex:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)
    ):
        raise SchemaError(f"expected a [re, im] pair, got {value!r}")
    return complex(float(value[0]), float(value[1]))


def _parse_vector(raw, field: str) -> np.ndarray:
    if not isinstance(raw, list) or not raw:
        raise SchemaError(f"{field}: expected a non-empty list of [re, im] pairs")
    try:
        return np.array([_complex_pair(x) for x in raw], dtype=np.complex128)
    except SchemaError as exc:
        raise SchemaError(f"{field}: {exc}") from None


def _parse_matrix(raw, field: str) -> np.ndarray:
    if not isinstance(raw, list) or not raw:
        raise SchemaError(f"{field}: expected a nested list of [re, im] pairs")
    rows = [_parse_vector(row, f"{field}[{i}]") for i, row in enumerate(raw)]
    width = {len(r) for r in rows}
    if len(width) != 1 or width.pop() != len(rows):
        raise SchemaError(f"{field}: matrix must be square")
    return np.array(rows, dtype=np.complex128)


def _parse_pointer(raw, field: str) -> PointerSpec:
    if not isinstance(raw, dict):
        raise SchemaError(f"{field}: expected an object")
    kind = raw.get("kind")
    try:
        if kind == "fock":
            return FockPointerSpec(sigma=raw["sigma"], dim=raw.get("dim", 12))
        if kind == "spin":
            return SpinPointerSpec(s=raw["s"])
    except KeyError as exc:
        raise SchemaError(f"{field}: missing key {exc}") from None
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{field}: {exc}") from None
    raise SchemaError(f"{field}.kind: unknown pointer kind {kind!r}")


def load_scenario(text: str) -> Scenario:
    """Parse a scenario document; raises :class:`SchemaError` with field context.

    Structural consistency (shapes, factor indices, pointer kinds) is
    enforced here; physical invariants are left to :func:`validate` so that
    malformed-but-parseable scenarios can still be inspected.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")

    system_dims = doc.get("system_dims")
    if (
        not isinstance(system_dims, list)
        or not system_dims
        or not all(isinstance(d, int) and d >= 2 for d in system_dims)
    ):
        raise SchemaError("system_dims: expected a non-empty list of integers >= 2")
    system_dims = tuple(system_dims)

    raw_obs = doc.get("observables")
    if not isinstance(raw_obs, list) or not raw_obs:
        raise SchemaError("observables: N >= 1 required")
    observables = []
    for i, raw in enumerate(raw_obs):
        field = f"observables[{i}]"
        if not isinstance(raw, dict):
            raise SchemaError(f"{field}: expected an object")
        target = raw.get("target")
        if (
            not isinstance(target, list)
            or not target
            or not all(isinstance(t, int) for t in target)
        ):
            raise SchemaError(f"{field}.target: expected a list of factor indices")
        if any(t < 0 or t >= len(system_dims) for t in target):
            raise SchemaError(f"{field}.target: factor index out of range {target}")
        matrix = _parse_matrix(raw.get("matrix"), f"{field}.matrix")
        want = math.prod(system_dims[t] for t in target)
        if matrix.shape[0] != want:
            raise SchemaError(
                f"{field}.matrix: dimension {matrix.shape[0]} does not match the "
                f"targeted factors (product {want})"
            )
        layout = FactorLayout(tuple(system_dims[t] for t in target))
        observables.append(
            ObservableSpec(
                name=str(raw.get("name", f"A{i + 1}")),
                matrix=Operator(layout, matrix),
                target=tuple(target),
            )
        )

    raw_ptr = doc.get("pointers")
    if not isinstance(raw_ptr, list) or len(raw_ptr) != len(observables):
        raise SchemaError("pointers: expected one entry per observable")
    pointers = [_parse_pointer(raw, f"pointers[{i}]") for i, raw in enumerate(raw_ptr)]

    raw_cpl = doc.get("couplings")
    if not isinstance(raw_cpl, list) or len(raw_cpl) != len(observables):
        raise SchemaError("couplings: expected one entry per observable")
    couplings = []
    for i, raw in enumerate(raw_cpl):
        if not isinstance(raw, dict) or not isinstance(raw.get("gt"), (int, float)):
            raise SchemaError(f"couplings[{i}]: expected an object with numeric gt")
        couplings.append(CouplingSpec(gt=float(raw["gt"])))

    sys_layout = FactorLayout(system_dims)
    states = {}
    for label in ("pre", "post"):
        vec = _parse_vector(doc.get(label), label)
        if vec.size != sys_layout.dim:
            raise SchemaError(
                f"{label}: length {vec.size} does not match the system dimension "
                f"{sys_layout.dim}"
            )
        states[label] = StateVector(sys_layout, vec)

    expected = doc.get("expected")
    if expected is not None and not isinstance(expected, dict):
        raise SchemaError("expected: must be an object when present")

    return Scenario(
        system_dims=system_dims,
        observables=tuple(observables),
        pointers=tuple(pointers),
        couplings=tuple(couplings),
        pre=states["pre"],
        post=states["post"],
        name=doc.get("name"),
        description=doc.get("description"),
        expected=expected,
    )


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def dump_scenario(scenario: Scenario, indent: int | None = 2) -> str:
    """Serialize a scenario to its JSON document form (round-trip stable)."""
    doc: dict = {}
    if scenario.name is not None:
        doc["name"] = scenario.name
    if scenario.description is not None:
        doc["description"] = scenario.description
    doc["system_dims"] = list(scenario.system_dims)
    doc["observables"] = [
        {
            "name": obs.name,
            "target": list(obs.target),
            "matrix": [[_pair(z) for z in row] for row in obs.matrix.matrix],
        }
        for obs in scenario.observables
    ]
    doc["pointers"] = [
        {"kind": "fock", "sigma": p.sigma, "dim": p.dim}
        if isinstance(p, FockPointerSpec)
        else {"kind": "spin", "s": p.s}
        for p in scenario.pointers
    ]
    doc["couplings"] = [{"gt": c.gt} for c in scenario.couplings]
    doc["pre"] = [_pair(z) for z in scenario.pre.amps]
    doc["post"] = [_pair(z) for z in scenario.post.amps]
    if scenario.expected is not None:
        doc["expected"] = scenario.expected
    return json.dumps(doc, indent=indent)


# ---------------------------------------------------------------------------
# Catalog access
# ---------------------------------------------------------------------------


def catalog_dir() -> Path:
    """Directory holding the scenario catalog (env override, else packaged)."""
    override = os.environ.get(ENV_CATALOG)
    if override:
        return Path(override)
    return Path(resources.files(__package__) / "catalog")


def catalog_names() -> list[str]:
    return sorted(p.stem for p in catalog_dir().glob("*.json"))


def load_scenario_file(path: str | Path) -> Scenario:
    return load_scenario(Path(path).read_text(encoding="utf-8"))


def resolve_scenario(ref: str | Path) -> Scenario:
    """Load a scenario by catalog name or by file path."""
    path = Path(ref)
    if path.suffix == ".json" or path.exists():
        return load_scenario_file(path)
    candidate = catalog_dir() / f"{ref}.json"
    if candidate.exists():
        return load_scenario_file(candidate)
    raise FileNotFoundError(
        f"no scenario named {ref!r} in the catalog ({catalog_dir()}) and no such file"
    )
