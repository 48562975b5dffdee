"""Scenario file loading and validation.

Files are a plain nested key-value format (a YAML subset) and must carry
``format_version: 1``. A file either names a preset scenario
(``scenario: bell-static`` or ``bell-rotating`` plus parameter overrides)
or spells out states, an evolution, a grid, and which invariant index
sequences to assemble. Complex entries are written as [re, im] pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import yaml

from .errors import InvalidState, ScenarioFormatError
from .evolution import RotatingFrame, SampledUnitaries, StaticHamiltonian, TimeGrid
from .scenarios import BellScenario, bell_mixture
from .state import DensityOperator

__all__ = ["ScenarioConfig", "load_scenario", "parse_scenario", "PRESETS"]

PRESETS = ("bell-static", "bell-rotating")


@dataclass
class ScenarioConfig:
    """Validated contents of a scenario file."""

    name: str
    preset: BellScenario | None = None
    dimension: int | None = None
    states: list = field(default_factory=list)
    spec: object | None = None
    grid: TimeGrid | None = None
    invariants: list = field(default_factory=list)
    observables: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)


def _fail(fieldname: str, message: str):
    raise ScenarioFormatError(f"{fieldname}: {message}")


def _as_number(value, fieldname: str) -> float:
    if isinstance(value, str):
        # YAML 1.1 reads bare scientific notation like 1e-9 as a string.
        try:
            return float(value)
        except ValueError:
            _fail(fieldname, f"expected a number, got {value!r}")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(fieldname, f"expected a number, got {value!r}")
    return float(value)


def _as_complex(entry, fieldname: str) -> complex:
    if isinstance(entry, (int, float)) and not isinstance(entry, bool):
        return complex(entry)
    if isinstance(entry, (list, tuple)) and len(entry) == 2:
        return complex(_as_number(entry[0], fieldname), _as_number(entry[1], fieldname))
    _fail(fieldname, f"expected a real number or [re, im] pair, got {entry!r}")


def _as_matrix(value, fieldname: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        _fail(fieldname, "expected a non-empty list of rows")
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list):
            _fail(f"{fieldname}[{i}]", "expected a list of entries")
        rows.append([_as_complex(v, f"{fieldname}[{i}][{j}]") for j, v in enumerate(row)])
    M = np.array(rows, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        _fail(fieldname, f"expected a square matrix, got shape {M.shape}")
    return M


def _as_vector(value, fieldname: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        _fail(fieldname, "expected a non-empty list of entries")
    return np.array([_as_complex(v, f"{fieldname}[{j}]") for j, v in enumerate(value)], dtype=complex)


def _parse_state(entry, fieldname: str, tol: float) -> DensityOperator:
    if not isinstance(entry, dict):
        _fail(fieldname, "expected a mapping describing one state")
    try:
        if "preset" in entry:
            preset = entry["preset"]
            if preset == "bell-mixture":
                return bell_mixture(_as_number(entry.get("epsilon", 0.0), f"{fieldname}.epsilon"))
            if preset == "maximally-mixed":
                dim = int(_as_number(entry.get("dimension", 2), f"{fieldname}.dimension"))
                return DensityOperator.maximally_mixed(dim)
            _fail(f"{fieldname}.preset", f"unknown state preset {preset!r}")
        if "matrix" in entry:
            return DensityOperator(_as_matrix(entry["matrix"], f"{fieldname}.matrix"), tol=tol)
        if "vector" in entry:
            return DensityOperator.pure(_as_vector(entry["vector"], f"{fieldname}.vector"), tol=tol)
        if "eigenvalues" in entry:
            lam = [
                _as_number(v, f"{fieldname}.eigenvalues[{i}]")
                for i, v in enumerate(entry["eigenvalues"])
            ]
            vecs = entry.get("eigenvectors")
            if vecs is None:
                _fail(f"{fieldname}.eigenvectors", "required alongside eigenvalues")
            cols = [_as_vector(v, f"{fieldname}.eigenvectors[{i}]") for i, v in enumerate(vecs)]
            V = np.column_stack(cols)
            gram = V.conj().T @ V
            if not np.allclose(gram, np.eye(len(cols)), atol=1e-9):
                _fail(f"{fieldname}.eigenvectors", "must be orthonormal")
            m = (V * np.asarray(lam)) @ V.conj().T
            return DensityOperator(m, tol=tol)
    except InvalidState as exc:
        _fail(fieldname, str(exc))
    _fail(fieldname, "needs one of: preset, matrix, vector, eigenvalues")


def _parse_evolution(entry, fieldname: str, dim: int | None):
    if not isinstance(entry, dict):
        _fail(fieldname, "expected a mapping")
    variant = entry.get("variant")
    if variant == "static":
        H = _as_matrix(entry.get("hamiltonian"), f"{fieldname}.hamiltonian")
        tau = _as_number(entry.get("tau"), f"{fieldname}.tau")
        try:
            return StaticHamiltonian(H, tau=tau)
        except ValueError as exc:
            _fail(fieldname, str(exc))
    if variant == "rotating":
        u = _as_number(entry.get("u", 1.0), f"{fieldname}.u")
        try:
            return RotatingFrame.spin_flipper(u)
        except ValueError as exc:
            _fail(f"{fieldname}.u", str(exc))
    if variant == "sampled":
        mats = entry.get("unitaries")
        if not isinstance(mats, list) or len(mats) < 2:
            _fail(f"{fieldname}.unitaries", "expected a list of at least two matrices")
        us = [_as_matrix(m, f"{fieldname}.unitaries[{i}]") for i, m in enumerate(mats)]
        times = entry.get("times")
        if times is None:
            tau = _as_number(entry.get("tau"), f"{fieldname}.tau")
            grid = TimeGrid.uniform(tau, len(us) - 1)
        else:
            grid = TimeGrid(np.array([_as_number(t, f"{fieldname}.times") for t in times]))
        try:
            return SampledUnitaries(tuple(us), grid)
        except Exception as exc:
            _fail(fieldname, str(exc))
    _fail(f"{fieldname}.variant", f"expected static, rotating or sampled, got {variant!r}")


def parse_scenario(data, name: str = "<scenario>", base_tol: float = 1e-9) -> ScenarioConfig:
    """Validate a parsed mapping into a ScenarioConfig."""
    if not isinstance(data, dict):
        _fail("file", "top level must be a mapping")
    version = data.get("format_version")
    if version != 1:
        _fail("format_version", f"expected 1, got {version!r}")

    tolerances = {}
    if "tolerances" in data:
        if not isinstance(data["tolerances"], dict):
            _fail("tolerances", "expected a mapping")
        for k, v in data["tolerances"].items():
            if k not in ("phase", "transport", "support"):
                _fail(f"tolerances.{k}", "unknown tolerance name")
            tolerances[k] = _as_number(v, f"tolerances.{k}")
    tol = tolerances.get("transport", base_tol)

    cfg = ScenarioConfig(name=name, tolerances=tolerances)

    if "scenario" in data:
        preset = data["scenario"]
        if preset not in PRESETS:
            _fail("scenario", f"unknown preset {preset!r}; expected one of {PRESETS}")
        try:
            cfg.preset = BellScenario(
                epsilon=_as_number(data.get("epsilon", 0.5), "epsilon"),
                variant="static" if preset == "bell-static" else "rotating",
                u=_as_number(data.get("u", 1.0), "u"),
                n_steps=int(_as_number(data.get("steps", 1000), "steps")),
            )
        except Exception as exc:
            _fail("scenario", str(exc))
        return cfg

    states_entry = data.get("states")
    if not isinstance(states_entry, list) or not states_entry:
        _fail("states", "expected a non-empty list of state specs")
    cfg.states = [_parse_state(s, f"states[{i}]", tol) for i, s in enumerate(states_entry)]
    dims = {rho.dim for rho in cfg.states}
    if len(dims) != 1:
        _fail("states", f"states differ in dimension: {sorted(dims)}")
    dim = dims.pop()
    if "dimension" in data and int(data["dimension"]) != dim:
        _fail("dimension", f"declared {data['dimension']} but states have dimension {dim}")
    cfg.dimension = dim

    if "evolution" not in data:
        _fail("evolution", "required for non-preset scenarios")
    cfg.spec = _parse_evolution(data["evolution"], "evolution", dim)
    if cfg.spec.dim != dim:
        _fail("evolution", f"evolution dimension {cfg.spec.dim} vs states {dim}")

    grid_entry = data.get("grid", {})
    if not isinstance(grid_entry, dict):
        _fail("grid", "expected a mapping")
    n_steps = int(_as_number(grid_entry.get("n_steps", 1000), "grid.n_steps"))
    tau = _as_number(grid_entry.get("tau", cfg.spec.tau), "grid.tau")
    if tau > cfg.spec.tau + 1e-12:
        _fail("grid.tau", f"grid end {tau} exceeds evolution duration {cfg.spec.tau}")
    try:
        cfg.grid = TimeGrid.uniform(tau, n_steps)
    except ValueError as exc:
        _fail("grid", str(exc))

    inv_entry = data.get("invariants", [[1]])
    if not isinstance(inv_entry, list) or not inv_entry:
        _fail("invariants", "expected a non-empty list of index sequences")
    invariants = []
    for i, seq in enumerate(inv_entry):
        if isinstance(seq, int):
            seq = [seq]
        if not isinstance(seq, list) or not seq:
            _fail(f"invariants[{i}]", "expected a non-empty index sequence")
        idx = []
        for j in seq:
            if not isinstance(j, int) or j < 1 or j > len(cfg.states):
                _fail(f"invariants[{i}]", f"index {j!r} out of range 1..{len(cfg.states)}")
            idx.append(j)
        invariants.append(tuple(idx))
    cfg.invariants = invariants

    obs_entry = data.get("observables", {})
    if not isinstance(obs_entry, dict):
        _fail("observables", "expected a mapping of name -> matrix")
    for key, value in obs_entry.items():
        A = _as_matrix(value, f"observables.{key}")
        if A.shape[0] != dim:
            _fail(f"observables.{key}", f"dimension {A.shape[0]} vs states {dim}")
        cfg.observables[str(key)] = A
    return cfg


def load_scenario(path: str, base_tol: float = 1e-9) -> ScenarioConfig:
    """Read and validate a scenario file; parse errors name the line."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ScenarioFormatError(f"file: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"line {mark.line + 1}" if mark is not None else "unknown line"
        raise ScenarioFormatError(f"{where}: {exc}") from exc
    return parse_scenario(data, name=path, base_tol=base_tol)
