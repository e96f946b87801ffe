"""Model-file parsing, validation, and canonical serialization.

Input is UTF-8 JSON in one of two forms: a tensor form (per-mode property
tensors given directly) or a states form (level energies, transition-moment
tables, and a role assignment from which the tensors are built sum-over-states
style).  Exactly one of the two must be present.  Validation reports the JSON
path of every offense; tensors go through the same validators as the in-memory
API, so symmetry defects are caught here with the mode named.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .cid import StatesMode, TensorMode
from .errors import SchemaError, SymmetryError
from .scattering import C_AU, PropertyTensorSet
from .sos import (
    DEFAULT_RESONANCE_GUARD,
    MolecularModel,
    MomentTable,
    Roles,
)


@dataclass(frozen=True)
class BeamsSpec:
    omega1: float
    omega3: float
    omega2: Optional[float] = None
    photons: tuple = (1.0, 1.0, 1.0, 1.0)


@dataclass(frozen=True)
class ScanSpec:
    start_cm1: float
    stop_cm1: float
    step_cm1: float
    width_cm1: Optional[float] = None

    def shifts(self) -> list:
        n = int(round((self.stop_cm1 - self.start_cm1) / self.step_cm1)) + 1
        return [self.start_cm1 + i * self.step_cm1 for i in range(n)]


@dataclass(frozen=True)
class ModelFile:
    c: float
    beams: Optional[BeamsSpec]
    scan: Optional[ScanSpec]
    modes: tuple  # TensorMode or StatesMode entries


def _require(mapping: dict, key: str, path: str):
    if key not in mapping:
        raise SchemaError(f"{path}: missing required field {key!r}")
    return mapping[key]


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{path}: expected a number, got {type(value).__name__}")
    v = float(value)
    if not np.isfinite(v):
        raise SchemaError(f"{path}: number must be finite")
    return v


def _matrix3(value, path: str) -> np.ndarray:
    try:
        a = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise SchemaError(f"{path}: expected a 3x3 array of numbers") from None
    if a.shape != (3, 3) or not np.all(np.isfinite(a)):
        raise SchemaError(f"{path}: expected a 3x3 array of finite numbers")
    return a


def _vector3(value, path: str) -> np.ndarray:
    try:
        a = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise SchemaError(f"{path}: expected a 3-vector of numbers") from None
    if a.shape != (3,) or not np.all(np.isfinite(a)):
        raise SchemaError(f"{path}: expected a 3-vector of finite numbers")
    return a


def _rank3(value, path: str) -> np.ndarray:
    try:
        a = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise SchemaError(f"{path}: expected 27 numbers (flat, i-major) or a "
                          f"3x3x3 array") from None
    if a.shape == (27,):
        a = a.reshape(3, 3, 3)
    if a.shape != (3, 3, 3) or not np.all(np.isfinite(a)):
        raise SchemaError(f"{path}: expected 27 numbers (flat, i-major) or a "
                          f"3x3x3 array of finite numbers")
    return a


def _parse_beams(raw, path: str) -> BeamsSpec:
    if not isinstance(raw, dict):
        raise SchemaError(f"{path}: expected an object")
    omega1 = _number(_require(raw, "omega1", path), f"{path}.omega1")
    omega3 = _number(_require(raw, "omega3", path), f"{path}.omega3")
    omega2 = None
    if raw.get("omega2") is not None:
        omega2 = _number(raw["omega2"], f"{path}.omega2")
    photons = raw.get("photons", [1.0, 1.0, 1.0, 1.0])
    if not isinstance(photons, list) or len(photons) != 4:
        raise SchemaError(f"{path}.photons: expected a list of four numbers")
    photons = tuple(_number(p, f"{path}.photons[{j}]") for j, p in enumerate(photons))
    for name, v in (("omega1", omega1), ("omega3", omega3)):
        if v <= 0.0:
            raise SchemaError(f"{path}.{name}: must be positive")
    return BeamsSpec(omega1=omega1, omega3=omega3, omega2=omega2, photons=photons)


def _parse_scan(raw, path: str) -> ScanSpec:
    if not isinstance(raw, dict):
        raise SchemaError(f"{path}: expected an object")
    start = _number(_require(raw, "start_cm1", path), f"{path}.start_cm1")
    stop = _number(_require(raw, "stop_cm1", path), f"{path}.stop_cm1")
    step = _number(_require(raw, "step_cm1", path), f"{path}.step_cm1")
    if step <= 0.0 or stop < start:
        raise SchemaError(f"{path}: need step_cm1 > 0 and stop_cm1 >= start_cm1")
    width = None
    if raw.get("width_cm1") is not None:
        width = _number(raw["width_cm1"], f"{path}.width_cm1")
        if width <= 0.0:
            raise SchemaError(f"{path}.width_cm1: must be positive")
    return ScanSpec(start_cm1=start, stop_cm1=stop, step_cm1=step, width_cm1=width)


def _parse_tensor_mode(raw, path: str) -> TensorMode:
    if not isinstance(raw, dict):
        raise SchemaError(f"{path}: expected an object")
    name = _require(raw, "name", path)
    if not isinstance(name, str) or not name:
        raise SchemaError(f"{path}.name: expected a nonempty string")
    shift = _number(_require(raw, "shift_cm1", path), f"{path}.shift_cm1")
    alpha34 = _matrix3(_require(raw, "alpha34", path), f"{path}.alpha34")
    alpha12 = _matrix3(_require(raw, "alpha12", path), f"{path}.alpha12")
    gprime34 = (_matrix3(raw["gprime34"], f"{path}.gprime34")
                if raw.get("gprime34") is not None else np.zeros((3, 3)))
    a34 = (_rank3(raw["a34"], f"{path}.a34")
           if raw.get("a34") is not None else np.zeros((3, 3, 3)))
    gprime12 = (_matrix3(raw["gprime12"], f"{path}.gprime12")
                if raw.get("gprime12") is not None else None)
    a12 = (_rank3(raw["a12"], f"{path}.a12")
           if raw.get("a12") is not None else None)
    try:
        tensors = PropertyTensorSet(alpha34=alpha34, alpha12=alpha12,
                                    gprime34=gprime34, a34=a34,
                                    gprime12=gprime12, a12=a12)
    except SymmetryError as exc:
        raise SymmetryError(f"mode {name!r}: {exc}") from None
    return TensorMode(name=name, shift_cm1=shift, tensors=tensors)


def _parse_moment_entries(raw, path: str, shape, kind: str, parity: int,
                          value_parser) -> MomentTable:
    table = MomentTable(kind, shape, parity)
    if raw is None:
        return table
    if not isinstance(raw, list):
        raise SchemaError(f"{path}: expected a list of {{pair, value}} objects")
    for j, entry in enumerate(raw):
        epath = f"{path}[{j}]"
        if not isinstance(entry, dict):
            raise SchemaError(f"{epath}: expected an object")
        pair = _require(entry, "pair", epath)
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(p, str) for p in pair)):
            raise SchemaError(f"{epath}.pair: expected two level ids")
        value = value_parser(_require(entry, "value", epath), f"{epath}.value")
        try:
            table.set(pair[0], pair[1], value)
        except (ValueError, SymmetryError) as exc:
            raise SchemaError(f"{epath}: {exc}") from None
    return table


def _parse_states(raw: dict, path: str = "") -> StatesMode:
    levels_raw = _require(raw, "levels", path or "model")
    if not isinstance(levels_raw, list) or not levels_raw:
        raise SchemaError("levels: expected a nonempty list")
    energies = {}
    for j, level in enumerate(levels_raw):
        lpath = f"levels[{j}]"
        if not isinstance(level, dict):
            raise SchemaError(f"{lpath}: expected an object")
        lid = _require(level, "id", lpath)
        if not isinstance(lid, str) or not lid:
            raise SchemaError(f"{lpath}.id: expected a nonempty string")
        if lid in energies:
            raise SchemaError(f"{lpath}.id: duplicate level id {lid!r}")
        energies[lid] = _number(_require(level, "energy", lpath), f"{lpath}.energy")

    moments = raw.get("moments", {})
    if not isinstance(moments, dict):
        raise SchemaError("moments: expected an object")
    mu = _parse_moment_entries(moments.get("mu"), "moments.mu", (3,),
                               "electric-dipole", +1, _vector3)
    m_imag = _parse_moment_entries(moments.get("m_imag"), "moments.m_imag", (3,),
                                   "magnetic-dipole", -1, _vector3)
    quad = _parse_moment_entries(moments.get("quadrupole"), "moments.quadrupole",
                                 (3, 3), "electric-quadrupole", +1, _matrix3)

    roles_raw = _require(raw, "roles", "model")
    if not isinstance(roles_raw, dict):
        raise SchemaError("roles: expected an object")

    def role_id(key: str) -> str:
        v = _require(roles_raw, key, "roles")
        if not isinstance(v, str):
            raise SchemaError(f"roles.{key}: expected a level id string")
        return v

    def role_list(key: str) -> tuple:
        v = roles_raw.get(key, [])
        if not isinstance(v, list) or not all(isinstance(x, str) for x in v):
            raise SchemaError(f"roles.{key}: expected a list of level ids")
        return tuple(v)

    roles = Roles(ground=role_id("ground"), excited=role_id("excited"),
                  final=role_id("final"),
                  pump_intermediates=role_list("pump_intermediates"),
                  probe_intermediates=role_list("probe_intermediates"))

    guard = raw.get("resonance_guard", DEFAULT_RESONANCE_GUARD)
    guard = _number(guard, "resonance_guard")
    if guard <= 0.0:
        raise SchemaError("resonance_guard: must be positive")

    pump_optical = raw.get("pump_stokes_optical", False)
    if not isinstance(pump_optical, bool):
        raise SchemaError("pump_stokes_optical: expected true or false")

    model = MolecularModel(energies=energies, mu=mu, m_imag=m_imag,
                           quadrupole=quad, roles=roles, resonance_guard=guard)
    name = raw.get("name", "states")
    if not isinstance(name, str) or not name:
        raise SchemaError("name: expected a nonempty string")
    return StatesMode(name=name, model=model, pump_stokes_optical=pump_optical)


def parse_model(data: Union[str, bytes]) -> ModelFile:
    """Parse and validate a model file; see the module docstring for the shape."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise SchemaError("top level: expected an object")

    has_modes = "modes" in raw
    has_states = "levels" in raw
    if has_modes == has_states:
        raise SchemaError("exactly one of 'modes' (tensor form) or 'levels' "
                          "(states form) must be present")

    constants = raw.get("constants", {})
    if not isinstance(constants, dict):
        raise SchemaError("constants: expected an object")
    c = _number(constants.get("c", C_AU), "constants.c")
    if c <= 0.0:
        raise SchemaError("constants.c: must be positive")

    beams = _parse_beams(raw["beams"], "beams") if raw.get("beams") is not None else None
    scan = _parse_scan(raw["scan"], "scan") if raw.get("scan") is not None else None

    if has_modes:
        modes_raw = raw["modes"]
        if not isinstance(modes_raw, list) or not modes_raw:
            raise SchemaError("modes: expected a nonempty list")
        modes = tuple(_parse_tensor_mode(m, f"modes[{j}]")
                      for j, m in enumerate(modes_raw))
        names = [m.name for m in modes]
        if len(set(names)) != len(names):
            raise SchemaError("modes: mode names must be unique")
    else:
        modes = (_parse_states(raw),)

    return ModelFile(c=c, beams=beams, scan=scan, modes=modes)


def parse_model_file(path) -> ModelFile:
    with open(path, "rb") as handle:
        return parse_model(handle.read())


# --------------------------------------------------------------------------
# canonical serialization (round-trip stable)
# --------------------------------------------------------------------------

def _tensor_mode_dict(mode: TensorMode) -> dict:
    t = mode.tensors
    out = {
        "name": mode.name,
        "shift_cm1": mode.shift_cm1,
        "alpha34": t.alpha34.tolist(),
        "alpha12": t.alpha12.tolist(),
        "gprime34": t.gprime34.tolist(),
        "a34": t.a34.reshape(27).tolist(),
    }
    if t.gprime12 is not None:
        out["gprime12"] = t.gprime12.tolist()
    if t.a12 is not None:
        out["a12"] = t.a12.reshape(27).tolist()
    return out


def _states_mode_dict(mode: StatesMode) -> dict:
    model = mode.model

    def entries(table: MomentTable):
        return [{"pair": [a, b], "value": table.get(a, b).tolist()}
                for (a, b) in table.pairs()]

    return {
        "name": mode.name,
        "levels": [{"id": lid, "energy": model.energies[lid]}
                   for lid in sorted(model.energies)],
        "moments": {
            "mu": entries(model.mu),
            "m_imag": entries(model.m_imag),
            "quadrupole": entries(model.quadrupole),
        },
        "roles": {
            "ground": model.roles.ground,
            "excited": model.roles.excited,
            "final": model.roles.final,
            "pump_intermediates": list(model.roles.pump_intermediates),
            "probe_intermediates": list(model.roles.probe_intermediates),
        },
        "resonance_guard": model.resonance_guard,
        "pump_stokes_optical": mode.pump_stokes_optical,
    }


def model_to_dict(mf: ModelFile) -> dict:
    out: dict = {"constants": {"c": mf.c}}
    if mf.beams is not None:
        beams = {"omega1": mf.beams.omega1, "omega3": mf.beams.omega3,
                 "photons": list(mf.beams.photons)}
        if mf.beams.omega2 is not None:
            beams["omega2"] = mf.beams.omega2
        out["beams"] = beams
    if mf.scan is not None:
        scan = {"start_cm1": mf.scan.start_cm1, "stop_cm1": mf.scan.stop_cm1,
                "step_cm1": mf.scan.step_cm1}
        if mf.scan.width_cm1 is not None:
            scan["width_cm1"] = mf.scan.width_cm1
        out["scan"] = scan
    if len(mf.modes) == 1 and isinstance(mf.modes[0], StatesMode):
        out.update(_states_mode_dict(mf.modes[0]))
    else:
        out["modes"] = [_tensor_mode_dict(m) for m in mf.modes]
    return out


def serialize_model(mf: ModelFile) -> str:
    """Canonical JSON text; parse/serialize is idempotent on this form."""
    return json.dumps(model_to_dict(mf), indent=2, sort_keys=True) + "\n"
