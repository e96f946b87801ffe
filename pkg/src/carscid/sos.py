"""Sum-over-states construction of the property tensors from level data.

A `MolecularModel` carries level energies and transition-moment tables, all in
atomic units.  Electric-dipole and electric-quadrupole matrix elements are
real; magnetic-dipole elements are purely imaginary and stored through their
real factor m (matrix element = +i m for the pair ordering as stored, hence
-i m for the reversed ordering).  Off resonance the small imaginary shift in
the energy denominators is dropped entirely and replaced by a configurable
resonance guard.

The two-route definitions of the optical-activity tensors (dipole factor on
either side of the energy denominator) are both evaluated; the first route is
returned and the relative disagreement between routes is reported as a defect.
For a physically consistent model the routes coincide.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from .errors import MissingMomentError, ResonanceError, RoleError
from .scattering import PropertyTensorSet
from .tensors import as_rank3_sym_last, as_sym_rank2

DEFAULT_RESONANCE_GUARD = 1e-8

#: Energy-conservation tolerance for omega4 = omega1 - omega2 + omega3.
FREQUENCY_TOL = 1e-12


@dataclass(frozen=True)
class FrequencyQuad:
    """The four beam angular frequencies (pump, Stokes, probe, anti-Stokes)."""

    omega1: float
    omega2: float
    omega3: float
    omega4: float
    allow_detuned: bool = False

    def __post_init__(self):
        for name in ("omega1", "omega2", "omega3", "omega4"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"FrequencyQuad.{name} must be positive")
        if not self.allow_detuned:
            target = self.omega1 - self.omega2 + self.omega3
            if abs(self.omega4 - target) > FREQUENCY_TOL * max(1.0, abs(target)):
                raise ValueError(
                    f"omega4={self.omega4!r} violates omega1-omega2+omega3={target!r}; "
                    "pass allow_detuned=True to override")

    @classmethod
    def from_pump_stokes_probe(cls, omega1: float, omega2: float,
                               omega3: float) -> "FrequencyQuad":
        return cls(omega1, omega2, omega3, omega1 - omega2 + omega3)


class MomentTable:
    """Directed transition-moment table with Hermitian completion.

    Entries are stored per ordered level pair.  Looking up the reversed pair
    returns the stored value times `parity`: +1 for real symmetric operators
    (electric dipole, electric quadrupole) and -1 for the stored imaginary
    factor of the magnetic dipole.  Storing both orderings inconsistently is
    rejected at construction.
    """

    def __init__(self, kind: str, shape: Tuple[int, ...], parity: int,
                 entries: Optional[Dict[Tuple[str, str], np.ndarray]] = None):
        self.kind = kind
        self.shape = shape
        self.parity = parity
        self._data: Dict[Tuple[str, str], np.ndarray] = {}
        for pair, value in (entries or {}).items():
            self.set(pair[0], pair[1], value)

    def set(self, a: str, b: str, value) -> None:
        v = np.asarray(value, dtype=float)
        if v.shape != self.shape:
            raise ValueError(f"{self.kind} moment for pair ({a}, {b}): expected "
                             f"shape {self.shape}, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError(f"{self.kind} moment for pair ({a}, {b}) must be finite")
        if self.shape == (3, 3):
            v = as_sym_rank2(v, f"{self.kind} moment ({a}, {b})")
        if (b, a) in self._data:
            mirror = self.parity * self._data[(b, a)]
            if not np.allclose(v, mirror, rtol=0.0, atol=1e-12):
                raise ValueError(
                    f"{self.kind} moment stored for both ({a}, {b}) and ({b}, {a}) "
                    "with inconsistent values")
        v = v.copy()
        v.setflags(write=False)
        self._data[(a, b)] = v

    def get(self, a: str, b: str) -> np.ndarray:
        if (a, b) in self._data:
            return self._data[(a, b)]
        if (b, a) in self._data:
            return self.parity * self._data[(b, a)]
        raise MissingMomentError(
            f"no {self.kind} moment stored for level pair ({a}, {b})")

    def pairs(self):
        return sorted(self._data)


@dataclass(frozen=True)
class Roles:
    """Level-role assignment: which levels play ground, excited, final, and
    which intermediate sets the two frequency pairs sum over."""

    ground: str
    excited: str
    final: str
    pump_intermediates: Tuple[str, ...]
    probe_intermediates: Tuple[str, ...]


@dataclass
class MolecularModel:
    energies: Dict[str, float]
    mu: MomentTable
    m_imag: MomentTable
    quadrupole: MomentTable
    roles: Roles
    resonance_guard: float = DEFAULT_RESONANCE_GUARD

    def __post_init__(self):
        for name, energy in self.energies.items():
            if not np.isfinite(energy):
                raise ValueError(f"level {name!r} has non-finite energy")
        known = set(self.energies)
        for role, ids in (("ground", [self.roles.ground]),
                          ("excited", [self.roles.excited]),
                          ("final", [self.roles.final]),
                          ("pump_intermediates", self.roles.pump_intermediates),
                          ("probe_intermediates", self.roles.probe_intermediates)):
            for level in ids:
                if level not in known:
                    raise RoleError(f"role {role!r} references unknown level {level!r}")

    def energy_gap(self, upper: str, lower: str) -> float:
        return self.energies[upper] - self.energies[lower]


def _denominators(model: MolecularModel, t: str, ket: str,
                  omega_a: float, omega_b: float) -> Tuple[float, float]:
    gap = model.energy_gap(t, ket)
    d1 = gap - omega_a
    d2 = gap + omega_b
    for d, label in ((d1, f"E({t},{ket}) - omega_a"), (d2, f"E({t},{ket}) + omega_b")):
        if abs(d) < model.resonance_guard:
            raise ResonanceError(
                f"denominator {label} = {d!r} is within the resonance guard "
                f"{model.resonance_guard:g}")
    return d1, d2


def _max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a))) if a.size else 0.0


def _route_defect(first: np.ndarray, second: np.ndarray) -> float:
    scale = max(_max_abs(first), _max_abs(second))
    return _max_abs(first - second) / scale if scale > 0.0 else 0.0


def polarizability_sos(model: MolecularModel, bra: str, ket: str,
                       intermediates: Iterable[str],
                       omega_a: float, omega_b: float):
    """Electric-dipole polarizability between `bra` and `ket`.

    alpha_ij = sum_t [ mu(bra,t)_i mu(t,ket)_j / (E_t,ket - omega_a)
                     + mu(bra,t)_j mu(t,ket)_i / (E_t,ket + omega_b) ].

    Returns the raw (generally slightly asymmetric) tensor together with its
    relative asymmetry defect max|a_ij - a_ji| / max|a|.
    """
    alpha = np.zeros((3, 3))
    for t in intermediates:
        d1, d2 = _denominators(model, t, ket, omega_a, omega_b)
        mu_bt = model.mu.get(bra, t)
        mu_tk = model.mu.get(t, ket)
        alpha += np.outer(mu_bt, mu_tk) / d1 + np.outer(mu_tk, mu_bt) / d2
    defect = _route_defect(alpha, alpha.T)
    return alpha, defect


def gyration_sos(model: MolecularModel, bra: str, ket: str,
                 intermediates: Iterable[str],
                 omega_a: float, omega_b: float):
    """Electric-dipole--magnetic-dipole optical activity tensor G'.

    With magnetic matrix elements +i m, the first route gives the real tensor

        G'_ij = - sum_t [ mu(bra,t)_i m(t,ket)_j / (E_t,ket - omega_a)
                        + m(bra,t)_j mu(t,ket)_i / (E_t,ket + omega_b) ],

    and the second route (dipole and magnetic factors exchanged across the
    denominators, transposed back) must coincide with it for a consistent
    model.  Returns (route-1 tensor, relative route disagreement).
    """
    route1 = np.zeros((3, 3))
    route2 = np.zeros((3, 3))
    for t in intermediates:
        d1, d2 = _denominators(model, t, ket, omega_a, omega_b)
        mu_bt = model.mu.get(bra, t)
        mu_tk = model.mu.get(t, ket)
        m_bt = model.m_imag.get(bra, t)
        m_tk = model.m_imag.get(t, ket)
        first = np.outer(mu_bt, m_tk)    # [i, j] = mu(bra,t)_i m(t,ket)_j
        second = np.outer(mu_tk, m_bt)   # [i, j] = mu(t,ket)_i m(bra,t)_j
        route1 += -(first / d1 + second / d2)
        route2 += second / d1 + first / d2
    return route1, _route_defect(route1, route2)


def quadrupole_activity_sos(model: MolecularModel, bra: str, ket: str,
                            intermediates: Iterable[str],
                            omega_a: float, omega_b: float):
    """Electric-dipole--electric-quadrupole optical activity tensor A_{i,jn}.

    A_{i,jn} = sum_t [ mu(bra,t)_i q(t,ket)_jn / (E_t,ket - omega_a)
                     + q(bra,t)_jn mu(t,ket)_i / (E_t,ket + omega_b) ];

    symmetry in (j, n) is inherited from the quadrupole tables.  The exchanged
    route is evaluated alongside and its disagreement reported.
    """
    route1 = np.zeros((3, 3, 3))
    route2 = np.zeros((3, 3, 3))
    for t in intermediates:
        d1, d2 = _denominators(model, t, ket, omega_a, omega_b)
        mu_bt = model.mu.get(bra, t)
        mu_tk = model.mu.get(t, ket)
        q_bt = model.quadrupole.get(bra, t)
        q_tk = model.quadrupole.get(t, ket)
        first = np.einsum("i,jn->ijn", mu_bt, q_tk)
        second = np.einsum("i,jn->ijn", mu_tk, q_bt)
        route1 += first / d1 + second / d2
        route2 += second / d1 + first / d2
    return route1, _route_defect(route1, route2)


#: Above this relative defect the symmetrized/averaged result is suspect.
DEFECT_WARN = 1e-6


def build_property_tensors(model: MolecularModel, freqs: FrequencyQuad,
                           pump_stokes_optical: bool = False) -> PropertyTensorSet:
    """Assemble the full property-tensor set of one vibrational transition.

    The probe/anti-Stokes tensors connect (final, excited) through the probe
    intermediates at (omega3, omega4); the pump/Stokes polarizability connects
    (excited, ground) through the pump intermediates at (omega1, omega2).
    Pump/Stokes optical-activity tensors are built only on request since the
    collinear x-polarized configuration never uses them.
    """
    r = model.roles
    a34, d34 = polarizability_sos(model, r.final, r.excited, r.probe_intermediates,
                                  freqs.omega3, freqs.omega4)
    a12, d12 = polarizability_sos(model, r.excited, r.ground, r.pump_intermediates,
                                  freqs.omega1, freqs.omega2)
    for label, defect in (("alpha34", d34), ("alpha12", d12)):
        if defect > DEFECT_WARN:
            warnings.warn(f"{label}: asymmetry defect {defect:.3e} above "
                          f"{DEFECT_WARN:g}; symmetrizing anyway", stacklevel=2)
    g34, gd = gyration_sos(model, r.final, r.excited, r.probe_intermediates,
                           freqs.omega3, freqs.omega4)
    aq34, qd = quadrupole_activity_sos(model, r.final, r.excited,
                                       r.probe_intermediates,
                                       freqs.omega3, freqs.omega4)
    for label, defect in (("gprime34", gd), ("a34", qd)):
        if defect > DEFECT_WARN:
            warnings.warn(f"{label}: route disagreement {defect:.3e} above "
                          f"{DEFECT_WARN:g}; model may be inconsistent", stacklevel=2)

    g12 = aq12 = None
    if pump_stokes_optical:
        g12, _ = gyration_sos(model, r.excited, r.ground, r.pump_intermediates,
                              freqs.omega1, freqs.omega2)
        aq12, _ = quadrupole_activity_sos(model, r.excited, r.ground,
                                          r.pump_intermediates,
                                          freqs.omega1, freqs.omega2)

    return PropertyTensorSet(
        alpha34=as_sym_rank2(0.5 * (a34 + a34.T), "alpha34"),
        alpha12=as_sym_rank2(0.5 * (a12 + a12.T), "alpha12"),
        gprime34=g34,
        a34=as_rank3_sym_last(aq34, "a34"),
        gprime12=g12,
        a12=None if aq12 is None else as_rank3_sym_last(aq12, "a12"),
    )
