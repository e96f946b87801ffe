"""Fixed-orientation scattering strength |M|^2 for four-wave mixing beams.

`m_squared_general` evaluates the full nine-bracket expression for arbitrary
beam geometries and complex polarizations: the pure electric-dipole term plus
the eight optical-activity corrections (four magnetic-dipole brackets scaled
by 1/c, four electric-quadrupole brackets scaled by wavenumber/3).  The
imaginary part is taken of the polarization factor product only; all molecular
tensors are real off resonance.

`m_squared_vvvr` / `m_squared_vvvl` are the collinear specialization: three
x-polarized inputs along z with right/left circular analysis of the scattered
beam.  Circular analyzers are normalized, e_R = (x - i y)/sqrt(2); that
normalization is the one consistent with the 1/2 weights of the specialized
expression and is pinned by the generic/specialized equality test.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .tensors import (
    as_rank2,
    as_rank3_sym_last,
    as_sym_rank2,
    as_unit_direction,
    as_unit_polarization,
    rotate_rank2,
    rotate_rank3,
)

#: Speed of light in atomic units (hartree based); overridable per context.
C_AU = 137.035999

#: Energy-conservation tolerance for omega4 = omega1 - omega2 + omega3.
FREQUENCY_TOL = 1e-12

E_X = np.array([1.0, 0.0, 0.0])
E_Y = np.array([0.0, 1.0, 0.0])
E_Z = np.array([0.0, 0.0, 1.0])
POL_RIGHT = np.array([1.0, -1.0j, 0.0]) / math.sqrt(2.0)
POL_LEFT = np.array([1.0, +1.0j, 0.0]) / math.sqrt(2.0)


@dataclass(frozen=True)
class PhysicalContext:
    """Unit system and rate prefactors, all in atomic units (hbar = 1, e = 1).

    With ``normalize=True`` every overall prefactor is forced to 1, which is
    the natural setting for the circular intensity difference where all
    prefactors cancel.
    """

    hbar: float = 1.0
    c: float = C_AU
    eps0: float = 1.0 / (4.0 * math.pi)
    volume: float = 1.0
    rho_s: float = 1.0
    rho_f: float = 1.0
    normalize: bool = False

    def __post_init__(self):
        for name in ("hbar", "c", "eps0", "volume", "rho_s", "rho_f"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"PhysicalContext.{name} must be positive")

    def m2_prefactor(self, beams: "BeamSet") -> float:
        """pi^2 rho_s^2 (hbar c / 2 eps0 V)^4 k1 k2 k3 k4 n1 n3 (n2+1)(n4+1), or 1."""
        if self.normalize:
            return 1.0
        k = beams.wavenumbers(self.c)
        n = beams.photons
        field_factor = (self.hbar * self.c / (2.0 * self.eps0 * self.volume)) ** 4
        return (math.pi ** 2 * self.rho_s ** 2 * field_factor
                * k[0] * k[1] * k[2] * k[3]
                * n[0] * n[2] * (n[1] + 1.0) * (n[3] + 1.0))

    def rate_prefactor(self) -> float:
        """Golden-rule factor 2 pi rho_f / hbar, or 1 when normalized."""
        if self.normalize:
            return 1.0
        return 2.0 * math.pi * self.rho_f / self.hbar


@dataclass(frozen=True)
class BeamSet:
    """Four beams: angular frequencies, unit wavevectors, polarizations, photons.

    Beam order is (pump, Stokes, probe, anti-Stokes).  Energy conservation
    omega4 = omega1 - omega2 + omega3 is enforced at construction unless
    `allow_detuned` is set.
    """

    omega: np.ndarray
    khat: np.ndarray
    pol: np.ndarray
    photons: np.ndarray
    allow_detuned: bool = False

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float)
        if omega.shape != (4,) or np.any(omega <= 0.0):
            raise ValueError("BeamSet.omega: four positive angular frequencies required")
        khat = np.array([as_unit_direction(k, f"khat[{j}]")
                         for j, k in enumerate(np.asarray(self.khat, dtype=float))])
        pol = np.array([as_unit_polarization(e, f"pol[{j}]")
                        for j, e in enumerate(np.asarray(self.pol, dtype=complex))])
        photons = np.asarray(self.photons, dtype=float)
        if photons.shape != (4,) or np.any(photons < 0.0):
            raise ValueError("BeamSet.photons: four nonnegative photon numbers required")
        if not self.allow_detuned:
            target = omega[0] - omega[1] + omega[2]
            if abs(omega[3] - target) > FREQUENCY_TOL * max(1.0, abs(target)):
                raise ValueError(
                    f"BeamSet: omega4={omega[3]!r} violates omega1-omega2+omega3="
                    f"{target!r}; pass allow_detuned=True to override")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "khat", khat)
        object.__setattr__(self, "pol", pol)
        object.__setattr__(self, "photons", photons)

    @classmethod
    def collinear_vvv(cls, omega1: float, omega2: float, omega3: float,
                      omega4: Optional[float] = None, analyzer: str = "R",
                      photons=(1.0, 1.0, 1.0, 1.0),
                      allow_detuned: bool = False) -> "BeamSet":
        """All four beams along z, three x-polarized inputs, circular analyzer."""
        if omega4 is None:
            omega4 = omega1 - omega2 + omega3
        e4 = {"R": POL_RIGHT, "L": POL_LEFT}.get(analyzer)
        if e4 is None:
            raise ValueError(f"analyzer must be 'R' or 'L', got {analyzer!r}")
        return cls(
            omega=np.array([omega1, omega2, omega3, omega4]),
            khat=np.tile(E_Z, (4, 1)),
            pol=np.array([E_X, E_X, E_X, e4], dtype=complex),
            photons=np.asarray(photons, dtype=float),
            allow_detuned=allow_detuned,
        )

    def wavenumbers(self, c: float) -> np.ndarray:
        return self.omega / c

    def is_collinear_z(self) -> bool:
        return bool(np.all(np.abs(self.khat - E_Z) <= 1e-12))


@dataclass(frozen=True)
class PropertyTensorSet:
    """One molecule or mode's property tensors for the two frequency pairs.

    The probe/anti-Stokes pair carries the full set (alpha34, gprime34, a34);
    the pump/Stokes optical-activity tensors are optional because the
    collinear x-polarized configuration never probes them.
    """

    alpha34: np.ndarray
    alpha12: np.ndarray
    gprime34: np.ndarray
    a34: np.ndarray
    gprime12: Optional[np.ndarray] = None
    a12: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "alpha34", as_sym_rank2(self.alpha34, "alpha34"))
        object.__setattr__(self, "alpha12", as_sym_rank2(self.alpha12, "alpha12"))
        object.__setattr__(self, "gprime34", as_rank2(self.gprime34, "gprime34"))
        object.__setattr__(self, "a34", as_rank3_sym_last(self.a34, "a34"))
        if self.gprime12 is not None:
            object.__setattr__(self, "gprime12", as_rank2(self.gprime12, "gprime12"))
        if self.a12 is not None:
            object.__setattr__(self, "a12", as_rank3_sym_last(self.a12, "a12"))

    def enantiomer(self) -> "PropertyTensorSet":
        """Mirror-image tensors: alpha unchanged, G' and A negated."""
        return PropertyTensorSet(
            alpha34=self.alpha34, alpha12=self.alpha12,
            gprime34=-self.gprime34, a34=-self.a34,
            gprime12=None if self.gprime12 is None else -self.gprime12,
            a12=None if self.a12 is None else -self.a12,
        )

    def rotated(self, rotation) -> "PropertyTensorSet":
        return PropertyTensorSet(
            alpha34=rotate_rank2(rotation, self.alpha34),
            alpha12=rotate_rank2(rotation, self.alpha12),
            gprime34=rotate_rank2(rotation, self.gprime34),
            a34=rotate_rank3(rotation, self.a34),
            gprime12=None if self.gprime12 is None else rotate_rank2(rotation, self.gprime12),
            a12=None if self.a12 is None else rotate_rank3(rotation, self.a12),
        )


def vvvr_bracket_terms(alpha34, alpha12, gprime34, aquad34,
                       omega3: float, omega4: float, c: float):
    """Electric, magnetic, and quadrupole brackets of the collinear configuration.

    Accepts single tensors or arrays with leading batch axes, e.g. a whole
    grid of lab-frame (rotated) tensors at once.  The brackets are returned
    separately so callers can average or sign-flip them: the right-analyzer
    strength is electric + magnetic + quadrupole, the left-analyzer strength
    electric - magnetic - quadrupole (both before the overall prefactor).
    """
    a34 = np.asarray(alpha34, dtype=float)
    a12 = np.asarray(alpha12, dtype=float)
    g34 = np.asarray(gprime34, dtype=float)
    aq34 = np.asarray(aquad34, dtype=float)
    k3 = omega3 / c
    k4 = omega4 / c

    a34_xx = a34[..., 0, 0]
    a34_yx = a34[..., 1, 0]
    a12_xx2 = a12[..., 0, 0] ** 2

    electric = 0.5 * (a34_xx ** 2 + a34_yx ** 2) * a12_xx2
    magnetic = (g34[..., 1, 1] + g34[..., 0, 0]) * a34_xx * a12_xx2 / c
    quadrupole = (
        (-(k3 / 3.0) * aq34[..., 1, 0, 2] + (k4 / 3.0) * aq34[..., 0, 1, 2]) * a34_xx
        + ((k3 - k4) / 3.0) * aq34[..., 0, 0, 2] * a34_yx
    ) * a12_xx2
    return electric, magnetic, quadrupole


def _m_squared_collinear(tensors: PropertyTensorSet, beams: BeamSet,
                         ctx: PhysicalContext, sign: int) -> float:
    if not beams.is_collinear_z():
        raise ValueError("collinear evaluation requires all four wavevectors along z")
    electric, magnetic, quadrupole = vvvr_bracket_terms(
        tensors.alpha34, tensors.alpha12, tensors.gprime34, tensors.a34,
        omega3=beams.omega[2], omega4=beams.omega[3], c=ctx.c)
    return ctx.m2_prefactor(beams) * float(electric + sign * (magnetic + quadrupole))


def m_squared_vvvr(tensors: PropertyTensorSet, beams: BeamSet,
                   ctx: PhysicalContext) -> float:
    """|M|^2 for three x-polarized collinear inputs, right-circular analyzer."""
    return _m_squared_collinear(tensors, beams, ctx, +1)


def m_squared_vvvl(tensors: PropertyTensorSet, beams: BeamSet,
                   ctx: PhysicalContext) -> float:
    """|M|^2 for three x-polarized collinear inputs, left-circular analyzer."""
    return _m_squared_collinear(tensors, beams, ctx, -1)


def _quad_contract(aq: np.ndarray, u, v, w) -> complex:
    """C(A; u, v, w) = u_a v_b w_c A_abc with complex vectors."""
    return complex(np.einsum("a,b,c,abc->", u, v, w, aq))


_IMAG_RESIDUE_TOL = 1e-14


def m_squared_general(tensors: PropertyTensorSet, beams: BeamSet,
                      ctx: PhysicalContext) -> float:
    """Full |M|^2 for arbitrary beams: electric term plus eight chiral brackets.

    Missing pump/Stokes optical-activity tensors are treated as zero with a
    warning.  The result is real by construction; a nonzero imaginary residue
    beyond 1e-14 relative indicates a broken input and raises.
    """
    e1, e2, e3, e4 = beams.pol
    kh = beams.khat
    k = beams.wavenumbers(ctx.c)
    c = ctx.c

    a34 = tensors.alpha34
    a12 = tensors.alpha12
    g34 = tensors.gprime34
    aq34 = tensors.a34
    if tensors.gprime12 is None or tensors.a12 is None:
        warnings.warn("pump/Stokes optical-activity tensors missing; treated as zero",
                      stacklevel=2)
    g12 = tensors.gprime12 if tensors.gprime12 is not None else np.zeros((3, 3))
    aq12 = tensors.a12 if tensors.a12 is not None else np.zeros((3, 3, 3))

    def bil(u, t, v) -> complex:
        return complex(u @ t @ v)

    # shared conjugated amplitude: conj(e4).alpha34.e3 * conj(e2).alpha12.e1
    m_bar = bil(e4.conj(), a34, e3) * bil(e2.conj(), a12, e1)

    s34 = bil(e4, a34, e3.conj())       # e4.alpha34.conj(e3)
    s12 = bil(e2, a12, e1.conj())       # e2.alpha12.conj(e1)

    electric = s34 * s12 * m_bar
    value = electric.real
    if abs(electric.imag) > _IMAG_RESIDUE_TOL * max(1.0, abs(electric.real)):
        raise ValueError(f"electric bracket has imaginary residue {electric.imag!r}")

    # magnetic-dipole brackets, one per beam, each with the beam's own
    # polarization replaced by (khat x pol) on the primed tensor
    x_pump = s34 * bil(e2, g12, np.cross(kh[0], e1.conj()))
    x_stokes = s34 * bil(e1.conj(), g12, np.cross(kh[1], e2))
    x_probe = bil(e4, g34, np.cross(kh[2], e3.conj())) * s12
    x_anti = bil(e3.conj(), g34, np.cross(kh[3], e4)) * s12
    value += (2.0 / c) * (-(x_pump * m_bar).imag + (x_stokes * m_bar).imag
                          - (x_probe * m_bar).imag + (x_anti * m_bar).imag)

    # electric-quadrupole brackets, scaled by the full wavevector k_j
    x_q1 = s34 * k[0] * _quad_contract(aq12, e2, e1.conj(), kh[0])
    x_q2 = s34 * k[1] * _quad_contract(aq12, e1.conj(), e2, kh[1])
    x_q3 = k[2] * _quad_contract(aq34, e4, e3.conj(), kh[2]) * s12
    x_q4 = k[3] * _quad_contract(aq34, e3.conj(), e4, kh[3]) * s12
    value += (2.0 / 3.0) * ((x_q1 * m_bar).imag - (x_q2 * m_bar).imag
                            + (x_q3 * m_bar).imag - (x_q4 * m_bar).imag)

    return ctx.m2_prefactor(beams) * value


def transition_rate(m_squared: float, ctx: PhysicalContext) -> float:
    """Golden-rule transition rate (2 pi / hbar) rho_f |M|^2, proportional units."""
    return ctx.rate_prefactor() * m_squared


def random_property_tensors(rng: np.random.Generator, chiral: bool = True,
                            pump_stokes_optical: bool = False) -> PropertyTensorSet:
    """Seeded random tensor set with the required index symmetries.

    Entries are standard normal; with ``chiral=False`` the optical-activity
    tensors are zero.  Used by the built-in verification fixtures and tests.
    """
    def sym2():
        m = rng.normal(size=(3, 3))
        return 0.5 * (m + m.T)

    def rank3():
        a = rng.normal(size=(3, 3, 3))
        return 0.5 * (a + np.swapaxes(a, 1, 2))

    return PropertyTensorSet(
        alpha34=sym2(),
        alpha12=sym2(),
        gprime34=rng.normal(size=(3, 3)) if chiral else np.zeros((3, 3)),
        a34=rank3() if chiral else np.zeros((3, 3, 3)),
        gprime12=rng.normal(size=(3, 3)) if pump_stokes_optical else None,
        a12=rank3() if pump_stokes_optical else None,
    )
