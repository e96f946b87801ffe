"""Closed-form rotational averages and the independent SO(3) averaging oracle.

The production path is the set of closed forms over isotropic invariants
(`averaged_electric`, `averaged_magnetic`, `averaged_quadrupole`).  Two
independent oracles validate them: a product quadrature over z-y-z Euler
angles that is exact for the polynomial integrands appearing here, and a
Haar-measure Monte Carlo.  `verify_closed_forms` runs every comparison,
including the natural-invariant renditions of the same averages, and reports
pass/fail per term; it never adjusts coefficients.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import coefficients as coef
from .errors import NonConvergence
from .invariants import (
    IsotropicInvariantSet,
    NaturalInvariantSet,
    isotropic_invariants,
    natural_from_isotropic,
)
from .scattering import C_AU, PropertyTensorSet, vvvr_bracket_terms
from .tensors import haar_random_rotations, rotate_rank2, rotate_rank3

DEFAULT_QUAD_ORDER = (16, 32, 16)
DEFAULT_QUAD_RTOL = 1e-10


# --------------------------------------------------------------------------
# closed forms over isotropic invariants
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class AveragedTerms:
    """Orientationally averaged contributions to the collinear strength.

    `electric` is dimensionless and nonnegative when both alpha factors
    coincide; `magnetic` carries 1/c and `quadrupole` omega/(3c); both flip
    sign under the enantiomer map.
    """

    electric: float
    magnetic: float
    quadrupole: float

    @property
    def chiral(self) -> float:
        return self.magnetic + self.quadrupole


def _linear_form(table: dict, values: np.ndarray, offset: int) -> float:
    return float(sum(float(c) * values[i - offset] for i, c in table.items()))


def averaged_electric(iso: IsotropicInvariantSet) -> float:
    """Rank-8 average of the electric bracket, a linear form in [alpha]_1..10."""
    return _linear_form(coef.ELECTRIC_AVERAGE, iso.alpha, 1)


def averaged_magnetic(iso: IsotropicInvariantSet, c: float = C_AU) -> float:
    """Rank-8 average of the magnetic bracket, (1/c) times a form in [G']_1..14."""
    return _linear_form(coef.MAGNETIC_AVERAGE, iso.gprime, 1) / c


def averaged_quadrupole(iso: IsotropicInvariantSet, omega3: float, omega4: float,
                        c: float = C_AU) -> float:
    """Rank-9 average of the quadrupole bracket.

    The probe-frequency block enters with -(k3/3) and the anti-Stokes block
    with +(k4/3), wavenumbers k = omega/c.
    """
    probe = _linear_form(coef.QUADRUPOLE_AVERAGE_PROBE, iso.aquad, 5)
    anti = _linear_form(coef.QUADRUPOLE_AVERAGE_ANTISTOKES, iso.aquad, 5)
    k3 = omega3 / c
    k4 = omega4 / c
    return -(k3 / 3.0) * probe + (k4 / 3.0) * anti


def averaged_terms(tensors: PropertyTensorSet, omega3: float, omega4: float,
                   c: float = C_AU) -> AveragedTerms:
    """All three closed-form averages for one property-tensor set."""
    iso = isotropic_invariants(tensors)
    return AveragedTerms(
        electric=averaged_electric(iso),
        magnetic=averaged_magnetic(iso, c),
        quadrupole=averaged_quadrupole(iso, omega3, omega4, c),
    )


# --------------------------------------------------------------------------
# natural-invariant renditions of the same averages
# --------------------------------------------------------------------------

def electric_from_natural(nat: NaturalInvariantSet) -> float:
    """Electric average rewritten over the a naturals; agrees with the
    isotropic-invariant form identically (their coefficient vectors differ by
    a multiple of the vanishing dependence relation)."""
    return float(sum(float(c) * nat.a[key] for key, c in coef.ELECTRIC_NATURAL_FORM.items()))


def magnetic_from_natural(nat: NaturalInvariantSet, c: float = C_AU) -> float:
    """Magnetic average rewritten over the g naturals, as tabulated.

    This rendition is known to disagree with the oracle-validated
    isotropic-invariant form (the weight-4 row of the g table is internally
    inconsistent: it is nonzero on purely isotropic input).  It is evaluated
    for reporting only; see `verify_closed_forms`.
    """
    return float(sum(float(cf) * nat.g[key]
                     for key, cf in coef.MAGNETIC_NATURAL_FORM.items())) / c


def quadrupole_from_natural(nat: NaturalInvariantSet, c: float = C_AU) -> float:
    """Quadrupole average rewritten over the k naturals.

    Uses the anti-Stokes block sign that reproduces the isotropic-invariant
    closed form exactly (`coefficients.ANTISTOKES_BLOCK_SIGN`).
    """
    probe = sum(float(cf) * nat.k3[key]
                for key, cf in coef.QUADRUPOLE_NATURAL_FORM_PROBE.items())
    anti = sum(float(cf) * nat.k4[key]
               for key, cf in coef.QUADRUPOLE_NATURAL_FORM_ANTISTOKES.items())
    return (probe + coef.ANTISTOKES_BLOCK_SIGN * anti) / (3.0 * c)


# --------------------------------------------------------------------------
# oracles
# --------------------------------------------------------------------------

def euler_zyz_grid(order: Sequence[int]):
    """Product quadrature grid on SO(3) in z-y-z Euler angles.

    Uniform (rectangle) rules in the two azimuthal angles, Gauss-Legendre in
    the cosine of the polar angle; weights include sin(beta) and the 1/(8 pi^2)
    normalization, so they sum to 1.  Returns (rotations (N,3,3), weights (N,)).
    """
    n_alpha, n_beta, n_gamma = order
    alpha = 2.0 * math.pi * np.arange(n_alpha) / n_alpha
    gamma = 2.0 * math.pi * np.arange(n_gamma) / n_gamma
    x, w = np.polynomial.legendre.leggauss(n_beta)

    ca, sa = np.cos(alpha), np.sin(alpha)
    cg, sg = np.cos(gamma), np.sin(gamma)
    cb = x
    sb = np.sqrt(1.0 - x * x)

    ca, cb_, cg = np.meshgrid(ca, cb, cg, indexing="ij")
    sa, sb_, sg = np.meshgrid(sa, sb, sg, indexing="ij")
    n = n_alpha * n_beta * n_gamma
    ca, cb_, cg, sa, sb_, sg = (v.reshape(n) for v in (ca, cb_, cg, sa, sb_, sg))

    r = np.empty((n, 3, 3))
    r[:, 0, 0] = ca * cb_ * cg - sa * sg
    r[:, 0, 1] = -ca * cb_ * sg - sa * cg
    r[:, 0, 2] = ca * sb_
    r[:, 1, 0] = sa * cb_ * cg + ca * sg
    r[:, 1, 1] = -sa * cb_ * sg + ca * cg
    r[:, 1, 2] = sa * sb_
    r[:, 2, 0] = -sb_ * cg
    r[:, 2, 1] = sb_ * sg
    r[:, 2, 2] = cb_

    weights = np.einsum("a,b,g->abg",
                        np.full(n_alpha, 1.0 / n_alpha),
                        0.5 * w,
                        np.full(n_gamma, 1.0 / n_gamma)).reshape(n)
    return r, weights


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    convergence: float  # |value(2*order) - value(order)|

    def __float__(self) -> float:
        return self.value


def so3_quadrature_average(fn: Callable[[np.ndarray], np.ndarray],
                           order: Sequence[int] = DEFAULT_QUAD_ORDER,
                           rtol: float = DEFAULT_QUAD_RTOL) -> QuadratureResult:
    """Haar-measure average of `fn` over SO(3) with an order-doubling check.

    `fn` maps a batch of rotation matrices (N, 3, 3) to scalars (N,).  The
    average is evaluated at `order` and at doubled order; if the two disagree
    beyond `rtol` (relative, with an absolute floor tied to the integrand
    magnitude) a `NonConvergence` is raised, otherwise the doubled-order value
    is returned together with the observed difference.
    """
    r1, w1 = euler_zyz_grid(order)
    f1 = np.asarray(fn(r1), dtype=float)
    v1 = float(w1 @ f1)
    r2, w2 = euler_zyz_grid([2 * n for n in order])
    f2 = np.asarray(fn(r2), dtype=float)
    v2 = float(w2 @ f2)
    diff = abs(v2 - v1)
    fmax = float(np.max(np.abs(f2))) if f2.size else 0.0
    floor = 1e-13 * max(1.0, fmax)
    if diff > max(rtol * max(abs(v1), abs(v2)), floor):
        raise NonConvergence(
            f"order doubling changed the SO(3) average from {v1!r} to {v2!r}")
    return QuadratureResult(value=v2, convergence=diff)


@dataclass(frozen=True)
class McResult:
    mean: float
    stderr: float


def mc_average(fn: Callable[[np.ndarray], np.ndarray], samples: int,
               seed: int) -> McResult:
    """Monte Carlo Haar average of `fn` with the sample standard error.

    Deterministic for a fixed seed; `fn` takes a batch of rotations.
    """
    if samples < 1000:
        raise ValueError("mc_average needs at least 1000 samples")
    rng = np.random.default_rng(seed)
    values = np.asarray(fn(haar_random_rotations(rng, samples)), dtype=float)
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(samples))
    return McResult(mean=mean, stderr=stderr)


def rotated_bracket_terms(tensors: PropertyTensorSet, omega3: float, omega4: float,
                          c: float = C_AU):
    """Batch evaluators of the three collinear brackets over rotated tensors.

    Returns three callables (electric, magnetic, quadrupole), each mapping a
    rotation batch (N, 3, 3) to lab-frame bracket values (N,); this is what
    the oracles average.
    """
    def terms(rotations: np.ndarray):
        r = np.asarray(rotations, dtype=float)
        return vvvr_bracket_terms(
            rotate_rank2(r, tensors.alpha34),
            rotate_rank2(r, tensors.alpha12),
            rotate_rank2(r, tensors.gprime34),
            rotate_rank3(r, tensors.a34),
            omega3=omega3, omega4=omega4, c=c)

    return (lambda r: terms(r)[0],
            lambda r: terms(r)[1],
            lambda r: terms(r)[2])


# --------------------------------------------------------------------------
# verification report
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class OracleCheck:
    """One closed form against both oracles."""

    term: str
    closed: float
    quadrature: float
    quadrature_convergence: float
    mc_mean: float
    mc_stderr: float
    rtol_quad: float
    mc_sigma: float
    passed_quadrature: bool
    passed_mc: bool

    @property
    def passed(self) -> bool:
        return self.passed_quadrature and self.passed_mc


@dataclass(frozen=True)
class RenditionCheck:
    """A natural-invariant rendition against the authoritative closed form."""

    term: str
    closed: float
    natural: float
    deviation: float
    tol: float
    passed: bool
    note: str = ""


@dataclass(frozen=True)
class OracleReport:
    omega3: float
    omega4: float
    c: float
    checks: tuple
    renditions: tuple
    notes: tuple = ()

    @property
    def authoritative_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def natural_pass(self) -> bool:
        return all(r.passed for r in self.renditions)

    def exit_code(self) -> int:
        """0 when everything passes, 2 when only natural renditions deviate,
        1 when an authoritative closed form fails its oracles."""
        if not self.authoritative_pass:
            return 1
        return 0 if self.natural_pass else 2

    def to_dict(self) -> dict:
        return {
            "omega3": self.omega3,
            "omega4": self.omega4,
            "c": self.c,
            "checks": [vars(c) | {"passed": c.passed} for c in self.checks],
            "renditions": [vars(r) for r in self.renditions],
            "notes": list(self.notes),
            "authoritative_pass": self.authoritative_pass,
            "natural_pass": self.natural_pass,
            "exit_code": self.exit_code(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [
            "closed-form rotational averages vs SO(3) oracles "
            f"(omega3={self.omega3:.12g}, omega4={self.omega4:.12g}, c={self.c:.9g})",
            "-" * 78,
        ]
        for c in self.checks:
            lines.append(
                f"{c.term:<28} closed={c.closed: .15e}  quad={c.quadrature: .15e}  "
                f"mc={c.mc_mean: .9e} (stderr {c.mc_stderr:.2e})  "
                f"[{'PASS' if c.passed else 'FAIL'}]")
        lines.append("-" * 78)
        lines.append("natural-invariant renditions vs closed forms")
        for r in self.renditions:
            lines.append(
                f"{r.term:<28} closed={r.closed: .15e}  natural={r.natural: .15e}  "
                f"rel.dev={r.deviation:.3e}  [{'PASS' if r.passed else 'FAIL'}]"
                + (f"  ({r.note})" if r.note else ""))
        if self.notes:
            lines.append("-" * 78)
            for n in self.notes:
                lines.append(f"note: {n}")
        lines.append("-" * 78)
        lines.append(f"authoritative closed forms: "
                     f"{'PASS' if self.authoritative_pass else 'FAIL'}; "
                     f"natural renditions: {'PASS' if self.natural_pass else 'FAIL'}; "
                     f"exit code {self.exit_code()}")
        return "\n".join(lines)


def _rel_dev(a: float, b: float, floor: float = 1e-15) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > floor else abs(a - b)


_FINDING_NOTES = (
    "anti-Stokes block of the quadrupole natural form is applied with the "
    "minus sign: that choice reproduces the isotropic-invariant closed form "
    "exactly and collapses onto the single-frequency coefficients (the "
    "opposite sign choice does neither)",
    "the magnetic natural rendition uses the g coefficients as tabulated; its "
    "weight-4 row is inconsistent (nonzero on purely isotropic input, where "
    "the rendition gives 1.520466.../c against the closed form's 2/c), so "
    "this rendition is reported but never used in the production ratio",
    "the quadrupole closed form is exact at omega3 = omega4 but its split "
    "between the two frequency blocks is not: the oracle deviation is "
    "proportional to (k3 - k4) and includes totally-symmetric tensor content "
    "that the Levi-Civita-contracted invariants cannot represent, so no "
    "reweighting of the tabulated invariants can repair it; the "
    "'quadrupole (equal-frequency)' check isolates this",
)


def verify_closed_forms(tensors: PropertyTensorSet, omega3: float, omega4: float,
                        *, c: float = C_AU,
                        quad_order: Sequence[int] = DEFAULT_QUAD_ORDER,
                        quad_rtol: float = DEFAULT_QUAD_RTOL,
                        mc_samples: int = 100_000, seed: int = 2025,
                        rtol_quad: float = 1e-9, mc_sigma: float = 5.0,
                        rtol_natural: float = 1e-9) -> OracleReport:
    """Compare all three closed forms and their natural renditions to the oracles.

    Coefficients are never modified: a failing comparison is reported as a
    finding.  Two findings recur by construction (see the report notes): the
    magnetic natural rendition deviates from its closed form, and on inputs
    with a nonzero rank-3 tensor and omega3 != omega4 the quadrupole closed
    form deviates from the oracle (its frequency-block split is defective,
    while its equal-frequency value is exact; a dedicated diagnostic check
    demonstrates the latter).  The electric and quadrupole natural renditions
    are held to a tight 1e-12 tolerance because they are exactly equivalent
    to the corresponding closed forms.
    """
    iso = isotropic_invariants(tensors)
    nat = natural_from_isotropic(iso, omega3, omega4)
    closed = {
        "electric": averaged_electric(iso),
        "magnetic": averaged_magnetic(iso, c),
        "quadrupole": averaged_quadrupole(iso, omega3, omega4, c),
    }
    fns = dict(zip(("electric", "magnetic", "quadrupole"),
                   rotated_bracket_terms(tensors, omega3, omega4, c)))

    # a fourth, diagnostic check: the quadrupole closed form evaluated with
    # both frequencies set to omega3, where the block split cannot matter
    closed["quadrupole (equal-frequency)"] = averaged_quadrupole(iso, omega3, omega3, c)
    fns["quadrupole (equal-frequency)"] = rotated_bracket_terms(
        tensors, omega3, omega3, c)[2]

    checks = []
    for term, fn in fns.items():
        quad = so3_quadrature_average(fn, order=quad_order, rtol=quad_rtol)
        mc = mc_average(fn, mc_samples, seed)
        dev_quad = _rel_dev(closed[term], quad.value)
        # statistical tolerance: sigma band plus a tiny absolute floor for
        # exactly zero terms whose sample spread is itself round-off
        mc_tol = mc_sigma * mc.stderr + 1e-12
        checks.append(OracleCheck(
            term=term, closed=closed[term],
            quadrature=quad.value, quadrature_convergence=quad.convergence,
            mc_mean=mc.mean, mc_stderr=mc.stderr,
            rtol_quad=rtol_quad, mc_sigma=mc_sigma,
            passed_quadrature=dev_quad <= rtol_quad,
            passed_mc=abs(closed[term] - mc.mean) <= mc_tol,
        ))

    naturals = {
        "electric": (electric_from_natural(nat), 1e-12, ""),
        "magnetic": (magnetic_from_natural(nat, c), rtol_natural,
                     "tabulated g form; expected to deviate"),
        "quadrupole": (quadrupole_from_natural(nat, c), 1e-12, ""),
    }
    renditions = []
    for term, (value, tol, note) in naturals.items():
        dev = _rel_dev(closed[term], value)
        renditions.append(RenditionCheck(
            term=term, closed=closed[term], natural=value,
            deviation=dev, tol=tol, passed=dev <= tol, note=note))

    return OracleReport(omega3=omega3, omega4=omega4, c=c,
                        checks=tuple(checks), renditions=tuple(renditions),
                        notes=_FINDING_NOTES)
