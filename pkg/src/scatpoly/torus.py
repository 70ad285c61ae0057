"""Composed disk automorphisms, their torus Fourier coefficients, and the
frequency-domain reflection response of a layered medium.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

import mpmath
import numpy as np

from scatpoly.greens import GreensTruncation, spectrum_poly, synthesize
from scatpoly.media import MediumParams
from scatpoly.polyengine import scattering_poly

BOUNDARY_TOL = 1e-12
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class DiskTuple:
    """Points of the closed unit polydisk.

    ``boundary[j]`` says whether ``|w_j| = 1``; it is exact when the tuple was
    built by :meth:`from_polar` with rational radii, and decided with
    ``BOUNDARY_TOL`` otherwise (``exact_boundary`` records which).
    """

    w: Tuple[complex, ...]
    boundary: Tuple[bool, ...]
    exact_boundary: bool = False

    @classmethod
    def from_complex(cls, w: Sequence) -> "DiskTuple":
        w = tuple(complex(x) for x in w)
        for j, x in enumerate(w, start=1):
            if abs(x) > 1 + 1e-15:
                raise ValueError(f"w_{j} = {x} lies outside the closed disk")
        return cls(w, tuple(abs(abs(x) - 1) <= BOUNDARY_TOL for x in w), False)

    @classmethod
    def from_polar(cls, radii: Sequence, angles: Sequence) -> "DiskTuple":
        radii = [Fraction(r) if not isinstance(r, float) else r for r in radii]
        for j, r in enumerate(radii, start=1):
            if not 0 <= r <= 1:
                raise ValueError(f"radius r_{j} = {r} outside [0, 1]")
        w = tuple(float(r) * cmath.exp(1j * float(t)) for r, t in zip(radii, angles))
        exact = all(isinstance(r, Fraction) for r in radii)
        boundary = tuple(r == 1 if exact else abs(float(r) - 1) <= BOUNDARY_TOL for r in radii)
        return cls(w, boundary, exact)

    @property
    def n(self) -> int:
        return len(self.w)

    @property
    def r(self) -> Tuple[float, ...]:
        return tuple(abs(x) for x in self.w)

    @property
    def theta(self) -> Tuple[float, ...]:
        return tuple(cmath.phase(x) % TWO_PI for x in self.w)

    def is_interior(self) -> bool:
        return not any(self.boundary)


@dataclass(frozen=True)
class PhaseTuple:
    """Torus point ``z_j = exp(i xi_j)``; entries may be arrays of angles."""

    xi: tuple
    z: tuple

    @classmethod
    def from_angles(cls, xi: Sequence) -> "PhaseTuple":
        # z is formed from the unreduced angle so nothing is lost to reduction
        z = tuple(np.exp(1j * np.asarray(x, dtype=float)) for x in xi)
        z = tuple(complex(v) if v.ndim == 0 else v for v in z)
        red = tuple(_reduce(np.asarray(x, dtype=float)) for x in xi)
        red = tuple(float(v) if v.ndim == 0 else v for v in red)
        return cls(red, z)

    @property
    def n(self) -> int:
        return len(self.xi)


def _reduce(x):
    # np.mod can round a tiny negative angle up to exactly 2*pi
    r = np.mod(x, TWO_PI)
    return np.where(r >= TWO_PI, 0.0, r)


def _conj(x):
    return x.conjugate()


def mobius(w, z, v, boundary: bool | None = None):
    """``z (v + w) / (1 + conj(w) v)``; the constant ``z w`` when ``|w| = 1``.

    Works with Python complex, numpy arrays (for ``z`` and ``v``) and mpmath
    numbers.
    """
    if np.any(abs(v) > 1 + BOUNDARY_TOL):
        raise ValueError("argument of the disk automorphism lies outside the disk")
    if boundary is None:
        boundary = abs(abs(w) - 1) <= BOUNDARY_TOL
    if boundary:
        return z * w + 0 * v
    return z * (v + w) / (1 + _conj(w) * v)


def _as_disk(w) -> DiskTuple:
    return w if isinstance(w, DiskTuple) else DiskTuple.from_complex(w)


def _as_phases(z):
    return z.z if isinstance(z, PhaseTuple) else tuple(z)


def compose(w, z):
    """Value at 0 of the right-to-left fold of disk automorphisms."""
    disk = _as_disk(w)
    zs = _as_phases(z)
    if len(zs) != disk.n or disk.n < 1:
        raise ValueError("w and z must have the same length n >= 1")
    v = 0j
    for wj, zj, bj in zip(reversed(disk.w), reversed(zs), reversed(disk.boundary)):
        v = mobius(wj, zj, v, bj)
    return v


def _compose_raw(ws, zs):
    # no validation; used by the finite-difference stencils
    v = 0 * ws[0]
    for wj, zj in zip(reversed(ws), reversed(zs)):
        v = zj * (v + wj) / (1 + _conj(wj) * v)
    return v


def lattice_coefficient(w, k: Sequence[int]) -> complex:
    """``prod_j phi^(k_j, k_{j+1})(w_j)``, the predicted Fourier coefficient."""
    w = _as_disk(w).w
    out = 1 + 0j
    n = len(k)
    for j in range(n):
        nxt = k[j + 1] if j + 1 < n else 0
        sp = scattering_poly(k[j], nxt)
        if sp.poly.is_zero():
            return 0j
        out *= sp.poly.evaluate(w[j])
    return out


def _grid_values(disk: DiskTuple, grid_size: int) -> np.ndarray:
    n = disk.n
    xi = TWO_PI * np.arange(grid_size) / grid_size
    mesh = np.meshgrid(*([xi] * n), indexing="ij")
    return compose(disk, [np.exp(1j * m) for m in mesh])


def _check_extraction(disk: DiskTuple):
    if disk.n > 3:
        raise ValueError("coefficient extraction supports n <= 3")
    if any(abs(x) >= 1 for x in disk.w):
        raise ValueError("coefficient extraction needs |w_j| < 1")


def fourier_coefficient(w, k: Sequence[int], grid_size: int = 64) -> complex:
    """Trapezoidal DFT estimate of the ``z^k`` coefficient of ``Psi(w, .)``."""
    disk = _as_disk(w)
    _check_extraction(disk)
    if len(k) != disk.n:
        raise ValueError("k must have length n")
    values = _grid_values(disk, grid_size)
    xi = TWO_PI * np.arange(grid_size) / grid_size
    mesh = np.meshgrid(*([xi] * disk.n), indexing="ij")
    phase = sum(kj * m for kj, m in zip(k, mesh))
    return complex(np.sum(values * np.exp(-1j * phase)) / grid_size ** disk.n)


def fourier_coefficients(w, grid_size: int = 64) -> np.ndarray:
    """All grid coefficients at once; entry ``[k mod N]`` approximates ``c_k``."""
    disk = _as_disk(w)
    _check_extraction(disk)
    return np.fft.fftn(_grid_values(disk, grid_size)) / grid_size ** disk.n


def kronecker_line(tau: Sequence, sigma) -> PhaseTuple:
    return PhaseTuple.from_angles([float(t) * np.asarray(sigma, dtype=float) for t in tau])


def backward_spectrum(params: MediumParams, sigma):
    """Reflection response ``Psi(r, z(sigma))`` via the Mobius recurrence."""
    # |r_j| < 1 is guaranteed exactly by MediumParams
    r = DiskTuple(tuple(complex(float(x)) for x in params.r), (False,) * params.n, True)
    return compose(r, kronecker_line(params.tau, sigma))


def truncation_error(params: MediumParams, T, sigmas,
                     truncation: GreensTruncation | None = None) -> np.ndarray:
    if truncation is None:
        truncation = synthesize(params, T)
    s = np.asarray(sigmas, dtype=float)
    return np.abs(backward_spectrum(params, s) - spectrum_poly(params, T, s, truncation))


# finite-difference checks of the PDE system satisfied by Psi


@dataclass(frozen=True)
class Residuals:
    L: float
    C: float
    E: float

    def as_tuple(self):
        return (self.L, self.C, self.E)


def pde_residual(w, z, j: int, h: float = 1e-3, dps: int | None = None) -> Residuals:
    """Central-difference residuals of ``L_j``, ``C_j``, ``E_j`` applied to Psi.

    ``j`` is 1-based. Derivatives in ``w_j`` use its Cartesian coordinates
    (five-point Laplacian) and its polar angle; ``xi_{n+1}`` derivatives are
    zero. With ``dps`` set, the stencils are evaluated in mpmath at that many
    digits so that only the O(h^2) truncation error remains.
    """
    disk = _as_disk(w)
    xi = z.xi if isinstance(z, PhaseTuple) else tuple(cmath.phase(v) for v in z)
    n = disk.n
    if not 1 <= j <= n or len(xi) != n:
        raise ValueError("bad layer index or tuple lengths")
    for i, x in enumerate(disk.w, start=1):
        if not 10 * h <= abs(x) < 1 - 10 * h:
            raise ValueError(f"|w_{i}| = {abs(x):.6g} too close to 0 or to the boundary for h={h}")

    if dps is None:
        return _residuals(list(disk.w), list(xi), j - 1, h, cmath.exp, complex)
    with mpmath.workdps(dps):
        ws = [mpmath.mpc(x.real, x.imag) for x in disk.w]
        res = _residuals(ws, [mpmath.mpf(x) for x in xi], j - 1, mpmath.mpf(h),
                         lambda a: mpmath.exp(a), mpmath.mpc)
        return Residuals(*(float(x) for x in res.as_tuple()))


def _residuals(ws, xis, j, h, exp, num):
    n = len(ws)
    i_unit = num(0, 1)

    def psi(dw=0, rot=None, dxi=None):
        w2 = list(ws)
        w2[j] = w2[j] + dw
        if rot is not None:
            w2[j] = w2[j] * exp(i_unit * rot)
        x2 = list(xis)
        if dxi:
            for idx, d in dxi:
                x2[idx] = x2[idx] + d
        return _compose_raw(w2, [exp(i_unit * x) for x in x2])

    f0 = psi()
    fxp, fxm = psi(dw=h), psi(dw=-h)
    fyp, fym = psi(dw=i_unit * h), psi(dw=-i_unit * h)
    lap = (fxp + fxm + fyp + fym - 4 * f0) / (h * h)
    fx = (fxp - fxm) / (2 * h)
    fy = (fyp - fym) / (2 * h)
    dtheta = (psi(rot=h) - psi(rot=-h)) / (2 * h)
    dxi_j = (psi(dxi=[(j, h)]) - psi(dxi=[(j, -h)])) / (2 * h)
    if j + 1 < n:
        dxi_next = (psi(dxi=[(j + 1, h)]) - psi(dxi=[(j + 1, -h)])) / (2 * h)
        mixed = (psi(dxi=[(j, h), (j + 1, h)]) - psi(dxi=[(j, h), (j + 1, -h)])
                 - psi(dxi=[(j, -h), (j + 1, h)]) + psi(dxi=[(j, -h), (j + 1, -h)])) / (4 * h * h)
    else:
        dxi_next = 0 * f0
        mixed = 0 * f0
    rho2 = abs(ws[j]) ** 2
    weight = (1 - rho2) / 4
    L = -weight * lap + mixed
    C = dtheta - dxi_j + dxi_next
    E = -weight * (fx * fx + fy * fy) + dxi_next * dxi_j
    return Residuals(abs(L), abs(C), abs(E))


def richardson_ratios(w, z, j: int, h: float = 1e-3, dps: int | None = None):
    """Residuals at ``h`` and ``h/2`` together with their ratios."""
    coarse = pde_residual(w, z, j, h, dps)
    fine = pde_residual(w, z, j, h / 2, dps)
    ratios = tuple(c / f if f else math.inf for c, f in zip(coarse.as_tuple(), fine.as_tuple()))
    return coarse, fine, ratios
