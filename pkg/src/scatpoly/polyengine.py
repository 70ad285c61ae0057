"""Exact scattering polynomials in the commuting pair (zeta, zetabar).

Polynomials are stored sparsely as ``{(a, b): Fraction}`` where ``(a, b)``
are the exponents of ``zeta`` and ``conj(zeta)``. All algebra is exact;
floating point enters only in :func:`eval_poly` and :func:`inner_product`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Sequence, Tuple

import numpy as np


Exponent = Tuple[int, int]


class InconsistencyError(RuntimeError):
    """Two independent constructions of the same object disagree."""


class QuantizationError(ValueError):
    """Eigenvalue is not of the form nu * (m + nu)."""


class BivarPoly:
    """Sparse polynomial in (zeta, zetabar) with rational coefficients.

    Zero coefficients are never stored, so two polynomials are equal exactly
    when their term maps are equal. Instances are treated as immutable.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Exponent, object] | None = None):
        clean: Dict[Exponent, Fraction] = {}
        for (a, b), c in (terms or {}).items():
            if a < 0 or b < 0:
                raise ValueError(f"negative exponent ({a}, {b})")
            c = Fraction(c)
            if c:
                clean[(int(a), int(b))] = c
        self._terms = clean

    @classmethod
    def constant(cls, c) -> "BivarPoly":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, a: int, b: int, c=1) -> "BivarPoly":
        return cls({(a, b): c})

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self):
        """Terms in lexicographic exponent order."""
        return sorted(self._terms.items())

    def coeff(self, a: int, b: int) -> Fraction:
        return self._terms.get((a, b), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        return max((a + b for a, b in self._terms), default=-1)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, BivarPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == BivarPoly.constant(other)._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        if not self._terms:
            return "BivarPoly(0)"
        parts = [f"{c}*z^{a}*zb^{b}" for (a, b), c in self.items()]
        return "BivarPoly(" + " + ".join(parts) + ")"

    def __neg__(self):
        return BivarPoly({k: -c for k, c in self._terms.items()})

    def __add__(self, other):
        other = _as_poly(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return BivarPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return BivarPoly({k: c * other for k, c in self._terms.items()})
        other = _as_poly(other)
        out: Dict[Exponent, Fraction] = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, 0) + c1 * c2
        return BivarPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = BivarPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def diff_zeta(self, times: int = 1) -> "BivarPoly":
        """Wirtinger derivative d/dzeta, treating zetabar as independent."""
        out = self._terms
        for _ in range(times):
            out = {(a - 1, b): c * a for (a, b), c in out.items() if a > 0}
        return BivarPoly(out)

    def diff_zetabar(self, times: int = 1) -> "BivarPoly":
        out = self._terms
        for _ in range(times):
            out = {(a, b - 1): c * b for (a, b), c in out.items() if b > 0}
        return BivarPoly(out)

    def divmod_boundary(self) -> Tuple["BivarPoly", "BivarPoly"]:
        """Divide by ``1 - zeta*zetabar``; returns ``(quotient, remainder)``.

        Every diagonal band ``a - b = d`` is a polynomial in ``u = zeta*zetabar``
        times a fixed monomial, so the division is synthetic division by
        ``1 - u`` per band. The remainder lives on each band's base monomial.
        """
        bands: Dict[int, Dict[int, Fraction]] = {}
        for (a, b), c in self._terms.items():
            bands.setdefault(a - b, {})[min(a, b)] = c
        quot: Dict[Exponent, Fraction] = {}
        rem: Dict[Exponent, Fraction] = {}
        for d, coeffs in bands.items():
            a0, b0 = max(d, 0), max(-d, 0)
            top = max(coeffs)
            at_one = sum(coeffs.values())
            # P(u) = (1 - u) Q(u) + P(1) with Q_i = c_0 + ... + c_i - P(1)
            running = Fraction(0)
            for i in range(top):
                running += coeffs.get(i, 0)
                quot[(a0 + i, b0 + i)] = running - at_one
            if at_one:
                rem[(a0, b0)] = at_one
        return BivarPoly(quot), BivarPoly(rem)

    def evaluate(self, point):
        """Float evaluation at ``zeta = point`` (scalar or ndarray).

        Terms are summed in lexicographic exponent order for reproducibility.
        """
        z = np.asarray(point, dtype=complex)
        zb = np.conj(z)
        total = np.zeros_like(z)
        for (a, b), c in self.items():
            total = total + float(c) * (z ** a) * (zb ** b)
        if total.ndim == 0:
            return complex(total)
        return total

    def to_terms(self):
        return [
            {"a": a, "b": b, "num": str(c.numerator), "den": str(c.denominator)}
            for (a, b), c in self.items()
        ]

    @classmethod
    def from_terms(cls, terms: Iterable[Mapping]) -> "BivarPoly":
        out = {}
        for t in terms:
            out[(int(t["a"]), int(t["b"]))] = Fraction(int(t["num"]), int(t["den"]))
        return cls(out)


def _as_poly(x) -> BivarPoly:
    if isinstance(x, BivarPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return BivarPoly.constant(x)
    raise TypeError(f"cannot combine BivarPoly with {type(x).__name__}")


ZETA = BivarPoly.monomial(1, 0)
ZETABAR = BivarPoly.monomial(0, 1)
ONE_MINUS_ZZ = BivarPoly({(0, 0): 1, (1, 1): -1})


def _is_zero_case(p: int, q: int) -> bool:
    return min(p, q) < 0 or p == 0 < q


@lru_cache(maxsize=None)
def _closed_form_radial(p: int, q: int) -> Tuple[Fraction, ...]:
    if _is_zero_case(p, q):
        return ()
    if q == 0:
        return (Fraction(0),) * p + (Fraction(1),)
    m = abs(p - q)
    nu = min(p, q) - 1
    sign = -1 if (q + nu + 1) % 2 else 1
    inner = [Fraction(0)] * (m + 2 * nu + 1)
    for j in range(nu + 1):
        num = math.factorial(j + nu + m + 1)
        den = math.factorial(j) * math.factorial(j + m) * math.factorial(nu - j)
        inner[m + 2 * j] = Fraction((-1) ** j * num, den)
    # multiply by (1 - x^2) and the prefactor
    out = [Fraction(0)] * (len(inner) + 2)
    for d, c in enumerate(inner):
        out[d] += c
        out[d + 2] -= c
    pref = Fraction(sign, q)
    return tuple(c * pref for c in out)


def closed_form_radial(p: int, q: int) -> list:
    """Coefficients of the radial profile ``f^(p,q)(x)`` in powers of x.

    Returns an empty list for the zero polynomial. Entry ``i`` is the
    coefficient of ``x**i``.
    """
    return list(_closed_form_radial(p, q))


def eval_radial(coeffs: Sequence, x):
    """Horner evaluation; exact when ``x`` is a Fraction."""
    acc = 0 * x
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def lift_radial(coeffs: Sequence, p: int, q: int) -> BivarPoly:
    """Map ``sum c_d rho^d`` times ``e^{i(p-q)sigma}`` onto zeta monomials.

    ``rho^d e^{i s sigma}`` equals ``zeta^a zetabar^b`` with ``a + b = d`` and
    ``a - b = s``; a degree of the wrong parity has no such monomial.
    """
    s = p - q
    out = {}
    for d, c in enumerate(coeffs):
        if not c:
            continue
        if (d + s) % 2 or d < abs(s):
            raise ValueError(f"degree {d} cannot carry angular frequency {s}")
        out[((d + s) // 2, (d - s) // 2)] = c
    return BivarPoly(out)


@lru_cache(maxsize=None)
def rodrigues(p: int, q: int) -> BivarPoly:
    """Rodrigues-type construction, valid for ``min(p, q) >= 1``."""
    if min(p, q) < 1:
        raise ValueError("rodrigues formula needs min(p, q) >= 1")
    n = p + q - 1
    expanded = ONE_MINUS_ZZ ** n
    derived = expanded.diff_zetabar(p).diff_zeta(q)
    pref = Fraction((-1) ** p, q * math.factorial(n))
    return ONE_MINUS_ZZ * derived * pref


@dataclass(frozen=True)
class ScatteringPoly:
    p: int
    q: int
    poly: BivarPoly = field(compare=False)
    radial: Tuple[Fraction, ...] = field(compare=False)

    def __call__(self, point):
        return self.poly.evaluate(point)

    @property
    def eigenvalue(self) -> int:
        return self.p * self.q

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "terms": self.poly.to_terms()}

    @classmethod
    def from_json(cls, obj: Mapping) -> "ScatteringPoly":
        p, q = int(obj["p"]), int(obj["q"])
        poly = BivarPoly.from_terms(obj["terms"])
        expected = scattering_poly(p, q)
        if poly != expected.poly:
            raise InconsistencyError(f"serialized terms do not match phi^({p},{q})")
        return expected


@lru_cache(maxsize=None)
def scattering_poly(p: int, q: int) -> ScatteringPoly:
    """Build ``phi^(p,q)`` and cross-check the two constructions exactly."""
    radial = _closed_form_radial(p, q)
    lifted = lift_radial(radial, p, q)
    if min(p, q) >= 1:
        poly = rodrigues(p, q)
        if poly != lifted:
            raise InconsistencyError(
                f"rodrigues and closed-form radial disagree for ({p}, {q})"
            )
    elif q == 0 and p >= 0:
        poly = BivarPoly.monomial(p, 0)
        if poly != lifted:
            raise InconsistencyError(f"monomial case disagrees for ({p}, 0)")
    else:
        poly = BivarPoly()
        if not lifted.is_zero():
            raise InconsistencyError(f"zero case disagrees for ({p}, {q})")
    return ScatteringPoly(p, q, poly, radial)


def eval_poly(poly, point):
    if isinstance(poly, ScatteringPoly):
        poly = poly.poly
    return poly.evaluate(point)


def apply_hybrid_laplacian(poly) -> BivarPoly:
    """``(1 - zeta*zetabar) d^2/dzetabar dzeta``, exactly."""
    if isinstance(poly, ScatteringPoly):
        poly = poly.poly
    return ONE_MINUS_ZZ * poly.diff_zeta().diff_zetabar()


@dataclass
class EigenCheck:
    ok: bool
    residual: BivarPoly

    def __bool__(self):
        return self.ok


def eigen_check(p: int, q: int) -> EigenCheck:
    """Exact check that ``-lap phi^(p,q) = p*q*phi^(p,q)``.

    The result is truthy on success and carries the residual polynomial
    either way.
    """
    if p < 1 or q < 1:
        raise ValueError("eigen_check needs p, q >= 1")
    phi = scattering_poly(p, q).poly
    residual = apply_hybrid_laplacian(phi) + phi * (p * q)
    return EigenCheck(residual.is_zero(), residual)


def _reduced(sp: ScatteringPoly) -> BivarPoly:
    quot, rem = sp.poly.divmod_boundary()
    if not rem.is_zero():
        raise InconsistencyError(f"phi^({sp.p},{sp.q}) not divisible by 1 - |zeta|^2")
    return quot


def inner_product(a: ScatteringPoly, b: ScatteringPoly, radial_order: int = 64,
                  angular_order: int = 64) -> complex:
    """Inner product against the measure ``4 dx dy / (1 - |zeta|^2)``.

    Both factors of ``1 - rho^2`` are divided out exactly first, leaving the
    smooth integrand ``4 rho (1 - rho^2) A(zeta) conj(B(zeta))``, integrated by
    Gauss-Legendre in rho and the trapezoid rule in the angle.
    """
    for sp in (a, b):
        if sp.p * sp.q < 1:
            raise ValueError(f"inner product needs p*q >= 1, got ({sp.p}, {sp.q})")
    ra, rb = _reduced(a), _reduced(b)
    nodes, weights = np.polynomial.legendre.leggauss(radial_order)
    rho = 0.5 * (nodes + 1.0)
    wr = 0.5 * weights
    sigma = 2.0 * np.pi * np.arange(angular_order) / angular_order
    zeta = rho[:, None] * np.exp(1j * sigma)[None, :]
    integrand = ra.evaluate(zeta) * np.conj(rb.evaluate(zeta))
    radial_weight = 4.0 * rho * (1.0 - rho ** 2) * wr
    angular = integrand.sum(axis=1) * (2.0 * np.pi / angular_order)
    return complex(np.dot(radial_weight, angular))


def eigenvalue_quantization(angular_index: int, eigenvalue: int) -> bool:
    """True iff ``eigenvalue == nu * (angular_index + nu)`` for an integer nu >= 1."""
    return _quantum_number(angular_index, eigenvalue) is not None


def _quantum_number(m: int, lam: int):
    if m < 0 or lam < 1:
        return None
    disc = m * m + 4 * lam
    s = math.isqrt(disc)
    if s * s != disc or (s - m) % 2:
        return None
    nu = (s - m) // 2
    return nu if nu >= 1 else None


@dataclass(frozen=True)
class RadialSolution:
    angular_index: int
    eigenvalue: int
    coeffs: Tuple[Fraction, ...]

    @property
    def nu(self) -> int:
        return _quantum_number(self.angular_index, self.eigenvalue)

    def __call__(self, rho):
        return eval_radial(self.coeffs, rho)


def recurrence_radial(angular_index: int, eigenvalue: int) -> RadialSolution:
    """Power-series solution of the separated eigenvalue ODE, with b_m = 1.

    Uses ``((j+2)^2 - m^2) b_{j+2} = (j^2 - 4 lam - m^2) b_j``; for a
    quantized eigenvalue the series terminates at degree ``m + 2 nu``.
    """
    m, lam = angular_index, eigenvalue
    nu = _quantum_number(m, lam)
    if nu is None:
        raise QuantizationError(f"{lam} is not nu*({m}+nu) for any integer nu >= 1")
    coeffs = [Fraction(0)] * (m + 2 * nu + 1)
    coeffs[m] = Fraction(1)
    j = m
    while j + 2 <= m + 2 * nu:
        coeffs[j + 2] = coeffs[j] * Fraction(j * j - 4 * lam - m * m,
                                             (j + 2) ** 2 - m * m)
        j += 2
    # next step must vanish, otherwise the series does not terminate
    nxt = j * j - 4 * lam - m * m
    if nxt != 0:
        raise InconsistencyError(f"recurrence did not terminate for m={m}, lam={lam}")
    return RadialSolution(m, lam, tuple(coeffs))


def proportionality(a: Sequence, b: Sequence):
    """Exact ratio ``c`` with ``a == c * b`` coefficientwise, or None."""
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    lead = max((i for i in range(n) if b[i]), default=None)
    if lead is None:
        return None
    c = Fraction(a[lead]) / b[lead]
    if c == 0 or any(Fraction(x) != c * y for x, y in zip(a, b)):
        return None
    return c
