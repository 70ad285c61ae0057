"""Truncated Green's function of a layered medium as a finite delta train.

Arrival times are ``<tau, k>`` over lattice points ``k`` with ``k_1 = 1``,
nonnegative entries and contiguous support; the amplitude of ``k`` is the
product of radial scattering polynomials ``f^(k_j, k_{j+1})(r_j)``.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from scatpoly._rational import format_float, format_rational, parse_rational
from scatpoly.media import MediumParams
from scatpoly.polyengine import _closed_form_radial, eval_radial

LatticePoint = Tuple[int, ...]

DEFAULT_POINT_BUDGET = 10 ** 7


class BudgetExceeded(RuntimeError):
    """An enumeration hit its configured cap; ``partial`` holds what was done."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


def budget_from_env(default: int) -> int:
    value = os.environ.get("SCATTER_BUDGET")
    if not value:
        return default
    budget = int(value)
    if budget <= 0:
        raise ValueError("SCATTER_BUDGET must be positive")
    return budget


def is_lattice_point(k: Sequence[int]) -> bool:
    if not k or k[0] != 1 or any(x < 0 for x in k):
        return False
    return all(k[j + 1] == 0 for j in range(len(k) - 1) if k[j] == 0)


def lattice_time(tau: Sequence[Fraction], k: Sequence[int]) -> Fraction:
    return sum((t * x for t, x in zip(tau, k)), Fraction(0))


def enumerate_lattice(tau: Sequence, T, budget: int | None = None) -> List[LatticePoint]:
    """All lattice points with ``<tau, k> < T``, in lexicographic order.

    Depth-first over positions; once an entry is zero the remaining entries
    are zero, and each increment of ``k_j`` costs ``tau_j``.
    """
    tau = tuple(parse_rational(t) for t in tau)
    T = parse_rational(T)
    if T <= 0:
        raise ValueError("horizon T must be positive")
    if budget is None:
        budget = budget_from_env(DEFAULT_POINT_BUDGET)
    n = len(tau)
    out: List[LatticePoint] = []
    if tau[0] >= T:
        return out
    prefix = [1] + [0] * (n - 1)

    def visit(j: int, elapsed: Fraction):
        # positions < j are fixed; elapsed < T
        if j == n:
            out.append(tuple(prefix))
            if len(out) > budget:
                raise BudgetExceeded(f"more than {budget} lattice points", out)
            return
        # k_j = 0 closes the support
        prefix[j:] = [0] * (n - j)
        out.append(tuple(prefix))
        if len(out) > budget:
            raise BudgetExceeded(f"more than {budget} lattice points", out)
        kj = 1
        while elapsed + kj * tau[j] < T:
            prefix[j] = kj
            visit(j + 1, elapsed + kj * tau[j])
            kj += 1
        prefix[j] = 0

    visit(1, tau[0])
    return out


def amplitude(r: Sequence, k: Sequence[int]) -> Fraction:
    """``Phi(r, k) = prod_j f^(k_j, k_{j+1})(r_j)`` with ``k_{n+1} = 0``."""
    out = Fraction(1)
    n = len(k)
    for j in range(n):
        nxt = k[j + 1] if j + 1 < n else 0
        coeffs = _closed_form_radial(k[j], nxt)
        if not coeffs:
            return Fraction(0)
        out *= eval_radial(coeffs, parse_rational(r[j]))
        if not out:
            return out
    return out


@dataclass(frozen=True)
class Arrival:
    time: Fraction
    amplitude: Fraction
    contributors: Tuple[LatticePoint, ...] = field(default=(), compare=False)


@dataclass
class GreensTruncation:
    horizon: Fraction
    arrivals: List[Arrival]
    params: MediumParams
    complete: bool = True

    def __len__(self):
        return len(self.arrivals)

    def times(self) -> List[Fraction]:
        return [a.time for a in self.arrivals]

    def pairs(self) -> List[Tuple[Fraction, Fraction]]:
        return [(a.time, a.amplitude) for a in self.arrivals]

    def to_json(self) -> dict:
        return {
            "horizon": format_rational(self.horizon),
            "medium": self.params.to_json(),
            "complete": self.complete,
            "arrivals": [
                {
                    "time": format_rational(a.time),
                    "amplitude": format_rational(a.amplitude),
                    "contributors": [list(k) for k in a.contributors],
                }
                for a in self.arrivals
            ],
        }

    def to_csv(self, with_float: bool = False) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = ["time", "amplitude", "contributors"]
        if with_float:
            header += ["time_float", "amplitude_float"]
        writer.writerow(header)
        for a in self.arrivals:
            contrib = ";".join(" ".join(map(str, k)) for k in a.contributors)
            row = [format_rational(a.time), format_rational(a.amplitude), contrib]
            if with_float:
                row += [format_float(a.time), format_float(a.amplitude)]
            writer.writerow(row)
        return buf.getvalue()


def merge_arrivals(contributions) -> List[Arrival]:
    """Group ``(time, amplitude, k)`` triples by exact time; drop zero sums."""
    amp: Dict[Fraction, Fraction] = {}
    who: Dict[Fraction, set] = {}
    for t, a, k in contributions:
        amp[t] = amp.get(t, Fraction(0)) + a
        if k is not None:
            who.setdefault(t, set()).add(tuple(k))
    return [Arrival(t, amp[t], tuple(sorted(who.get(t, ()))))
            for t in sorted(amp) if amp[t] != 0]


def synthesize(params: MediumParams, T, budget: int | None = None) -> GreensTruncation:
    T = parse_rational(T)
    try:
        points = enumerate_lattice(params.tau, T, budget)
    except BudgetExceeded as exc:
        exc.partial = GreensTruncation(T, _train(params, exc.partial), params, complete=False)
        raise
    return GreensTruncation(T, _train(params, points), params)


def _train(params, points):
    return merge_arrivals((lattice_time(params.tau, k), amplitude(params.r, k), k) for k in points)


def energy(params: MediumParams, T, budget: int | None = None) -> Fraction:
    """Sum of squared per-lattice-point amplitudes below the horizon."""
    points = enumerate_lattice(params.tau, T, budget)
    return sum((amplitude(params.r, k) ** 2 for k in points), Fraction(0))


def spectrum_poly(params: MediumParams, T, sigma, truncation: GreensTruncation | None = None):
    """Fourier transform ``sum_i a_i exp(+i sigma t_i)`` of the truncated train.

    ``sigma`` may be a scalar or array; pass a precomputed ``truncation`` to
    avoid re-enumerating for repeated sweeps.
    """
    if truncation is None:
        truncation = synthesize(params, T)
    s = np.asarray(sigma, dtype=float)
    total = np.zeros(s.shape, dtype=complex)
    for a in truncation.arrivals:
        total = total + float(a.amplitude) * np.exp(1j * float(a.time) * s)
    if total.ndim == 0:
        return complex(total)
    return total
