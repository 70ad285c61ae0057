"""Brute-force ray-path oracle for the layered-medium Green's function.

Every scattering sequence is followed explicitly. This module deliberately
does not touch the scattering polynomials, so agreement with
:func:`scatpoly.greens.synthesize` is an independent check.

Conventions, for a ray meeting interface ``j`` (between layers j and j+1):

* from above: reflect with ``r_j`` or transmit with ``1 + r_j``
* from below: reflect with ``-r_j`` or transmit with ``1 - r_j``

The surface ``x = 0`` is transparent (impedance is continuous there), so an
upgoing ray reaching it is recorded and stops. Rays transmitted through the
deepest interface never return.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import List

from scatpoly._rational import format_rational, parse_rational
from scatpoly.greens import Arrival, BudgetExceeded, GreensTruncation, budget_from_env, synthesize
from scatpoly.media import MediumParams

DEFAULT_SEGMENT_BUDGET = 10 ** 8


def trace_paths(params: MediumParams, T, budget: int | None = None,
                dual_convention: bool = False, track_lattice: bool = True) -> GreensTruncation:
    """Enumerate all ray paths returning to the surface before ``T``.

    With ``track_lattice`` each path also counts its downward traversals per
    layer; that count is the lattice point reported in ``contributors``.
    ``dual_convention`` flips the sign of both reflection coefficients; it
    exists only to show that the other sign choice disagrees with the
    lattice formula.
    """
    T = parse_rational(T)
    if budget is None:
        budget = budget_from_env(DEFAULT_SEGMENT_BUDGET)
    n = params.n
    # integer clock: one unit = 1/den of time
    den = lcm(*(Fraction(t / 2).denominator for t in params.tau), T.denominator)
    half = [int(t / 2 * den) for t in params.tau]
    horizon = int(T * den)
    # minimal time back to the surface from the bottom of layer j
    climb = [0] * (n + 1)
    for j in range(1, n + 1):
        climb[j] = climb[j - 1] + half[j - 1]
    rn = [x.numerator for x in params.r]
    rd = [x.denominator for x in params.r]
    s = -1 if dual_convention else 1

    # integer numerators summed per (clock, denominator); Fractions only at the end
    sums = {}
    lattice = {}
    segments = 0
    # state: (layer 1..n, going_down, clock, amp_num, amp_den, k)
    stack = [(1, True, 0, 1, 1, (1,) + (0,) * (n - 1) if track_lattice else None)]
    while stack:
        layer, down, clock, num, dnm, k = stack.pop()
        segments += 1
        if segments > budget:
            partial = GreensTruncation(T, _arrivals(sums, lattice, den), params, complete=False)
            raise BudgetExceeded(f"more than {budget} ray segments", partial)
        clock += half[layer - 1]
        if down:
            # at interface `layer`, seen from above
            if clock + climb[layer] < horizon:
                i = layer - 1
                stack.append((layer, False, clock, num * s * rn[i], dnm * rd[i], k))
            if layer < n and clock + half[layer] + climb[layer + 1] < horizon:
                i = layer - 1
                kk = k and k[:layer] + (k[layer] + 1,) + k[layer + 1:]
                stack.append((layer + 1, True, clock, num * (rd[i] + rn[i]), dnm * rd[i], kk))
            continue
        if layer == 1:
            if clock < horizon:
                key = (clock, dnm)
                sums[key] = sums.get(key, 0) + num
                if k:
                    lattice.setdefault(clock, set()).add(k)
            continue
        # at interface `layer - 1`, seen from below
        i = layer - 2
        if clock + half[layer - 1] + climb[layer] < horizon:
            kk = k and k[:layer - 1] + (k[layer - 1] + 1,) + k[layer:]
            stack.append((layer, True, clock, -num * s * rn[i], dnm * rd[i], kk))
        if clock + climb[layer - 1] < horizon:
            stack.append((layer - 1, False, clock, num * (rd[i] - rn[i]), dnm * rd[i], k))
    return GreensTruncation(T, _arrivals(sums, lattice, den), params)


def _arrivals(sums, lattice, den):
    amp = {}
    for (clock, dnm), num in sums.items():
        amp[clock] = amp.get(clock, 0) + Fraction(num, dnm)
    return [Arrival(Fraction(c, den), a, tuple(sorted(lattice.get(c, ()))))
            for c, a in sorted(amp.items()) if a != 0]


@dataclass
class OracleReport:
    params: MediumParams
    horizon: Fraction
    n_arrivals: int
    diffs: List[dict] = field(default_factory=list)

    @property
    def match(self) -> bool:
        return not self.diffs

    def summary(self) -> str:
        if self.match:
            return f"MATCH, {self.n_arrivals} arrivals"
        return f"MISMATCH, {len(self.diffs)} of {self.n_arrivals} arrival times differ"

    def to_json(self) -> str:
        return json.dumps({"match": self.match, "arrivals": self.n_arrivals,
                           "diffs": self.diffs}, indent=2)


def compare_oracle(params: MediumParams, T, budget: int | None = None) -> OracleReport:
    """Compare ray tracing with lattice synthesis; any diff is a bug."""
    T = parse_rational(T)
    traced = dict(trace_paths(params, T, budget, track_lattice=False).pairs())
    lattice = dict(synthesize(params, T).pairs())
    diffs = []
    for t in sorted(set(traced) | set(lattice)):
        a, b = traced.get(t), lattice.get(t)
        if a != b:
            diffs.append({
                "time": format_rational(t),
                "oracleAmp": None if a is None else format_rational(a),
                "latticeAmp": None if b is None else format_rational(b),
            })
    return OracleReport(params, T, max(len(traced), len(lattice)), diffs)
