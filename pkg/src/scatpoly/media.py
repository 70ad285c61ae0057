"""Piecewise-constant impedance profiles and their (tau, r) parameters."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from scatpoly._rational import format_rational, parse_rational


class MediumError(ValueError):
    """A medium violates one of its structural invariants."""

    def __init__(self, message, layer=None):
        super().__init__(message if layer is None else f"layer {layer}: {message}")
        self.layer = layer


@dataclass(frozen=True)
class ImpedanceProfile:
    """``zeta(x) = C0 + sum_j C_j H(x - x_j)`` in travel-time depth ``x``.

    Jumps are ``(depth, size)`` pairs. The impedance below the deepest jump is
    normalized to 1.
    """

    surface_impedance: Fraction
    jumps: Tuple[Tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        c0 = parse_rational(self.surface_impedance)
        jumps = tuple((parse_rational(x), parse_rational(c)) for x, c in self.jumps)
        object.__setattr__(self, "surface_impedance", c0)
        object.__setattr__(self, "jumps", jumps)
        if c0 <= 0:
            raise MediumError("surface impedance must be positive", 0)
        level = c0
        prev = Fraction(0)
        for j, (x, c) in enumerate(jumps, start=1):
            if x <= prev:
                raise MediumError(f"depth {x} not strictly increasing (previous {prev})", j)
            if c == 0:
                raise MediumError("zero jump gives zero reflectivity", j)
            level += c
            if level <= 0:
                raise MediumError(f"impedance {level} is not positive", j + 1)
            prev = x
        if level != 1:
            raise MediumError(f"impedance below the last jump is {level}, expected 1",
                              len(jumps) + 1)

    @property
    def n(self) -> int:
        return len(self.jumps)

    def layer_impedances(self) -> Tuple[Fraction, ...]:
        """Impedance of layers 1..n+1; layer j spans (x_{j-1}, x_j)."""
        out = [self.surface_impedance]
        for _, c in self.jumps:
            out.append(out[-1] + c)
        return tuple(out)

    def to_json(self) -> dict:
        return {
            "C0": format_rational(self.surface_impedance),
            "jumps": [{"x": format_rational(x), "C": format_rational(c)}
                      for x, c in self.jumps],
        }


@dataclass(frozen=True)
class MediumParams:
    tau: Tuple[Fraction, ...]
    r: Tuple[Fraction, ...]

    def __post_init__(self):
        tau = tuple(parse_rational(t) for t in self.tau)
        r = tuple(parse_rational(x) for x in self.r)
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "r", r)
        if len(tau) != len(r):
            raise MediumError(f"tau has {len(tau)} entries but r has {len(r)}")
        if not tau:
            raise MediumError("medium needs at least one interface")
        for j, (t, x) in enumerate(zip(tau, r), start=1):
            if t <= 0:
                raise MediumError(f"travel time {t} must be positive", j)
            if not -1 < x < 1:
                raise MediumError(f"reflectivity {x} outside (-1, 1)", j)
            if x == 0:
                raise MediumError("zero reflectivity is not a jump", j)

    @property
    def n(self) -> int:
        return len(self.tau)

    def to_json(self) -> dict:
        return {"tau": [format_rational(t) for t in self.tau],
                "r": [format_rational(x) for x in self.r]}


def to_params(profile: ImpedanceProfile) -> MediumParams:
    z = profile.layer_impedances()
    r = [(z[j] - z[j + 1]) / (z[j] + z[j + 1]) for j in range(profile.n)]
    depths = [Fraction(0)] + [x for x, _ in profile.jumps]
    tau = [2 * (depths[j + 1] - depths[j]) for j in range(profile.n)]
    return MediumParams(tuple(tau), tuple(r))


def from_params(params: MediumParams) -> ImpedanceProfile:
    """Rebuild the profile upward from the unit impedance of the half-space."""
    z = [Fraction(1)]
    for rj in reversed(params.r):
        z.append(z[-1] * (1 + rj) / (1 - rj))
    z.reverse()
    jumps = []
    depth = Fraction(0)
    for j, t in enumerate(params.tau):
        depth += t / 2
        jumps.append((depth, z[j + 1] - z[j]))
    return ImpedanceProfile(z[0], tuple(jumps))


def medium_from_json(obj) -> MediumParams:
    """Read either the profile form (``C0``/``jumps``) or the ``tau``/``r`` form."""
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    if "tau" in obj or "r" in obj:
        return MediumParams(tuple(obj["tau"]), tuple(obj["r"]))
    if "C0" in obj:
        jumps = tuple((j["x"], j["C"]) for j in obj.get("jumps", ()))
        return to_params(ImpedanceProfile(obj["C0"], jumps))
    raise MediumError("medium JSON needs either C0/jumps or tau/r")


def load_medium(path) -> MediumParams:
    with open(path) as fh:
        return medium_from_json(json.load(fh))


def make_params(tau: Sequence, r: Sequence) -> MediumParams:
    return MediumParams(tuple(tau), tuple(r))
