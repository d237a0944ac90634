"""EPR probabilities from a two-qubit pure state and planar spin measurements."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .probset import TAU, BehaviorSet

OUTCOME_PAIRS = ((+1, +1), (+1, -1), (-1, +1), (-1, -1))


class NormalizationError(ValueError):
    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(f"state is not normalized: | |psi|^2 - 1 | = {residual:.3e}")


@dataclass(frozen=True)
class TwoQubitState:
    """alpha|00> + beta|01> + gamma|10> + delta|11>, first qubit is observer 1's."""

    alpha: complex
    beta: complex
    gamma: complex
    delta: complex

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"{name} is not finite")
            object.__setattr__(self, name, v)
        residual = abs(self.norm_squared - 1.0)
        if residual > TAU:
            raise NormalizationError(residual)

    @property
    def norm_squared(self) -> float:
        return sum(abs(a) ** 2 for a in (self.alpha, self.beta, self.gamma, self.delta))

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([self.alpha, self.beta, self.gamma, self.delta], dtype=complex)

    @classmethod
    def product(cls, first, second) -> TwoQubitState:
        """Tensor product of two normalized single-qubit amplitude pairs."""
        v = np.kron(np.asarray(first, dtype=complex), np.asarray(second, dtype=complex))
        return cls(*v)

    def to_json(self) -> dict:
        amps = (self.alpha, self.beta, self.gamma, self.delta)
        return {"re": [a.real for a in amps], "im": [a.imag for a in amps]}

    @classmethod
    def from_json(cls, data: dict) -> TwoQubitState:
        re, im = data["re"], data.get("im", [0.0] * 4)
        if len(re) != 4 or len(im) != 4:
            raise ValueError("state needs 4 real and 4 imaginary parts")
        return cls(*(complex(float(r), float(i)) for r, i in zip(re, im)))


@dataclass(frozen=True)
class PlanarDirection:
    angle: float

    def __post_init__(self):
        if not math.isfinite(self.angle):
            raise ValueError("direction angle must be finite")

    @property
    def x(self) -> float:
        return math.cos(self.angle)

    @property
    def y(self) -> float:
        return math.sin(self.angle)

    @property
    def phase(self) -> complex:
        """n_x + i n_y."""
        return complex(self.x, self.y)


@dataclass(frozen=True)
class DirectionConfig:
    """Observer 1 measures along a (D1) or c (D2); observer 2 along b (D1') or d (D2')."""

    a: PlanarDirection
    c: PlanarDirection
    b: PlanarDirection
    d: PlanarDirection

    @classmethod
    def from_angles(cls, a: float, c: float, b: float, d: float) -> DirectionConfig:
        return cls(*(PlanarDirection(float(t)) for t in (a, c, b, d)))

    def pairs(self):
        """Direction pairs in block order (D1,D1'), (D1,D2'), (D2,D1'), (D2,D2')."""
        return ((self.a, self.b), (self.a, self.d), (self.c, self.b), (self.c, self.d))

    def to_json(self) -> dict:
        return {"a": self.a.angle, "c": self.c.angle, "b": self.b.angle, "d": self.d.angle}

    @classmethod
    def from_json(cls, data: dict) -> DirectionConfig:
        return cls.from_angles(data["a"], data["c"], data["b"], data["d"])


def sigma_dot(n: PlanarDirection) -> np.ndarray:
    return np.array([[0, n.phase.conjugate()], [n.phase, 0]], dtype=complex)


def eigenvector(n: PlanarDirection, outcome: int) -> np.ndarray:
    """Eigenvector of sigma.n for eigenvalue ``outcome`` (+1 or -1)."""
    if outcome not in (1, -1):
        raise ValueError(f"outcome must be +1 or -1, got {outcome!r}")
    r = 1.0 / math.sqrt(2.0)
    return np.array([r, outcome * n.phase * r], dtype=complex)


def joint_probability(state: TwoQubitState, n1: PlanarDirection, n2: PlanarDirection,
                      s1: int, s2: int) -> float:
    if not isinstance(state, TwoQubitState):
        raise TypeError("state must be a TwoQubitState")
    psi = np.kron(eigenvector(n1, s1), eigenvector(n2, s2))
    amp = np.vdot(psi, state.amplitudes)
    return float(abs(amp) ** 2)


def eps1_closed_form(state: TwoQubitState, a: PlanarDirection, b: PlanarDirection) -> float:
    ca, cb = a.phase.conjugate(), b.phase.conjugate()
    return abs(state.alpha + state.beta * cb + state.gamma * ca + state.delta * ca * cb) ** 2 / 4


def eps2_closed_form(state: TwoQubitState, a: PlanarDirection, b: PlanarDirection) -> float:
    ca, cb = a.phase.conjugate(), b.phase.conjugate()
    return abs(state.alpha - state.beta * cb + state.gamma * ca - state.delta * ca * cb) ** 2 / 4


def generate(state: TwoQubitState, dirs: DirectionConfig) -> BehaviorSet:
    eps = [
        joint_probability(state, n1, n2, s1, s2)
        for n1, n2 in dirs.pairs()
        for s1, s2 in OUTCOME_PAIRS
    ]
    return BehaviorSet(tuple(eps))


_R = 1.0 / math.sqrt(2.0)

PRESET_STATES = {
    # (|01> - |10>)/sqrt(2)
    "singlet": TwoQubitState(0, _R, -_R, 0),
    "zerozero": TwoQubitState(1, 0, 0, 0),
    # (|0> + |1>)(|0> - |1>)/2
    "plusminus": TwoQubitState(0.5, -0.5, 0.5, -0.5),
}
