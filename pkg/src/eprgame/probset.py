"""Sixteen-entry EPR probability sets: validation, reconstruction, CHSH.

Index convention (1-based, used everywhere in this package)::

                 D1'          D2'
               +1   -1     +1   -1
    D1   +1  [ e1   e2  |  e5   e6 ]
         -1  [ e3   e4  |  e7   e8 ]
    D2   +1  [ e9   e10 |  e13  e14]
         -1  [ e11  e12 |  e15  e16]

so block (D1,D1') holds e1..e4, (D1,D2') e5..e8, (D2,D1') e9..e12 and
(D2,D2') e13..e16, each row-major over the outcome pairs (+1,+1), (+1,-1),
(-1,+1), (-1,-1).  Outcome +1 is read as action B.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

TAU = 1e-9
TSIRELSON = 2.0 * math.sqrt(2.0)

# 1-based positions of the eight free probabilities, in octet order
OCTET_INDICES = (1, 4, 5, 8, 9, 12, 14, 15)
DEPENDENT_INDICES = (2, 3, 6, 7, 10, 11, 13, 16)

# each dependent entry = (1 + sum(sign * octet entry)) / 2, signs in octet order
_DEPENDENT_SIGNS = {
    2: (-1, -1, +1, -1, -1, +1, +1, -1),
    3: (-1, -1, -1, +1, +1, -1, -1, +1),
    6: (+1, -1, -1, -1, -1, +1, +1, -1),
    7: (-1, +1, -1, -1, +1, -1, -1, +1),
    10: (-1, +1, +1, -1, -1, -1, +1, -1),
    11: (+1, -1, -1, +1, -1, -1, -1, +1),
    13: (-1, +1, +1, -1, +1, -1, -1, -1),
    16: (+1, -1, -1, +1, -1, +1, -1, -1),
}

BLOCKS = ((1, 2, 3, 4), (5, 6, 7, 8), (9, 10, 11, 12), (13, 14, 15, 16))

# no-signaling: observer-1 marginal is independent of observer 2's setting and
# vice versa; each pair (lhs, rhs) must have equal sums
LOCALITY = (
    ((1, 2), (5, 6)),
    ((1, 3), (9, 11)),
    ((9, 10), (13, 14)),
    ((5, 7), (13, 15)),
    ((3, 4), (7, 8)),
    ((11, 12), (15, 16)),
    ((2, 4), (10, 12)),
    ((6, 8), (14, 16)),
)


class ProbsetError(ValueError):
    pass


class MalformedError(ProbsetError):
    pass


class NonFiniteError(ProbsetError):
    pass


class ConstraintError(ProbsetError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__(
            f"probability set violates {len(report.violations)} constraint(s): "
            + ", ".join(report.violations)
        )


class InfeasibleOctetError(ProbsetError):
    def __init__(self, indices, values):
        self.indices = tuple(indices)
        self.values = tuple(values)
        detail = ", ".join(f"e{j}={v:.12g}" for j, v in zip(self.indices, self.values))
        super().__init__(f"octet reconstructs outside [0, 1]: {detail}")


def _round_off(x: float) -> float:
    if -TAU <= x < 0.0:
        return 0.0
    return x


def _finite_tuple(values, n: int, name: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(v) for v in values)
    except (TypeError, ValueError) as exc:
        raise MalformedError(f"{name} entries must be numbers: {exc}") from None
    if len(vals) != n:
        raise MalformedError(f"{name} needs {n} entries, got {len(vals)}")
    bad = [i for i, v in enumerate(vals) if not math.isfinite(v)]
    if bad:
        raise NonFiniteError(f"non-finite {name} entries at positions {bad}")
    return tuple(_round_off(v) for v in vals)


@dataclass(frozen=True)
class BehaviorSet:
    """The 16 joint probabilities; ``eps[j - 1]`` is e_j."""

    eps: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "eps", _finite_tuple(self.eps, 16, "eps"))

    def __getitem__(self, j: int) -> float:
        if not 1 <= j <= 16:
            raise IndexError(f"e index {j} outside 1..16")
        return self.eps[j - 1]

    def octet(self) -> IndependentOctet:
        return IndependentOctet(tuple(self[j] for j in OCTET_INDICES))

    def to_json(self) -> dict:
        return {"eps": list(self.eps)}

    @classmethod
    def from_json(cls, data: dict) -> BehaviorSet:
        return cls(tuple(data["eps"]))

    def dumps(self) -> str:
        return json.dumps(self.to_json())


@dataclass(frozen=True)
class IndependentOctet:
    """Free coordinates (e1, e4, e5, e8, e9, e12, e14, e15).

    Construction rejects octets whose dependent entries leave [0, 1].
    """

    mu: tuple[float, ...]

    def __post_init__(self):
        mu = _finite_tuple(self.mu, 8, "mu")
        out = [(j, v) for j, v in zip(OCTET_INDICES, mu) if not -TAU <= v <= 1.0 + TAU]
        if out:
            raise InfeasibleOctetError(*zip(*out))
        object.__setattr__(self, "mu", mu)
        dep = dependent_values(mu)
        bad = [(j, v) for j, v in dep.items() if not -TAU <= v <= 1.0 + TAU]
        if bad:
            raise InfeasibleOctetError(*zip(*bad))

    def to_json(self) -> dict:
        return {"mu": list(self.mu)}

    @classmethod
    def from_json(cls, data: dict) -> IndependentOctet:
        return cls(tuple(data["mu"]))


@dataclass(frozen=True)
class StrategyProfile:
    """Probabilities of B for Alice type 1/2 (p, q) and Bob type 1/2 (p', q')."""

    p: float
    q: float
    p_prime: float
    q_prime: float

    def __post_init__(self):
        for name in ("p", "q", "p_prime", "q_prime"):
            v = getattr(self, name)
            if not math.isfinite(v) or not 0 <= v <= 1:
                raise ValueError(f"{name}={v!r} outside [0, 1]")

    def as_tuple(self) -> tuple:
        return (self.p, self.q, self.p_prime, self.q_prime)

    def replace(self, index: int, value) -> StrategyProfile:
        vals = list(self.as_tuple())
        vals[index] = value
        return StrategyProfile(*vals)


@dataclass(frozen=True)
class ValidationReport:
    residuals: dict[str, float] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)


@dataclass(frozen=True)
class ChshClass:
    delta: float
    label: str

    LOCAL = "local"
    QUANTUM_VIOLATING = "quantum-violating"
    SUPER_QUANTUM = "super-quantum"


def dependent_values(mu) -> dict[int, float]:
    """The eight dependent entries as functions of the octet."""
    return {
        j: (1.0 + sum(s * m for s, m in zip(signs, mu))) / 2.0
        for j, signs in _DEPENDENT_SIGNS.items()
    }


def validate(b: BehaviorSet) -> ValidationReport:
    e = b.eps
    residuals: dict[str, float] = {}
    for j, v in enumerate(e, start=1):
        residuals[f"range:e{j}"] = max(0.0, -v, v - 1.0)
    for k, block in enumerate(BLOCKS, start=1):
        residuals[f"norm:block{k}"] = abs(sum(e[j - 1] for j in block) - 1.0)
    for lhs, rhs in LOCALITY:
        key = "loc:" + "+".join(f"e{j}" for j in lhs) + "=" + "+".join(f"e{j}" for j in rhs)
        residuals[key] = abs(sum(e[j - 1] for j in lhs) - sum(e[j - 1] for j in rhs))
    violations = [k for k, r in residuals.items() if r > TAU]
    return ValidationReport(residuals, violations)


def require_valid(b: BehaviorSet) -> BehaviorSet:
    report = validate(b)
    if not report.ok:
        raise ConstraintError(report)
    return b


def reconstruct(octet: IndependentOctet) -> BehaviorSet:
    eps = [0.0] * 16
    for j, v in zip(OCTET_INDICES, octet.mu):
        eps[j - 1] = v
    for j, v in dependent_values(octet.mu).items():
        eps[j - 1] = v
    return BehaviorSet(tuple(eps))


def from_factorizable(s: StrategyProfile) -> BehaviorSet:
    """Product distribution: observer 1 plays D1 with p or D2 with q, observer 2
    plays D1' with p' or D2' with q' (probability of outcome +1)."""
    eps = []
    for a in (s.p, s.q):
        for b in (s.p_prime, s.q_prime):
            eps += [a * b, a * (1 - b), (1 - a) * b, (1 - a) * (1 - b)]
    return BehaviorSet(tuple(eps))


def _clip01(x: float) -> float:
    return min(1.0, max(0.0, x))


def marginals(b: BehaviorSet) -> StrategyProfile:
    require_valid(b)
    p = (b[1] + b[2] + b[5] + b[6]) / 2
    q = (b[9] + b[10] + b[13] + b[14]) / 2
    pp = (b[1] + b[3] + b[9] + b[11]) / 2
    qp = (b[5] + b[7] + b[13] + b[15]) / 2
    # validated sets can sit up to TAU outside the box
    return StrategyProfile(_clip01(p), _clip01(q), _clip01(pp), _clip01(qp))


def is_factorizable(b: BehaviorSet) -> bool:
    prod = from_factorizable(marginals(b))
    return all(abs(x - y) <= TAU for x, y in zip(prod.eps, b.eps))


def chsh_delta(b: BehaviorSet) -> float:
    require_valid(b)
    return 2.0 * (sum(b[j] for j in OCTET_INDICES) - 2.0)


def classify_delta(delta: float) -> ChshClass:
    a = abs(delta)
    if a <= 2.0 + TAU:
        label = ChshClass.LOCAL
    elif a <= TSIRELSON + TAU:
        label = ChshClass.QUANTUM_VIOLATING
    else:
        label = ChshClass.SUPER_QUANTUM
    return ChshClass(delta, label)


def classify(b: BehaviorSet) -> ChshClass:
    return classify_delta(chsh_delta(b))


UNIFORM = BehaviorSet((0.25,) * 16)
