"""Bayesian Nash equilibria of the two-type game, classical and EPR.

Every payoff is affine in the owning type's own strategy component, so a
component's slope is simply the payoff at 1 minus the payoff at 0, and a
deviation gain is maximised at 0 or 1.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .game import (
    BOS_FIG1,
    GameSpec,
    PayoffQuadruple,
    PureQuadruple,
    all_pure_quadruples,
    epr_payoffs,
    mixed_payoffs,
    pure_payoffs,
)
from .probset import (
    TAU,
    BehaviorSet,
    StrategyProfile,
    chsh_delta,
    classify_delta,
    from_factorizable,
    require_valid,
)

TYPE_LABELS = ("A1", "A2", "B1", "B2")


def _type_index(player_type) -> int:
    if isinstance(player_type, str):
        try:
            return TYPE_LABELS.index(player_type.upper())
        except ValueError:
            raise ValueError(f"player type must be one of {TYPE_LABELS}") from None
    if player_type not in range(4):
        raise ValueError(f"player type index must be 0..3, got {player_type!r}")
    return int(player_type)


@dataclass(frozen=True)
class GradientQuadruple:
    dA1_dp: float
    dA2_dq: float
    dB1_dpprime: float
    dB2_dqprime: float

    def as_tuple(self) -> tuple:
        return (self.dA1_dp, self.dA2_dq, self.dB1_dpprime, self.dB2_dqprime)


@dataclass(frozen=True)
class BestResponse:
    deviation: float
    payoff: float
    gain: float


@dataclass(frozen=True)
class EquilibriumReport:
    kind: str
    profile: StrategyProfile
    payoffs: PayoffQuadruple
    margins: tuple
    equilibrium: bool = True
    behavior: BehaviorSet | None = None
    delta: float | None = None
    chsh_class: str | None = None
    # the quantum solution is also checked against the factorizable conditions
    classical_equilibrium: bool | None = None
    gradients: tuple | None = field(default=None, compare=False)

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "equilibrium": self.equilibrium,
            "profile": [float(v) for v in self.profile.as_tuple()],
            "payoffs": [float(v) for v in self.payoffs],
            "margins": [float(v) for v in self.margins],
        }
        if self.behavior is not None:
            out["behavior"] = list(self.behavior.eps)
        if self.delta is not None:
            out["delta"] = float(self.delta)
            out["chsh_class"] = self.chsh_class
        if self.classical_equilibrium is not None:
            out["classical_equilibrium"] = self.classical_equilibrium
        if self.gradients is not None:
            out["gradients"] = [float(g) for g in self.gradients]
        return out

    @classmethod
    def from_json(cls, data: dict) -> EquilibriumReport:
        behavior = data.get("behavior")
        return cls(
            kind=data["kind"],
            profile=StrategyProfile(*data["profile"]),
            payoffs=PayoffQuadruple(*data["payoffs"]),
            margins=tuple(data["margins"]),
            equilibrium=data.get("equilibrium", True),
            behavior=None if behavior is None else BehaviorSet(tuple(behavior)),
            delta=data.get("delta"),
            chsh_class=data.get("chsh_class"),
            classical_equilibrium=data.get("classical_equilibrium"),
            gradients=None if data.get("gradients") is None else tuple(data["gradients"]),
        )


def _own_component(s: StrategyProfile, k: int):
    return s.as_tuple()[k]


def classical_gradients(spec: GameSpec, s: StrategyProfile) -> GradientQuadruple:
    slopes = []
    for k in range(4):
        hi = mixed_payoffs(spec, s.replace(k, 1)).as_tuple()[k]
        lo = mixed_payoffs(spec, s.replace(k, 0)).as_tuple()[k]
        slopes.append(hi - lo)
    return GradientQuadruple(*slopes)


def brute_force_best_response(spec: GameSpec, s: StrategyProfile, player_type,
                              grid_n: int = 2) -> BestResponse:
    """Best deviation of one type over a uniform grid (current value included)."""
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    k = _type_index(player_type)
    current = mixed_payoffs(spec, s).as_tuple()[k]
    best_x, best_pay = _own_component(s, k), current
    for x in [*np.linspace(0.0, 1.0, grid_n).tolist(), _own_component(s, k)]:
        pay = mixed_payoffs(spec, s.replace(k, x)).as_tuple()[k]
        if pay > best_pay:
            best_x, best_pay = x, pay
    return BestResponse(best_x, best_pay, best_pay - current)


def oracle_margins(spec: GameSpec, s: StrategyProfile, grid_n: int = 2) -> tuple:
    return tuple(brute_force_best_response(spec, s, k, grid_n).gain for k in range(4))


def _kind(s: StrategyProfile) -> str:
    return "pure" if all(v in (0, 1) for v in s.as_tuple()) else "mixed"


def verify_classical(spec: GameSpec, s: StrategyProfile) -> EquilibriumReport:
    """Check the four Nash inequalities over the factorizable game.

    A positive slope needs the component at 1, a negative one at 0; the
    distance from that vertex is allowed TAU of payoff.  A report with
    ``equilibrium=False`` is a rejection.
    """
    grads = classical_gradients(spec, s)
    ok = True
    for g, x in zip(grads.as_tuple(), s.as_tuple()):
        if g > TAU:
            ok &= g * (1 - x) <= TAU
        elif g < -TAU:
            ok &= -g * x <= TAU
    return EquilibriumReport(
        kind=_kind(s),
        profile=s,
        payoffs=mixed_payoffs(spec, s),
        margins=oracle_margins(spec, s),
        equilibrium=bool(ok),
        gradients=grads.as_tuple(),
    )


def find_pure_bne(spec: GameSpec) -> list[tuple[PureQuadruple, PayoffQuadruple]]:
    """All pure quadruples where no type strictly gains by switching action."""
    found = []
    for quad in all_pure_quadruples():
        pay = pure_payoffs(spec, quad).as_tuple()
        stable = True
        for k in range(4):
            acts = [*quad.alice, *quad.bob]
            acts[k] = "S" if acts[k] == "B" else "B"
            switched = pure_payoffs(spec, PureQuadruple(tuple(acts[:2]), tuple(acts[2:])))
            if switched.as_tuple()[k] > pay[k] + TAU:
                stable = False
                break
        if stable:
            found.append((quad, pure_payoffs(spec, quad)))
    return found


# ------------------------------------------------------ mixed case analysis

@dataclass(frozen=True)
class CaseAnalysis:
    equilibria: tuple  # EquilibriumReport, isolated solutions
    # (support pattern, EquilibriumReport witness) where the stationarity
    # conditions leave a continuum that contains equilibria
    degenerate: tuple


def _slope_affine(spec: GameSpec, k: int):
    """Slope of type k as c0 + c . (opponent's two components)."""
    opp = (2, 3) if k < 2 else (0, 1)

    def slope(y1, y2):
        vals = [0.5, 0.5, 0.5, 0.5]
        vals[opp[0]], vals[opp[1]] = y1, y2
        return classical_gradients(spec, StrategyProfile(*vals)).as_tuple()[k]

    c0 = slope(0.0, 0.0)
    return c0, np.array([slope(1.0, 0.0) - c0, slope(0.0, 1.0) - c0])


def _solve_interior(spec, interior, opp_types, pattern):
    """Affine solution set of the opponent's interior components under the
    stationarity conditions of the ``interior`` types.

    Returns (unknown types, particular solution, null-space basis) or None
    when the conditions are inconsistent.
    """
    unknown = [t for t in opp_types if pattern[t] is None]
    rows, rhs = [], []
    for k in interior:
        c0, c = _slope_affine(spec, k)
        b = -c0
        row = []
        for idx, t in enumerate(opp_types):
            if t in unknown:
                row.append(c[idx])
            else:
                b -= c[idx] * pattern[t]
        rows.append(row)
        rhs.append(b)
    n = len(unknown)
    if not rows:
        return unknown, np.zeros(n), np.eye(n)
    A = np.array(rows, dtype=float).reshape(len(rows), n)
    b = np.array(rhs, dtype=float)
    if n == 0:
        return (unknown, np.zeros(0), np.zeros((0, 0))) if np.all(np.abs(b) <= TAU) else None
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    if np.max(np.abs(A @ sol - b)) > 1e-9:
        return None
    _, sv, vt = np.linalg.svd(A)
    rank = int(np.sum(sv > 1e-12))
    return unknown, sol, vt[rank:].T


def _family_points(particular, basis, grid_n):
    if basis.shape[1] == 0:
        return [particular]
    # components of an interior solution live in (0, 1); a coarse grid of
    # coefficients over [-2, 2] covers that box for unit basis vectors
    axes = [np.linspace(-2.0, 2.0, grid_n)] * basis.shape[1]
    return [particular + basis @ np.array(t) for t in itertools.product(*axes)]


def find_classical_bne(spec: GameSpec = BOS_FIG1, grid_n: int = 201) -> CaseAnalysis:
    """Vertex plus interior-stationarity case analysis over 3^4 support patterns.

    Each component is 0, 1 or interior; an interior component needs its own
    slope to vanish, which constrains the opponent's interior components.
    Patterns that leave a continuum are searched on a grid for a witness.
    """
    found, degenerate = [], []
    for pattern in itertools.product((0, 1, None), repeat=4):
        alice_int = [k for k in (0, 1) if pattern[k] is None]
        bob_int = [k for k in (2, 3) if pattern[k] is None]
        bob_side = _solve_interior(spec, alice_int, (2, 3), pattern)
        alice_side = _solve_interior(spec, bob_int, (0, 1), pattern)
        if bob_side is None or alice_side is None:
            continue
        free = bob_side[2].shape[1] + alice_side[2].shape[1] > 0
        witness = None
        for xa in _family_points(alice_side[1], alice_side[2], grid_n if free else 1):
            for xb in _family_points(bob_side[1], bob_side[2], grid_n if free else 1):
                x = [float(v) if v is not None else 0.0 for v in pattern]
                for t, v in zip(alice_side[0], xa):
                    x[t] = float(v)
                for t, v in zip(bob_side[0], xb):
                    x[t] = float(v)
                if any(pattern[k] is None and not TAU < x[k] < 1 - TAU for k in range(4)):
                    continue
                report = verify_classical(spec, StrategyProfile(*x))
                if report.equilibrium:
                    witness = report
                    break
            if witness is not None:
                break
        if witness is None:
            continue
        label = "".join("I" if v is None else str(v) for v in pattern)
        if free:
            degenerate.append((label, witness))
        else:
            found.append(witness)
    return CaseAnalysis(tuple(found), tuple(degenerate))


# ------------------------------------------------------------- EPR game

def chain_rule_slopes(omega) -> tuple:
    """Payoff slopes along p, q, p', q' over non-factorizable sets."""
    return (2, 4, -2, -2 * (2 * omega + 1))


def _is_bos_fig1(spec: GameSpec) -> bool:
    return spec.blocks == BOS_FIG1.blocks and spec.alice_type_prob == BOS_FIG1.alice_type_prob


def quantum_bne(spec: GameSpec) -> EquilibriumReport:
    if not _is_bos_fig1(spec):
        raise ValueError("quantum_bne is only defined for the bos-fig1 game")
    slopes = chain_rule_slopes(spec.omega)
    # constant signs over omega in [0, 1]: the argmax never moves
    assert slopes[:3] == (2, 4, -2) and slopes[3] < 0, slopes
    star = []
    for g in slopes:
        if g == 0:
            raise ArithmeticError("zero slope leaves the equilibrium undetermined")
        star.append(1 if g > 0 else 0)
    profile = StrategyProfile(*star)
    # 0/1 marginals pin each block to a single cell, so the set is unique
    behavior = require_valid(from_factorizable(profile))
    margins = tuple(
        float(max(0, g * (1 - x), -g * x)) for g, x in zip(slopes, star)
    )
    delta = chsh_delta(behavior)
    return EquilibriumReport(
        kind="quantum",
        profile=profile,
        payoffs=epr_payoffs(spec, behavior),
        margins=margins,
        behavior=behavior,
        delta=delta,
        chsh_class=classify_delta(delta).label,
        classical_equilibrium=verify_classical(spec, profile).equilibrium,
        gradients=tuple(float(g) for g in slopes),
    )
