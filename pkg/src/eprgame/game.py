"""Two-type Battle-of-Sexes Bayesian game: payoff tables and payoff functions.

Actions are encoded B -> 0, S -> 1 throughout; a strategy component is the
probability of playing B.  Payoff arithmetic is plain Python so that
``fractions.Fraction`` inputs give exact results.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction

from .probset import (
    DEPENDENT_INDICES,
    OCTET_INDICES,
    BehaviorSet,
    IndependentOctet,
    StrategyProfile,
    _DEPENDENT_SIGNS,
    require_valid,
)

B, S = "B", "S"
ACTIONS = (B, S)
PAIRS = tuple(itertools.product(ACTIONS, repeat=2))

HALF = Fraction(1, 2)


def _nested(blocks):
    return tuple(
        tuple(tuple(tuple(tuple(cell) for cell in row) for row in bob) for bob in alice)
        for alice in blocks
    )


@dataclass(frozen=True)
class GameSpec:
    """Payoff blocks plus type beliefs.

    ``blocks[i][j][r][c]`` is the (Alice, Bob) payoff pair when Alice is of
    type i+1 playing action r and Bob is of type j+1 playing action c.
    ``alice_type_prob`` is the weight Alice puts on Bob being of type 1;
    ``omega`` is the weight Bob puts on Alice being of type 1.
    """

    blocks: tuple
    omega: float = Fraction(2, 3)
    alice_type_prob: float = HALF

    def __post_init__(self):
        try:
            blocks = _nested(self.blocks)
        except TypeError:
            raise ValueError("blocks must have shape 2x2x2x2x2") from None
        shape_ok = len(blocks) == 2 and all(
            len(bob) == 2 and all(len(row) == 2 and all(len(cell) == 2 and all(len(pay) == 2 for pay in cell)
                                                        for cell in row) for row in bob)
            for bob in blocks
        )
        if not shape_ok:
            raise ValueError("blocks must have shape 2x2x2x2x2")
        for v in _flat(blocks):
            if not _finite(v):
                raise ValueError("payoff entries must be finite")
        object.__setattr__(self, "blocks", blocks)
        for name in ("omega", "alice_type_prob"):
            v = getattr(self, name)
            if not _finite(v) or not 0 <= v <= 1:
                raise ValueError(f"{name}={v!r} outside [0, 1]")

    def with_omega(self, omega) -> GameSpec:
        return replace(self, omega=omega)

    @property
    def alice_weights(self):
        """Alice's beliefs over Bob's types."""
        return (self.alice_type_prob, 1 - self.alice_type_prob)

    @property
    def bob_weights(self):
        """Bob's beliefs over Alice's types."""
        return (self.omega, 1 - self.omega)

    def to_json(self) -> dict:
        flat_blocks = [
            [[list(map(float, cell)) for cell in row] for row in self.blocks[i][j]]
            for i in range(2) for j in range(2)
        ]
        return {"omega": float(self.omega), "alice_type_prob": float(self.alice_type_prob),
                "blocks": flat_blocks}

    @classmethod
    def from_json(cls, data: dict) -> GameSpec:
        flat = data["blocks"]
        if len(flat) != 4:
            raise ValueError("blocks must be a 4x2x2x2 array")
        blocks = ((flat[0], flat[1]), (flat[2], flat[3]))
        return cls(blocks, omega=data.get("omega", Fraction(2, 3)),
                   alice_type_prob=data.get("alice_type_prob", HALF))


def _flat(blocks):
    for alice in blocks:
        for bob in alice:
            for row in bob:
                for cell in row:
                    yield from cell


def _finite(v) -> bool:
    try:
        f = float(v)
    except (TypeError, ValueError):
        return False
    return f == f and abs(f) != float("inf")


# Alice type 1 wants to meet (prefers B), type 2 wants to avoid; Bob type 1
# wants to meet (prefers S), type 2 wants to avoid.
_ALICE_PAYOFF = ([[2, 0], [0, 1]], [[0, 2], [1, 0]])
_BOB_PAYOFF = ([[1, 0], [0, 2]], [[0, 2], [1, 0]])

BOS_FIG1 = GameSpec(
    tuple(
        tuple(
            tuple(tuple((_ALICE_PAYOFF[i][r][c], _BOB_PAYOFF[j][r][c]) for c in range(2)) for r in range(2))
            for j in range(2)
        )
        for i in range(2)
    )
)

PRESETS = {"bos-fig1": BOS_FIG1}


def load_preset(name: str, omega=None) -> GameSpec:
    try:
        spec = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown game preset {name!r}; known: {sorted(PRESETS)}") from None
    return spec if omega is None else spec.with_omega(omega)


@dataclass(frozen=True)
class PureQuadruple:
    alice: tuple[str, str]
    bob: tuple[str, str]

    def __post_init__(self):
        for a in (*self.alice, *self.bob):
            if a not in ACTIONS:
                raise ValueError(f"action {a!r} not in {ACTIONS}")

    def as_profile(self) -> StrategyProfile:
        return StrategyProfile(*(1 if a == B else 0 for a in (*self.alice, *self.bob)))

    def __str__(self):
        return "{(%s,%s),(%s,%s)}" % (*self.alice, *self.bob)


@dataclass(frozen=True)
class PayoffQuadruple:
    a1: float
    a2: float
    b1: float
    b2: float

    def as_tuple(self) -> tuple:
        return (self.a1, self.a2, self.b1, self.b2)

    def __iter__(self):
        return iter(self.as_tuple())


def all_pure_quadruples():
    for alice in PAIRS:
        for bob in PAIRS:
            yield PureQuadruple(alice, bob)


def pure_payoffs(spec: GameSpec, profile: PureQuadruple) -> PayoffQuadruple:
    blk = spec.blocks
    ra = [ACTIONS.index(a) for a in profile.alice]
    cb = [ACTIONS.index(b) for b in profile.bob]
    wa, wb = spec.alice_weights, spec.bob_weights
    a = [sum(wa[j] * blk[i][j][ra[i]][cb[j]][0] for j in range(2)) for i in range(2)]
    b = [sum(wb[i] * blk[i][j][ra[i]][cb[j]][1] for i in range(2)) for j in range(2)]
    return PayoffQuadruple(a[0], a[1], b[0], b[1])


def mixed_payoffs(spec: GameSpec, s: StrategyProfile) -> PayoffQuadruple:
    blk = spec.blocks
    xa = [(s.p, 1 - s.p), (s.q, 1 - s.q)]
    yb = [(s.p_prime, 1 - s.p_prime), (s.q_prime, 1 - s.q_prime)]

    def bilinear(i, j, who):
        return sum(xa[i][r] * blk[i][j][r][c][who] * yb[j][c] for r in range(2) for c in range(2))

    wa, wb = spec.alice_weights, spec.bob_weights
    a = [sum(wa[j] * bilinear(i, j, 0) for j in range(2)) for i in range(2)]
    b = [sum(wb[i] * bilinear(i, j, 1) for i in range(2)) for j in range(2)]
    return PayoffQuadruple(a[0], a[1], b[0], b[1])


def epr_coefficients(spec: GameSpec):
    """4x16 coefficient rows: payoff of each type as a linear form in e1..e16.

    Alice type i+1 uses setting D(i+1); Bob type j+1 uses D(j+1)'.
    """
    wa, wb = spec.alice_weights, spec.bob_weights
    rows = [[0] * 16 for _ in range(4)]
    for i in range(2):
        for j in range(2):
            base = 4 * (2 * i + j)
            for r in range(2):
                for c in range(2):
                    alice_pay, bob_pay = spec.blocks[i][j][r][c]
                    k = base + 2 * r + c
                    rows[i][k] += wa[j] * alice_pay
                    rows[2 + j][k] += wb[i] * bob_pay
    return rows


def epr_payoffs(spec: GameSpec, b: BehaviorSet) -> PayoffQuadruple:
    require_valid(b)
    rows = epr_coefficients(spec)
    return PayoffQuadruple(*(sum(c * e for c, e in zip(row, b.eps)) for row in rows))


@dataclass(frozen=True)
class MuForm:
    """Payoffs as affine forms in the octet: const[k] + sum(coeffs[k][m] * mu[m])."""

    const: tuple
    coeffs: tuple

    def __call__(self, mu) -> PayoffQuadruple:
        return PayoffQuadruple(*(c + sum(a * m for a, m in zip(row, mu))
                                 for c, row in zip(self.const, self.coeffs)))


def mu_form(spec: GameSpec) -> MuForm:
    """Substitute the dependent-probability relations into the linear payoffs."""
    rows = epr_coefficients(spec)
    const, coeffs = [], []
    for row in rows:
        c = sum(row[j - 1] * HALF for j in DEPENDENT_INDICES)
        lin = []
        for m, j in enumerate(OCTET_INDICES):
            lin.append(row[j - 1] + sum(row[d - 1] * HALF * _DEPENDENT_SIGNS[d][m]
                                        for d in DEPENDENT_INDICES))
        const.append(c)
        coeffs.append(tuple(lin))
    return MuForm(tuple(const), tuple(coeffs))


def epr_payoffs_mu(spec: GameSpec, octet: IndependentOctet) -> PayoffQuadruple:
    if not isinstance(octet, IndependentOctet):
        octet = IndependentOctet(tuple(octet))
    return mu_form(spec)(octet.mu)


# ---------------------------------------------------------------- tables

@dataclass(frozen=True)
class Table:
    name: str
    title: str
    row_header: str
    col_header: str
    row_labels: tuple
    col_labels: tuple
    cells: tuple  # cells[r][c] is a tuple of payoff values

    def cell(self, row_label, col_label):
        return self.cells[self.row_labels.index(row_label)][self.col_labels.index(col_label)]


def _pair_label(pair) -> str:
    return "(%s,%s)" % pair


@dataclass(frozen=True)
class OneSidedTable:
    table: Table
    equilibria: tuple  # (Alice action, (Bob type-1 action, Bob type-2 action))


def one_sided_table(spec: GameSpec = BOS_FIG1) -> OneSidedTable:
    """Alice of type 1 against a Bob of unknown type.

    Cells hold Alice's expected payoff and Bob's payoff averaged over his two
    types with Alice's weights.
    """
    blk = spec.blocks[0]
    wa = spec.alice_weights
    cells = []
    for r in range(2):
        row = []
        for c1, c2 in itertools.product(range(2), repeat=2):
            alice = wa[0] * blk[0][r][c1][0] + wa[1] * blk[1][r][c2][0]
            bob = wa[0] * blk[0][r][c1][1] + wa[1] * blk[1][r][c2][1]
            row.append((alice, bob))
        cells.append(tuple(row))
    table = Table("one-sided", "Alice vs Bob's two types", "Alice", "Bob's two types",
                  ACTIONS, tuple(_pair_label(p) for p in PAIRS), tuple(cells))

    equilibria = []
    for r in range(2):
        for c1, c2 in itertools.product(range(2), repeat=2):
            alice_now = cells[r][2 * c1 + c2][0]
            alice_ok = alice_now >= cells[1 - r][2 * c1 + c2][0]
            bob_ok = all(blk[j][r][c][1] >= blk[j][r][1 - c][1] for j, c in ((0, c1), (1, c2)))
            if alice_ok and bob_ok:
                equilibria.append((ACTIONS[r], (ACTIONS[c1], ACTIONS[c2])))
    return OneSidedTable(table, tuple(equilibria))


def alice_type_table(spec: GameSpec, alice_type: int) -> Table:
    i = alice_type - 1
    cells = []
    for a in ACTIONS:
        row = []
        for bob in PAIRS:
            alice = (a, a)  # only type i's action matters
            row.append((pure_payoffs(spec, PureQuadruple(alice, bob)).as_tuple()[i],))
        cells.append(tuple(row))
    return Table(f"alice-type{alice_type}", f"Alice of type {alice_type}", f"Alice of type {alice_type}",
                 "Bob's two types", ACTIONS, tuple(_pair_label(p) for p in PAIRS), tuple(cells))


def bob_type_table(spec: GameSpec, bob_type: int) -> Table:
    j = bob_type - 1
    cells = []
    for b in ACTIONS:
        row = []
        for alice in PAIRS:
            row.append((pure_payoffs(spec, PureQuadruple(alice, (b, b))).as_tuple()[2 + j],))
        cells.append(tuple(row))
    return Table(f"bob-type{bob_type}", f"Bob of type {bob_type}", f"Bob's type {bob_type}",
                 "Alice's two types", ACTIONS, tuple(_pair_label(p) for p in PAIRS), tuple(cells))


def _quadruple_table(spec: GameSpec, name: str, title: str, pick) -> Table:
    cells = tuple(
        tuple(pick(pure_payoffs(spec, PureQuadruple(alice, bob))) for bob in PAIRS)
        for alice in PAIRS
    )
    labels = tuple(_pair_label(p) for p in PAIRS)
    return Table(name, title, "Alice's two types", "Bob's two types", labels, labels, cells)


def alice_combined_table(spec: GameSpec) -> Table:
    return _quadruple_table(spec, "alice-combined", "Payoffs to Alice's two types",
                            lambda pq: (pq.a1, pq.a2))


def bob_combined_table(spec: GameSpec) -> Table:
    return _quadruple_table(spec, "bob-combined", "Payoffs to Bob's two types",
                            lambda pq: (pq.b1, pq.b2))


def combined_table(spec: GameSpec) -> Table:
    return _quadruple_table(spec, "combined", "Payoffs (Alice types),(Bob types)",
                            lambda pq: pq.as_tuple())


TABLES = {
    "one-sided": lambda spec: one_sided_table(spec).table,
    "alice-type1": lambda spec: alice_type_table(spec, 1),
    "alice-type2": lambda spec: alice_type_table(spec, 2),
    "alice-combined": alice_combined_table,
    "bob-type1": lambda spec: bob_type_table(spec, 1),
    "bob-type2": lambda spec: bob_type_table(spec, 2),
    "bob-combined": bob_combined_table,
    "combined": combined_table,
}


def build_table(name: str, spec: GameSpec) -> Table:
    try:
        return TABLES[name](spec)
    except KeyError:
        raise KeyError(f"unknown table {name!r}; known: {sorted(TABLES)}") from None


def fmt_number(x) -> str:
    """10 significant digits, no negative zero.  Magnitudes below 1e-12 are
    floating-point residue and print as 0."""
    f = float(x)
    if abs(f) < 1e-12:
        f = 0.0
    s = f"{f:.10g}"
    return "0" if s == "-0" else s


def render_table(table: Table) -> str:
    def cell_text(values):
        if len(values) == 1:
            return fmt_number(values[0])
        if len(values) == 4:
            return "({},{}),({},{})".format(*map(fmt_number, values))
        return "(" + ",".join(fmt_number(v) for v in values) + ")"

    texts = [[cell_text(v) for v in row] for row in table.cells]
    first = max(len(table.row_header), *(len(r) for r in table.row_labels))
    widths = [max(len(table.col_labels[c]), *(len(texts[r][c]) for r in range(len(texts))))
              for c in range(len(table.col_labels))]
    lines = [f"{table.title}  [rows: {table.row_header}; columns: {table.col_header}]"]
    lines.append(" " * first + "  " + "  ".join(l.rjust(w) for l, w in zip(table.col_labels, widths)))
    for label, row in zip(table.row_labels, texts):
        lines.append(label.ljust(first) + "  " + "  ".join(t.rjust(w) for t, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def table_to_json(table: Table) -> dict:
    return {
        "name": table.name,
        "rows": list(table.row_labels),
        "columns": list(table.col_labels),
        "cells": [[[float(v) for v in cell] for cell in row] for row in table.cells],
    }
