"""Bayesian Battle of Sexes played with factorizable and EPR probabilities."""
from .equilibrium import (
    EquilibriumReport,
    brute_force_best_response,
    classical_gradients,
    find_classical_bne,
    find_pure_bne,
    quantum_bne,
    verify_classical,
)
from .game import (
    BOS_FIG1,
    GameSpec,
    PayoffQuadruple,
    PureQuadruple,
    epr_payoffs,
    epr_payoffs_mu,
    mixed_payoffs,
    one_sided_table,
    pure_payoffs,
)
from .probset import (
    TAU,
    BehaviorSet,
    IndependentOctet,
    StrategyProfile,
    chsh_delta,
    classify,
    from_factorizable,
    is_factorizable,
    marginals,
    reconstruct,
    validate,
)
from .quantum_source import DirectionConfig, PlanarDirection, TwoQubitState, generate

__version__ = "0.1.0"
