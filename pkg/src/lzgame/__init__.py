"""Predictive games in which Skeptic bets with universal-coding predictors.

Incremental (LZ78) parsing and Lynch-Davisson type counting become betting
strategies against constant or Markov forecasts. The package also has the
word-level diagnostics those strategies are judged by, and a Szilard-engine
reading of the capital process.
"""

from .analysis import (
    DivergenceDecomposition,
    InequalityViolation,
    ZivReport,
    compression_rate,
    divergence_decomposition,
    fisher_statistic,
    ld_capital_exact,
    ld_deficiency,
    phrase_stats,
    r_hat,
    weighted_kl,
    ziv_delta_bound,
    ziv_report,
)
from .core import (
    Alphabet,
    CountTable,
    EndOfSequence,
    GameError,
    InvalidArgument,
    NumericalFailure,
    PrudenceViolation,
    UnsupportedProtocol,
    Word,
    conditional_count,
    count_cyclic,
    count_ordinary,
)
from .game import (
    ConstantForecaster,
    MarkovForecaster,
    SzilardConfig,
    Trajectory,
    WorkLedger,
    exact_capital,
    run,
    step,
    szilard_work,
)
from .lz import ParseState, complexity, log_q_lz, parse, q_lz, q_lz_all
from .markov import (
    MarkovKernel,
    StationaryDistribution,
    embed_first_order,
    empirical_kernel,
    entropy_rate,
    kl_divergence,
    stationary,
)
from .realities import (
    BiasedFlip,
    IIDSampler,
    MarkovSampler,
    Periodic,
    Replay,
    biased_flip,
    iid_sampler,
    markov_sampler,
    periodic,
    replay,
)
from .strategies import (
    LDStrategy,
    LZStrategy,
    NoBet,
    RestartWrapper,
    ld_strategy,
    lz_strategy,
    make_strategy,
    restart_wrapper,
)

__version__ = "0.1.0"
