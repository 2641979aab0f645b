"""cardlab: simulation and verification lab for card guessing with partial feedback."""

from .game import (
    DeckExhausted,
    Feedback,
    GameConfig,
    GameError,
    IncompleteTranscript,
    IndexOutOfRange,
    InvalidLabel,
    Transcript,
    new_deck,
    payoff,
    play_game,
    play_round,
    tallies_at,
)
from .strategies import (
    ExactGreedy,
    FixedLabel,
    GreedyBound,
    GreedyRemaining,
    StickyAdvance,
    Strategy,
    StrategySpec,
    UniformRandom,
    WrongFeedbackMode,
    parse_strategy,
)
from .oracle import (
    InfeasibleHistory,
    OracleLimitExceeded,
    PosteriorState,
    RandomizedStrategyUnsupported,
    next_card_distribution,
    optimal_value,
    oracle_limit,
    strategy_exact_value,
    verify_3_1,
)

__version__ = "0.1.0"
