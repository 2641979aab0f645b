"""Guesser strategies, from trivial baselines to exact-posterior greedy.

A strategy sees only its own guesses and the feedback bits (plus the
drawn card under complete feedback) and must name a label in 1..n each
round. All strategies are deterministic given their visible history and
their private random stream, so transcripts replay exactly.

Tie-breaking is always "smallest label".
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np

from .game import Feedback, GameConfig, GameError, InvalidLabel


class WrongFeedbackMode(GameError):
    """Strategy requires a feedback mode the game is not running."""


class Strategy(ABC):
    """Base class; subclasses keep whatever state they need between rounds.

    The engine drives the loop: reset(config, rng) once, then
    next_guess() / observe(correct, revealed) each round. ``revealed``
    is None under partial feedback.
    """

    name = "abstract"
    randomized = False

    def reset(self, config: GameConfig, rng: np.random.Generator) -> None:
        self.config = config
        self.rng = rng

    @abstractmethod
    def next_guess(self) -> int:
        ...

    def observe(self, correct: bool, revealed: int | None = None) -> None:
        pass


class FixedLabel(Strategy):
    """Always guess one fixed label; payoff is exactly m in every game."""

    name = "fixed"

    def __init__(self, label: int = 1):
        self.label = label

    def reset(self, config, rng):
        super().reset(config, rng)
        if not 1 <= self.label <= config.n:
            raise InvalidLabel(f"label {self.label} outside 1..{config.n}")

    def next_guess(self) -> int:
        return self.label


class StickyAdvance(Strategy):
    """Stick with the smallest label whose copies are not all guessed out.

    Guesses label j until j has been guessed correctly m times, then
    advances to j+1. If the current label's remaining copies were missed
    while other labels were active, the strategy simply stays on it; once
    label n is used up it keeps guessing n.
    """

    name = "sticky"

    def reset(self, config, rng):
        super().reset(config, rng)
        self.current = 1
        self.hits = 0

    def next_guess(self) -> int:
        return self.current

    def observe(self, correct, revealed=None):
        if correct:
            self.hits += 1
            if self.hits == self.config.m:
                if self.current < self.config.n:
                    self.current += 1
                    self.hits = 0


class UniformRandom(Strategy):
    """Guess a uniformly random label each round (private stream).

    Guesses are drawn in one block at reset so that bulk simulation and
    round-by-round play consume the stream identically.
    """

    name = "random"
    randomized = True

    def reset(self, config, rng):
        super().reset(config, rng)
        self.guesses = rng.integers(1, config.n + 1, size=config.rounds)
        self.t = 0

    def next_guess(self) -> int:
        guess = int(self.guesses[self.t])
        self.t += 1
        return guess


class GreedyBound(Strategy):
    """Maximize the hypergeometric upper bound on the success probability.

    Guesses argmax_k (m - b_k) / (mn - a_k - sum_y), restricted to labels
    with a positive denominator. Comparisons are exact (integer
    cross-multiplication), ties go to the smallest label.
    """

    name = "greedy-bound"

    def reset(self, config, rng):
        super().reset(config, rng)
        self.a = [0] * config.n
        self.b = [0] * config.n
        self.sum_y = 0
        self._last = 0

    def next_guess(self) -> int:
        m = self.config.m
        d = self.config.rounds - self.sum_y
        best = 0
        best_num = best_den = 0
        for k in range(1, self.config.n + 1):
            den = d - self.a[k - 1]
            if den <= 0:
                continue
            num = m - self.b[k - 1]
            if best == 0 or num * best_den > best_num * den:
                best, best_num, best_den = k, num, den
        if best == 0:
            best = 1  # unreachable while rounds remain; keep the game legal
        self._last = best
        return best

    def observe(self, correct, revealed=None):
        self.a[self._last - 1] += 1
        if correct:
            self.b[self._last - 1] += 1
            self.sum_y += 1


class ExactGreedy(Strategy):
    """Guess the label with the exactly largest posterior probability.

    Maintains the exact conditional distribution of the next card given
    the visible history (see :mod:`cardlab.oracle`) and guesses its
    argmax. Only available at oracle-feasible sizes.
    """

    name = "exact-greedy"

    def __init__(self, limit: int | None = None):
        self.limit = limit

    def reset(self, config, rng):
        from .oracle import OracleLimitExceeded, PosteriorState, oracle_limit

        super().reset(config, rng)
        limit = self.limit if self.limit is not None else oracle_limit()
        if config.rounds > limit:
            raise OracleLimitExceeded(
                f"mn={config.rounds} exceeds enumeration limit {limit}"
            )
        self.belief = PosteriorState.initial(config.m, config.n)
        self._last = 0

    def next_guess(self) -> int:
        weights = self.belief.next_card_weights()
        best = max(range(self.config.n), key=lambda i: (weights[i], -i))
        self._last = best + 1
        return self._last

    def observe(self, correct, revealed=None):
        self.belief = self.belief.updated(self._last, bool(correct))


class GreedyRemaining(Strategy):
    """Complete feedback only: guess a label with the most copies left."""

    name = "greedy-remaining"

    def reset(self, config, rng):
        super().reset(config, rng)
        if config.feedback is not Feedback.COMPLETE:
            raise WrongFeedbackMode("greedy-remaining needs complete feedback")
        self.remaining = np.full(config.n, config.m, dtype=np.int64)

    def next_guess(self) -> int:
        return int(np.argmax(self.remaining)) + 1

    def observe(self, correct, revealed=None):
        self.remaining[revealed - 1] -= 1


KINDS = {
    "fixed": FixedLabel,
    "sticky": StickyAdvance,
    "random": UniformRandom,
    "greedy-bound": GreedyBound,
    "exact-greedy": ExactGreedy,
    "greedy-remaining": GreedyRemaining,
}


@dataclass(frozen=True)
class StrategySpec:
    """Parseable description of a strategy, e.g. "sticky" or "fixed:3"."""

    kind: str
    params: tuple = field(default_factory=tuple)

    def build(self) -> Strategy:
        cls = KINDS[self.kind]
        return cls(*self.params)

    @property
    def randomized(self) -> bool:
        return KINDS[self.kind].randomized

    def __str__(self) -> str:
        if self.params:
            return f"{self.kind}:" + ":".join(str(p) for p in self.params)
        return self.kind


def parse_strategy(text: str) -> StrategySpec:
    """Parse the CLI strategy format: fixed:K, sticky, random, greedy-bound,
    exact-greedy, greedy-remaining."""
    head, _, tail = text.strip().partition(":")
    if head not in KINDS:
        raise ValueError(f"unknown strategy {text!r}; choose from {sorted(KINDS)}")
    if head == "fixed":
        if not tail:
            raise ValueError("fixed needs a label, e.g. fixed:1")
        return StrategySpec("fixed", (int(tail),))
    if tail:
        raise ValueError(f"strategy {head!r} takes no parameter")
    return StrategySpec(head)


def replay_next_guess(strategy: Strategy, config: GameConfig,
                      rng: np.random.Generator, g: list[int], y: list[int],
                      revealed: list[int] | None = None) -> int:
    """Feed a (g, y) prefix into a fresh strategy and return its next guess.

    Asserts the strategy reproduces the recorded guesses on the way, which
    is the determinism/replay contract every strategy must satisfy.
    """
    strategy.reset(config, rng)
    for i in range(len(g)):
        guess = strategy.next_guess()
        if guess != g[i]:
            raise AssertionError(
                f"replay diverged at round {i + 1}: {guess} != {g[i]}"
            )
        strategy.observe(bool(y[i]), revealed[i] if revealed else None)
    return strategy.next_guess()
