"""Game engine for the card guessing game with partial feedback.

A deck of m*n cards holds m copies of each label 1..n. Every round the
Dealer draws the next card of a uniformly shuffled deck, the Guesser
names a label, and learns only whether it matched (partial feedback) or
additionally sees the drawn card (complete feedback). The engine owns
the deck and hands strategies nothing beyond the feedback, so
information hiding is structural rather than a convention.

Labels are 1-based everywhere in the public API.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .rng import game_streams


class GameError(Exception):
    """Base class for game engine errors."""


class DeckExhausted(GameError):
    """A draw was requested after all m*n cards were dealt."""


class InvalidLabel(GameError):
    """A guess or label argument lies outside 1..n."""


class IncompleteTranscript(GameError):
    """An operation needs a finished game but got a partial transcript."""


class IndexOutOfRange(GameError):
    """A round index lies outside the transcript's valid range."""


class Feedback(str, Enum):
    PARTIAL = "partial"
    COMPLETE = "complete"


@dataclass(frozen=True)
class GameConfig:
    """One game instance: m copies of each of n labels, feedback mode, seed.

    The seed fully determines the game: the deck shuffle and the
    strategy's private random stream are both derived from it (see
    :mod:`cardlab.rng`), so a transcript can always be reproduced from
    its config alone.
    """

    m: int
    n: int
    feedback: Feedback = Feedback.PARTIAL
    seed: int = 0

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise ValueError(f"m and n must be >= 1, got m={self.m}, n={self.n}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        object.__setattr__(self, "feedback", Feedback(self.feedback))

    @property
    def rounds(self) -> int:
        return self.m * self.n


@dataclass
class DeckState:
    """Shuffled deck plus a draw cursor; the cursor only moves forward."""

    order: np.ndarray
    cursor: int
    config: GameConfig

    def remaining(self) -> int:
        return self.config.rounds - self.cursor


def new_deck(config: GameConfig, rng: np.random.Generator) -> DeckState:
    """Uniform multiset permutation of the m-of-each deck (Fisher-Yates)."""
    base = np.repeat(np.arange(1, config.n + 1, dtype=np.int64), config.m)
    return DeckState(order=rng.permutation(base), cursor=0, config=config)


def play_round(deck: DeckState, guess: int) -> tuple[bool, int | None]:
    """Draw the next card against ``guess``.

    Returns (correct, revealed); revealed is the drawn label under
    complete feedback and None under partial feedback.
    """
    if deck.cursor >= deck.config.rounds:
        raise DeckExhausted(f"all {deck.config.rounds} cards already drawn")
    if not 1 <= guess <= deck.config.n:
        raise InvalidLabel(f"guess {guess} outside 1..{deck.config.n}")
    drawn = int(deck.order[deck.cursor])
    deck.cursor += 1
    correct = drawn == guess
    revealed = drawn if deck.config.feedback is Feedback.COMPLETE else None
    return correct, revealed


@dataclass
class Transcript:
    """Guess and feedback history of one game; the deck is never stored."""

    config: GameConfig
    g: list[int] = field(default_factory=list)
    y: list[int] = field(default_factory=list)

    def append(self, guess: int, correct: bool) -> None:
        self.g.append(int(guess))
        self.y.append(int(correct))

    @property
    def complete(self) -> bool:
        return len(self.g) == self.config.rounds

    def to_dict(self) -> dict:
        return {
            "m": self.config.m,
            "n": self.config.n,
            "feedback": self.config.feedback.value,
            "seed": self.config.seed,
            "g": list(self.g),
            "y": list(self.y),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "Transcript":
        config = GameConfig(
            m=data["m"], n=data["n"], feedback=Feedback(data["feedback"]),
            seed=data["seed"],
        )
        tr = cls(config=config, g=[int(v) for v in data["g"]],
                 y=[int(v) for v in data["y"]])
        if len(tr.g) != len(tr.y):
            raise ValueError("g and y must have equal length")
        return tr

    @classmethod
    def from_json(cls, text: str) -> "Transcript":
        return cls.from_dict(json.loads(text))


def payoff(tr: Transcript) -> int:
    """Total number of correct guesses over the full game."""
    if not tr.complete:
        raise IncompleteTranscript(
            f"transcript has {len(tr.g)} of {tr.config.rounds} rounds"
        )
    return sum(tr.y)


@dataclass
class TallyTable:
    """Per-label guess counts a(k,t) and correct counts b(k,t) before round t."""

    a: list[int]
    b: list[int]
    t: int

    def a_of(self, k: int) -> int:
        return self.a[k - 1]

    def b_of(self, k: int) -> int:
        return self.b[k - 1]

    @property
    def sum_y(self) -> int:
        return sum(self.b)


def tallies_at(tr: Transcript, t: int) -> TallyTable:
    """Tallies over rounds 1..t-1; valid for 1 <= t <= len(g)+1."""
    if not 1 <= t <= len(tr.g) + 1:
        raise IndexOutOfRange(f"t={t} outside 1..{len(tr.g) + 1}")
    n = tr.config.n
    a = [0] * n
    b = [0] * n
    for i in range(t - 1):
        k = tr.g[i]
        a[k - 1] += 1
        b[k - 1] += tr.y[i]
    return TallyTable(a=a, b=b, t=t)


def play_game(config: GameConfig, strategy) -> Transcript:
    """Run one full game of config.rounds rounds.

    The engine resets the strategy, feeds it only legal information
    (its feedback bit, plus the drawn card under complete feedback),
    and records the transcript. All randomness derives from config.seed.
    """
    deck_rng, strat_rng, _ = game_streams(config.seed)
    deck = new_deck(config, deck_rng)
    strategy.reset(config, strat_rng)
    tr = Transcript(config=config)
    for _ in range(config.rounds):
        guess = strategy.next_guess()
        correct, revealed = play_round(deck, guess)
        strategy.observe(correct, revealed)
        tr.append(guess, correct)
    return tr


def play_game_on_deck(config: GameConfig, strategy, order,
                      strat_rng: np.random.Generator | None = None) -> Transcript:
    """Run a game against a preset deck order (for exact enumeration).

    ``order`` is any sequence of labels forming a valid m-of-each deck.
    Deterministic strategies ignore ``strat_rng``.
    """
    if strat_rng is None:
        strat_rng = np.random.default_rng(0)
    deck = DeckState(order=np.asarray(order, dtype=np.int64), cursor=0,
                     config=config)
    strategy.reset(config, strat_rng)
    tr = Transcript(config=config)
    for _ in range(config.rounds):
        guess = strategy.next_guess()
        correct, revealed = play_round(deck, guess)
        strategy.observe(correct, revealed)
        tr.append(guess, correct)
    return tr
