"""Deterministic random-stream derivation for reproducible parallel runs.

A 64-bit master seed plus a game index determine every random choice in a
run. Per-game seeds come from splitmix64 applied to the master seed and
game index, so results never depend on how games are scheduled across
workers. Each game then derives independent child streams (deck shuffle,
strategy randomness, coupling randomness) from a numpy SeedSequence, so
adding one consumer never perturbs the others.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(state: int) -> int:
    """One splitmix64 finalizer step (Steele, Lea, Flood 2014)."""
    z = state & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def game_seed(master_seed: int, game_index: int) -> int:
    """Per-game 64-bit seed, a pure function of (master_seed, game_index).

    Equals the (game_index+1)-th output of the splitmix64 stream seeded
    with master_seed, which is the standard way to fan one seed out into
    arbitrarily many uncorrelated ones.
    """
    return splitmix64((master_seed + _GOLDEN * (game_index + 1)) & _MASK64)


def game_streams(
    seed: int,
) -> tuple[np.random.Generator, np.random.Generator, np.random.Generator]:
    """Child generators (deck, strategy, coupling) for one game seed."""
    deck_ss, strat_ss, couple_ss = np.random.SeedSequence(seed).spawn(3)
    return (
        np.random.default_rng(deck_ss),
        np.random.default_rng(strat_ss),
        np.random.default_rng(couple_ss),
    )
