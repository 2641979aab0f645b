"""Brute-force ground truth for small decks.

Two exact representations of the Guesser's knowledge back each other up:

* explicit enumeration: materialize every multiset permutation of the
  deck and filter the ones consistent with a (guess, feedback) history;
* posterior filtering: a PosteriorState maps each possible remaining-deck
  composition to an integer weight and is updated one round at a time.

Both are exact (integer weights, Fraction probabilities) and are tested
against each other exhaustively at small sizes. Enumeration is the
transparent route; filtering is what the incremental consumers (exact
greedy play, the coupled process) use, since it costs O(support) per
round instead of O(orderings) per query.

The feasibility gate everywhere is mn <= oracle_limit() (default 12,
override with the CARDGAME_ORACLE_LIMIT environment variable).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd, inf

from .game import GameConfig, GameError, play_game_on_deck, payoff

_DEFAULT_ORACLE_LIMIT = 12
_DEFAULT_VALUE_LIMIT = 8


class OracleError(GameError):
    """Base class for oracle errors."""


class OracleLimitExceeded(OracleError):
    """The configuration is too large for exhaustive enumeration."""


class InfeasibleHistory(OracleError):
    """No deck ordering is consistent with the supplied history."""


class RandomizedStrategyUnsupported(OracleError):
    """Exact expectation requires a deterministic strategy."""


def oracle_limit() -> int:
    """Enumeration cap on mn; CARDGAME_ORACLE_LIMIT overrides the default."""
    return int(os.environ.get("CARDGAME_ORACLE_LIMIT", _DEFAULT_ORACLE_LIMIT))


def _check_limit(config: GameConfig, limit: int | None) -> None:
    cap = oracle_limit() if limit is None else limit
    if config.rounds > cap:
        raise OracleLimitExceeded(
            f"mn={config.rounds} exceeds enumeration limit {cap}"
        )


def orderings_count(m: int, n: int) -> int:
    """Number of distinct deck orderings, mn! / (m!)^n."""
    return factorial(m * n) // factorial(m) ** n


def enumerate_orderings(m: int, n: int):
    """Yield every distinct ordering of the m-of-each deck as a label tuple.

    Lexicographic order; deterministic across calls.
    """
    counts = [m] * n
    seq: list[int] = []
    total = m * n

    def rec(remaining: int):
        if remaining == 0:
            yield tuple(seq)
            return
        for k in range(n):
            if counts[k]:
                counts[k] -= 1
                seq.append(k + 1)
                yield from rec(remaining - 1)
                seq.pop()
                counts[k] += 1

    yield from rec(total)


def consistent_orderings(m: int, n: int, g: list[int], y: list[int]):
    """Yield orderings whose prefix agrees with the history: position i
    holds label g[i] exactly when y[i] is 1."""
    t = len(g)
    for order in enumerate_orderings(m, n):
        if all((order[i] == g[i]) == bool(y[i]) for i in range(t)):
            yield order


@dataclass(frozen=True)
class PosteriorState:
    """Exact posterior over the remaining deck given a visible history.

    ``counts`` maps each still-possible remaining composition (tuple of
    per-label copy counts) to a positive integer weight proportional to
    its conditional probability. A wrong guess marginalizes over the
    unknown drawn card; a right guess removes the guessed label. Because
    feedback constrains only past positions, the remaining deck is an
    exchangeable arrangement of its composition, so this is a complete
    description of the Guesser's knowledge.
    """

    m: int
    n: int
    counts: dict

    @classmethod
    def initial(cls, m: int, n: int) -> "PosteriorState":
        return cls(m=m, n=n, counts={(m,) * n: 1})

    @classmethod
    def from_history(cls, m: int, n: int, g: list[int], y: list[int]) -> "PosteriorState":
        state = cls.initial(m, n)
        for guess, fb in zip(g, y):
            state = state.updated(guess, bool(fb))
        return state

    def remaining(self) -> int:
        for comp in self.counts:
            return sum(comp)
        return 0

    def next_card_weights(self) -> list[int]:
        """Unnormalized next-card weights per label; divide by their sum."""
        w = [0] * self.n
        for comp, wt in self.counts.items():
            for i, r in enumerate(comp):
                if r:
                    w[i] += wt * r
        return w

    def next_card_probs(self) -> tuple[Fraction, ...]:
        w = self.next_card_weights()
        total = sum(w)
        return tuple(Fraction(v, total) for v in w)

    def next_card_prob(self, k: int) -> Fraction:
        w = self.next_card_weights()
        return Fraction(w[k - 1], sum(w))

    def updated(self, guess: int, correct: bool) -> "PosteriorState":
        """Condition on one round of feedback for ``guess``."""
        ki = guess - 1
        new: dict = {}
        if correct:
            for comp, wt in self.counts.items():
                r = comp[ki]
                if r:
                    key = comp[:ki] + (r - 1,) + comp[ki + 1:]
                    new[key] = new.get(key, 0) + wt * r
        else:
            for comp, wt in self.counts.items():
                for j, r in enumerate(comp):
                    if r and j != ki:
                        key = comp[:j] + (r - 1,) + comp[j + 1:]
                        new[key] = new.get(key, 0) + wt * r
        if not new:
            raise InfeasibleHistory(
                f"no ordering matches guess={guess}, correct={correct}"
            )
        return PosteriorState(m=self.m, n=self.n, counts=new)

    def fingerprint(self) -> tuple:
        """Hashable canonical form (weights normalized by their gcd)."""
        g = 0
        for wt in self.counts.values():
            g = gcd(g, wt)
        return tuple(sorted((comp, wt // g) for comp, wt in self.counts.items()))


def next_card_distribution(config: GameConfig, g: list[int], y: list[int], *,
                           limit: int | None = None,
                           method: str = "filter") -> tuple[Fraction, ...]:
    """Exact distribution of the next drawn card given the visible history.

    ``method="filter"`` uses the posterior filter; ``method="enumerate"``
    counts consistent orderings explicitly. They agree exactly.
    """
    _check_limit(config, limit)
    if len(g) != len(y):
        raise ValueError("g and y must have equal length")
    if method == "filter":
        state = PosteriorState.from_history(config.m, config.n, g, y)
        return state.next_card_probs()
    if method == "enumerate":
        t = len(g)
        hits = [0] * config.n
        total = 0
        for order in consistent_orderings(config.m, config.n, g, y):
            total += 1
            hits[order[t] - 1] += 1
        if total == 0:
            raise InfeasibleHistory("no ordering matches the history")
        return tuple(Fraction(h, total) for h in hits)
    raise ValueError(f"unknown method {method!r}")


@dataclass
class Verify31Report:
    """Outcome of the exhaustive conditional-probability bound check."""

    m: int
    n: int
    histories: int
    checks: int
    max_slack: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "mn_checked": self.m * self.n,
            "histories": self.histories,
            "max_slack": self.max_slack,
            "pass": self.passed,
        }


def _state_key(state: PosteriorState, a: tuple, b: tuple) -> tuple:
    return (state.fingerprint(), a, b)


def _canonical_state_key(state: PosteriorState, a: tuple, b: tuple) -> tuple:
    """Verification-state key invariant under label permutations.

    Labels are sorted by (a_k, b_k, weight profile); the posterior and
    the tallies are relabeled accordingly and serialized. Relabeling a
    history relabels its whole check set, so one orbit representative
    covers every member's checks with identical slack values.
    """
    g = 0
    for wt in state.counts.values():
        g = gcd(g, wt)
    items = [(comp, wt // g) for comp, wt in sorted(state.counts.items())]
    sigs = []
    for k in range(state.n):
        profile = tuple(sorted((wt, comp[k]) for comp, wt in items))
        sigs.append((a[k], b[k], profile, k))
    sigs.sort()
    perm = [k for _, _, _, k in sigs]
    relabeled: dict = {}
    for comp, wt in items:
        key = tuple(comp[p] for p in perm)
        relabeled[key] = relabeled.get(key, 0) + wt
    return (
        tuple(sorted(relabeled.items())),
        tuple(a[p] for p in perm),
        tuple(b[p] for p in perm),
    )


def verify_3_1(config: GameConfig, *, limit: int | None = None,
               tol: float = 1e-12, mode: str = "canonical") -> Verify31Report:
    """Check, over every reachable history and every legal guess, that

        P(hit | history, guess k)  <=  (m - b_k) / (mn - a_k - sum_y)

    whenever the right side's denominator is positive. All probabilities
    are exact, so the check itself is integer arithmetic; max_slack is
    the largest LHS - RHS seen (negative when the bound is strict).

    ``mode`` picks how aggressively equivalent histories are merged:
      * "tree"      - walk the raw history tree, no merging;
      * "state"     - merge histories with identical (posterior, a, b);
                      lossless, since that tuple determines every future
                      check value;
      * "canonical" - additionally merge label-permuted copies (default).

    All modes cover every reachable history's checks and report the same
    max_slack; the agreement is validated by tests at small sizes.
    """
    _check_limit(config, limit)
    m, n, mn = config.m, config.n, config.rounds
    if mode == "tree":
        key_of = None
    elif mode == "state":
        key_of = _state_key
    elif mode == "canonical":
        key_of = _canonical_state_key
    else:
        raise ValueError(f"unknown mode {mode!r}")
    zeros = (0,) * n
    init = PosteriorState.initial(m, n)
    stack = [(init, zeros, zeros)]
    seen = {key_of(init, zeros, zeros)} if key_of else None
    histories = 0
    checks = 0
    max_slack = -inf
    passed = True
    while stack:
        state, a, b = stack.pop()
        histories += 1
        sy = sum(b)
        weights = state.next_card_weights()
        denom = sum(weights)
        push = state.remaining() >= 2
        for k in range(n):
            bound_den = mn - a[k] - sy
            if bound_den > 0:
                checks += 1
                # q_k <= (m - b_k)/bound_den  <=>  slack_num <= 0
                slack_num = weights[k] * bound_den - (m - b[k]) * denom
                slack = slack_num / (denom * bound_den)
                if slack > max_slack:
                    max_slack = slack
                if slack_num > 0 and slack > tol:
                    passed = False
            if push:
                a2 = a[:k] + (a[k] + 1,) + a[k + 1:]
                if weights[k] > 0:
                    b2 = b[:k] + (b[k] + 1,) + b[k + 1:]
                    child = state.updated(k + 1, True)
                    if seen is None:
                        stack.append((child, a2, b2))
                    else:
                        key = key_of(child, a2, b2)
                        if key not in seen:
                            seen.add(key)
                            stack.append((child, a2, b2))
                if weights[k] < denom:
                    child = state.updated(k + 1, False)
                    if seen is None:
                        stack.append((child, a2, b))
                    else:
                        key = key_of(child, a2, b)
                        if key not in seen:
                            seen.add(key)
                            stack.append((child, a2, b))
    return Verify31Report(m=m, n=n, histories=histories, checks=checks,
                          max_slack=max_slack, passed=passed)


def optimal_value(config: GameConfig, *, limit: int | None = None,
                  memo: str = "belief") -> Fraction:
    """Exact optimal expected payoff under partial feedback.

    Full-width recursion over the Guesser's information states:
    V(state) = max_k [ q_k (1 + V(state|k,hit)) + (1-q_k) V(state|k,miss) ].

    memo selects the recursion's cache key:
      * "belief"    - the posterior fingerprint (lossless merge, default);
      * "canonical" - the fingerprint after relabeling by a label
                      signature sort (merges label-symmetric states);
      * "history"   - the raw (g, y) history, i.e. the plain game tree;
                      only sensible for tiny mn and capped at mn <= 6.

    All three agree; the agreement is part of the test suite.
    """
    cap = _DEFAULT_VALUE_LIMIT if limit is None else limit
    if config.rounds > cap:
        raise OracleLimitExceeded(
            f"mn={config.rounds} exceeds optimal-value limit {cap}"
        )
    if memo == "history" and config.rounds > 6:
        raise OracleLimitExceeded("history-keyed recursion capped at mn <= 6")
    if memo not in ("belief", "canonical", "history"):
        raise ValueError(f"unknown memo mode {memo!r}")

    n = config.n
    cache: dict = {}

    def key_of(state: PosteriorState, hist):
        if memo == "history":
            return hist
        if memo == "canonical":
            return _canonical_fingerprint(state)
        return state.fingerprint()

    def value(state: PosteriorState, hist) -> Fraction:
        if state.remaining() == 0:
            return Fraction(0)
        key = key_of(state, hist)
        got = cache.get(key)
        if got is not None:
            return got
        weights = state.next_card_weights()
        denom = sum(weights)
        best = Fraction(-1)
        for k in range(n):
            q = Fraction(weights[k], denom)
            v = Fraction(0)
            if weights[k] > 0:
                v += q * (1 + value(state.updated(k + 1, True),
                                    hist + ((k + 1, 1),)))
            if weights[k] < denom:
                v += (1 - q) * value(state.updated(k + 1, False),
                                     hist + ((k + 1, 0),))
            if v > best:
                best = v
        cache[key] = best
        return best

    return value(PosteriorState.initial(config.m, config.n), ())


def _canonical_fingerprint(state: PosteriorState) -> tuple:
    """Fingerprint invariant under label permutations (signature sort).

    Labels get sorted by their weight profile across compositions; states
    that differ only by renaming labels then serialize identically.
    Ambiguous ties can under-merge but never over-merge, since equal
    serializations literally are equal relabeled states.
    """
    items = sorted(state.counts.items())
    sigs = []
    for k in range(state.n):
        sigs.append((tuple(sorted((wt, comp[k]) for comp, wt in items)), k))
    sigs.sort()
    perm = [k for _, k in sigs]
    relabeled: dict = {}
    for comp, wt in items:
        key = tuple(comp[p] for p in perm)
        relabeled[key] = relabeled.get(key, 0) + wt
    g = 0
    for wt in relabeled.values():
        g = gcd(g, wt)
    return tuple(sorted((comp, wt // g) for comp, wt in relabeled.items()))


def strategy_exact_value(strategy, config: GameConfig, *,
                         limit: int | None = None) -> Fraction:
    """Exact expected payoff of a deterministic strategy.

    Averages the strategy's payoff over every deck ordering with equal
    weight; no sampling is involved.
    """
    _check_limit(config, limit)
    if getattr(strategy, "randomized", False):
        raise RandomizedStrategyUnsupported(
            f"{strategy.name} is randomized; exact traversal needs determinism"
        )
    total = 0
    count = 0
    for order in enumerate_orderings(config.m, config.n):
        tr = play_game_on_deck(config, strategy, order)
        total += payoff(tr)
        count += 1
    return Fraction(total, count)
