"""Pure classical strategies for the two-bit ALC game.

Alice and Bob each map their string to one bit; Charlie sees both bits and
answers "equal" or "not equal".  A pure strategy is a 12-bit integer:

* bits 0-3: Alice's bit for strings 00, 01, 10, 11
* bits 4-7: Bob's bit for the same strings
* bits 8-11: decoder, bit ``8 + 2a + b`` set iff Charlie says "equal" on ``(a, b)``
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

STRINGS = ("00", "01", "10", "11")
EQUAL = "equal"
NOT_EQUAL = "not_equal"
N_STRATEGIES = 1 << 12


@dataclass(frozen=True, order=True)
class PureClassicalStrategy:
    alice_enc: tuple[int, int, int, int]
    bob_enc: tuple[int, int, int, int]
    # decoder[2a + b] is True when Charlie answers "equal" on symbols (a, b)
    decoder: tuple[bool, bool, bool, bool]

    def __post_init__(self):
        for name, vals in (("alice_enc", self.alice_enc), ("bob_enc", self.bob_enc)):
            if len(vals) != 4 or any(v not in (0, 1) for v in vals):
                raise ValueError(f"{name} must assign a bit to each of the 4 strings")
        if len(self.decoder) != 4:
            raise ValueError("decoder must answer on all 4 symbol pairs")

    @classmethod
    def from_index(cls, index: int) -> "PureClassicalStrategy":
        if not 0 <= index < N_STRATEGIES:
            raise ValueError(f"strategy index must lie in [0, {N_STRATEGIES}), got {index}")
        bit = lambda i: (index >> i) & 1  # noqa: E731
        return cls(
            tuple(bit(i) for i in range(4)),
            tuple(bit(4 + i) for i in range(4)),
            tuple(bool(bit(8 + i)) for i in range(4)),
        )

    @classmethod
    def from_partition(cls, alice_zero: Iterable[str], bob_zero: Iterable[str],
                       decide_equal: Iterable[tuple[int, int]]) -> "PureClassicalStrategy":
        """Strings in ``*_zero`` are sent as 0, the rest as 1."""
        az, bz = set(alice_zero), set(bob_zero)
        eq = set(decide_equal)
        return cls(
            tuple(0 if s in az else 1 for s in STRINGS),
            tuple(0 if s in bz else 1 for s in STRINGS),
            tuple((a, b) in eq for a in (0, 1) for b in (0, 1)),
        )

    @property
    def index(self) -> int:
        out = 0
        for i, v in enumerate(self.alice_enc):
            out |= v << i
        for i, v in enumerate(self.bob_enc):
            out |= v << (4 + i)
        for i, v in enumerate(self.decoder):
            out |= int(v) << (8 + i)
        return out

    def answer(self, x: int, y: int) -> str:
        a, b = self.alice_enc[x], self.bob_enc[y]
        return EQUAL if self.decoder[2 * a + b] else NOT_EQUAL

    def describe(self) -> dict:
        def groups(enc):
            return {str(bit): [s for s, v in zip(STRINGS, enc) if v == bit] for bit in (0, 1)}

        return {
            "index": self.index,
            "alice": groups(self.alice_enc),
            "bob": groups(self.bob_enc),
            "decoder": {f"{a}{b}": EQUAL if self.decoder[2 * a + b] else NOT_EQUAL
                        for a in (0, 1) for b in (0, 1)},
        }


def evaluate(strategy: PureClassicalStrategy) -> Fraction:
    """Average success over the 16 equiprobable string pairs."""
    wins = 0
    for x in range(4):
        for y in range(4):
            wins += (strategy.answer(x, y) == EQUAL) == (x == y)
    return Fraction(wins, 16)


def all_strategies() -> list[PureClassicalStrategy]:
    return [PureClassicalStrategy.from_index(i) for i in range(N_STRATEGIES)]


def exhaustive_optimum() -> tuple[Fraction, list[PureClassicalStrategy]]:
    """Exact maximum over all 4096 pure strategies and every maximiser (index order)."""
    best = Fraction(-1)
    winners: list[PureClassicalStrategy] = []
    for s in all_strategies():
        v = evaluate(s)
        if v > best:
            best, winners = v, [s]
        elif v == best:
            winners.append(s)
    return best, winners


def optimal_strategy() -> PureClassicalStrategy:
    """00 -> 0 and the rest -> 1 on both sides; "equal" only on (0, 0)."""
    return PureClassicalStrategy.from_partition(["00"], ["00"], [(0, 0)])


def first_bit_strategy() -> PureClassicalStrategy:
    """Both parties send the first bit of their string; Charlie compares."""
    return PureClassicalStrategy.from_partition(["00", "01"], ["00", "01"], [(0, 0), (1, 1)])


def evaluate_mixture(weights: Sequence[Fraction], strategies: Sequence[PureClassicalStrategy]) -> Fraction:
    """Success of shared randomness over pure strategies, computed pair by pair."""
    if len(weights) != len(strategies):
        raise ValueError("one weight per strategy")
    if any(w < 0 for w in weights) or sum(weights) != 1:
        raise ValueError("weights must form a probability distribution")
    total = Fraction(0)
    for x in range(4):
        for y in range(4):
            p_right = sum(
                (w for w, s in zip(weights, strategies) if (s.answer(x, y) == EQUAL) == (x == y)),
                Fraction(0),
            )
            total += p_right
    return total / 16


def random_mixture(rng: random.Random, size: int) -> tuple[list[Fraction], list[PureClassicalStrategy]]:
    raw = [rng.randint(1, 20) for _ in range(size)]
    total = sum(raw)
    weights = [Fraction(r, total) for r in raw]
    strategies = [PureClassicalStrategy.from_index(rng.randrange(N_STRATEGIES)) for _ in range(size)]
    return weights, strategies


def relabel_alice(strategy: PureClassicalStrategy) -> PureClassicalStrategy:
    """Swap Alice's two channel symbols and let the decoder undo the swap."""
    dec = strategy.decoder
    return PureClassicalStrategy(
        tuple(1 - v for v in strategy.alice_enc),
        strategy.bob_enc,
        tuple(dec[2 * (1 - a) + b] for a in (0, 1) for b in (0, 1)),
    )


def table1_check(rows) -> list[dict]:
    out = []
    for i, row in enumerate(rows):
        s = PureClassicalStrategy.from_partition(row["alice_zero"], row["bob_zero"], row["decide_equal"])
        v = evaluate(s)
        out.append({"row": i + 1, "strategy": s.describe(), "p_avg": v,
                    "expected": row["p_avg"], "match": v == row["p_avg"]})
    return out


def classical_report() -> dict:
    from .expected import CLASSICAL_OPTIMUM, TABLE1

    best, winners = exhaustive_optimum()
    rows = table1_check(TABLE1)
    opt = optimal_strategy()
    return {
        "optimum": f"{best.numerator}/{best.denominator}",
        "expected_optimum": f"{CLASSICAL_OPTIMUM.numerator}/{CLASSICAL_OPTIMUM.denominator}",
        "maximizers": len(winners),
        "first_maximizer": winners[0].describe(),
        "reference_strategy": opt.describe(),
        "reference_is_maximizer": opt in winners,
        "perfect_exists": best == 1,
        "table1": [
            {**r, "p_avg": f"{r['p_avg'].numerator}/{r['p_avg'].denominator}",
             "expected": f"{r['expected'].numerator}/{r['expected'].denominator}"}
            for r in rows
        ],
        "match": best == CLASSICAL_OPTIMUM and opt in winners and all(r["match"] for r in rows),
    }
