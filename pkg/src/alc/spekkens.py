"""Spekkens toy bits as support sets over ontic states.

Ontic states of one toy bit are ``1..4`` (bit ``a - 1``); a pair carries 16
ontic states ``(a.b)`` at bit ``4(a-1) + (b-1)``.  Epistemic states are
uniform over their support, so a bitmask is all we keep.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

ONTIC = (1, 2, 3, 4)


def ontic_bit(a: int, b: int) -> int:
    return 4 * (a - 1) + (b - 1)


@dataclass(frozen=True)
class ToyEpistemic:
    support: int
    bipartite: bool = True

    @classmethod
    def single(cls, *ontic: int) -> "ToyEpistemic":
        mask = 0
        for a in ontic:
            mask |= 1 << (a - 1)
        return cls(mask, False)

    @classmethod
    def pairs(cls, *pairs: tuple[int, int]) -> "ToyEpistemic":
        mask = 0
        for a, b in pairs:
            mask |= 1 << ontic_bit(a, b)
        return cls(mask, True)

    @classmethod
    def product(cls, left: "ToyEpistemic", right: "ToyEpistemic") -> "ToyEpistemic":
        return cls.pairs(*((a, b) for a in left.ontic() for b in right.ontic()))

    def ontic(self) -> list:
        if not self.bipartite:
            return [a for a in ONTIC if self.support >> (a - 1) & 1]
        return [(a, b) for a in ONTIC for b in ONTIC if self.support >> ontic_bit(a, b) & 1]

    def size(self) -> int:
        return bin(self.support).count("1")

    def label(self) -> str:
        if not self.bipartite:
            return "v".join(str(a) for a in self.ontic())
        return " v ".join(f"({a}.{b})" for a, b in self.ontic())


def pure_type(state: ToyEpistemic) -> str | None:
    """``"single"``, ``"type-1"`` (product of two 2-sets), ``"type-2"`` (a
    perfect matching between the parties' ontic values) or ``None``."""
    if not state.bipartite:
        return "single" if state.size() == 2 else None
    pts = state.ontic()
    if len(pts) != 4:
        return None
    left = {a for a, _ in pts}
    right = {b for _, b in pts}
    if len(left) == 2 and len(right) == 2:
        return "type-1"  # 4 distinct points inside a 2x2 grid fill it
    if len(left) == 4 and len(right) == 4:
        return "type-2"
    return None


def is_valid(state: ToyEpistemic) -> bool:
    return pure_type(state) is not None


@dataclass(frozen=True)
class ToyPermutation:
    # mapping[a - 1] is the image of ontic state a
    mapping: tuple[int, int, int, int]

    def __post_init__(self):
        if sorted(self.mapping) != list(ONTIC):
            raise ValueError(f"{self.mapping} is not a permutation of 1..4")

    def __call__(self, a: int) -> int:
        return self.mapping[a - 1]

    def compose(self, first: "ToyPermutation") -> "ToyPermutation":
        """``self o first``."""
        return ToyPermutation(tuple(self(first(a)) for a in ONTIC))

    @classmethod
    def from_cycles(cls, *cycles: tuple[int, ...]) -> "ToyPermutation":
        img = {a: a for a in ONTIC}
        for cyc in cycles:
            for i, a in enumerate(cyc):
                img[a] = cyc[(i + 1) % len(cyc)]
        return cls(tuple(img[a] for a in ONTIC))


U = (
    ToyPermutation.from_cycles(),
    ToyPermutation.from_cycles((1, 2), (3, 4)),
    ToyPermutation.from_cycles((1, 3), (2, 4)),
    ToyPermutation.from_cycles((1, 4), (2, 3)),
)

PSI = tuple(
    ToyEpistemic.pairs(*((a, U[k](a)) for a in ONTIC)) for k in range(4)
)


@dataclass(frozen=True)
class ToyMeasurement:
    outcomes: tuple[ToyEpistemic, ...]

    def __post_init__(self):
        if not self.outcomes:
            raise ValueError("a measurement needs at least one outcome")
        bip = self.outcomes[0].bipartite
        full = (1 << (16 if bip else 4)) - 1
        seen = 0
        for o in self.outcomes:
            if o.bipartite != bip:
                raise ValueError("outcomes must all have the same arity")
            if seen & o.support:
                raise ValueError("measurement blocks overlap")
            seen |= o.support
        if seen != full:
            raise ValueError("measurement blocks do not cover every ontic state")


# S_I .. S_IV coincide with psi_0 .. psi_3
M = ToyMeasurement(PSI)
M_PRIME = ToyMeasurement((PSI[0], ToyEpistemic(PSI[1].support | PSI[2].support | PSI[3].support)))


def apply_local(pa: ToyPermutation, pb: ToyPermutation, state: ToyEpistemic) -> ToyEpistemic:
    if not state.bipartite:
        raise ValueError("apply_local acts on a pair of toy bits")
    return ToyEpistemic.pairs(*((pa(a), pb(b)) for a, b in state.ontic()))


def outcome_distribution(state: ToyEpistemic, m: ToyMeasurement) -> list[Fraction]:
    if state.bipartite != m.outcomes[0].bipartite:
        raise ValueError("state and measurement act on different systems")
    n = state.size()
    if n == 0:
        raise ValueError("empty support")
    return [Fraction(bin(state.support & o.support).count("1"), n) for o in m.outcomes]


def psi_index(state: ToyEpistemic) -> int | None:
    try:
        return PSI.index(state)
    except ValueError:
        return None


def composition_table() -> dict[tuple[int, int], int]:
    """``(k, k') -> j`` with ``U_k o U_k'[psi_0] = psi_j``."""
    out = {}
    for k in range(4):
        for kp in range(4):
            j = psi_index(apply_local(U[k], U[kp], PSI[0]))
            if j is None:
                raise AssertionError(f"U{k} o U{kp} leaves the psi family")
            out[(k, kp)] = j
    return out


def toy_protocol(measurement: ToyMeasurement = M) -> Fraction:
    """Exact average success: Charlie says "equal" iff the first outcome clicks."""
    total = Fraction(0)
    for k in range(4):
        for kp in range(4):
            p_first = outcome_distribution(apply_local(U[k], U[kp], PSI[0]), measurement)[0]
            total += p_first if k == kp else 1 - p_first
    return total / 16


def klein_table() -> list[list[int]]:
    """``[i][j] = k`` with ``U_i o U_j = U_k``."""
    return [[U.index(U[i].compose(U[j])) for j in range(4)] for i in range(4)]


def is_klein_group(table: list[list[int]]) -> bool:
    n = len(table)
    identity = [i for i in range(n) if table[i] == list(range(n))]
    if len(identity) != 1:
        return False
    e = identity[0]
    for i in range(n):
        if table[i][i] != e:  # every element is its own inverse
            return False
        for j in range(n):
            if table[i][j] != table[j][i]:
                return False
            for k in range(n):
                if table[table[i][j]][k] != table[i][table[j][k]]:
                    return False
    return True


def single_pure_states() -> list[ToyEpistemic]:
    return [ToyEpistemic.single(a, b) for a, b in combinations(ONTIC, 2)]


def spekkens_report() -> dict:
    from .expected import TOY_COMPOSITION

    comp = composition_table()
    mismatches = [f"{k}{kp}" for (k, kp), j in sorted(comp.items()) if TOY_COMPOSITION[(k, kp)] != j]
    succ_m, succ_mp = toy_protocol(M), toy_protocol(M_PRIME)
    per_pair = {}
    for k in range(4):
        for kp in range(4):
            dist = outcome_distribution(apply_local(U[k], U[kp], PSI[0]), M)
            per_pair[f"{k}{kp}"] = {
                "state": f"psi{comp[(k, kp)]}",
                "outcome": ["S_I", "S_II", "S_III", "S_IV"][dist.index(1)],
                "answer": "equal" if dist[0] == 1 else "not_equal",
                "correct": (dist[0] == 1) == (k == kp),
            }
    return {
        "composition_table": {f"{k}{kp}": f"psi{j}" for (k, kp), j in sorted(comp.items())},
        "composition_mismatches": mismatches,
        "per_pair": per_pair,
        "success_M": f"{succ_m.numerator}/{succ_m.denominator}",
        "success_M_prime": f"{succ_mp.numerator}/{succ_mp.denominator}",
        "klein_table": klein_table(),
        "klein_group": is_klein_group(klein_table()),
        "match": not mismatches and succ_m == 1 and succ_mp == 1,
    }
