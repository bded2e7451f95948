"""The square-bit theory: elementary square, D8 dynamics, the 24 bipartite
states/effects and the four consistent two-system composites.

Indices follow the usual numbering: ``Omega[4i+j] = w_i w_j^T``,
``E[4i+j] = e_i e_j^T`` for the factorised elements, 16..23 for the
entangled ones.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .gpt import GptEffect, GptModel, GptState, Transformation, probability
from .linalg import RMatrix, RVector

HALF = Fraction(1, 2)

# (cos, sin) of k*pi/2
_COS_SIN = [(1, 0), (0, 1), (-1, 0), (0, -1)]

D8_LABELS = ["U0+", "U1+", "U2+", "U3+", "U0-", "U1-", "U2-", "U3-"]


def d8_element(k: int, s: int) -> RMatrix:
    c, sn = _COS_SIN[k % 4]
    return RMatrix([[c, -s * sn, 0], [sn, s * c, 0], [0, 0, 1]])


def d8_index(k: int, s: int) -> int:
    return k + (0 if s > 0 else 4)


# Entangled states as 1/2 * sum(sign * w_a w_b^T), effects as sum(sign * e_a e_b^T).
_ENTANGLED_STATES = {
    16: [(+1, 1, 1), (-1, 2, 2), (+1, 2, 3), (+1, 3, 2)],
    17: [(+1, 0, 3), (-1, 0, 0), (+1, 1, 1), (+1, 3, 0)],
    18: [(+1, 0, 0), (-1, 1, 1), (+1, 1, 2), (+1, 2, 1)],
    19: [(+1, 0, 0), (-1, 0, 3), (+1, 1, 3), (+1, 3, 2)],
    20: [(+1, 0, 3), (-1, 0, 0), (+1, 1, 0), (+1, 3, 1)],
    21: [(+1, 0, 0), (-1, 0, 1), (+1, 1, 1), (+1, 3, 2)],
    22: [(+1, 1, 1), (-1, 2, 1), (+1, 2, 2), (+1, 3, 0)],
    23: [(+1, 0, 1), (-1, 1, 1), (+1, 1, 2), (+1, 2, 0)],
}
_ENTANGLED_EFFECTS = {
    16: [(+1, 0, 0), (-1, 0, 3), (+1, 1, 3), (+1, 3, 2)],
    17: [(+1, 1, 1), (-1, 2, 2), (+1, 2, 3), (+1, 3, 2)],
    18: [(+1, 0, 3), (-1, 0, 0), (+1, 1, 1), (+1, 3, 0)],
    19: [(+1, 0, 0), (-1, 1, 1), (+1, 1, 2), (+1, 2, 1)],
    20: [(+1, 0, 1), (-1, 1, 1), (+1, 1, 2), (+1, 2, 0)],
    21: [(+1, 1, 1), (-1, 2, 1), (+1, 2, 2), (+1, 3, 0)],
    22: [(+1, 0, 0), (-1, 0, 1), (+1, 1, 1), (+1, 3, 2)],
    23: [(+1, 0, 3), (-1, 0, 0), (+1, 1, 0), (+1, 3, 1)],
}


@dataclass(frozen=True)
class SquareBitCatalog:
    omega: tuple[RVector, ...]
    e: tuple[RVector, ...]
    u: RVector
    d8: tuple[RMatrix, ...]
    Omega: tuple[RMatrix, ...]
    E: tuple[RMatrix, ...]

    @property
    def unit(self) -> RMatrix:
        return self.u.outer(self.u)

    def state(self, i: int) -> GptState:
        return GptState(self.Omega[i], i)

    def effect(self, i: int) -> GptEffect:
        return GptEffect(self.E[i], i)

    def local_state(self, i: int) -> GptState:
        return GptState(self.omega[i], i)

    def local_effect(self, i: int) -> GptEffect:
        return GptEffect(self.e[i], i)

    def state_index(self, m: RMatrix) -> int:
        try:
            return self.Omega.index(m)
        except ValueError:
            raise KeyError(f"{m!r} is not a catalog state") from None


def _combo(vectors, terms, scale):
    total = RMatrix.zeros(3, 3)
    for sign, a, b in terms:
        total = total + vectors[a].outer(vectors[b]).scale(sign)
    return total.scale(scale)


@lru_cache(maxsize=None)
def build_catalog() -> SquareBitCatalog:
    omega = (RVector([1, 0, 1]), RVector([0, 1, 1]), RVector([-1, 0, 1]), RVector([0, -1, 1]))
    e = tuple(RVector([HALF * x, HALF * y, HALF]) for x, y in [(1, 1), (-1, 1), (-1, -1), (1, -1)])
    u = RVector([0, 0, 1])
    d8 = tuple(d8_element(k, s) for s in (1, -1) for k in range(4))
    Omega = [omega[i].outer(omega[j]) for i in range(4) for j in range(4)]
    E = [e[i].outer(e[j]) for i in range(4) for j in range(4)]
    for n in range(16, 24):
        Omega.append(_combo(omega, _ENTANGLED_STATES[n], HALF))
        E.append(_combo(e, _ENTANGLED_EFFECTS[n], 1))
    return SquareBitCatalog(omega, e, u, d8, tuple(Omega), tuple(E))


def full_transformations(cat: SquareBitCatalog) -> tuple[Transformation, ...]:
    """``W^i (U_j^s1 x U_k^s2)`` for all i, j, k, s1, s2 (128 maps)."""
    return tuple(
        Transformation(a, b, bool(w)) for w in (0, 1) for a in cat.d8 for b in cat.d8
    )


MODEL_NAMES = ["pr", "hs", "hybrid-a", "hybrid-b"] + [f"frozen-{n}" for n in range(16, 24)] + ["classical-bit"]


def _normalize_name(name: str) -> str:
    key = name.strip().lower().replace("_", "-")
    aliases = {"hybrida": "hybrid-a", "hybridb": "hybrid-b", "classical": "classical-bit"}
    key = aliases.get(key, key)
    m = re.fullmatch(r"frozen-?\(?(\d+)\)?", key)
    if m:
        n = int(m.group(1))
        if not 16 <= n <= 23:
            raise ValueError(f"frozen model index must lie in [16, 23], got {n}")
        return f"frozen-{n}"
    if key not in MODEL_NAMES:
        raise ValueError(f"unknown model {name!r}; expected one of {', '.join(MODEL_NAMES)}")
    return key


@lru_cache(maxsize=None)
def build_model(name: str) -> GptModel:
    """Build one of the composite models.

    ``classical-bit`` is the classical bit embedded in the square (states
    w0, w2 on each side) and only serves as an engine self-test.
    """
    key = _normalize_name(name)
    cat = build_catalog()
    ident = cat.d8[d8_index(0, 1)]
    local = tuple(cat.local_state(i) for i in range(4))

    if key == "pr":
        states, effects, trans = range(24), range(16), full_transformations(cat)
    elif key == "hs":
        states, effects, trans = range(16), range(24), full_transformations(cat)
    elif key in ("hybrid-a", "hybrid-b"):
        extra = [20, 22] if key == "hybrid-a" else [21, 23]
        states = effects = list(range(16)) + extra
        ops = [cat.d8[d8_index(0, 1)], cat.d8[d8_index(2, 1)]]
        trans = tuple(Transformation(a, b) for a in ops for b in ops)
    elif key.startswith("frozen-"):
        n = int(key.split("-")[1])
        states = effects = list(range(16)) + [n]
        trans = (Transformation(ident, ident),)
        if n <= 19:
            trans += (Transformation(ident, ident, True),)
    else:  # classical-bit
        bits = [0, 2]
        states = effects = [4 * i + j for i in bits for j in bits]
        ops = [cat.d8[d8_index(0, 1)], cat.d8[d8_index(2, 1)]]
        trans = tuple(Transformation(a, b, bool(w)) for w in (0, 1) for a in ops for b in ops)
        local = tuple(cat.local_state(i) for i in bits)

    return GptModel(
        name=key,
        states=tuple(cat.state(i) for i in states),
        effects=tuple(cat.effect(j) for j in effects),
        transformations=tuple(trans),
        measurement_dimension=2,
        local_states=local,
        unit=cat.unit,
    )


def compute_table3() -> list[list[Fraction]]:
    """Grid ``[j][i] = Tr[E_i^T Omega_j]`` over all 24 x 24 pairs."""
    cat = build_catalog()
    return [[probability(cat.effect(i), cat.state(j)) for i in range(24)] for j in range(24)]


def table3_invalid_cells(grid=None) -> list[tuple[int, int, Fraction]]:
    """(state, effect, value) for every entry outside [0, 1]."""
    grid = grid or compute_table3()
    return [(j, i, v) for j, row in enumerate(grid) for i, v in enumerate(row) if not 0 <= v <= 1]


def compute_table4() -> list[list[Fraction]]:
    return [row[:16] for row in compute_table3()[:16]]


def compute_table5() -> list[list[int]]:
    """Grid ``[bob][alice]`` = index of ``U_alice Omega16 U_bob^T``.

    Rows and columns run over D8 in the order U0+..U3+, U0-..U3-.
    """
    cat = build_catalog()
    base = cat.Omega[16]
    grid = []
    for b in cat.d8:
        row = []
        for a in cat.d8:
            row.append(cat.state_index(a @ base @ b.transpose()))
        grid.append(row)
    return grid
