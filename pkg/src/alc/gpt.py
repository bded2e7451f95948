"""Finite generalised-probabilistic-theory models.

States and effects are exact 3x3 matrices (two systems) or length-3 vectors
(one system); the outcome rule is ``Tr[e^T w]`` which, for vectors, is the
dot product.  A :class:`GptModel` is a finite list of extremal states,
extremal effects and reversible transformations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from .linalg import DimensionError, RMatrix, RVector, trace_product

Rep = Union[RMatrix, RVector]


def _bipartite(rep: Rep) -> bool:
    return isinstance(rep, RMatrix)


@dataclass(frozen=True)
class GptState:
    matrix: Rep
    catalog_index: Optional[int] = field(default=None, compare=False)

    @property
    def bipartite(self) -> bool:
        return _bipartite(self.matrix)


@dataclass(frozen=True)
class GptEffect:
    matrix: Rep
    catalog_index: Optional[int] = field(default=None, compare=False)

    @property
    def bipartite(self) -> bool:
        return _bipartite(self.matrix)


def probability(effect: GptEffect, state: GptState) -> Fraction:
    e, w = effect.matrix, state.matrix
    if _bipartite(e) != _bipartite(w):
        raise DimensionError("effect and state use different representations")
    if _bipartite(e):
        return trace_product(e, w)
    return e.dot(w)


@dataclass(frozen=True)
class Transformation:
    """``X -> W^swap (A X B^T)``; the swap is matrix transposition."""

    alice_op: RMatrix
    bob_op: RMatrix
    swap: bool = False

    def act(self, m: RMatrix) -> RMatrix:
        out = self.alice_op @ m @ self.bob_op.transpose()
        return out.transpose() if self.swap else out

    def compose(self, first: "Transformation") -> "Transformation":
        """The transformation ``self o first`` (apply ``first``, then ``self``)."""
        A2, B2 = self.alice_op, self.bob_op
        A1, B1 = first.alice_op, first.bob_op
        if not first.swap:
            return Transformation(A2 @ A1, B2 @ B1, self.swap)
        # A2 (B1 X^T A1^T) B2^T = W[(B2 A1) X (A2 B1)^T]
        return Transformation(B2 @ A1, A2 @ B1, not self.swap)


class StateCatalog:
    """Exact-equality lookup from matrices back to catalog indices."""

    def __init__(self, states: Sequence[GptState]):
        self._index = {s.matrix: s.catalog_index for s in states}
        self._states = {s.catalog_index: s for s in states}

    def lookup(self, rep: Rep) -> Optional[int]:
        return self._index.get(rep)

    def get(self, index: int) -> GptState:
        return self._states[index]

    def __contains__(self, rep: Rep) -> bool:
        return rep in self._index


def apply(t: Transformation, state: GptState, catalog: Optional[StateCatalog] = None) -> GptState:
    if not state.bipartite:
        raise DimensionError("apply() acts on bipartite states")
    out = t.act(state.matrix)
    idx = catalog.lookup(out) if catalog is not None else None
    return GptState(out, idx)


@dataclass(frozen=True)
class GptModel:
    name: str
    states: tuple[GptState, ...]
    effects: tuple[GptEffect, ...]
    transformations: tuple[Transformation, ...]
    measurement_dimension: int = 2
    # elementary states each party may prepare for product encodings
    local_states: tuple[GptState, ...] = ()
    unit: Optional[RMatrix] = None

    @property
    def state_indices(self) -> list[int]:
        return [s.catalog_index for s in self.states]

    @property
    def effect_indices(self) -> list[int]:
        return [e.catalog_index for e in self.effects]

    def catalog(self) -> StateCatalog:
        return StateCatalog(self.states)

    def effect(self, index: int) -> GptEffect:
        for e in self.effects:
            if e.catalog_index == index:
                return e
        raise KeyError(index)

    def state(self, index: int) -> GptState:
        for s in self.states:
            if s.catalog_index == index:
                return s
        raise KeyError(index)

    def local_ops(self) -> tuple[list[RMatrix], list[RMatrix]]:
        """Alice's and Bob's local operation sets (non-swap transformations).

        Raises if the non-swap part is not a full product ``G_A x G_B``; the
        correlated search relies on that structure.
        """
        alice: list[RMatrix] = []
        bob: list[RMatrix] = []
        pairs = set()
        for t in self.transformations:
            if t.swap:
                continue
            if t.alice_op not in alice:
                alice.append(t.alice_op)
            if t.bob_op not in bob:
                bob.append(t.bob_op)
            pairs.add((t.alice_op, t.bob_op))
        if len(pairs) != len(alice) * len(bob):
            raise ValueError(f"{self.name}: local transformations are not a product group")
        return alice, bob


@dataclass(frozen=True)
class Violation:
    kind: str  # "probability" or "closure"
    detail: str
    value: Optional[Fraction] = None


def validate_model(model: GptModel) -> list[Violation]:
    """Every (effect, state) value must lie in [0, 1]; every transformation
    must map model states onto model states."""
    out: list[Violation] = []
    for e in model.effects:
        for s in model.states:
            v = probability(e, s)
            if not 0 <= v <= 1:
                out.append(Violation(
                    "probability",
                    f"effect {e.catalog_index} on state {s.catalog_index}",
                    v,
                ))
    cat = model.catalog()
    for k, t in enumerate(model.transformations):
        for s in model.states:
            if not s.bipartite:
                continue
            if t.act(s.matrix) not in cat:
                out.append(Violation("closure", f"transformation {k} maps state {s.catalog_index} outside the model"))
    return out


@dataclass(frozen=True)
class Measurement:
    """Outcome effects stored as nonnegative combinations of extremal effects."""

    weights: tuple[Mapping[int, Fraction], ...]
    outcomes: tuple[RMatrix, ...]

    @classmethod
    def from_weights(cls, model: GptModel, weights: Sequence[Mapping[int, Fraction]]) -> "Measurement":
        mats = []
        for w in weights:
            if any(v < 0 for v in w.values()):
                raise ValueError("measurement weights must be nonnegative")
            total = RMatrix.zeros(3, 3)
            for idx, v in sorted(w.items()):
                if v:
                    total = total + model.effect(idx).matrix.scale(v)
            mats.append(total)
        return cls(tuple(dict(w) for w in weights), tuple(mats))

    def is_complete(self, unit: RMatrix) -> bool:
        total = RMatrix.zeros(*unit.shape)
        for m in self.outcomes:
            total = total + m
        return total == unit

    def distribution(self, state: GptState) -> list[Fraction]:
        return [trace_product(m, state.matrix) for m in self.outcomes]
