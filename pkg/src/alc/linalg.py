"""Exact rational vectors, matrices and a Bland's-rule simplex kernel.

Everything here works on :class:`fractions.Fraction` (the simplex tableau on
plain integers); no floating point ever enters.  Matrices are flattened row-major whenever they become LP columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence, Union

Rational = Fraction
Scalar = Union[int, Fraction]

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class DimensionError(ValueError):
    pass


def _q(x: Scalar) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"refusing to convert {type(x).__name__} to an exact rational")


class RVector:
    """Immutable fixed-length vector of rationals."""

    __slots__ = ("entries", "_hash")

    def __init__(self, entries: Iterable[Scalar]):
        self.entries = tuple(_q(x) for x in entries)
        self._hash = hash(self.entries)

    @classmethod
    def zeros(cls, n: int) -> "RVector":
        return cls([0] * n)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i: int) -> Fraction:
        return self.entries[i]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RVector) and self.entries == other.entries

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "RVector(" + ", ".join(str(x) for x in self.entries) + ")"

    def _check(self, other: "RVector") -> None:
        if len(self) != len(other):
            raise DimensionError(f"length mismatch: {len(self)} vs {len(other)}")

    def __add__(self, other: "RVector") -> "RVector":
        self._check(other)
        return RVector(a + b for a, b in zip(self.entries, other.entries))

    def __sub__(self, other: "RVector") -> "RVector":
        self._check(other)
        return RVector(a - b for a, b in zip(self.entries, other.entries))

    def __neg__(self) -> "RVector":
        return RVector(-a for a in self.entries)

    def scale(self, c: Scalar) -> "RVector":
        c = _q(c)
        return RVector(c * a for a in self.entries)

    def dot(self, other: "RVector") -> Fraction:
        self._check(other)
        return sum((a * b for a, b in zip(self.entries, other.entries)), Fraction(0))

    def outer(self, other: "RVector") -> "RMatrix":
        return RMatrix([[a * b for b in other.entries] for a in self.entries])


class RMatrix:
    """Immutable dense rational matrix, stored row-major."""

    __slots__ = ("rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable[Scalar]]):
        rows = tuple(tuple(_q(x) for x in row) for row in rows)
        if not rows:
            raise DimensionError("matrix needs at least one row")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionError("ragged rows")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = width
        self._hash = hash(rows)

    @classmethod
    def identity(cls, n: int) -> "RMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int) -> "RMatrix":
        return cls([[0] * c for _ in range(r)])

    @classmethod
    def from_columns(cls, columns: Sequence[RVector]) -> "RMatrix":
        if not columns:
            raise DimensionError("no columns")
        n = len(columns[0])
        return cls([[col[i] for col in columns] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self.rows)
        return f"RMatrix([{body}])"

    def _check_same(self, other: "RMatrix") -> None:
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other: "RMatrix") -> "RMatrix":
        self._check_same(other)
        return RMatrix(
            [a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)
        )

    def __sub__(self, other: "RMatrix") -> "RMatrix":
        self._check_same(other)
        return RMatrix(
            [a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)
        )

    def __neg__(self) -> "RMatrix":
        return RMatrix([-a for a in row] for row in self.rows)

    def scale(self, c: Scalar) -> "RMatrix":
        c = _q(c)
        return RMatrix([c * a for a in row] for row in self.rows)

    def __matmul__(self, other):
        if isinstance(other, RVector):
            if self.ncols != len(other):
                raise DimensionError(f"cannot apply {self.shape} matrix to length-{len(other)} vector")
            return RVector(
                sum((a * b for a, b in zip(row, other.entries)), Fraction(0)) for row in self.rows
            )
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.rows))
        return RMatrix(
            [sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols]
            for row in self.rows
        )

    def transpose(self) -> "RMatrix":
        return RMatrix(zip(*self.rows))

    @property
    def T(self) -> "RMatrix":
        return self.transpose()

    def trace(self) -> Fraction:
        if self.nrows != self.ncols:
            raise DimensionError("trace of a non-square matrix")
        return sum((self.rows[i][i] for i in range(self.nrows)), Fraction(0))

    def flatten(self) -> RVector:
        """Row-major vectorisation (the fixed convention for LP columns)."""
        return RVector(x for row in self.rows for x in row)

    def column(self, j: int) -> RVector:
        return RVector(row[j] for row in self.rows)

    def row(self, i: int) -> RVector:
        return RVector(self.rows[i])


def trace_product(effect: RMatrix, state: RMatrix) -> Fraction:
    """Return ``Tr[effect^T state]`` exactly, i.e. the entrywise inner product."""
    if effect.shape != (3, 3) or state.shape != (3, 3):
        raise DimensionError(f"trace_product expects 3x3 arguments, got {effect.shape} and {state.shape}")
    return sum(
        (a * b for r1, r2 in zip(effect.rows, state.rows) for a, b in zip(r1, r2)),
        Fraction(0),
    )


@dataclass(frozen=True)
class LpProblem:
    """``A x = b, x >= 0`` with an optional objective to maximise."""

    constraint_matrix: RMatrix
    rhs: RVector
    objective: Optional[RVector] = None

    def __post_init__(self):
        m, n = self.constraint_matrix.shape
        if len(self.rhs) != m:
            raise DimensionError(f"rhs has length {len(self.rhs)}, expected {m}")
        if self.objective is not None and len(self.objective) != n:
            raise DimensionError(f"objective has length {len(self.objective)}, expected {n}")

    @property
    def n_vars(self) -> int:
        return self.constraint_matrix.ncols

    @property
    def n_rows(self) -> int:
        return self.constraint_matrix.nrows


@dataclass(frozen=True)
class LpOutcome:
    status: str
    witness: Optional[RVector] = None
    certificate: Optional[RVector] = None
    value: Optional[Fraction] = None

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE


def check_witness(problem: LpProblem, witness: RVector) -> bool:
    """Exact check that ``witness`` is a nonnegative solution of ``A x = b``."""
    if len(witness) != problem.n_vars or any(x < 0 for x in witness):
        return False
    return problem.constraint_matrix @ witness == problem.rhs


def check_farkas(problem: LpProblem, y: RVector) -> bool:
    """Exact check of ``y^T A <= 0`` entrywise and ``y^T b > 0``."""
    if len(y) != problem.n_rows:
        return False
    yA = problem.constraint_matrix.transpose() @ y
    return all(v <= 0 for v in yA) and y.dot(problem.rhs) > 0


def _lcm_denominators(values) -> int:
    out = 1
    for v in values:
        out = lcm(out, v.denominator)
    return out


class _Tableau:
    """Fraction-free tableau for ``A x + a = b`` (one artificial per row).

    Integer pivoting: the stored integer tableau ``T`` equals ``d * B^-1 [A | I | b]``
    where ``d`` is the current basis determinant (up to sign), so every entry
    stays an exact integer and no gcd is ever taken.  Row ``i`` is pre-scaled
    by ``scale[i]`` to clear denominators; duals are mapped back through it.
    Artificial columns sit at ``n .. n+m-1`` and double as the ``B^-1`` block.
    """

    def __init__(self, A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]):
        m = len(b)
        n = len(A[0]) if m else 0
        self.m, self.n = m, n
        self.scale = []
        rows = []
        for i in range(m):
            s = 1 if b[i] >= 0 else -1
            L = _lcm_denominators(list(A[i]) + [b[i]]) * s
            self.scale.append(L)
            row = [int(a * L) for a in A[i]]
            row.extend(1 if k == i else 0 for k in range(m))
            row.append(int(b[i] * L))
            rows.append(row)
        self.rows = rows
        self.d = 1
        self.basis = [n + i for i in range(m)]
        self.active_rows = list(range(m))

    def pivot(self, r: int, c: int) -> None:
        rows, d = self.rows, self.d
        prow = rows[r]
        p = prow[c]
        for i in self.active_rows:
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if f:
                rows[i] = [(x * p - f * pk) // d for x, pk in zip(row, prow)]
            elif p != d:
                rows[i] = [(x * p) // d for x in row]
        # row r keeps its entries; its implicit denominator becomes p
        self.d = p
        self.basis[r] = c

    def _scaled_cost(self, cost: Sequence[Fraction]) -> tuple[list[int], int]:
        L = _lcm_denominators(cost)
        return [int(c * L) for c in cost], L

    def reduced_costs(self, icost: Sequence[int], ncols: int) -> list[int]:
        """Integers with the sign of ``c_j - c_B B^-1 A_j`` (times a positive factor)."""
        d = self.d
        cb = [(self.rows[i], icost[self.basis[i]]) for i in self.active_rows]
        cb = [(row, c) for row, c in cb if c]
        sgn = 1 if d > 0 else -1
        out = []
        for j in range(ncols):
            z = 0
            for row, c in cb:
                a = row[j]
                if a:
                    z += c * a
            out.append((icost[j] * d - z) * sgn)
        return out

    def run(self, cost: Sequence[Fraction], allowed: int) -> bool:
        """Maximise ``cost . x`` by Bland's rule over columns ``< allowed``.

        Returns False if the objective is unbounded.
        """
        icost, _ = self._scaled_cost(cost)
        while True:
            rc = self.reduced_costs(icost, allowed)
            entering = next((j for j in range(allowed) if rc[j] > 0), None)
            if entering is None:
                return True
            sgn = 1 if self.d > 0 else -1
            best = None
            for i in self.active_rows:
                row = self.rows[i]
                a = row[entering] * sgn
                if a > 0:
                    ratio = Fraction(row[-1] * sgn, a)
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], entering)

    def duals(self, cost: Sequence[Fraction]) -> list[Fraction]:
        """``y^T = c_B B^-1`` in the original, unscaled row space."""
        n, m, d = self.n, self.m, self.d
        y = [0] * m
        for i in self.active_rows:
            c = cost[self.basis[i]]
            if not c:
                continue
            row = self.rows[i]
            for k in range(m):
                if row[n + k]:
                    y[k] += c * row[n + k]
        return [Fraction(y[k]) * self.scale[k] / d for k in range(m)]

    def primal(self) -> list[Fraction]:
        x = [Fraction(0)] * self.n
        for i in self.active_rows:
            j = self.basis[i]
            if j < self.n:
                x[j] = Fraction(self.rows[i][-1], self.d)
        return x

    def value_of_artificials(self) -> Fraction:
        return sum(
            (Fraction(self.rows[i][-1], self.d) for i in self.active_rows if self.basis[i] >= self.n),
            Fraction(0),
        )


def _phase_one(problem: LpProblem) -> tuple[_Tableau, Optional[RVector]]:
    """Drive artificials to zero.  Returns (tableau, farkas) with farkas set iff infeasible."""
    tab = _Tableau(problem.constraint_matrix.rows, problem.rhs.entries)
    n, m = tab.n, tab.m
    # maximise -sum(artificials)
    cost = [Fraction(0)] * n + [Fraction(-1)] * m
    tab.run(cost, n)
    if tab.value_of_artificials() > 0:
        # the optimal phase-1 dual, negated, satisfies y^T A <= 0 < y^T b
        y = [-v for v in tab.duals(cost)]
        return tab, RVector(y)
    # pivot zero-level artificials out of the basis, dropping redundant rows
    for i in list(tab.active_rows):
        if tab.basis[i] < n:
            continue
        row = tab.rows[i]
        col = next((j for j in range(n) if row[j] != 0), None)
        if col is None:
            tab.active_rows.remove(i)
        else:
            tab.pivot(i, col)
    return tab, None


def solve_feasibility(problem: LpProblem) -> LpOutcome:
    """Decide whether ``A x = b, x >= 0`` has a solution.

    Returns an exact witness, or an exact Farkas vector ``y`` with
    ``y^T A <= 0`` and ``y^T b > 0``.  Deterministic for a fixed problem.
    """
    if problem.objective is not None:
        raise ValueError("solve_feasibility takes a problem without objective; use solve_lp_max")
    tab, farkas = _phase_one(problem)
    if farkas is not None:
        return LpOutcome(INFEASIBLE, certificate=farkas)
    return LpOutcome(FEASIBLE, witness=RVector(tab.primal()))


def solve_lp_max(problem: LpProblem) -> LpOutcome:
    """Maximise ``c.x`` subject to ``A x = b, x >= 0`` by two-phase simplex.

    On a bounded optimum the certificate is the optimal dual ``y`` (so
    ``A^T y >= c`` and ``b.y`` equals the value).
    """
    if problem.objective is None:
        raise ValueError("solve_lp_max needs an objective")
    tab, farkas = _phase_one(problem)
    if farkas is not None:
        return LpOutcome(INFEASIBLE, certificate=farkas)
    n, m = tab.n, tab.m
    cost = list(problem.objective.entries) + [Fraction(0)] * m
    if not tab.run(cost, n):
        return LpOutcome(UNBOUNDED, witness=RVector(tab.primal()))
    x = RVector(tab.primal())
    value = problem.objective.dot(x)
    return LpOutcome(FEASIBLE, witness=x, certificate=RVector(tab.duals(cost)), value=value)
