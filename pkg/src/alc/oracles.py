"""Brute-force reference solvers used to cross-check the simplex kernel.

These deliberately share no code with :mod:`alc.linalg`'s simplex: they
enumerate every column subset, solve the square system by their own Gaussian
elimination, and keep the nonnegative solutions (basic feasible solutions).
Only usable on tiny problems.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence


def _solve_exact(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Optional[list[Fraction]]:
    """Unique solution of ``A x = b`` (A m-by-k, k <= m) or None.

    None when the columns are dependent or the system is inconsistent.
    """
    m = len(A)
    k = len(A[0]) if m else 0
    M = [list(A[i]) + [b[i]] for i in range(m)]
    pivots = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            return None
        M[r], M[p] = M[p], M[r]
        pv = M[r][c]
        M[r] = [x / pv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    if any(M[i][k] != 0 for i in range(r, m)):
        return None
    return [M[i][k] for i in range(k)]


def basic_feasible_solutions(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[list[Fraction]]:
    """Every basic feasible solution of ``A x = b, x >= 0``."""
    m = len(A)
    n = len(A[0])
    found = []
    seen = set()
    if all(x == 0 for x in b):
        found.append([Fraction(0)] * n)
        seen.add(tuple(found[0]))
    for size in range(1, min(m, n) + 1):
        for cols in combinations(range(n), size):
            sub = [[A[i][j] for j in cols] for i in range(m)]
            sol = _solve_exact(sub, b)
            if sol is None or any(v < 0 for v in sol):
                continue
            x = [Fraction(0)] * n
            for j, v in zip(cols, sol):
                x[j] = v
            t = tuple(x)
            if t not in seen:
                seen.add(t)
                found.append(x)
    return found


def oracle_feasible(A, b) -> bool:
    return bool(basic_feasible_solutions(A, b))


def oracle_max(A, b, c) -> tuple[str, Optional[Fraction]]:
    """("infeasible"|"unbounded"|"feasible", optimum) by vertex and ray enumeration."""
    vertices = basic_feasible_solutions(A, b)
    if not vertices:
        return "infeasible", None
    n = len(A[0])
    # extreme rays: BFS of {A d = 0, sum d = 1, d >= 0}
    ray_A = [list(row) for row in A] + [[Fraction(1)] * n]
    ray_b = [Fraction(0)] * len(A) + [Fraction(1)]
    for d in basic_feasible_solutions(ray_A, ray_b):
        if sum(ci * di for ci, di in zip(c, d)) > 0:
            return "unbounded", None
    best = max(sum(ci * xi for ci, xi in zip(c, x)) for x in vertices)
    return "feasible", best
