"""Embedded reference tables.

Used by ``--check`` mode and the acceptance tests.  Nothing here is computed;
the values are literal reference data.
"""

from __future__ import annotations

from fractions import Fraction

# Tr[E_i^T Omega_j]: one string per state j, 24 effect columns i.
_TABLE3_ROWS = [
    "1 0 0 1 0 0 0 0 0 0 0 0 1 0 0 1 0 0 1 1 0 1 1 0",
    "1 1 0 0 0 0 0 0 0 0 0 0 1 1 0 0 1 0 0 1 0 1 1 0",
    "0 1 1 0 0 0 0 0 0 0 0 0 1 1 1 0 1 1 0 0 1 0 0 1",
    "0 0 1 1 0 0 0 0 0 0 0 0 0 0 1 1 0 1 1 0 0 1 1 0",
    "1 0 0 1 1 0 0 1 0 0 0 0 0 0 0 0 1 0 0 1 0 0 1 1",
    "1 1 0 0 1 1 0 0 0 0 0 0 0 0 0 0 1 1 0 0 0 1 1 0",
    "0 1 1 0 0 1 1 0 0 0 0 0 0 0 0 0 0 1 1 0 1 1 0 0",
    "0 0 1 1 0 0 1 1 0 0 0 0 0 0 0 0 0 0 1 1 1 0 0 1",
    "0 0 0 0 1 0 0 1 1 0 0 1 0 0 0 0 1 1 0 0 1 0 0 1",
    "0 0 0 0 1 1 0 0 1 1 0 0 0 0 0 0 0 1 1 0 0 0 1 1",
    "0 0 0 0 0 1 1 0 0 1 1 0 0 0 0 0 0 0 1 1 0 1 1 0",
    "0 0 0 0 0 0 1 1 0 0 1 1 0 0 0 0 1 0 0 1 1 1 0 0",
    "0 0 0 0 0 0 0 0 1 0 0 1 1 0 0 1 0 1 1 0 1 1 0 0",
    "0 0 0 0 0 0 0 0 1 1 0 0 1 1 0 0 0 0 1 1 1 0 0 1",
    "0 0 0 0 0 0 0 0 0 1 1 0 0 1 1 0 1 0 0 1 0 0 1 1",
    "0 0 0 0 0 0 0 0 0 0 1 1 0 0 1 1 1 1 0 0 0 1 1 0",
    "1 1 0 0 1 0 0 1 0 0 1 1 0 1 1 0 3/2 1/2 -1/2 1/2 1/2 1/2 1/2 1/2",
    "0 1 1 0 1 1 0 0 1 0 0 1 0 0 1 1 1/2 3/2 1/2 -1/2 1/2 1/2 1/2 1/2",
    "0 0 1 1 0 1 1 0 1 1 0 0 1 0 0 1 -1/2 1/2 3/2 1/2 1/2 1/2 1/2 1/2",
    "1 0 0 1 0 0 1 1 0 1 1 0 1 1 0 0 1/2 -1/2 1/2 3/2 1/2 1/2 1/2 1/2",
    "0 0 1 1 1 0 0 1 1 1 0 0 0 1 1 0 1/2 1/2 1/2 1/2 1/2 -1/2 1/2 3/2",
    "1 0 0 1 1 1 0 0 0 1 1 0 0 0 1 1 1/2 1/2 1/2 1/2 -1/2 1/2 3/2 1/2",
    "1 1 0 0 0 1 1 0 0 0 1 1 1 0 0 1 1/2 1/2 1/2 1/2 1/2 3/2 1/2 -1/2",
    "0 1 1 0 0 0 1 1 1 0 0 1 1 1 0 0 1/2 1/2 1/2 1/2 3/2 1/2 -1/2 1/2",
]

TABLE3 = [[Fraction(v) for v in row.split()] for row in _TABLE3_ROWS]

# Factorised sub-table (effects 0..15 on states 0..15), kept as its own reference.
_TABLE4_ROWS = [
    "1 0 0 1 0 0 0 0 0 0 0 0 1 0 0 1",
    "1 1 0 0 0 0 0 0 0 0 0 0 1 1 0 0",
    "0 1 1 0 0 0 0 0 0 0 0 0 1 1 0 0",
    "0 0 1 1 0 0 0 0 0 0 0 0 0 0 1 1",
    "1 0 0 1 1 0 0 1 0 0 0 0 0 0 0 0",
    "1 1 0 0 1 1 0 0 0 0 0 0 0 0 0 0",
    "0 1 1 0 0 1 1 0 0 0 0 0 0 0 0 0",
    "0 0 1 1 0 0 1 1 0 0 0 0 0 0 0 0",
    "0 0 0 0 1 0 0 1 1 0 0 1 0 0 0 0",
    "0 0 0 0 1 1 0 0 1 1 0 0 0 0 0 0",
    "0 0 0 0 0 1 1 0 0 1 1 0 0 0 0 0",
    "0 0 0 0 0 0 1 1 0 0 1 1 0 0 0 0",
    "0 0 0 0 0 0 0 0 1 0 0 1 1 0 0 1",
    "0 0 0 0 0 0 0 0 1 1 0 0 1 1 0 0",
    "0 0 0 0 0 0 0 0 0 1 1 0 0 1 1 0",
    "0 0 0 0 0 0 0 0 0 0 1 1 0 0 1 1",
]

TABLE4 = [[Fraction(v) for v in row.split()] for row in _TABLE4_ROWS]

# Cells of the reference tables that contradict linearity of the outcome
# rule.  Each entry: (reason, {(state, effect): corrected value}).
#  - entangled states vs factorised effects are listed with the factor-2
#    effect normalisation, so e.g. {E0, E2, E8, E10} sums to 2 on Omega_16;
#  - the factorised effects sum to 4 u u^T, so every factorised row has four
#    ones, but the reference Omega_2 row has five;
#  - each entangled effect has u u^T-weight 1/2, so its column over the 16
#    factorised states sums to 8; reference E20/E22 (Omega_1) and E21/E23
#    (Omega_3) are swapped, giving sums 7 and 9.
TABLE3_ERRATA = [
    ("factor-2 normalisation on the entangled-state x factorised-effect block",
     {(j, i): TABLE3[j][i] / 2 for j in range(16, 24) for i in range(16) if TABLE3[j][i]}),
    ("Omega_2 row has a spurious 1 under E12",
     {(2, 12): Fraction(0)}),
    ("Omega_1: E20 and E22 swapped",
     {(1, 20): Fraction(1), (1, 22): Fraction(0)}),
    ("Omega_3: E21 and E23 swapped",
     {(3, 21): Fraction(0), (3, 23): Fraction(1)}),
]

TABLE4_ERRATA = [
    ("Omega_2: E12 and E14 swapped",
     {(2, 12): Fraction(0), (2, 14): Fraction(1)}),
]


def corrected(table, errata):
    out = [list(row) for row in table]
    for _, cells in errata:
        for (j, i), v in cells.items():
            out[j][i] = v
    return out

# (state, effect) cells marked as invalid probabilities.
TABLE3_SHADED = frozenset([
    (16, 16), (16, 18), (17, 17), (17, 19),
    (18, 16), (18, 18), (19, 17), (19, 19),
    (20, 21), (20, 23), (21, 20), (21, 22),
    (22, 21), (22, 23), (23, 20), (23, 22)
])

# Image of Omega_16 under (Alice op, Bob op): rows = Bob's op, columns =
# Alice's op, both ordered U0+, U1+, U2+, U3+, U0-, U1-, U2-, U3-.
TABLE5 = [
    (16, 17, 18, 19, 23, 22, 21, 20),  # Bob U0+
    (17, 18, 19, 16, 20, 23, 22, 21),  # Bob U1+
    (18, 19, 16, 17, 21, 20, 23, 22),  # Bob U2+
    (19, 16, 17, 18, 22, 21, 20, 23),  # Bob U3+
    (20, 23, 22, 21, 17, 18, 19, 16),  # Bob U0-
    (21, 20, 23, 22, 18, 19, 16, 17),  # Bob U1-
    (22, 21, 20, 23, 19, 16, 17, 18),  # Bob U2-
    (23, 22, 21, 20, 16, 17, 18, 19),  # Bob U3-
]

# Non-optimal classical strategies listed alongside the optimum.
# Encodings are given as the set of strings sent as symbol 0; the decoder as
# the set of symbol pairs (a, b) on which Charlie answers "equal".
TABLE1 = [
    {"alice_zero": ("00",), "bob_zero": ("01",), "decide_equal": (), "p_avg": Fraction(3, 4)},
    {"alice_zero": ("00", "11"), "bob_zero": ("00", "10"), "decide_equal": (), "p_avg": Fraction(3, 4)},
    {"alice_zero": ("00",), "bob_zero": ("00", "10"), "decide_equal": ((0, 0),), "p_avg": Fraction(3, 4)},
]

CLASSICAL_OPTIMUM = Fraction(13, 16)

# Composition table for the toy-bit protocol: (k, k') -> index of psi.
TOY_COMPOSITION = {
    (0, 0): 0, (1, 1): 0, (2, 2): 0, (3, 3): 0,
    (0, 1): 1, (1, 0): 1, (2, 3): 1, (3, 2): 1,
    (0, 2): 2, (2, 0): 2, (1, 3): 2, (3, 1): 2,
    (0, 3): 3, (3, 0): 3, (1, 2): 3, (2, 1): 3,
}
