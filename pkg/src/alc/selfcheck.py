"""Randomised and exhaustive property suites bundled into the reproduction report.

Each suite returns a dict with at least ``passed`` (bool) and some counts.
All randomness is seeded.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .classical import evaluate, evaluate_mixture, random_mixture
from .engine import CORRELATED, EncodingStrategy, decide_decoder, encode, local_op_indices
from .expected import CLASSICAL_OPTIMUM
from .linalg import (
    FEASIBLE,
    LpProblem,
    RMatrix,
    RVector,
    check_farkas,
    check_witness,
    solve_feasibility,
    solve_lp_max,
)
from .oracles import oracle_feasible, oracle_max
from .quantum import seesaw
from .spekkens import is_klein_group, klein_table
from .squarebit import build_catalog, build_model


def random_lp(rng: random.Random, max_rows: int = 4, max_cols: int = 6, bound: int = 5):
    m, n = rng.randint(1, max_rows), rng.randint(1, max_cols)
    a = [[Fraction(rng.randint(-bound, bound)) for _ in range(n)] for _ in range(m)]
    b = [Fraction(rng.randint(-bound, bound)) for _ in range(m)]
    c = [Fraction(rng.randint(-bound, bound)) for _ in range(n)]
    return a, b, c


def lp_oracle_suite(instances: int = 1000, seed: int = 0) -> dict:
    """Feasibility, witnesses, Farkas vectors and optimal values against vertex enumeration."""
    rng = random.Random(seed)
    disagreements = bad_certificates = 0
    statuses: dict[str, int] = {}
    for _ in range(instances):
        a, b, c = random_lp(rng)
        p = LpProblem(RMatrix(a), RVector(b))
        out = solve_feasibility(p)
        if out.feasible != oracle_feasible(a, b):
            disagreements += 1
        ok = check_witness(p, out.witness) if out.feasible else check_farkas(p, out.certificate)
        bad_certificates += not ok

        q = LpProblem(RMatrix(a), RVector(b), RVector(c))
        res = solve_lp_max(q)
        status, value = oracle_max(a, b, c)
        statuses[status] = statuses.get(status, 0) + 1
        if res.status != status or (status == FEASIBLE and res.value != value):
            disagreements += 1
        if status == FEASIBLE and res.status == FEASIBLE:
            y = res.certificate
            dual_ok = (
                check_witness(q, res.witness)
                and y.dot(RVector(b)) == res.value
                and all(s >= ci for s, ci in zip(RMatrix(a).T @ y, c))
            )
            bad_certificates += not dual_ok
    return {
        "instances": instances,
        "seed": seed,
        "disagreements": disagreements,
        "certificate_failures": bad_certificates,
        "oracle_statuses": dict(sorted(statuses.items())),
        "passed": disagreements == 0 and bad_certificates == 0,
    }


def d8_closure_suite() -> dict:
    cat = build_catalog()
    d8 = list(cat.d8)
    table = []
    closed = True
    for a in d8:
        row = []
        for b in d8:
            prod = a @ b
            if prod in d8:
                row.append(d8.index(prod))
            else:
                closed = False
                row.append(None)
        table.append(row)
    ident = d8[0]
    has_inverses = all(any(a @ b == ident for b in d8) for a in d8)
    kt = klein_table()
    return {
        "d8_table": table,
        "d8_closed": closed,
        "d8_inverses": has_inverses,
        "klein_table": kt,
        "klein_group": is_klein_group(kt),
        "passed": closed and has_inverses and is_klein_group(kt),
    }


def completeness_suite() -> dict:
    cat = build_catalog()
    e = cat.e
    a = e[0] + e[2] == cat.u
    b = e[1] + e[3] == cat.u
    return {"u_eq_e0_plus_e2": a, "u_eq_e1_plus_e3": b, "passed": a and b}


def gauge_suite(samples: int = 200, seed: int = 0, model_name: str = "pr") -> dict:
    """Moving a local operation g from the shared state into Alice's choices
    (``a_x -> a_x g``, ``Omega -> g^-1 Omega``) leaves the family unchanged."""
    model = build_model(model_name)
    cat = build_catalog()
    ga, gb = local_op_indices(model)
    lookup = model.catalog()
    rng = random.Random(seed)
    failures = 0
    for _ in range(samples):
        s = rng.choice(model.state_indices)
        alice = tuple(rng.choice(ga) for _ in range(4))
        bob = tuple(rng.choice(gb) for _ in range(4))
        g = rng.choice(ga)
        g_inv = next(k for k in ga if cat.d8[g] @ cat.d8[k] == cat.d8[0])
        moved = lookup.lookup(cat.d8[g_inv] @ cat.Omega[s])
        alice2 = tuple(next(k for k in ga if cat.d8[k] == cat.d8[a] @ cat.d8[g]) for a in alice)
        f1 = encode(model, EncodingStrategy(CORRELATED, alice, bob, s))
        f2 = encode(model, EncodingStrategy(CORRELATED, alice2, bob, moved))
        same = f1 == f2
        if same:
            d1 = decide_decoder(model, f1.eq_set, f1.neq_set).feasible
            d2 = decide_decoder(model, f2.eq_set, f2.neq_set).feasible
            same = d1 == d2
        failures += not same
    return {"model": model.name, "samples": samples, "seed": seed, "failures": failures,
            "passed": failures == 0}


def convexity_suite(samples: int = 1000, seed: int = 0, max_size: int = 5) -> dict:
    rng = random.Random(seed)
    linear_failures = bound_failures = 0
    best = Fraction(0)
    for _ in range(samples):
        w, strats = random_mixture(rng, rng.randint(1, max_size))
        mixed = evaluate_mixture(w, strats)
        linear = sum((wi * evaluate(s) for wi, s in zip(w, strats)), Fraction(0))
        linear_failures += mixed != linear
        bound_failures += mixed > CLASSICAL_OPTIMUM
        best = max(best, mixed)
    return {
        "samples": samples,
        "seed": seed,
        "linearity_failures": linear_failures,
        "bound_failures": bound_failures,
        "best_sampled": f"{best.numerator}/{best.denominator}",
        "passed": linear_failures == 0 and bound_failures == 0,
    }


def seesaw_suite(seed: int = 0, restarts: int = 50, iterations: int = 100, jobs: int = 1) -> dict:
    res = seesaw(seed, restarts, iterations, jobs)
    d = res.to_dict()
    d["passed"] = res.monotone and res.valid_decoders and res.best_value < 1 - 1e-3
    return d


def run_all(seed: int = 0, jobs: int = 1) -> dict:
    suites = {
        "lp_oracle": lp_oracle_suite(1000, seed),
        "d8_klein_closure": d8_closure_suite(),
        "measurement_completeness": completeness_suite(),
        "gauge_invariance": gauge_suite(200, seed),
        "classical_convexity": convexity_suite(1000, seed),
        "seesaw": seesaw_suite(seed, 50, 100, jobs),
    }
    suites["passed"] = all(s["passed"] for s in suites.values())
    return suites
