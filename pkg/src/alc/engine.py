"""Generic ALC game engine over a finite square-bit model.

Alice and Bob each receive one of ``n_strings`` strings and encode it either
by a local reversible operation on a shared state (``correlated``) or by
preparing an extremal local state (``product``).  Charlie must separate the
``n`` diagonal pairs from the ``n^2 - n`` off-diagonal ones with a single
two-outcome measurement built from the model's extremal effects.

Deciding whether a perfect decoder exists is an exact LP feasibility
problem; a "no" always carries either a state collision or a Farkas vector.
"""

from __future__ import annotations

import json
import logging
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .gpt import GptModel, GptState
from .linalg import (
    INFEASIBLE,
    LpOutcome,
    LpProblem,
    RMatrix,
    RVector,
    check_farkas,
    check_witness,
    solve_feasibility,
    solve_lp_max,
    trace_product,
)
from .squarebit import D8_LABELS, build_catalog, build_model

log = logging.getLogger(__name__)

CORRELATED = "correlated"
PRODUCT = "product"
BOTH = "both"


def string_labels(n_strings: int) -> list[str]:
    if n_strings == 2:
        return ["0", "1"]
    if n_strings == 4:
        return ["00", "01", "10", "11"]
    raise ValueError(f"n_strings must be 2 or 4, got {n_strings}")


def fmt_q(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, order=True)
class EncodingStrategy:
    """Assignments are indexed by string position (``00, 01, 10, 11``).

    For ``correlated`` strategies they hold D8 indices (U0+..U3+, U0-..U3-)
    and ``shared_state`` a catalog state index; for ``product`` strategies
    they hold elementary-state indices (``w_0 .. w_3``).
    """

    kind: str
    alice_assign: tuple[int, ...]
    bob_assign: tuple[int, ...]
    shared_state: Optional[int] = None

    def to_dict(self) -> dict:
        labels = string_labels(len(self.alice_assign))
        if self.kind == CORRELATED:
            name = lambda k: D8_LABELS[k]  # noqa: E731
        else:
            name = lambda k: f"w{k}"  # noqa: E731
        return {
            "kind": self.kind,
            "shared_state": self.shared_state,
            "alice": {s: name(k) for s, k in zip(labels, self.alice_assign)},
            "bob": {s: name(k) for s, k in zip(labels, self.bob_assign)},
        }


@dataclass(frozen=True)
class EncodedFamily:
    n_strings: int
    # pair_states[x * n + y] is the catalog index Charlie receives on (x, y)
    pair_states: tuple[int, ...]

    @property
    def eq_set(self) -> frozenset[int]:
        n = self.n_strings
        return frozenset(self.pair_states[x * n + x] for x in range(n))

    @property
    def neq_set(self) -> frozenset[int]:
        n = self.n_strings
        return frozenset(
            self.pair_states[x * n + y] for x in range(n) for y in range(n) if x != y
        )

    def state_index(self, x: int, y: int) -> int:
        return self.pair_states[x * self.n_strings + y]

    @property
    def states(self) -> dict[tuple[str, str], GptState]:
        cat = build_catalog()
        labels = string_labels(self.n_strings)
        return {
            (labels[x], labels[y]): cat.state(self.state_index(x, y))
            for x in range(self.n_strings)
            for y in range(self.n_strings)
        }


def _validate_strategy(model: GptModel, strategy: EncodingStrategy) -> None:
    if len(strategy.alice_assign) != len(strategy.bob_assign):
        raise ValueError("Alice and Bob must assign the same number of strings")
    string_labels(len(strategy.alice_assign))
    if strategy.kind == CORRELATED:
        if strategy.shared_state not in model.state_indices:
            raise ValueError(f"shared state {strategy.shared_state} is not in model {model.name}")
        ga, gb = local_op_indices(model)
        bad = [k for k in strategy.alice_assign if k not in ga] + [k for k in strategy.bob_assign if k not in gb]
        if bad:
            raise ValueError(f"operations {[D8_LABELS[k] for k in bad]} are not local operations of {model.name}")
    elif strategy.kind == PRODUCT:
        allowed = {s.catalog_index for s in model.local_states}
        bad = [k for k in strategy.alice_assign + strategy.bob_assign if k not in allowed]
        if bad:
            raise ValueError(f"local states {bad} are not allowed in {model.name}")
    else:
        raise ValueError(f"unknown strategy kind {strategy.kind!r}")


def local_op_indices(model: GptModel) -> tuple[list[int], list[int]]:
    cat = build_catalog()
    alice, bob = model.local_ops()
    return sorted(cat.d8.index(a) for a in alice), sorted(cat.d8.index(b) for b in bob)


def encode(model: GptModel, strategy: EncodingStrategy) -> EncodedFamily:
    _validate_strategy(model, strategy)
    cat = build_catalog()
    lookup = model.catalog()
    n = len(strategy.alice_assign)
    out = []
    for a in strategy.alice_assign:
        for b in strategy.bob_assign:
            if strategy.kind == CORRELATED:
                m = cat.d8[a] @ cat.Omega[strategy.shared_state] @ cat.d8[b].transpose()
            else:
                m = cat.omega[a].outer(cat.omega[b])
            idx = lookup.lookup(m)
            if idx is None:
                raise ValueError(f"encoding leaves model {model.name}")
            out.append(idx)
    return EncodedFamily(n, tuple(out))


def has_collision(family: EncodedFamily) -> bool:
    return not family.eq_set.isdisjoint(family.neq_set)


# --- decoders -------------------------------------------------------------


@dataclass(frozen=True)
class DecoderWitness:
    p_weights: dict[int, Fraction]
    q_weights: dict[int, Fraction]
    m_eq: RMatrix
    m_neq: RMatrix

    def to_dict(self) -> dict:
        return {
            "p_weights": {str(k): fmt_q(v) for k, v in sorted(self.p_weights.items())},
            "q_weights": {str(k): fmt_q(v) for k, v in sorted(self.q_weights.items())},
        }


@lru_cache(maxsize=None)
def _decoder_rows(model_name: str):
    """Completeness rows, their rhs, and per-state probability rows for a model."""
    model = build_model(model_name)
    cat = build_catalog()
    effects = [e.matrix.flatten() for e in model.effects]
    k = len(effects)
    unit = model.unit.flatten()
    completeness = [[effects[i][r] for i in range(k)] * 2 for r in range(9)]
    zeros = [Fraction(0)] * k
    prob_rows = {
        s: [trace_product(e.matrix, cat.Omega[s]) for e in model.effects] + zeros
        for s in range(len(cat.Omega))
    }
    return completeness, list(unit), prob_rows


def decoder_problem(model: GptModel, eq_set, neq_set) -> LpProblem:
    """Variables ``p_i`` then ``q_j`` over the model's effects (model order).

    Rows: 9 completeness equations ``sum p E + sum q E = u u^T`` (row-major),
    then ``Tr[M_eq^T w] = 1`` for ``w`` in eq_set, ``= 0`` for neq_set.
    """
    completeness, unit, prob_rows = _decoder_rows(model.name)
    rows = list(completeness)
    rhs = list(unit)
    for target, states in ((1, sorted(eq_set)), (0, sorted(neq_set))):
        for s in states:
            rows.append(prob_rows[s])
            rhs.append(Fraction(target))
    return LpProblem(RMatrix(rows), RVector(rhs))


def _witness_from(model: GptModel, x: RVector) -> DecoderWitness:
    k = len(model.effects)
    p = {e.catalog_index: x[i] for i, e in enumerate(model.effects) if x[i]}
    q = {e.catalog_index: x[k + i] for i, e in enumerate(model.effects) if x[k + i]}
    m_eq = RMatrix.zeros(3, 3)
    m_neq = RMatrix.zeros(3, 3)
    for i, e in enumerate(model.effects):
        if x[i]:
            m_eq = m_eq + e.matrix.scale(x[i])
        if x[k + i]:
            m_neq = m_neq + e.matrix.scale(x[k + i])
    return DecoderWitness(p, q, m_eq, m_neq)


_decision_cache: dict[tuple, LpOutcome] = {}


def decide_decoder(model: GptModel, eq_set, neq_set) -> LpOutcome:
    """Exact feasibility of a perfect decoder for the given state sets (cached)."""
    key = (model.name, frozenset(eq_set), frozenset(neq_set))
    out = _decision_cache.get(key)
    if out is None:
        out = solve_feasibility(decoder_problem(model, eq_set, neq_set))
        _decision_cache[key] = out
    return out


def perfect_decoder_exists(model: GptModel, family: EncodedFamily) -> Optional[DecoderWitness]:
    out = decide_decoder(model, family.eq_set, family.neq_set)
    if not out.feasible:
        return None
    return _witness_from(model, out.witness)


def replay_success(family: EncodedFamily, witness: DecoderWitness) -> Fraction:
    """Average success of the decoder over all ``n^2`` pairs, recomputed from scratch."""
    cat = build_catalog()
    n = family.n_strings
    total = Fraction(0)
    for x in range(n):
        for y in range(n):
            omega = cat.Omega[family.state_index(x, y)]
            m = witness.m_eq if x == y else witness.m_neq
            total += trace_product(m, omega)
    return total / (n * n)


_value_cache: dict[tuple, Fraction] = {}
_multiset_cache: dict[tuple, Fraction] = {}


def _weighted_sums(family: EncodedFamily) -> tuple[RMatrix, RMatrix]:
    cat = build_catalog()
    n = family.n_strings
    w_eq = [[Fraction(0)] * 3 for _ in range(3)]
    w_neq = [[Fraction(0)] * 3 for _ in range(3)]
    for x in range(n):
        for y in range(n):
            target = w_eq if x == y else w_neq
            omega = cat.Omega[family.state_index(x, y)].rows
            for r in range(3):
                for c in range(3):
                    target[r][c] += omega[r][c]
    return RMatrix(w_eq), RMatrix(w_neq)


def best_decoder_value(model: GptModel, family: EncodedFamily) -> Fraction:
    """Best average success over all two-outcome decoders of the model.

    Pairs count with multiplicity.  Because the outcome rule is linear, the
    objective only depends on the summed eq/neq states, which keys the cache.
    """
    n = family.n_strings
    ps = family.pair_states
    fast_key = (
        model.name,
        tuple(sorted(ps[x * n + x] for x in range(n))),
        tuple(sorted(ps[x * n + y] for x in range(n) for y in range(n) if x != y)),
    )
    val = _multiset_cache.get(fast_key)
    if val is not None:
        return val
    w_eq, w_neq = _weighted_sums(family)
    n2 = n * n
    key = (model.name, w_eq, w_neq, n2)
    val = _value_cache.get(key)
    if val is not None:
        _multiset_cache[fast_key] = val
        return val
    base = decoder_problem(model, (), ())
    obj = [trace_product(e.matrix, w_eq) / n2 for e in model.effects]
    obj += [trace_product(e.matrix, w_neq) / n2 for e in model.effects]
    out = solve_lp_max(LpProblem(base.constraint_matrix, base.rhs, RVector(obj)))
    if not out.feasible:
        raise RuntimeError(f"decoder polytope of {model.name} is empty or unbounded: {out.status}")
    _value_cache[key] = out.value
    _multiset_cache[fast_key] = out.value
    return out.value


def clear_caches() -> None:
    """Drop memoised LP results (for cold-start timing)."""
    _decision_cache.clear()
    _value_cache.clear()
    _multiset_cache.clear()


# --- exhaustive search ----------------------------------------------------


@dataclass
class SearchReport:
    model: str
    n_strings: int
    families: str
    strategies_examined: int = 0
    collisions_pruned: int = 0
    lp_checks: int = 0
    distinct_lp_systems: int = 0
    perfect: Optional[tuple[EncodingStrategy, DecoderWitness]] = None
    best_value: Optional[Fraction] = None
    best_strategy: Optional[EncodingStrategy] = None
    best_value_scope: str = "survivors"
    audit: Optional[dict] = None
    certificates: Optional[list] = None
    wall_time: float = 0.0

    def to_dict(self, include_timing: bool = False) -> dict:
        d = {
            "model": self.model,
            "n_strings": self.n_strings,
            "families": self.families,
            "strategies_examined": self.strategies_examined,
            "collisions_pruned": self.collisions_pruned,
            "lp_checks": self.lp_checks,
            "distinct_lp_systems": self.distinct_lp_systems,
            "perfect": None,
            "best_value": fmt_q(self.best_value) if self.best_value is not None else None,
            "best_strategy": self.best_strategy.to_dict() if self.best_strategy else None,
            "best_value_scope": self.best_value_scope,
        }
        if self.perfect is not None:
            strat, wit = self.perfect
            d["perfect"] = {"strategy": strat.to_dict(), "decoder": wit.to_dict()}
        if self.audit is not None:
            d["audit"] = self.audit
        if self.certificates is not None:
            d["certificates"] = self.certificates
        if include_timing:
            d["wall_time"] = round(self.wall_time, 3)
        return d

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), sort_keys=True, indent=2)


@dataclass
class _Partial:
    """What one enumeration task reports back for the merge."""

    examined: int = 0
    pruned: int = 0
    lp_checks: int = 0
    systems: dict = field(default_factory=dict)  # (eq, neq) -> feasible?
    perfect: Optional[EncodingStrategy] = None
    best: Optional[tuple[Fraction, EncodingStrategy]] = None
    audit_checked: int = 0
    audit_failures: list = field(default_factory=list)


class _Enumerator:
    """Backtracking enumeration of one block of strategies.

    ``table[a][b]`` is the catalog index of the state Charlie gets when Alice
    uses choice ``a`` and Bob choice ``b``.  Alice's tuple is fixed first;
    Bob's choices are assigned string by string and a branch is cut as soon as
    some state appears both on and off the diagonal; the cut subtree's size
    is added to ``pruned``.
    """

    def __init__(self, model, n, alice_choices, bob_choices, table, make_strategy,
                 audit_rate, rng, part, best_survivors):
        self.model = model
        self.n = n
        self.alice_choices = alice_choices
        self.bob_choices = bob_choices
        self.table = table
        self.make_strategy = make_strategy
        self.audit_rate = audit_rate
        self.rng = rng
        self.part = part
        self.best_survivors = best_survivors

    def run_alice(self, alice: tuple[int, ...]) -> None:
        n, nb = self.n, len(self.bob_choices)
        block = nb ** n
        self.part.examined += block
        # if two strings give Alice the same image, (x,x) and (x',x) coincide for every Bob choice
        b0 = self.bob_choices[0]
        imgs = [self.table[a][b0] for a in alice]
        if len(set(imgs)) < n:
            self.part.pruned += block
            self._maybe_audit(alice, (), block)
            return
        self._bob(alice, [], set(), set())

    def _bob(self, alice, bob, eq, neq):
        n = self.n
        y = len(bob)
        if y == n:
            self._survivor(alice, tuple(bob), eq, neq)
            return
        remaining = len(self.bob_choices) ** (n - 1 - y)
        for b in self.bob_choices:
            col = [self.table[a][b] for a in alice]
            d = col[y]
            off = {col[x] for x in range(n) if x != y}
            if d in neq or d in off or not eq.isdisjoint(off):
                self.part.pruned += remaining
                self._maybe_audit(alice, tuple(bob) + (b,), remaining)
                continue
            bob.append(b)
            self._bob(alice, bob, eq | {d}, neq | off)
            bob.pop()

    def _survivor(self, alice, bob, eq, neq):
        part = self.part
        part.lp_checks += 1
        key = (frozenset(eq), frozenset(neq))
        out = decide_decoder(self.model, *key)
        part.systems[key] = out
        strategy = self.make_strategy(alice, bob)
        if out.feasible and part.perfect is None:
            part.perfect = strategy
        if self.best_survivors:
            fam = EncodedFamily(self.n, self._pairs(alice, bob))
            v = best_decoder_value(self.model, fam)
            if part.best is None or v > part.best[0]:
                part.best = (v, strategy)

    def _pairs(self, alice, bob):
        return tuple(self.table[a][b] for a in alice for b in bob)

    def _maybe_audit(self, alice, bob_prefix, subtree):
        if self.audit_rate <= 0 or self.rng is None:
            return
        if self.rng.random() >= min(1.0, self.audit_rate * subtree):
            return
        bob = bob_prefix + tuple(
            self.rng.choice(self.bob_choices) for _ in range(self.n - len(bob_prefix))
        )
        fam = EncodedFamily(self.n, self._pairs(alice, bob))
        self.part.audit_checked += 1
        out = decide_decoder(self.model, fam.eq_set, fam.neq_set)
        ok = has_collision(fam) and not out.feasible
        ok = ok and check_farkas(decoder_problem(self.model, fam.eq_set, fam.neq_set), out.certificate)
        if not ok:
            self.part.audit_failures.append(self.make_strategy(alice, bob).to_dict())


def _alice_tuples(choices: Sequence[int], n: int, gauge: Optional[int]):
    def rec(prefix):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for c in choices:
            prefix.append(c)
            yield from rec(prefix)
            prefix.pop()

    if gauge is not None:
        yield from rec([gauge])
    else:
        yield from rec([])


def _correlated_task(args) -> _Partial:
    model_name, n, shared, audit_rate, seed, best_survivors = args
    model = build_model(model_name)
    cat = build_catalog()
    lookup = model.catalog()
    ga, gb = local_op_indices(model)
    omega = cat.Omega[shared]
    table = {}
    for a in ga:
        left = cat.d8[a] @ omega
        table[a] = {}
        for b in gb:
            idx = lookup.lookup(left @ cat.d8[b].transpose())
            if idx is None:
                raise ValueError(f"{model.name}: local action leaves the model")
            table[a][b] = idx
    gauge = 0 if 0 in ga else None
    part = _Partial()
    rng = random.Random(f"{seed}:{model_name}:{n}:corr:{shared}") if audit_rate > 0 else None
    en = _Enumerator(
        model, n, ga, gb, table,
        lambda al, bo: EncodingStrategy(CORRELATED, al, bo, shared),
        audit_rate, rng, part, best_survivors,
    )
    for alice in _alice_tuples(ga, n, gauge):
        en.run_alice(alice)
    return part


def _product_task(args) -> _Partial:
    model_name, n, audit_rate, seed, best_scope = args
    model = build_model(model_name)
    locs = [s.catalog_index for s in model.local_states]
    table = {a: {b: 4 * a + b for b in locs} for a in locs}
    part = _Partial()
    rng = random.Random(f"{seed}:{model_name}:{n}:prod") if audit_rate > 0 else None
    en = _Enumerator(
        model, n, locs, locs, table,
        lambda al, bo: EncodingStrategy(PRODUCT, al, bo),
        audit_rate, rng, part, best_scope == "survivors",
    )
    for alice in _alice_tuples(locs, n, None):
        en.run_alice(alice)
    if best_scope == "all":
        # every product family, colliding or not
        for alice in _alice_tuples(locs, n, None):
            for bob in _alice_tuples(locs, n, None):
                fam = EncodedFamily(n, tuple(table[a][b] for a in alice for b in bob))
                v = best_decoder_value(model, fam)
                if part.best is None or v > part.best[0]:
                    part.best = (v, EncodingStrategy(PRODUCT, alice, bob))
    return part


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("ALC_JOBS", "1")))
    except ValueError:
        return 1


def search_perfect(
    model: GptModel | str,
    n_strings: int = 4,
    families: str = BOTH,
    jobs: Optional[int] = None,
    audit_rate: float = 0.0,
    seed: int = 0,
    best_scope: str = "survivors",
    include_certificates: bool = False,
) -> SearchReport:
    """Exhaustive search for a perfect ALC strategy in ``model``.

    Correlated strategies fix Alice's first operation to the identity (any
    other choice V is absorbed into the shared state V^-1-preimage, which is
    again a model state).  Product searches can evaluate the best decoder
    value over every family (``best_scope="all"``) or only over the
    collision-free ones.  Results are independent of ``jobs``.
    """
    if isinstance(model, str):
        model = build_model(model)
    string_labels(n_strings)
    if families not in (CORRELATED, PRODUCT, BOTH):
        raise ValueError(f"families must be correlated, product or both, got {families!r}")
    if best_scope not in ("survivors", "all", "none"):
        raise ValueError(f"unknown best_scope {best_scope!r}")
    jobs = jobs or default_jobs()
    t0 = time.perf_counter()

    tasks = []
    if families in (CORRELATED, BOTH):
        for s in sorted(model.state_indices):
            tasks.append((_correlated_task, (model.name, n_strings, s, audit_rate, seed, best_scope != "none")))
    if families in (PRODUCT, BOTH):
        tasks.append((_product_task, (model.name, n_strings, audit_rate, seed, best_scope)))

    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(fn, args) for fn, args in tasks]
            parts = [f.result() for f in futures]
    else:
        parts = [fn(args) for fn, args in tasks]

    report = SearchReport(model.name, n_strings, families)
    systems: dict = {}
    audit_checked, audit_failures = 0, []
    for part in parts:  # task order == enumeration order
        report.strategies_examined += part.examined
        report.collisions_pruned += part.pruned
        report.lp_checks += part.lp_checks
        systems.update(part.systems)
        audit_checked += part.audit_checked
        audit_failures.extend(part.audit_failures)
        if report.perfect is None and part.perfect is not None:
            fam = encode(model, part.perfect)
            wit = perfect_decoder_exists(model, fam)
            report.perfect = (part.perfect, wit)
        if part.best is not None and (report.best_value is None or part.best[0] > report.best_value):
            report.best_value, report.best_strategy = part.best
    report.distinct_lp_systems = len(systems)
    if best_scope == "none":
        report.best_value_scope = "none"
    else:
        scopes = []
        if families in (PRODUCT, BOTH):
            scopes.append(f"product:{best_scope}")
        if families in (CORRELATED, BOTH):
            scopes.append("correlated:survivors")
        report.best_value_scope = ",".join(scopes)
    if audit_rate > 0:
        bad_certs = 0
        for (eq, neq), out in systems.items():
            problem = decoder_problem(model, eq, neq)
            if out.feasible:
                bad_certs += not check_witness(problem, out.witness)
            else:
                bad_certs += not check_farkas(problem, out.certificate)
        report.audit = {
            "rate": audit_rate,
            "pruned_samples_checked": audit_checked,
            "pruned_sample_failures": audit_failures,
            "lp_systems_verified": len(systems),
            "lp_certificate_failures": bad_certs,
        }
    if include_certificates:
        certs = []
        for (eq, neq), out in sorted(systems.items(), key=lambda kv: (sorted(kv[0][0]), sorted(kv[0][1]))):
            if out.status == INFEASIBLE:
                certs.append({
                    "eq_set": sorted(eq),
                    "neq_set": sorted(neq),
                    "farkas": [fmt_q(v) for v in out.certificate],
                })
        report.certificates = certs
    report.wall_time = time.perf_counter() - t0
    log.info("%s n=%d %s: %d examined, %d pruned, %d LP checks in %.2fs",
             model.name, n_strings, families, report.strategies_examined,
             report.collisions_pruned, report.lp_checks, report.wall_time)
    return report
