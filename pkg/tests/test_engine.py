from __future__ import annotations

import random
from fractions import Fraction

import pytest

from alc.engine import (
    BOTH,
    CORRELATED,
    PRODUCT,
    EncodedFamily,
    EncodingStrategy,
    best_decoder_value,
    decide_decoder,
    decoder_problem,
    encode,
    has_collision,
    local_op_indices,
    perfect_decoder_exists,
    replay_success,
    search_perfect,
)
from alc.linalg import RVector, check_farkas, check_witness
from alc.squarebit import build_catalog, build_model, d8_index

CAT = build_catalog()


def op(k: int, s: int) -> int:
    return d8_index(k, s)


PROP4 = EncodingStrategy(
    CORRELATED,
    (op(0, 1), op(0, -1), op(2, 1), op(2, -1)),
    (op(0, 1), op(2, -1), op(3, -1), op(1, 1)),
    16,
)
LEMMA2 = EncodingStrategy(PRODUCT, (0, 1, 2, 3), (0, 1, 2, 3))


def test_prop4_encoding():
    fam = encode(build_model("pr"), PROP4)
    assert fam.state_index(0, 0) == 16
    assert fam.state_index(1, 2) == 16
    assert has_collision(fam)
    assert perfect_decoder_exists(build_model("pr"), fam) is None


def test_lemma2_encoding():
    hs = build_model("hs")
    fam = encode(hs, LEMMA2)
    assert fam.state_index(1, 1) == 5
    assert fam.eq_set == {0, 5, 10, 15}
    assert fam.neq_set == set(range(16)) - {0, 5, 10, 15}
    assert not has_collision(fam)
    assert perfect_decoder_exists(hs, fam) is None
    out = decide_decoder(hs, fam.eq_set, fam.neq_set)
    assert check_farkas(decoder_problem(hs, fam.eq_set, fam.neq_set), out.certificate)


def test_states_map_has_sixteen_pairs():
    fam = encode(build_model("hs"), LEMMA2)
    assert len(fam.states) == 16
    assert fam.states[("01", "01")].matrix == CAT.Omega[5]


def test_identity_encoding_collides():
    fam = encode(build_model("pr"), EncodingStrategy(CORRELATED, (0,) * 4, (0,) * 4, 17))
    assert fam.eq_set == fam.neq_set == {17}
    assert has_collision(fam)
    assert best_decoder_value(build_model("pr"), fam) == Fraction(3, 4)


def test_one_bit_hs_witness():
    hs = build_model("hs")
    fam = encode(hs, EncodingStrategy(PRODUCT, (0, 2), (0, 2)))
    assert fam.eq_set == {0, 10} and fam.neq_set == {2, 8}
    # M_eq = E0 + E10, M_neq = E2 + E8
    k = len(hs.effects)
    x = [Fraction(0)] * (2 * k)
    idx = hs.effect_indices
    x[idx.index(0)] = x[idx.index(10)] = Fraction(1)
    x[k + idx.index(2)] = x[k + idx.index(8)] = Fraction(1)
    assert check_witness(decoder_problem(hs, fam.eq_set, fam.neq_set), RVector(x))
    wit = perfect_decoder_exists(hs, fam)
    assert wit is not None
    assert replay_success(fam, wit) == 1


def test_invalid_strategies_rejected():
    with pytest.raises(ValueError):
        encode(build_model("hybrid-a"), EncodingStrategy(CORRELATED, (0, 1, 0, 0), (0, 0, 0, 0), 0))
    with pytest.raises(ValueError):
        encode(build_model("pr"), EncodingStrategy(CORRELATED, (0,) * 4, (0,) * 4, 99))
    with pytest.raises(ValueError):
        encode(build_model("classical-bit"), EncodingStrategy(PRODUCT, (1, 0, 0, 0), (0,) * 4))
    with pytest.raises(ValueError):
        encode(build_model("pr"), EncodingStrategy(PRODUCT, (0, 1, 2), (0, 1, 2)))


def test_best_value_classical_embedding():
    cb = build_model("classical-bit")
    fam = encode(cb, EncodingStrategy(PRODUCT, (0, 2, 2, 2), (0, 2, 2, 2)))
    assert best_decoder_value(cb, fam) == Fraction(13, 16)


def test_best_value_counts_multiplicity():
    cb = build_model("classical-bit")
    # Alice sends her first bit, Bob too: three of the four strings per bit value share a state
    fam = encode(cb, EncodingStrategy(PRODUCT, (0, 0, 2, 2), (0, 0, 2, 2)))
    assert best_decoder_value(cb, fam) == Fraction(3, 4)


def test_best_value_floor():
    rng = random.Random(7)
    for name in ("pr", "hs", "hybrid-a", "frozen-20"):
        model = build_model(name)
        ga, gb = local_op_indices(model)
        for _ in range(10):
            s = EncodingStrategy(CORRELATED, tuple(rng.choice(ga) for _ in range(4)),
                                 tuple(rng.choice(gb) for _ in range(4)), rng.choice(model.state_indices))
            assert best_decoder_value(model, encode(model, s)) >= Fraction(3, 4)


def test_gauge_invariance_samples():
    pr = build_model("pr")
    lookup = pr.catalog()
    rng = random.Random(3)
    for _ in range(100):
        g = rng.randrange(8)
        g_inv = next(k for k in range(8) if CAT.d8[g] @ CAT.d8[k] == CAT.d8[0])
        s = rng.randrange(24)
        alice = tuple(rng.randrange(8) for _ in range(4))
        bob = tuple(rng.randrange(8) for _ in range(4))
        moved = lookup.lookup(CAT.d8[g_inv] @ CAT.Omega[s])
        shifted = tuple(CAT.d8.index(CAT.d8[a] @ CAT.d8[g]) for a in alice)
        assert encode(pr, EncodingStrategy(CORRELATED, alice, bob, s)) == \
            encode(pr, EncodingStrategy(CORRELATED, shifted, bob, moved))


def test_hybrid_witness_valid_in_hs():
    ha, hs = build_model("hybrid-a"), build_model("hs")
    rep = search_perfect(ha, 2, CORRELATED, jobs=1, best_scope="none")
    assert rep.perfect is not None
    strat, wit = rep.perfect
    fam = encode(ha, strat)
    k = len(hs.effects)
    x = [Fraction(0)] * (2 * k)
    for i, e in enumerate(hs.effect_indices):
        x[i] = wit.p_weights.get(e, Fraction(0))
        x[k + i] = wit.q_weights.get(e, Fraction(0))
    assert check_witness(decoder_problem(hs, fam.eq_set, fam.neq_set), RVector(x))


@pytest.mark.parametrize("model,families", [("classical-bit", PRODUCT), ("hs", PRODUCT)])
def test_one_bit_game_positive(model, families):
    rep = search_perfect(model, 2, families, jobs=1)
    assert rep.perfect is not None
    strat, wit = rep.perfect
    assert replay_success(encode(build_model(model), strat), wit) == 1


def test_classical_bit_witness_is_send_and_compare():
    rep = search_perfect("classical-bit", 2, PRODUCT, jobs=1)
    strat, _ = rep.perfect
    assert strat.alice_assign == strat.bob_assign == (0, 2)


@pytest.mark.parametrize("model,families", [
    ("hs", PRODUCT),
    ("hybrid-a", BOTH),
    ("hybrid-b", BOTH),
    ("frozen-16", BOTH),
    ("frozen-23", BOTH),
])
def test_no_go_small_models(model, families):
    rep = search_perfect(model, 4, families, jobs=1, audit_rate=0.002, seed=1)
    assert rep.perfect is None
    assert rep.audit["pruned_sample_failures"] == []
    assert rep.audit["lp_certificate_failures"] == 0
    assert rep.audit["pruned_samples_checked"] > 0
    assert rep.strategies_examined == rep.collisions_pruned + rep.lp_checks


def test_hs_product_counts():
    rep = search_perfect("hs", 4, PRODUCT, jobs=1)
    assert rep.strategies_examined == 4 ** 4 * 4 ** 4
    assert rep.lp_checks == 576
    assert rep.distinct_lp_systems == 24


def test_hs_best_over_all_product_families():
    rep = search_perfect("hs", 4, PRODUCT, jobs=1, best_scope="all")
    assert rep.best_value == Fraction(13, 16)
    assert rep.best_value_scope == "product:all"


def test_jobs_do_not_change_report():
    a = search_perfect("hybrid-a", 4, BOTH, jobs=1, audit_rate=0.01, seed=5, include_certificates=True)
    b = search_perfect("hybrid-a", 4, BOTH, jobs=2, audit_rate=0.01, seed=5, include_certificates=True)
    assert a.to_json() == b.to_json()


def test_report_json_fields():
    d = search_perfect("frozen-20", 4, BOTH, jobs=1).to_dict()
    for key in ("model", "n_strings", "strategies_examined", "collisions_pruned", "perfect", "best_value"):
        assert key in d
    assert "wall_time" not in d
    assert isinstance(d["best_value"], str) and "/" in d["best_value"]


def test_bad_arguments():
    with pytest.raises(ValueError):
        search_perfect("hs", 3)
    with pytest.raises(ValueError):
        search_perfect("hs", 4, "mixed")


def test_decoder_problem_layout():
    hs = build_model("hs")
    p = decoder_problem(hs, {0}, {1, 2})
    assert p.n_vars == 2 * len(hs.effects)
    assert p.n_rows == 9 + 3
    assert list(p.rhs)[9:] == [1, 0, 0]


def test_family_sets():
    fam = EncodedFamily(2, (3, 4, 5, 3))
    assert fam.eq_set == {3} and fam.neq_set == {4, 5}
