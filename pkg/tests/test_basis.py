import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eospuc.basis import (
    CandidateBasis,
    LanguageConfig,
    basis_subset,
    from_candidates,
    instantiate,
    instantiate_language,
    language_size,
    max_gap,
    min_gap,
    prune_vacuous,
    remove_cap_dominated,
    remove_sep_upto,
    retain_consistent,
)
from eospuc.instance_gen import GenConfig, generate
from eospuc.model import Assignment, Cap, Sep, satisfies


def test_small_language_has_fifteen_candidates(inst3, lang3):
    b = instantiate_language(lang3, inst3)
    assert len(b) == 15
    assert language_size(lang3, 3, 10) == 15


def test_vacuous_pruning_on_small_instance(inst3, lang3):
    b = prune_vacuous(instantiate_language(lang3, inst3), inst3)
    assert len(b) == 12
    assert b.deltas(1, 2) == (2, 3, 4)
    assert b.deltas(1, 3) == (4,)
    assert b.deltas(2, 3) == (3, 4)


def test_gaps(inst3):
    assert min_gap(inst3, 1, 2) == 0
    assert min_gap(inst3, 1, 3) == 3
    assert min_gap(inst3, 3, 2) == 2
    assert max_gap(inst3, 1, 2) == 3
    assert max_gap(inst3, 1, 3) == 6


def test_default_language_sizes():
    # centre (1, 1), radius 2: k in 0..3, w in 1..3
    lang = LanguageConfig()
    assert lang.deltas() == tuple(range(2, 11))
    assert len(lang.caps(30)) == 12
    assert language_size(lang, 10, 30) == 45 * 9 + 12
    # centred away from the boundary the full 5x5 neighbourhood appears
    centred = LanguageConfig(cap_center_k=2, cap_center_w=6)
    assert len(centred.caps(30)) == 25
    assert len(LanguageConfig(cap_center_k=2, cap_center_w=6).caps(5)) == 10


def test_seed_filter_drops_zero_caps(inst3):
    lang = LanguageConfig(2, 3, cap_center_k=1, cap_center_w=2, cap_radius=1)
    seed = inst3.assignment({1: 2})
    b = instantiate(lang, inst3, seed)
    assert all(k >= 1 for k, _ in b.cap)
    assert len(instantiate_language(lang, inst3)) - len(b) == 3


def test_retain_consistent_keeps_satisfied_candidates(inst3, lang3):
    b = instantiate_language(lang3, inst3)
    e = inst3.assignment({1: 2, 2: 5, 3: 8})
    kept = retain_consistent(b, e)
    assert set(kept) == {c for c in b if satisfies(c, e)}


def test_remove_sep_upto_and_cap_dominated(inst3, lang3):
    b = instantiate_language(lang3, inst3)
    b2 = remove_sep_upto(b, 2, 1, 3)
    assert b2.deltas(1, 2) == (4,)
    assert remove_sep_upto(b2, 1, 2, 4).deltas(1, 2) == ()
    b3 = remove_cap_dominated(b, 1, 4)
    assert b3.cap == {(1, 5), (2, 5)}


def test_remove_sep_on_missing_pair_is_identity():
    b = CandidateBasis({(1, 2): (2,)}, frozenset())
    assert remove_sep_upto(b, 1, 3, 5) is b


def test_empty_pairs_are_dropped():
    b = CandidateBasis({(1, 2): (), (1, 3): (2,)}, frozenset())
    assert list(b.sep) == [(1, 3)]
    assert not b.is_empty()
    assert CandidateBasis({}, frozenset()).is_empty()


def test_json_round_trip(inst3, lang3):
    b = prune_vacuous(instantiate_language(lang3, inst3), inst3)
    assert CandidateBasis.from_json(b.to_json()) == b
    assert LanguageConfig.from_json(lang3.to_json()) == lang3
    assert LanguageConfig.from_json(LanguageConfig().to_json()) == LanguageConfig()


def test_from_candidates_round_trip(inst3, lang3):
    b = instantiate_language(lang3, inst3)
    assert from_candidates(list(b)) == b


def test_language_validation():
    with pytest.raises(ValueError):
        LanguageConfig(sep_delta_min=0)
    with pytest.raises(ValueError):
        LanguageConfig(sep_delta_min=5, sep_delta_max=4)


_ops = st.lists(
    st.one_of(
        st.tuples(st.just("retain"), st.lists(st.integers(0, 30), min_size=8, max_size=8)),
        st.tuples(st.just("sep"), st.integers(1, 8), st.integers(1, 8), st.integers(1, 11)),
        st.tuples(st.just("cap"), st.integers(0, 4), st.integers(1, 6)),
        st.tuples(st.just("vacuous")),
    ),
    max_size=12,
)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 50), ops=_ops)
def test_basis_only_shrinks(seed, ops):
    inst, _, lang = generate(GenConfig(n=8, seed=seed))
    b = instantiate_language(lang, inst)
    for op in ops:
        if op[0] == "retain":
            e = Assignment(tuple(
                s if inst.task(j + 1).allows(s) else 0 for j, s in enumerate(op[1])
            ))
            nb = retain_consistent(b, e)
        elif op[0] == "sep":
            if op[1] == op[2]:
                continue
            nb = remove_sep_upto(b, op[1], op[2], op[3])
        elif op[0] == "cap":
            nb = remove_cap_dominated(b, op[1], op[2])
        else:
            nb = prune_vacuous(b, inst)
        assert basis_subset(nb, b)
        assert len(nb) <= len(b)
        b = nb


def test_sep_cap_candidates_are_constraints(inst3, lang3):
    kinds = {type(c) for c in instantiate_language(lang3, inst3)}
    assert kinds == {Sep, Cap}
