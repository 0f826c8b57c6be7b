import math

import pytest

from eospuc.basis import instantiate_language, language_size
from eospuc.instance_gen import CAP_K_TABLE, GenConfig, count_nonvacuous, default_cap_k, generate
from eospuc.model import Cap, Sep, instance_to_json


@pytest.mark.parametrize("n", [10, 20, 30, 40, 50])
def test_hidden_model_shape(n):
    inst, hidden, lang = generate(GenConfig(n=n, seed=0))
    assert inst.n == n and inst.horizon == 3 * n
    seps = [c for c in hidden if isinstance(c, Sep)]
    caps = [c for c in hidden if isinstance(c, Cap)]
    assert len(seps) == math.floor(0.30 * n * (n - 1) / 2)
    assert len({c.pair for c in seps}) == len(seps)
    assert caps == [Cap(CAP_K_TABLE[n], (3 * n) // 5)]
    assert all(c.delta in (2, 3, 4, 5) for c in seps)
    for t in inst.tasks:
        assert 0.5 <= t.weight <= 2.0
        assert 2 <= t.hi - t.lo + 1 <= 6
        assert 1 <= t.lo and t.hi <= inst.horizon
    assert Cap(lang.cap_center_k, lang.cap_center_w) in hidden


def test_table_counts():
    counts = [math.floor(0.30 * n * (n - 1) / 2) for n in (10, 20, 30, 40, 50)]
    assert counts == [13, 57, 130, 234, 367]


def test_cap_k_interpolation():
    assert default_cap_k(10) == 2
    assert default_cap_k(25) == 3
    assert default_cap_k(5) == 2
    assert default_cap_k(80) == 6
    with pytest.raises(ValueError):
        default_cap_k(0)


def test_seed_determinism_and_variation():
    a = generate(GenConfig(n=12, seed=4))
    b = generate(GenConfig(n=12, seed=4))
    c = generate(GenConfig(n=12, seed=5))
    assert instance_to_json(a[0]) == instance_to_json(b[0]) and a[1] == b[1]
    assert instance_to_json(a[0]) != instance_to_json(c[0])


def test_streams_are_independent():
    # changing delta choices leaves weights, windows and chosen pairs alone
    a_inst, a_hidden, _ = generate(GenConfig(n=10, seed=1))
    b_inst, b_hidden, _ = generate(GenConfig(n=10, seed=1, sep_delta_choices=(7, 8)))
    assert a_inst == b_inst
    pairs = lambda h: sorted(c.pair for c in h if isinstance(c, Sep))
    assert pairs(a_hidden) == pairs(b_hidden)


def test_language_sizes():
    for n, expected in ((10, 430), (50, 11050)):
        inst, _, lang = generate(GenConfig(n=n, seed=0))
        assert len(instantiate_language(lang, inst)) == expected
        assert language_size(lang, n, inst.horizon) == expected


def test_config_checks():
    with pytest.raises(ValueError):
        generate(GenConfig(n=0))
    with pytest.raises(ValueError):
        generate(GenConfig(n=5, sep_pair_fraction=1.5))
    with pytest.raises(ValueError):
        generate(GenConfig(n=5, window_len_lo=3, window_len_hi=2))
    with pytest.raises(ValueError):
        generate(GenConfig(n=5, cap_w=100))


def test_count_nonvacuous():
    inst, hidden, _ = generate(GenConfig(n=10, seed=0))
    k = count_nonvacuous(inst, hidden)
    assert 0 <= k <= 13
