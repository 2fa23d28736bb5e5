import itertools
import math
from collections import Counter

import pytest
from hypothesis import given, strategies as st
from scipy.stats import chisquare

from bnskit.random_model import (
    PROPERTIES,
    SampleConfig,
    count_cyclically_reduced,
    make_rng,
    run_experiment,
    sample_cyclic_word,
    sample_presentation,
    wilson_interval,
)
from bnskit.words import is_cyclically_reduced

from conftest import all_cyclic_words


def brute_count(m, k):
    alphabet = [g for i in range(1, m + 1) for g in (i, -i)]
    return sum(is_cyclically_reduced(w) for w in itertools.product(alphabet, repeat=k))


@pytest.mark.parametrize("k, count", [(1, 4), (2, 12), (3, 28), (4, 84)])
def test_count_examples(k, count):
    assert count_cyclically_reduced(2, k) == count


@pytest.mark.parametrize("m", [2, 3])
def test_count_matches_enumeration(m):
    for k in range(1, 8 if m == 3 else 9):
        assert count_cyclically_reduced(m, k) == brute_count(m, k)


def test_count_big_lengths_are_exact():
    # closed form (2m-1)^k + 1 + (m-1)((-1)^k + 1)
    for k in (50, 200):
        assert count_cyclically_reduced(3, k) == 5 ** k + 1 + 2 * ((-1) ** k + 1)


def _chi2_uniform(m, l, draws, seed):
    support = list(all_cyclic_words(m, l))
    seen = Counter(tuple(sample_cyclic_word(m, l, make_rng(seed, t))) for t in range(draws))
    assert set(seen) <= {tuple(w) for w in support}
    return chisquare([seen[tuple(w)] for w in support]).pvalue


def test_sampler_base_case_uniform():
    assert _chi2_uniform(2, 1, 4000, 3) > 0.001


def test_sampler_uniform_small():
    assert _chi2_uniform(2, 3, 20000, 5) > 0.001


def test_sampler_lengths_follow_counts():
    m, l, draws = 3, 6, 20000
    lengths = Counter(len(sample_cyclic_word(m, l, make_rng(9, t))) for t in range(draws))
    weights = [count_cyclically_reduced(m, k) for k in range(1, l + 1)]
    expected = [draws * w / sum(weights) for w in weights]
    observed = [lengths[k] for k in range(1, l + 1)]
    assert chisquare(observed, expected).pvalue > 0.001


def test_presentation_coordinates_are_independent():
    config = SampleConfig(n=2, m=2, l=2, trials=20000, seed=4)
    pairs = Counter()
    for t in range(config.trials):
        p = sample_presentation(config, make_rng(config.seed, t))
        pairs[tuple(len(r) for r in p.relators)] += 1
    weights = {1: 4, 2: 12}
    expected = [config.trials * weights[a] * weights[b] / 256 for a in (1, 2) for b in (1, 2)]
    observed = [pairs[(a, b)] for a in (1, 2) for b in (1, 2)]
    assert chisquare(observed, expected).pvalue > 0.001


@given(st.integers(2, 4), st.integers(1, 30), st.integers(0, 2**63))
def test_sampler_output_is_cyclically_reduced(m, l, seed):
    w = sample_cyclic_word(m, l, make_rng(seed))
    assert 1 <= len(w) <= l and is_cyclically_reduced(w)
    assert max(abs(a) for a in w) <= m


def zero_exponent_fraction(l):
    """Exact share of cyclically reduced words of length <= l on two generators with zero exponent sums."""
    alphabet = [1, -1, 2, -2]
    zero = 0
    for first in alphabet:
        # state: (last letter, sum_x1, sum_x2) -> number of reduced walks starting at ``first``
        states = Counter({(first, (first == 1) - (first == -1), (first == 2) - (first == -2)): 1})
        for k in range(1, l + 1):
            if k > 1:
                nxt = Counter()
                for (last, a, b), c in states.items():
                    for x in alphabet:
                        if x != -last:
                            nxt[(x, a + (x == 1) - (x == -1), b + (x == 2) - (x == -2))] += c
                states = nxt
            zero += sum(c for (last, a, b), c in states.items() if a == b == 0 and last != -first)
    total = sum(count_cyclically_reduced(2, k) for k in range(1, l + 1))
    return zero / total


def test_b1_frequency_matches_exact_count():
    l, trials = 10, 4000
    config = SampleConfig(n=1, m=2, l=l, trials=trials, seed=21, measure_small_cancellation=False,
                          measure_classification=False, measure_transform_image=False)
    report = run_experiment(config)
    p = 1 - zero_exponent_fraction(l)
    z = (report["b1_eq_1"].successes - trials * p) / math.sqrt(trials * p * (1 - p))
    assert abs(z) < 4


def test_b1_frequency_high_for_long_relators():
    config = SampleConfig(n=1, m=2, l=50, trials=1500, seed=1, measure_classification=False)
    assert run_experiment(config)["b1_eq_1"].estimate >= 0.9


def test_wilson_interval():
    assert wilson_interval(0, 10)[0] == 0
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi and math.isclose(lo + hi, 1.0)
    assert wilson_interval(0, 0) == (0.0, 1.0)


@given(st.integers(0, 200), st.integers(1, 200))
def test_interval_contains_estimate(s, n):
    s = min(s, n)
    lo, hi = wilson_interval(s, n)
    assert 0 <= lo <= s / n <= hi <= 1


def test_report_is_reproducible_and_thread_independent():
    config = SampleConfig(n=1, m=2, l=20, trials=120, seed=77)
    a = run_experiment(config, threads=1)
    b = run_experiment(config, threads=1)
    c = run_experiment(config, threads=3)
    assert a.to_csv() == b.to_csv() == c.to_csv()
    assert a.to_json() == c.to_json()


def test_report_invariants():
    config = SampleConfig(n=1, m=2, l=24, trials=400, seed=3)
    r = run_experiment(config)
    assert [p.name for p in r.properties] == list(PROPERTIES)
    assert r["nonsymmetric"].successes >= r["transform_image"].successes
    assert r["not_lerf"].successes == r["nonsymmetric"].successes
    assert r["not_fibering"].successes == r["nonsymmetric"].successes
    assert r["error"].successes == 0
    assert r.to_csv().splitlines()[0] == "name,successes,trials,estimate,ci_low,ci_high"


def test_config_validation(tmp_path):
    with pytest.raises(ValueError):
        SampleConfig(n=1, m=1, l=5, trials=1, seed=0)
    path = tmp_path / "c.toml"
    path.write_text("n = 1\nm = 2\nl = 5\ntrials = 3\nseed = 8\n")
    assert SampleConfig.from_toml(str(path), trials=9) == SampleConfig(1, 2, 5, 9, 8)


def test_log_rows(tmp_path):
    from bnskit.random_model import write_log
    import json
    config = SampleConfig(n=1, m=2, l=8, trials=5, seed=2)
    report = run_experiment(config, log=True)
    path = tmp_path / "log.jsonl"
    write_log(report, str(path))
    rows = [json.loads(line) for line in path.read_text().splitlines()]
    assert [r["trial"] for r in rows] == list(range(5))
