"""Few-relator random model: exact counts, exact uniform sampling, Monte Carlo runs."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations

import numpy as np

from .characters import CharacterError, normalize
from .presentation import Presentation, first_betti, small_cancellation_check
from .sections import Status
from .sigma import Membership, primitive_character, symmetry_report
from .transform import TransformError, remove_commutators
from .words import CyclicWord

THREADS_ENV = "BNSKIT_THREADS"

PROPERTIES = (
    "b1_eq_1",
    "small_cancellation",
    "nonsymmetric",
    "not_lerf",
    "not_fibering",
    "unknown_both",
    "minmax_pattern",
    "transform_image",
    "error",
)


# --- counting ------------------------------------------------------------------

def _letter(idx: int) -> int:
    # letter index 2g, 2g+1 <-> x_{g+1}, x_{g+1}^-1
    return idx // 2 + 1 if idx % 2 == 0 else -(idx // 2 + 1)


def _inverse_index(idx: int) -> int:
    return idx ^ 1


@lru_cache(maxsize=None)
def _transfer_power(m: int, k: int) -> tuple[tuple[int, ...], ...]:
    """``T^k`` with ``T[a][b] = 1`` iff ``b`` is not the inverse of ``a``."""
    size = 2 * m
    if k == 0:
        return tuple(tuple(int(a == b) for b in range(size)) for a in range(size))
    prev = _transfer_power(m, k - 1)
    # right-multiply by T: row sum minus the inverse column
    rows = []
    for a in range(size):
        total = sum(prev[a])
        rows.append(tuple(total - prev[a][_inverse_index(b)] for b in range(size)))
    return tuple(rows)


def count_cyclically_reduced(m: int, k: int) -> int:
    """Number of cyclically reduced words of length ``k`` on ``m`` generators (trace of T^k)."""
    if k < 1:
        raise ValueError("length must be >= 1")
    p = _transfer_power(m, k)
    return sum(p[a][a] for a in range(2 * m))


@lru_cache(maxsize=None)
def _length_weights(m: int, l: int) -> tuple[int, ...]:
    return tuple(count_cyclically_reduced(m, k) for k in range(1, l + 1))


@lru_cache(maxsize=None)
def _completions(m: int, s: int) -> tuple[tuple[int, ...], ...]:
    """``C[b][f]``: walks of ``s`` steps from letter ``b`` not ending at letter ``f``."""
    p = _transfer_power(m, s)
    return tuple(tuple(sum(row) - row[f] for f in range(2 * m)) for row in p)


# --- sampling --------------------------------------------------------------------

def make_rng(seed: int, trial: int = 0) -> np.random.Generator:
    """Counter-based Philox stream keyed by ``(seed, trial)``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed & (2**64 - 1), trial])))


def _randbelow(rng: np.random.Generator, n: int) -> int:
    if n < 2**63:
        return int(rng.integers(0, n))
    nbits = n.bit_length()
    nbytes = (nbits + 7) // 8
    while True:
        x = int.from_bytes(rng.bytes(nbytes), "little") >> (8 * nbytes - nbits)
        if x < n:
            return x


def _weighted(rng: np.random.Generator, weights) -> int:
    x = _randbelow(rng, sum(weights))
    for i, w in enumerate(weights):
        if x < w:
            return i
        x -= w
    raise AssertionError("unreachable")


def sample_cyclic_word(m: int, l: int, rng: np.random.Generator) -> CyclicWord:
    """Uniform over all cyclically reduced words of length ``1..l``.

    The length is drawn with weight equal to its count; the word is then
    built letter by letter, each choice weighted by the number of admissible
    completions whose last letter is not the inverse of the first.
    """
    if l < 1:
        raise ValueError("maximum length must be >= 1")
    k = _weighted(rng, _length_weights(m, l)) + 1
    size = 2 * m
    first = _randbelow(rng, size)  # every first letter has the same number of completions
    forbidden_last = _inverse_index(first)
    word = [first]
    cur = first
    for pos in range(1, k):
        comp = _completions(m, k - 1 - pos)
        weights = [0 if b == _inverse_index(cur) else comp[b][forbidden_last] for b in range(size)]
        cur = _weighted(rng, weights)
        word.append(cur)
    return CyclicWord(_letter(i) for i in word)


@dataclass(frozen=True)
class SampleConfig:
    n: int
    m: int
    l: int
    trials: int
    seed: int
    measure_b1: bool = True
    measure_small_cancellation: bool = True
    measure_classification: bool = True
    measure_transform_image: bool = True

    def __post_init__(self):
        if self.m < 2 or self.n < 1 or self.l < 1 or self.trials < 1:
            raise ValueError("need m >= 2, n >= 1, l >= 1, trials >= 1")

    @classmethod
    def from_toml(cls, path: str, **overrides) -> "SampleConfig":
        try:
            import tomllib
        except ModuleNotFoundError:  # Python < 3.11
            import tomli as tomllib
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)


def sample_presentation(config: SampleConfig, rng: np.random.Generator) -> Presentation:
    return Presentation(config.m, tuple(sample_cyclic_word(config.m, config.l, rng) for _ in range(config.n)))


# --- experiments -------------------------------------------------------------------

def measure(p: Presentation, config: SampleConfig) -> dict:
    """All per-sample measurements; pure in ``p``."""
    out = {k: False for k in PROPERTIES}
    out["b1"] = None
    out["outcome"] = "ok"
    try:
        b1 = first_betti(p)
        out["b1"] = b1
        out["b1_eq_1"] = b1 == 1
        nzd = False
        if config.measure_small_cancellation:
            nzd = small_cancellation_check(p).passes
            out["small_cancellation"] = nzd
        if b1 == 1 and p.deficiency == 1 and config.measure_classification:
            rep = symmetry_report(p, no_zero_divisors=nzd)
            plus, minus = rep.plus_verdict, rep.minus_verdict
            out["nonsymmetric"] = rep.nonsymmetric
            out["not_lerf"] = rep.not_lerf
            out["not_fibering"] = rep.not_fibering
            out["unknown_both"] = (plus.membership is Membership.UNKNOWN
                                   and minus.membership is Membership.UNKNOWN)
            statuses = {plus.condition.status, minus.condition.status}
            out["minmax_pattern"] = statuses == {Status.UNIQUE, Status.REPEATED}
            out["verdicts"] = [plus.membership.value, minus.membership.value]
            if config.measure_transform_image and nzd:
                out["transform_image"] = _is_transform_image(p)
    except Exception as exc:  # per-sample failures are an outcome, not a crash
        out["error"] = True
        out["outcome"] = f"{type(exc).__name__}: {exc}"
    return out


def _is_transform_image(p: Presentation) -> bool:
    phi = primitive_character(p)
    for sign in (phi, -phi):
        try:
            norm = normalize(p, sign)
        except CharacterError:
            continue
        # relator i must be paired with generator i; try every relator order
        q = norm.transformed_presentation
        for order in permutations(range(q.n_relators)):
            try:
                remove_commutators([q.relators[i] for i in order], norm.transformed_character)
                return True
            except TransformError:
                pass
    return False


def _run_trials(config: SampleConfig, start: int, stop: int, log: bool):
    counts = {k: 0 for k in PROPERTIES}
    rows = []
    for trial in range(start, stop):
        p = sample_presentation(config, make_rng(config.seed, trial))
        res = measure(p, config)
        for k in PROPERTIES:
            counts[k] += bool(res[k])
        if log:
            rows.append({"trial": trial, "relators": [list(r) for r in p.relators],
                         **{k: v for k, v in res.items()}})
    return counts, rows


def wilson_interval(successes: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    phat = successes / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, min(centre - half, phat)), min(1.0, max(centre + half, phat))


@dataclass(frozen=True)
class PropertyEstimate:
    name: str
    successes: int
    trials: int

    @property
    def estimate(self) -> float:
        return self.successes / self.trials

    @property
    def interval(self) -> tuple[float, float]:
        return wilson_interval(self.successes, self.trials)


@dataclass(frozen=True)
class EstimateReport:
    config: SampleConfig
    properties: tuple[PropertyEstimate, ...]
    runtime: float = field(compare=False)
    samples: tuple[dict, ...] = field(default=(), compare=False, repr=False)

    def __getitem__(self, name: str) -> PropertyEstimate:
        for p in self.properties:
            if p.name == name:
                return p
        raise KeyError(name)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "successes", "trials", "estimate", "ci_low", "ci_high"])
        for p in self.properties:
            lo, hi = p.interval
            w.writerow([p.name, p.successes, p.trials, f"{p.estimate:.6f}", f"{lo:.6f}", f"{hi:.6f}"])
        return buf.getvalue()

    def to_json(self) -> dict:
        # runtime is left out so the output is reproducible
        return {
            "config": vars(self.config),
            "seed": self.config.seed,
            "properties": [
                {"name": p.name, "successes": p.successes, "trials": p.trials,
                 "estimate": p.estimate, "ci_low": p.interval[0], "ci_high": p.interval[1]}
                for p in self.properties
            ],
        }


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def run_experiment(config: SampleConfig, threads: int | None = None, log: bool = False) -> EstimateReport:
    """Sample ``config.trials`` presentations and tally every property.

    Trial ``i`` draws from its own substream of ``config.seed``, so the result
    does not depend on ``threads``.
    """
    threads = default_threads() if threads is None else max(1, threads)
    t0 = time.perf_counter()
    if threads == 1 or config.trials < 2 * threads:
        parts = [_run_trials(config, 0, config.trials, log)]
    else:
        chunk = math.ceil(config.trials / (threads * 4))
        bounds = [(s, min(s + chunk, config.trials)) for s in range(0, config.trials, chunk)]
        with ProcessPoolExecutor(threads) as pool:
            parts = list(pool.map(_run_trials, *zip(*[(config, s, e, log) for s, e in bounds])))
    counts = {k: sum(part[0][k] for part in parts) for k in PROPERTIES}
    samples = tuple(row for part in parts for row in part[1])
    props = tuple(PropertyEstimate(k, counts[k], config.trials) for k in PROPERTIES)
    return EstimateReport(config, props, time.perf_counter() - t0, samples)


def write_log(report: EstimateReport, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in report.samples:
            fh.write(json.dumps(row, sort_keys=True) + "\n")
