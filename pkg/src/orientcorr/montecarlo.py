"""Seeded Monte Carlo estimates of event probabilities.

Samples are drawn in fixed-size chunks.  Chunk ``k`` gets its own numpy
generator seeded with ``splitmix64(seed ^ k * GOLDEN)``, so the estimate
depends only on (seed, samples), never on how chunks are scheduled.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import Graph
from .models import ModelSpec, StateTable, WorldState

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
SAMPLE_CHUNK = 1 << 15


def splitmix64(x: int) -> int:
    x = (x + GOLDEN) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def chunk_seed(seed: int, chunk: int) -> int:
    return splitmix64((seed ^ (chunk * GOLDEN)) & MASK64)


@dataclass(frozen=True)
class McEstimate:
    estimate: float
    standard_error: float
    samples: int
    seed: int
    model: str
    hits: int

    def to_json(self) -> dict:
        return {
            "kind": "mc",
            "model": self.model,
            "estimate": repr(self.estimate),
            "standard_error": repr(self.standard_error),
            "samples": self.samples,
            "hits": self.hits,
            "seed": self.seed,
        }


def _sample_codes(g: Graph, model: ModelSpec, rng: np.random.Generator, size: int) -> np.ndarray:
    probs = np.array([float(w) for _, w in model.local_states])
    probs /= probs.sum()
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    u = rng.random((g.m, size))
    return np.searchsorted(cdf, u, side="right").astype(np.uint8)


def sample_state(g: Graph, model: ModelSpec, rng: np.random.Generator) -> WorldState:
    codes = _sample_codes(g, model, rng, 1)
    local = model.local_states
    return WorldState(tuple(local[int(c)][0] for c in codes[:, 0]), Fraction(1))


def estimate_event(
    g: Graph, model: ModelSpec, pred, samples: int, seed: int, threads: int = 1
) -> McEstimate:
    if samples < 1:
        raise ValueError("samples must be at least 1")
    seed &= MASK64
    sizes = [min(SAMPLE_CHUNK, samples - start) for start in range(0, samples, SAMPLE_CHUNK)]

    def run(k: int) -> int:
        rng = np.random.default_rng(chunk_seed(seed, k))
        table = StateTable(g, model, _sample_codes(g, model, rng, sizes[k]))
        return int(np.count_nonzero(pred.mask(table)))

    if threads > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(threads) as pool:
            hits = sum(pool.map(run, range(len(sizes))))
    else:
        hits = sum(run(k) for k in range(len(sizes)))
    est = hits / samples
    return McEstimate(est, math.sqrt(est * (1 - est) / samples), samples, seed, str(model), hits)
