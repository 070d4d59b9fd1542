"""Monte Carlo over reduced spectra of Haar-random bipartite pure states.

A sample is the eigenvalue vector of W W*/tr(W W*) for an N x M matrix W of
independent complex Gaussian entries, which realizes exactly the reduced
state of a uniformly random pure state on an NM-dimensional space.

Determinism contract: results for a fixed (seed, dims, sample_count) are
bit-identical no matter how the work is chunked or how many workers run.
This is achieved by drawing each fixed-size block of samples from its own
counter-based stream keyed by (seed, block index) and folding the per-block
partial statistics strictly in block order.  `chunk_size` is therefore only
a dispatch hint; accumulation granularity is the internal block.
"""

from __future__ import annotations

import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .core import BipartitionDims, Spectrum
from .errors import AccuracyError

__all__ = [
    "SamplerConfig",
    "EnsembleEstimate",
    "HistogramTable",
    "sample_spectrum",
    "estimate",
    "estimate_many",
    "rescaled_eigenvalues",
    "histogram_rescaled",
    "estimate_json_dict",
]

_BLOCK = 1024
_CLAMP = -1e-13
_POWER_RE = re.compile(r"^(det_power|trace_power)\((\d+)\)$")


def _env_worker_cap() -> int:
    raw = os.environ.get("TYPENT_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    cap = int(raw)
    if cap < 1:
        raise ValueError(f"TYPENT_THREADS must be >= 1, got {cap}")
    return cap


def _resolve_workers(requested: int | None) -> int:
    cap = _env_worker_cap()
    if requested is None:
        return max(1, min(4, os.cpu_count() or 1, cap))
    if requested < 1:
        raise ValueError(f"workers must be >= 1, got {requested}")
    return min(requested, cap)


@dataclass(frozen=True)
class SamplerConfig:
    """Run description; chunk_size is a dispatch hint, not a result knob."""

    dims: BipartitionDims
    sample_count: int
    seed: int = 0
    chunk_size: int = _BLOCK

    def __post_init__(self) -> None:
        if self.sample_count < 1:
            raise ValueError(f"sample_count must be >= 1, got {self.sample_count}")
        if self.chunk_size < 1:
            raise ValueError(f"chunk_size must be >= 1, got {self.chunk_size}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")


@dataclass(frozen=True)
class EnsembleEstimate:
    mean: float
    std_error: float
    count: int
    functional_name: str


def _block_rng(seed: int, block_index: int) -> np.random.Generator:
    key = np.array([seed, block_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _eigenvalue_block(
    dims: BipartitionDims, seed: int, block_index: int, block_len: int
) -> np.ndarray:
    """Ascending eigenvalues of block_len sampled spectra, shape (B, N)."""
    n, m = dims.n, dims.m
    g = _block_rng(seed, block_index)
    z = g.standard_normal((block_len, n, m)) + 1j * g.standard_normal(
        (block_len, n, m)
    )
    a = z @ np.conjugate(np.swapaxes(z, 1, 2))
    tr = np.einsum("bii->b", a).real
    a /= tr[:, None, None]
    vals = np.linalg.eigvalsh(a)
    low = float(vals.min())
    if low < _CLAMP:
        raise AccuracyError(
            "sampled spectrum has an eigenvalue below the clamp window",
            value=low,
        )
    np.clip(vals, 0.0, None, out=vals)
    return vals


def sample_spectrum(dims: BipartitionDims, rng: np.random.Generator) -> Spectrum:
    """One spectrum from the given generator (real draws, then imaginary)."""
    n, m = dims.n, dims.m
    z = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
    a = z @ np.conjugate(z.T)
    a /= np.trace(a).real
    vals = np.linalg.eigvalsh(a)
    low = float(vals.min())
    if low < _CLAMP:
        raise AccuracyError(
            "sampled spectrum has an eigenvalue below the clamp window", value=low
        )
    return Spectrum.from_values(np.clip(vals, 0.0, None))


def _functional(dims: BipartitionDims, name: str) -> Callable[[np.ndarray], np.ndarray]:
    """Map a functional name to a row-wise evaluator on (B, N) eigenvalues."""
    if name == "purity":
        return lambda v: np.sum(v * v, axis=1)
    if name == "entropy":

        def _entropy(v: np.ndarray) -> np.ndarray:
            safe = np.where(v > 0.0, v, 1.0)
            return -np.sum(v * np.log(safe), axis=1)

        return _entropy
    if name == "det":
        return lambda v: np.prod(v, axis=1)
    if name == "lambda_variance":
        center = 1.0 / dims.n
        return lambda v: np.mean((v - center) ** 2, axis=1)
    match = _POWER_RE.match(name)
    if match is not None:
        k = int(match.group(2))
        if k < 1:
            raise ValueError(f"power must be >= 1 in {name!r}")
        if match.group(1) == "det_power":
            return lambda v: np.prod(v, axis=1) ** k
        return lambda v: np.sum(v**k, axis=1)
    raise ValueError(
        f"unknown functional {name!r}; expected purity, entropy, det, "
        "lambda_variance, det_power(k), or trace_power(k)"
    )


def _block_ranges(count: int) -> list[tuple[int, int, int]]:
    """(block_index, start, length) triples covering range(count)."""
    out = []
    index = 0
    start = 0
    while start < count:
        length = min(_BLOCK, count - start)
        out.append((index, start, length))
        index += 1
        start += length
    return out


def _merge(
    a: tuple[int, np.ndarray, np.ndarray], b: tuple[int, np.ndarray, np.ndarray]
) -> tuple[int, np.ndarray, np.ndarray]:
    """Chan combination of (count, mean, M2) partials, per functional."""
    ca, ma, sa = a
    cb, mb, sb = b
    c = ca + cb
    delta = mb - ma
    mean = ma + delta * (cb / c)
    m2 = sa + sb + delta * delta * (ca * cb / c)
    return c, mean, m2


def _map_blocks(work: Sequence, fn: Callable, workers: int) -> Iterable:
    if workers <= 1 or len(work) <= 1:
        return map(fn, work)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, work))


def estimate_many(
    config: SamplerConfig,
    functionals: Sequence[str],
    workers: int | None = None,
) -> dict[str, EnsembleEstimate]:
    """Single-pass streaming estimates of several functionals at once."""
    names = list(functionals)
    if len(set(names)) != len(names):
        raise ValueError("duplicate functional names")
    fns = [_functional(config.dims, name) for name in names]
    nworkers = _resolve_workers(workers)

    def _partials(task: tuple[int, int, int]):
        block_index, _, length = task
        vals = _eigenvalue_block(config.dims, config.seed, block_index, length)
        out = []
        for fn in fns:
            x = fn(vals)
            mean = float(np.mean(x))
            m2 = float(np.sum((x - mean) ** 2))
            out.append((length, np.float64(mean), np.float64(m2)))
        return out

    ranges = _block_ranges(config.sample_count)
    merged: list[tuple[int, np.ndarray, np.ndarray]] | None = None
    # pool.map yields results in submission order, so the fold below is
    # always the in-order reduction the determinism contract requires
    for partials in _map_blocks(ranges, _partials, nworkers):
        if merged is None:
            merged = list(partials)
        else:
            merged = [_merge(m, p) for m, p in zip(merged, partials)]
    assert merged is not None
    result = {}
    for name, (count, mean, m2) in zip(names, merged):
        if count > 1:
            std_error = float(np.sqrt(m2 / (count - 1)) / np.sqrt(count))
        else:
            std_error = 0.0
        result[name] = EnsembleEstimate(
            mean=float(mean), std_error=std_error, count=count, functional_name=name
        )
    return result


def estimate(
    config: SamplerConfig, functional: str, workers: int | None = None
) -> EnsembleEstimate:
    """Streaming mean and standard error of one spectral functional."""
    return estimate_many(config, [functional], workers=workers)[functional]


def rescaled_eigenvalues(
    config: SamplerConfig, workers: int | None = None
) -> np.ndarray:
    """All sampled eigenvalues times N, pooled in block order."""
    nworkers = _resolve_workers(workers)

    def _block(task: tuple[int, int, int]):
        block_index, _, length = task
        vals = _eigenvalue_block(config.dims, config.seed, block_index, length)
        return (config.dims.n * vals).ravel()

    parts = list(_map_blocks(_block_ranges(config.sample_count), _block, nworkers))
    return np.concatenate(parts)


@dataclass(frozen=True)
class HistogramTable:
    """Unit-area histogram of rescaled eigenvalues."""

    edges: np.ndarray
    density: np.ndarray

    def rows(self) -> list[tuple[float, float, float]]:
        return [
            (float(self.edges[i]), float(self.edges[i + 1]), float(self.density[i]))
            for i in range(len(self.density))
        ]


def histogram_rescaled(
    config: SamplerConfig, bins: int, workers: int | None = None
) -> HistogramTable:
    """Histogram of mu = N*lambda over uniform bins on [0, max(4, observed))."""
    if bins < 10:
        raise ValueError(f"bins must be >= 10, got {bins}")
    mu = rescaled_eigenvalues(config, workers=workers)
    top = max(4.0, float(mu.max()))
    edges = np.linspace(0.0, top, bins + 1)
    density, _ = np.histogram(mu, bins=edges, density=True)
    return HistogramTable(edges=edges, density=density)


def estimate_json_dict(config: SamplerConfig, est: EnsembleEstimate) -> dict:
    """Estimate as a plain dict in the documented export key order."""
    return {
        "functional": est.functional_name,
        "n": config.dims.n,
        "m": config.dims.m,
        "count": est.count,
        "seed": config.seed,
        "mean": est.mean,
        "std_error": est.std_error,
    }
