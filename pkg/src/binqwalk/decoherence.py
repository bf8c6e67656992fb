"""Seeded Monte Carlo ensemble of measurement-interrupted walks.

Each trajectory carries the full wave function: after every unitary step a
biased coin with probability ``q`` decides whether the walker's position is
measured, in which case the state collapses to the sampled site and the
chirality is reset to its balanced initial combination.  At the horizon the
final position is sampled from the remaining distribution (or, in exact
mode, the whole distribution is accumulated instead of sampled).

Reproducibility contract: trial ``i`` consumes exactly ``2*t_max + 1``
uniforms from a counter-based stream keyed by ``(master_seed, i)``, so the
ensemble result is bit-identical for a given config regardless of chunking,
thread count, or kernel backend.  Sampled mode aggregates integer counts
(order-insensitive); exact mode reduces per-chunk partial sums in fixed
chunk order.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.signal import peak_prominences

from . import _kernels
from .coin import CoinSpec, angle_tables
from .lattice import Pmf

__all__ = [
    "DecoherenceConfig",
    "EnsembleResult",
    "trial_substream",
    "run_trajectory",
    "run_ensemble",
    "detect_bimodality",
]

_CHUNK_TRIALS = 4096
_MAX_CELLS = 1 << 40  # trials * sites guard against absurd requests
_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class DecoherenceConfig:
    """Ensemble parameters: walk bias, per-step measurement probability,
    horizon, trial count, and the master seed of the substream family."""

    p: float
    q: float
    t_max: int
    trials: int
    master_seed: int

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"bias parameter must lie in [0, 1], got {self.p}")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"measurement probability must lie in [0, 1], got {self.q}")
        if self.t_max < 0:
            raise ValueError(f"horizon must be >= 0, got {self.t_max}")
        if self.trials < 1:
            raise ValueError(f"trial count must be >= 1, got {self.trials}")
        if self.trials * (2 * self.t_max + 1) > _MAX_CELLS:
            raise ValueError(
                f"requested ensemble is too large: trials*(2*t_max+1) "
                f"exceeds {_MAX_CELLS}"
            )


@dataclass(frozen=True)
class EnsembleResult:
    """Aggregated ensemble: empirical position distribution and moments."""

    empirical_pmf: Pmf
    mean: float
    variance: float
    trials: int


def trial_substream(master_seed: int, trial_index: int) -> np.random.Generator:
    """Independent per-trial stream, keyed by (master_seed, trial_index)."""
    key = np.array(
        [master_seed & _SEED_MASK, trial_index & _SEED_MASK], dtype=np.uint64
    )
    return np.random.Generator(np.random.Philox(key=key))


class _SubstreamDrawer:
    """Draws per-trial uniform blocks by rekeying one Philox template.

    Bit-identical to ``trial_substream(seed, i).random(n)`` but ~6x faster;
    each worker task owns its own instance, so no cross-thread state.
    """

    def __init__(self, master_seed: int):
        self._seed = master_seed & _SEED_MASK
        self._bitgen = np.random.Philox(key=np.array([0, 0], dtype=np.uint64))
        self._gen = np.random.Generator(self._bitgen)

    def uniforms(self, trial_index: int, count: int) -> np.ndarray:
        state = self._bitgen.state
        state["state"]["key"][0] = self._seed
        state["state"]["key"][1] = trial_index & _SEED_MASK
        state["state"]["counter"][:] = 0
        state["buffer_pos"] = 4
        state["has_uint32"] = 0
        state["uinteger"] = 0
        self._bitgen.state = state
        return self._gen.random(count)


def _kernel(backend: str | None):
    if backend is None:
        return _kernels.run_chunk
    return _kernels.get_backend(backend).run_chunk


def run_trajectory(
    config: DecoherenceConfig,
    stream: np.random.Generator,
    backend: str | None = None,
) -> int:
    """Run one measurement-interrupted trajectory; returns the final site.

    Consumes exactly ``2*t_max + 1`` uniforms from ``stream``: one
    measure/don't-measure draw and one position draw per step (the latter
    is ignored on unmeasured steps), plus the final readout draw.
    """
    t_max = config.t_max
    u = stream.random(2 * t_max + 1)
    cos_tab, sin_tab = angle_tables(CoinSpec(config.p), t_max)
    sites = _kernel(backend)(
        cos_tab,
        sin_tab,
        config.q,
        np.ascontiguousarray(u[:t_max]).reshape(1, t_max),
        np.ascontiguousarray(u[t_max : 2 * t_max]).reshape(1, t_max),
        u[2 * t_max :].copy(),
        False,
    )
    return int(sites[0])


def _run_chunk_task(config, tables, run_chunk, exact, start, stop):
    t_max = config.t_max
    block = 2 * t_max + 1
    drawer = _SubstreamDrawer(config.master_seed)
    u = np.empty((stop - start, block))
    for row, trial in enumerate(range(start, stop)):
        u[row] = drawer.uniforms(trial, block)
    cos_tab, sin_tab = tables
    out = run_chunk(
        cos_tab,
        sin_tab,
        config.q,
        np.ascontiguousarray(u[:, :t_max]),
        np.ascontiguousarray(u[:, t_max : 2 * t_max]),
        u[:, 2 * t_max].copy(),
        exact,
    )
    if exact:
        return out
    return np.bincount(out + t_max, minlength=block)


def _default_workers() -> int:
    value = os.environ.get("BINQWALK_WORKERS", "1")
    try:
        workers = int(value)
    except ValueError:
        raise ValueError(f"BINQWALK_WORKERS must be an integer, got {value!r}")
    return max(workers, 1)


def run_ensemble(
    config: DecoherenceConfig,
    workers: int | None = None,
    exact_final: bool = False,
    backend: str | None = None,
) -> EnsembleResult:
    """Aggregate independent trajectories into an empirical distribution.

    ``workers`` threads split the trials into fixed chunks (default from
    the BINQWALK_WORKERS environment variable); the result does not depend
    on the worker count.  ``exact_final`` accumulates each trajectory's
    final distribution instead of sampling it, which removes the readout
    sampling noise.
    """
    if workers is None:
        workers = _default_workers()
    t_max = config.t_max
    block = 2 * t_max + 1
    run_chunk = _kernel(backend)
    # Shared read-only by all chunk tasks.
    tables = angle_tables(CoinSpec(config.p), t_max)

    spans = [
        (start, min(start + _CHUNK_TRIALS, config.trials))
        for start in range(0, config.trials, _CHUNK_TRIALS)
    ]
    if workers <= 1 or len(spans) == 1:
        partials = [
            _run_chunk_task(config, tables, run_chunk, exact_final, a, b)
            for a, b in spans
        ]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(
                    _run_chunk_task, config, tables, run_chunk, exact_final, a, b
                )
                for a, b in spans
            ]
            # Collect in submission (chunk) order so float reductions in
            # exact mode stay deterministic under any thread interleaving.
            partials = [f.result() for f in futures]

    if exact_final:
        acc = np.zeros(block)
        for part in partials:
            acc += part
        mass = acc / config.trials
    else:
        counts = np.zeros(block, dtype=np.int64)
        for part in partials:
            counts += part
        mass = counts / config.trials

    dist = Pmf(t=t_max, mass=mass)
    sites = dist.sites.astype(np.float64)
    mean = float(sites @ mass)
    variance = max(float((sites * sites) @ mass) - mean * mean, 0.0)
    return EnsembleResult(
        empirical_pmf=dist, mean=mean, variance=variance, trials=config.trials
    )


def detect_bimodality(dist: Pmf) -> bool:
    """Decide whether a position distribution has two separated modes.

    Folds out the structural parity zeros, smooths with a centered 3-point
    moving average (zeros outside the window), and counts strict local
    maxima whose prominence exceeds 2% of the smoothed peak; two or more
    means bimodal.
    """
    if dist.total() <= 0.0:
        raise ValueError("cannot classify an empty distribution")
    start = (dist.t + dist.span) % 2
    occupied = dist.mass[start::2]
    padded = np.concatenate(([0.0], occupied, [0.0]))
    smooth = (padded[:-2] + padded[1:-1] + padded[2:]) / 3.0
    edge = np.concatenate(([0.0], smooth, [0.0]))
    interior = edge[1:-1]
    is_peak = (interior > edge[:-2]) & (interior > edge[2:])
    peaks = np.flatnonzero(is_peak) + 1
    if peaks.size == 0:
        return False
    prominences = peak_prominences(edge, peaks)[0]
    return int(np.sum(prominences > 0.02 * edge.max())) >= 2
