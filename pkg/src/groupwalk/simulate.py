"""Monte Carlo verification engine: trajectories, stopping times, couplings.

Trials are partitioned into fixed-size blocks; block b of a run draws
from an independent Philox stream keyed by (master_seed, b).  Thread
count only changes how blocks are dispatched, never which numbers a
block sees, so every estimator is bit-identical across worker counts.
All simulated bound checks use the 3-standard-error convention.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .measures import Measure, MeasureError, convolution_power, variation_distance
from .walks import WalkSpec, measure_for

BLOCK_SIZE = 8192
STEP_CAP = 10 ** 6  # hard trajectory cap; hitting it censors, never drops


@dataclass(frozen=True)
class RngStream:
    """Counter-based stream: (master_seed, stream_id) fixes every draw."""
    master_seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        key = np.array([self.master_seed % 2 ** 64, self.stream_id % 2 ** 64],
                       dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


def _blocks(trials: int):
    out = []
    start = 0
    b = 0
    while start < trials:
        size = min(BLOCK_SIZE, trials - start)
        out.append((b, size))
        start += size
        b += 1
    return out


def _map_blocks(fn, trials: int, seed: int, threads: int = 1):
    """Run fn(stream, size) per block; results returned in block order."""
    blocks = _blocks(trials)
    jobs = [(RngStream(seed, b), size) for b, size in blocks]
    if threads <= 1:
        return [fn(s, n) for s, n in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda j: fn(*j), jobs))


def _inverse_cdf_sample(cum: np.ndarray, u: np.ndarray) -> np.ndarray:
    return np.searchsorted(cum, u, side="right")


@dataclass
class StoppingTimeSample:
    """Sampled stopping times with the exceedance estimator P(T > k).

    Censored trials (cap reached) are stored as cap + 1 and counted; they
    exceed every k below the cap, so estimators stay valid there.  The
    standard error uses a Laplace-smoothed variance, so a tail k that no
    trial exceeded still carries its sampling uncertainty instead of a
    degenerate zero.
    """
    times: np.ndarray
    cap: int
    censored: int

    @property
    def trials(self) -> int:
        return len(self.times)

    def exceedance(self, ks):
        ks = np.atleast_1d(np.asarray(ks))
        n = self.trials
        count = (self.times[None, :] > ks[:, None]).sum(axis=1)
        p = count / n
        p_smooth = (count + 1.0) / (n + 2.0)
        stderr = np.sqrt(p_smooth * (1.0 - p_smooth) / n)
        return p, stderr

    def mean(self) -> float:
        ok = self.times <= self.cap
        return float(self.times[ok].mean())

    def curve_csv_rows(self, k_max: int):
        ks = np.arange(k_max + 1)
        p, se = self.exceedance(ks)
        return zip(ks, p, se)


def sample_trajectory(nu: Measure, k: int, rng: np.random.Generator) -> np.ndarray:
    """One walk path xi_0 = e, xi_j+1 = zeta xi_j of length k + 1."""
    if not nu.is_probability:
        raise MeasureError("trajectories need a probability measure")
    g = nu.group
    cum = np.cumsum(nu.weights)
    steps = _inverse_cdf_sample(cum, rng.random(k))
    path = np.empty(k + 1, dtype=np.int64)
    path[0] = g.identity
    cur = g.identity
    for j, z in enumerate(steps, start=1):
        cur = g.mul(int(z), cur)
        path[j] = cur
    return path


def empirical_distribution(nu: Measure, k: int, trials: int, seed: int,
                           threads: int = 1) -> np.ndarray:
    """Empirical law of xi_k over many trajectories (for oracle tests)."""
    g = nu.group
    cum = np.cumsum(nu.weights)
    table = g.table

    def run(stream, size):
        rng = stream.generator()
        cur = np.full(size, g.identity, dtype=np.int64)
        for _ in range(k):
            z = _inverse_cdf_sample(cum, rng.random(size))
            if table is not None:
                cur = table[z, cur]
            else:
                cur = np.array([g.mul(int(a), int(b)) for a, b in zip(z, cur)])
        return np.bincount(cur, minlength=g.order)

    counts = sum(_map_blocks(run, trials, seed, threads))
    return counts / trials


def _coupon_times(n: int, size: int, rng: np.random.Generator,
                  cap: int = STEP_CAP) -> np.ndarray:
    """Steps until all n labels have been drawn at least once, per trial."""
    full = np.uint64((1 << n) - 1)
    mask = np.zeros(size, dtype=np.uint64)
    times = np.full(size, cap + 1, dtype=np.int64)
    active = np.arange(size)
    step = 0
    while active.size and step < cap:
        step += 1
        draw = rng.integers(0, n, size=active.size)
        mask[active] |= np.uint64(1) << draw.astype(np.uint64)
        done = mask[active] == full
        times[active[done]] = step
        active = active[~done]
    return times


def random_to_top_sut(n: int, trials: int, seed: int,
                      threads: int = 1) -> StoppingTimeSample:
    """Strong uniform time of the move-a-random-card-to-top shuffle.

    The stopping time is the first step at which every card has been
    selected at least once ("touched" means selected-for-removal), which
    is exactly an n-coupon collector time.  P(T > k) dominates the
    separation and hence the variation distance of the walk.
    """
    if not 2 <= n <= 63:
        raise ValueError("need 2 <= n <= 63 cards (bitmask bookkeeping)")
    parts = _map_blocks(lambda s, m: _coupon_times(n, m, s.generator()),
                        trials, seed, threads)
    times = np.concatenate(parts)
    censored = int((times > STEP_CAP).sum())
    return StoppingTimeSample(times, STEP_CAP, censored)


@dataclass
class CouplingSample:
    """Coupling-time sample plus the marginal-law sanity check at k_marginal."""
    sample: StoppingTimeSample
    marginal_counts: np.ndarray
    k_marginal: int
    chi_square_p: float


def cube_coupling(n: int, trials: int, seed: int, threads: int = 1,
                  k_marginal: int = 5) -> CouplingSample:
    """Coordinate-checking coupling for the lazy walk on the n-cube.

    Each step picks a coordinate uniformly and flips a fair coin; heads
    flips the walk's coordinate and sets the stationary copy to match,
    tails leaves the walk alone and copies its coordinate instead.
    Either way the two chains agree on every touched coordinate, so the
    coupling time is the first step when all n coordinates have been
    chosen.  The walk's marginal law is plain lazy-walk sampling, which
    a chi-square test certifies at step k_marginal.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if n > 16:
        raise ValueError("marginal bookkeeping capped at n = 16")
    order = 1 << n
    full = np.uint64(order - 1)

    def run(stream, size):
        rng = stream.generator()
        xi = np.zeros(size, dtype=np.uint64)
        pi_chain = rng.integers(0, order, size=size).astype(np.uint64)
        seen = np.zeros(size, dtype=np.uint64)
        times = np.full(size, STEP_CAP + 1, dtype=np.int64)
        unfinished = np.ones(size, dtype=bool)
        marg = None
        step = 0
        while unfinished.any() or step < k_marginal:
            step += 1
            if step > STEP_CAP:
                break
            bit = np.uint64(1) << rng.integers(0, n, size=size).astype(np.uint64)
            heads = rng.integers(0, 2, size=size).astype(bool)
            flip = heads
            xi = np.where(flip, xi ^ bit, xi)
            # stationary copy's chosen coordinate always ends equal to xi's
            pi_chain = (pi_chain & ~bit) | (xi & bit)
            seen |= bit
            done = unfinished & (seen == full)
            times[done] = step
            unfinished &= ~done
            if step == k_marginal:
                marg = np.bincount(xi.astype(np.int64), minlength=order)
        return times, marg

    parts = _map_blocks(run, trials, seed, threads)
    times = np.concatenate([p[0] for p in parts])
    counts = sum(p[1] for p in parts)
    censored = int((times > STEP_CAP).sum())
    sample = StoppingTimeSample(times, STEP_CAP, censored)

    g, nu = measure_for(WalkSpec("cube-loops", n))
    exact = convolution_power(nu, k_marginal)
    expected = exact.weights * trials
    keep = expected > 0
    chi_p = float(stats.chisquare(counts[keep], expected[keep]).pvalue)
    return CouplingSample(sample, counts, k_marginal, chi_p)


@dataclass
class SwitzerResult:
    win_rate: float
    expected: float
    stderr: float
    trials: int

    @property
    def within_3_sigma(self) -> bool:
        return abs(self.win_rate - self.expected) <= 3.0 * self.stderr


def switzer_game(mu: Measure, nu: Measure, trials: int, seed: int,
                 threads: int = 1) -> SwitzerResult:
    """Play the guess-the-source game with the max-likelihood strategy.

    The observation comes from mu or nu with equal probability; guessing
    the measure with the larger point mass wins with probability
    (1 + ||mu - nu||)/2.
    """
    if not (mu.is_probability and nu.is_probability):
        raise MeasureError("the guessing game needs probability measures")
    cum_mu = np.cumsum(mu.weights)
    cum_nu = np.cumsum(nu.weights)
    prefer_mu = mu.weights >= nu.weights

    def run(stream, size):
        rng = stream.generator()
        source_is_mu = rng.integers(0, 2, size=size).astype(bool)
        u = rng.random(size)
        obs_mu = _inverse_cdf_sample(cum_mu, u)
        obs_nu = _inverse_cdf_sample(cum_nu, u)
        obs = np.where(source_is_mu, obs_mu, obs_nu)
        wins = prefer_mu[obs] == source_is_mu
        return int(wins.sum())

    wins = sum(_map_blocks(run, trials, seed, threads))
    rate = wins / trials
    expected = 0.5 * (1.0 + variation_distance(mu, nu))
    stderr = float(np.sqrt(max(rate * (1 - rate), 1e-12) / trials))
    return SwitzerResult(rate, expected, stderr, trials)


@dataclass
class VisitsResult:
    """Visits to a target on [0, T) for T the first return to the identity.

    Visits are counted on 0 <= t < T including time 0, so the identity
    itself always scores exactly 1.  Trials that hit the step cap are
    censored and reported, never silently dropped.
    """
    visits: np.ndarray
    return_times: np.ndarray
    censored: int
    cap: int

    @property
    def trials(self) -> int:
        return len(self.visits) + self.censored

    @property
    def mean_visits(self) -> float:
        return float(self.visits.mean())

    @property
    def mean_return_time(self) -> float:
        return float(self.return_times.mean())

    def ratio_with_stderr(self):
        """(mean visits)/(mean T) with a delta-method standard error."""
        r = self.mean_visits / self.mean_return_time
        n = len(self.visits)
        var = np.var(self.visits - r * self.return_times, ddof=1)
        se = float(np.sqrt(var / n) / self.mean_return_time)
        return r, se


def visits_before_return(nu: Measure, target: int, trials: int, seed: int,
                         threads: int = 1, cap: int = STEP_CAP) -> VisitsResult:
    """Sample the visit count to ``target`` before the walk first re-enters e."""
    g = nu.group
    if g.table is None:
        raise MeasureError("visit sampling needs a table-backed group")
    cum = np.cumsum(nu.weights)
    table = g.table
    e = g.identity

    def run(stream, size):
        rng = stream.generator()
        cur = np.full(size, e, dtype=np.int64)
        visits = (cur == target).astype(np.int64)  # time 0 counts
        times = np.full(size, cap + 1, dtype=np.int64)
        alive = np.arange(size)
        step = 0
        while alive.size and step < cap:
            step += 1
            z = _inverse_cdf_sample(cum, rng.random(alive.size))
            cur[alive] = table[z, cur[alive]]
            returned = cur[alive] == e
            times[alive[returned]] = step
            still = ~returned
            visits[alive[still]] += (cur[alive[still]] == target)
            alive = alive[still]
        return visits, times

    parts = _map_blocks(run, trials, seed, threads)
    visits = np.concatenate([p[0] for p in parts])
    times = np.concatenate([p[1] for p in parts])
    ok = times <= cap
    return VisitsResult(visits[ok], times[ok], int((~ok).sum()), cap)
