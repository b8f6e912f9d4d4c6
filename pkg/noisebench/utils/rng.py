"""
Deterministic random numbers and the noise samplers built on them.

The generator is xoshiro256** seeded through splitmix64. One ``Rng`` carries any
number of independent lanes stepped in lockstep: lane ``i`` is a complete
xoshiro256** stream of its own, so a row-per-lane layout reproduces exactly what
a scalar generator per row would produce. Every sampler returns one variate per
lane as a numpy array.

Inversion samplers use ``1 - u`` so that ``u = 0`` never reaches ``log(0)``.
"""

from __future__ import annotations
import math
from typing import Sequence

import numpy as np

from noisebench.utils.errors import ParameterError
from noisebench.utils.image_core import round_half_away


MASK64 = (1 << 64) - 1
POISSON_KNUTH_LIMIT = 30.0

_GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U53_SCALE = 2.0**-53


def _splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step on Python ints: returns (next_state, output)."""
    state = (state + _GOLDEN_GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ParameterError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed <= MASK64:
        raise ParameterError(f"seed must fit in 64 unsigned bits, got {seed}")
    return seed


def expand_seed(seed: int) -> tuple[int, int, int, int]:
    """The four 64-bit xoshiro256** state words for ``seed``."""
    state = check_seed(seed)
    words = []
    for _ in range(4):
        state, word = _splitmix64(state)
        words.append(word)
    return tuple(words)


def derive_substream(seed: int, label: str) -> int:
    """Seed of the sub-stream named ``label``: FNV-1a of the label mixed into the seed by splitmix64."""
    digest = _FNV_OFFSET
    for byte in label.encode("utf-8"):
        digest = ((digest ^ byte) * _FNV_PRIME) & MASK64
    _, derived = _splitmix64(check_seed(seed) ^ digest)
    return derived


def _rotl(x: np.ndarray, k: int) -> np.ndarray:
    return (x << np.uint64(k)) | (x >> np.uint64(64 - k))


class Rng:
    """Lane-parallel xoshiro256** generator; each instance has a single owner."""

    __slots__ = ("_state",)

    def __init__(self, lane_seeds: Sequence[int]):
        if len(lane_seeds) == 0:
            raise ParameterError("an Rng needs at least one lane")
        words = [expand_seed(seed) for seed in lane_seeds]
        self._state = np.array(words, dtype=np.uint64).T.copy()

    @classmethod
    def from_seed(cls, seed: int) -> Rng:
        return cls([seed])

    @classmethod
    def from_labels(cls, seed: int, labels: Sequence[str]) -> Rng:
        """One lane per label, each seeded by ``derive_substream(seed, label)``."""
        return cls([derive_substream(seed, label) for label in labels])

    @property
    def lanes(self) -> int:
        return self._state.shape[1]

    def next_u64(self, active: np.ndarray | None = None) -> np.ndarray:
        """Next raw output per lane; lanes outside ``active`` keep their state and return garbage."""
        s0, s1, s2, s3 = self._state
        result = _rotl(s1 * np.uint64(5), 7) * np.uint64(9)
        t = s1 << np.uint64(17)
        n2 = s2 ^ s0
        n3 = s3 ^ s1
        n1 = s1 ^ n2
        n0 = s0 ^ n3
        n2 = n2 ^ t
        n3 = _rotl(n3, 45)
        advanced = np.stack([n0, n1, n2, n3])
        if active is None:
            self._state = advanced
        else:
            self._state = np.where(active, advanced, self._state)
        return result


def uniform01(rng: Rng, active: np.ndarray | None = None) -> np.ndarray:
    """Uniform variates in [0, 1) carrying the top 53 bits of each output."""
    return (rng.next_u64(active) >> np.uint64(11)).astype(np.float64) * _U53_SCALE


def _invert_exponential(u: np.ndarray, a: float) -> np.ndarray:
    return -np.log1p(-u) / a


def _invert_rayleigh(u: np.ndarray, a: float, b: float) -> np.ndarray:
    return a + np.sqrt(-b * np.log1p(-u))


def _box_muller(rng: Rng, active: np.ndarray | None = None) -> np.ndarray:
    u1 = uniform01(rng, active)
    u2 = uniform01(rng, active)
    return np.sqrt(-2.0 * np.log1p(-u1)) * np.cos(2.0 * math.pi * u2)


def sample_normal(rng: Rng, mu: float, sigma: float) -> np.ndarray:
    if not sigma >= 0:
        raise ParameterError(f"normal sigma must be >= 0, got {sigma}")
    return mu + sigma * _box_muller(rng)


def sample_poisson(rng: Rng, lam: float | np.ndarray) -> np.ndarray:
    """
    Poisson counts per lane; ``lam`` may be a scalar or one rate per lane.

    Lanes with rate up to ``POISSON_KNUTH_LIMIT`` use Knuth's multiplication
    method and draw a variable number of uniforms; the rest use a rounded normal
    approximation clamped at zero and draw exactly two.
    """
    rates = np.broadcast_to(np.asarray(lam, dtype=np.float64), (rng.lanes,))
    if not np.all(np.isfinite(rates)) or np.any(rates < 0):
        raise ParameterError("poisson lambda must be finite and >= 0")

    counts = np.zeros(rng.lanes, dtype=np.int64)
    small = rates <= POISSON_KNUTH_LIMIT

    limit = np.exp(-rates)
    product = np.ones(rng.lanes)
    active = small.copy()
    while active.any():
        product = np.where(active, product * uniform01(rng, active), product)
        active &= product > limit
        counts += active

    large = ~small
    if large.any():
        z = _box_muller(rng, large)
        approx = np.maximum(0.0, round_half_away(rates + np.sqrt(rates) * z))
        counts = np.where(large, approx.astype(np.int64), counts)
    return counts


def sample_gamma(rng: Rng, a: float, b: int) -> np.ndarray:
    """Erlang variates: the sum of ``b`` exponentials of rate ``a``."""
    if not a > 0:
        raise ParameterError(f"erlang rate a must be > 0, got {a}")
    if isinstance(b, bool) or int(b) != b or b < 1:
        raise ParameterError(f"erlang shape b must be a positive integer, got {b}")
    total = np.zeros(rng.lanes)
    for _ in range(int(b)):
        total += _invert_exponential(uniform01(rng), a)
    return total


def sample_exponential(rng: Rng, a: float) -> np.ndarray:
    if not a > 0:
        raise ParameterError(f"exponential rate a must be > 0, got {a}")
    return _invert_exponential(uniform01(rng), a)


def sample_rayleigh(rng: Rng, a: float, b: float) -> np.ndarray:
    if not b > 0:
        raise ParameterError(f"rayleigh scale b must be > 0, got {b}")
    return _invert_rayleigh(uniform01(rng), a, b)
