from logging import getLogger
from typing import Iterable, Union

import numpy as np

from src.error import DomainError

logger = getLogger(__name__)

MAX_UINT64 = 0xFFFFFFFFFFFFFFFF

GOLDEN_GAMMA = np.uint64(0x9E3779B97F4A7C15)
MIX_MULTIPLIER_1 = np.uint64(0xBF58476D1CE4E5B9)
MIX_MULTIPLIER_2 = np.uint64(0x94D049BB133111EB)

UNIFORM_SCALE = 2.0 ** -53


def _shift(count: int) -> np.uint64:
    return np.uint64(count)


def rotl(x: np.ndarray, k: int) -> np.ndarray:
    return (x << _shift(k)) | (x >> _shift(64 - k))


def splitmix64_mix(z: np.ndarray) -> np.ndarray:
    """
    The splitmix64 output function, lane-wise on uint64 arrays.

    :param z: (np.ndarray of uint64) pre-mixed states
    :return: (np.ndarray of uint64) mixed values
    """
    with np.errstate(over='ignore'):
        z = (z ^ (z >> _shift(30))) * MIX_MULTIPLIER_1
        z = (z ^ (z >> _shift(27))) * MIX_MULTIPLIER_2
    return z ^ (z >> _shift(31))


def as_seed_array(seeds: Union[int, Iterable[int], np.ndarray]) -> np.ndarray:
    values = np.atleast_1d(np.asarray(seeds, dtype=object))
    for value in values:
        if int(value) != value or not 0 <= int(value) <= MAX_UINT64:
            raise DomainError('Seeds must be integers in [0, 2^64): {}'.format(value))
    return np.array([int(value) for value in values], dtype=np.uint64)


def replication_seeds(base_seed: int, rep_indices: Iterable[int], tag: int = 0) -> np.ndarray:
    """
    Seeds of independent per-replication streams.

    Seed for replication r is splitmix64(base_seed XOR r, tag-th step), so streams depend only on
    (base_seed, r, tag) and never on how replications are scheduled.

    :param base_seed: (int) experiment seed in [0, 2^64)
    :param rep_indices: (iterable of int) replication indices
    :param tag: (int) stream tag separating experiments that share a seed (e.g. sample size)
    :return: (np.ndarray of uint64) one seed per replication
    """
    base = as_seed_array(base_seed)[0]
    reps = as_seed_array(list(rep_indices))
    with np.errstate(over='ignore'):
        offset = GOLDEN_GAMMA * np.uint64(int(tag) + 1)
        return splitmix64_mix((base ^ reps) + offset)


class RandomStream:
    """
    Vectorised xoshiro256++ generator seeded through splitmix64.

    Each lane is an independent generator, and lane i yields exactly the sequence of a one-lane
    stream built from seeds[i].

    Attributes:
        seeds: (np.ndarray of uint64) seed of each lane
        state: (np.ndarray of uint64, shape (4, lanes)) generator state
    """

    def __init__(self, seeds: Union[int, Iterable[int], np.ndarray]):
        self._scalar = np.ndim(seeds) == 0
        self.seeds = as_seed_array(seeds)
        self.state = np.empty((4, self.seeds.size), dtype=np.uint64)
        with np.errstate(over='ignore'):
            for word in range(4):
                self.state[word] = splitmix64_mix(self.seeds + GOLDEN_GAMMA * np.uint64(word + 1))

    @property
    def lanes(self) -> int:
        return self.seeds.size

    def next_uint64(self) -> np.ndarray:
        """
        Advance every lane once.

        :return: (np.ndarray of uint64) one output per lane
        """
        s = self.state
        with np.errstate(over='ignore'):
            result = rotl(s[0] + s[3], 23) + s[0]
        t = s[1] << _shift(17)
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = rotl(s[3], 45)
        return result

    def uniform(self, size: int) -> np.ndarray:
        """
        Draw uniforms in the open interval (0, 1) from the top 53 bits of each output.

        The all-zero output maps to 2^-54 instead of 0.

        :param size: (int) draws per lane
        :return: (np.ndarray) shape (size,) for a scalar-seeded stream, else (lanes, size)
        """
        draws = np.empty((size, self.lanes), dtype=np.float64)
        for index in range(size):
            top_bits = (self.next_uint64() >> _shift(11)).astype(np.float64)
            draws[index] = top_bits * UNIFORM_SCALE
        draws[draws == 0.0] = 0.5 * UNIFORM_SCALE
        draws = np.ascontiguousarray(draws.T)
        return draws[0] if self._scalar else draws
