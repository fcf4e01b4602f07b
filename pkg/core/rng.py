"""
Counter-based random numbers.

Draw number k of a stream depends only on (seed, k), so results do not
depend on batching or on how work is split across processes.
"""

import hashlib
from fractions import Fraction

U64_SPAN = 1 << 64


def _seed_bytes(seed: int) -> bytes:
    return seed.to_bytes(16, "little", signed=True)


def _u64(seed: bytes, counter: int, attempt: int = 0) -> int:
    h = hashlib.blake2b(digest_size=8)
    h.update(seed)
    h.update(counter.to_bytes(8, "little", signed=False))
    h.update(attempt.to_bytes(4, "little", signed=False))
    return int.from_bytes(h.digest(), "little", signed=False)


class CounterRNG:
    """Deterministic stream of 64-bit draws keyed by an integer seed"""

    def __init__(self, seed: int):
        self.seed = seed
        self._key = _seed_bytes(seed)

    def u64(self, counter: int) -> int:
        return _u64(self._key, counter)

    def uniform_rational(self, counter: int) -> Fraction:
        """Exact dyadic rational k / 2**64 in [0, 1)"""
        return Fraction(self.u64(counter), U64_SPAN)

    def randbelow(self, counter: int, n: int) -> int:
        """Unbiased integer in [0, n) by rejection on 64-bit draws"""
        if not 0 < n <= U64_SPAN:
            raise ValueError(f"randbelow needs 0 < n <= 2**64, got {n}")
        limit = U64_SPAN - U64_SPAN % n
        attempt = 0
        while True:
            x = _u64(self._key, counter, attempt)
            if x < limit:
                return x % n
            attempt += 1
