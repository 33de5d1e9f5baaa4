"""Partial pairings in the configuration model.

Points are integers ``0 .. n*d-1``; point ``p`` lives in bucket ``p // d``.
The *degree* of a bucket is its number of already paired points, so a
fresh bucket has degree 0 and a bucket of degree ``i`` corresponds to a
vertex of degree ``d - i`` in the survival graph.
"""

from __future__ import annotations


class ParameterError(ValueError):
    pass


class PoolExhausted(RuntimeError):
    """Not enough unpaired points left to expose a pair (tiny instances)."""


class PairingState:
    """A partial pairing on ``n`` buckets of ``d`` points each.

    The unpaired points are kept in a dense array with a reverse index so
    a uniform partner can be drawn and removed in O(1). The histogram
    ``y`` of bucket degrees and the list of degree-0 buckets are updated
    incrementally on every exposure.
    """

    def __init__(self, n: int, d: int, strict: bool = True):
        # strict=False admits tiny toy states (e.g. n=2, d=2) for sampling checks
        if strict and d < 3:
            raise ParameterError(f"d must be >= 3, got {d}")
        if strict and n <= d:
            raise ParameterError(f"need n > d, got n={n}, d={d}")
        if n < 1 or d < 1:
            raise ParameterError("n and d must be positive")
        if (n * d) % 2:
            raise ParameterError(f"n*d must be even, got {n}*{d}={n * d}")
        self.n = n
        self.d = d
        self.pool = list(range(n * d))
        self.pos = list(range(n * d))
        self.paired_count = [0] * n
        self._hist = [0] * (d + 1)
        self._hist[0] = n
        self.pairs: list[tuple[int, int]] = []
        self._deg0 = list(range(n))
        self._deg0_pos = list(range(n))

    @property
    def y(self) -> list[int]:
        """``Y[0..d-1]``; fully paired buckets are not counted."""
        return self._hist[: self.d]

    @property
    def pool_size(self) -> int:
        return len(self.pool)

    def bucket_of(self, point: int) -> int:
        return point // self.d

    def is_complete(self) -> bool:
        return not self.pool

    def unpaired_points(self, bucket: int) -> list[int]:
        pos = self.pos
        base = bucket * self.d
        return [p for p in range(base, base + self.d) if pos[p] >= 0]

    def _remove(self, p: int) -> None:
        pool, pos = self.pool, self.pos
        i = pos[p]
        last = pool.pop()
        if last != p:
            pool[i] = last
            pos[last] = i
        pos[p] = -1

    def _bump(self, b: int) -> None:
        c = self.paired_count[b]
        self.paired_count[b] = c + 1
        self._hist[c] -= 1
        self._hist[c + 1] += 1
        if c == 0:
            i = self._deg0_pos[b]
            last = self._deg0.pop()
            if last != b:
                self._deg0[i] = last
                self._deg0_pos[last] = i
            self._deg0_pos[b] = -1

    def expose_pair(self, source: int, rng, snapshot: dict | None = None) -> int:
        """Pair ``source`` with a uniform unpaired point; return the partner's bucket.

        Loops and repeated pairs are allowed. If ``snapshot`` is given, the
        degree of each touched bucket is recorded there before its first
        change.
        """
        if not 0 <= source < len(self.pos) or self.pos[source] < 0:
            raise ValueError(f"point {source} is not unpaired")
        if len(self.pool) < 2:
            raise PoolExhausted("fewer than two unpaired points left")
        self._remove(source)
        partner = self.pool[rng.randrange(len(self.pool))]
        self._remove(partner)
        a, b = source // self.d, partner // self.d
        if snapshot is not None:
            pc = self.paired_count
            if a not in snapshot:
                snapshot[a] = pc[a]
            if b not in snapshot:
                snapshot[b] = pc[b]
        self._bump(a)
        self._bump(b)
        self.pairs.append((source, partner))
        return b

    def expose_all_remaining(self, bucket: int, rng, snapshot: dict | None = None) -> list[int]:
        """Expose pairs until ``bucket`` is fully paired; return partners in order."""
        if self.paired_count[bucket] >= self.d:
            raise ValueError(f"bucket {bucket} is already fully paired")
        partners = []
        base = bucket * self.d
        pos = self.pos
        for p in range(base, base + self.d):
            if pos[p] >= 0:
                partners.append(self.expose_pair(p, rng, snapshot))
        return partners

    def complete(self, rng) -> None:
        """Expose every remaining pair."""
        while self.pool:
            self.expose_pair(self.pool[-1], rng)

    def sample_degree0_vertex(self, rng) -> int | None:
        """Uniform bucket with no paired points, or None once there is none."""
        if not self._deg0:
            return None
        return self._deg0[rng.randrange(len(self._deg0))]

    def copy(self) -> "PairingState":
        c = PairingState.__new__(PairingState)
        c.n, c.d = self.n, self.d
        c.pool = self.pool[:]
        c.pos = self.pos[:]
        c.paired_count = self.paired_count[:]
        c._hist = self._hist[:]
        c.pairs = self.pairs[:]
        c._deg0 = self._deg0[:]
        c._deg0_pos = self._deg0_pos[:]
        return c

    def s_k(self, k: int) -> int:
        d, y = self.d, self._hist
        return sum((d - i) * y[i] for i in range(k, d))

    def recount_y(self) -> list[int]:
        """Histogram recomputed from ``paired_count`` (for invariant checks)."""
        y = [0] * self.d
        for c in self.paired_count:
            if c < self.d:
                y[c] += 1
        return y

    def edges(self) -> list[tuple[int, int]]:
        d = self.d
        return [(a // d, b // d) for a, b in self.pairs]
