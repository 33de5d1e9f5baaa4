"""Pseudographs (loops and parallel edges allowed) and exact oracles."""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass
from pathlib import Path


class GraphError(ValueError):
    pass


class InstanceTooLarge(GraphError):
    pass


class NoTotalDominatingSet(GraphError):
    pass


class Pseudograph:
    """Undirected multigraph on vertices ``0..n-1``.

    ``adj[v]`` lists neighbour entries with multiplicity; a loop at ``v``
    appears twice in ``adj[v]`` so that ``len(adj[v])`` is the degree.
    Treat instances as immutable once built.
    """

    def __init__(self, n: int, edges=()):
        if n < 0:
            raise GraphError("negative vertex count")
        self.n = n
        self.edges: list[tuple[int, int]] = []
        self.adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            self.edges.append((u, v))
            self.adj[u].append(v)
            self.adj[v].append(u)

    def __repr__(self):
        return f"Pseudograph(n={self.n}, m={len(self.edges)})"

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def is_regular(self, d: int | None = None) -> bool:
        degs = set(self.degrees())
        if len(degs) > 1:
            return False
        return d is None or not degs or degs == {d}

    def has_loops(self) -> bool:
        return any(u == v for u, v in self.edges)

    def is_simple(self) -> bool:
        seen = set()
        for u, v in self.edges:
            if u == v:
                return False
            key = (u, v) if u < v else (v, u)
            if key in seen:
                return False
            seen.add(key)
        return True

    def neighbor_sets(self) -> list[set[int]]:
        return [set(a) for a in self.adj]


def from_pairing(state) -> Pseudograph:
    """Collapse each bucket of a completed pairing into a vertex."""
    if not state.is_complete():
        raise GraphError(f"pairing incomplete: {state.pool_size} unpaired points")
    return Pseudograph(state.n, state.edges())


def disjoint_union(*graphs: Pseudograph) -> Pseudograph:
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges)
        offset += g.n
    return Pseudograph(offset, edges)


# ---------------------------------------------------------------- generators


def cycle(n: int) -> Pseudograph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return Pseudograph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(k: int) -> Pseudograph:
    return Pseudograph(k, [(i, j) for i in range(k) for j in range(i + 1, k)])


def complete_bipartite(a: int, b: int) -> Pseudograph:
    return Pseudograph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def petersen() -> Pseudograph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Pseudograph(10, outer + spokes + inner)


def random_pairing_graph(n: int, d: int, rng: random.Random) -> Pseudograph:
    """Uniform pairing of ``n*d`` points, collapsed to a pseudograph."""
    if (n * d) % 2:
        raise GraphError("n*d must be even")
    points = [p // d for p in range(n * d)]
    rng.shuffle(points)
    it = iter(points)
    return Pseudograph(n, list(zip(it, it)))


def random_simple_regular(n: int, d: int, rng: random.Random, max_tries: int = 10_000) -> Pseudograph:
    """Uniform simple ``d``-regular graph by rejection from the pairing model."""
    for _ in range(max_tries):
        g = random_pairing_graph(n, d, rng)
        if g.is_simple():
            return g
    raise GraphError(f"no simple pairing after {max_tries} attempts")


GENERATORS = {
    "cycle": cycle,
    "complete": complete,
    "complete_bipartite": complete_bipartite,
    "petersen": petersen,
}


def from_spec(spec: str) -> Pseudograph:
    """Build a named graph from ``name`` or ``name:arg1,arg2``."""
    name, _, args = spec.partition(":")
    try:
        gen = GENERATORS[name]
    except KeyError:
        raise GraphError(f"unknown generator {name!r}; choose from {sorted(GENERATORS)}") from None
    params = [int(a) for a in args.split(",")] if args else []
    return gen(*params)


# ------------------------------------------------------------------ edge list


def parse_edgelist(text: str) -> Pseudograph:
    """Parse the ``n m`` header followed by ``m`` lines ``u v``."""
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise GraphError("expected header line 'n m'")
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        edges = [(int(r[0]), int(r[1])) for r in rows[1:] if len(r) == 2]
    except ValueError as exc:
        raise GraphError(f"malformed edge list: {exc}") from None
    if any(len(r) != 2 for r in rows[1:]) or len(edges) != m:
        raise GraphError(f"header announces {m} edges, found {len(rows) - 1} lines")
    return Pseudograph(n, edges)


def format_edgelist(g: Pseudograph) -> str:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def read_edgelist(path) -> Pseudograph:
    return parse_edgelist(Path(path).read_text())


def write_edgelist(g: Pseudograph, path) -> None:
    Path(path).write_text(format_edgelist(g))


# ---------------------------------------------------------------- domination


@dataclass(frozen=True)
class TdsVerdict:
    is_tds: bool
    witness: int | None = None

    def __bool__(self):
        return self.is_tds


def verify_tds(g: Pseudograph, D) -> TdsVerdict:
    """Check that every vertex has a neighbour in ``D``.

    A loop makes a vertex its own neighbour, so a looped vertex in ``D``
    dominates itself. The witness is the smallest uncovered vertex.
    """
    D = set(D)
    for v in D:
        if not 0 <= v < g.n:
            raise GraphError(f"vertex {v} out of range for n={g.n}")
    covered = bytearray(g.n)
    for v in D:
        for w in g.adj[v]:
            covered[w] = 1
    for v in range(g.n):
        if not covered[v]:
            return TdsVerdict(False, v)
    return TdsVerdict(True)


def brute_force_gamma_t(g: Pseudograph, max_vertices: int = 24) -> tuple[int, frozenset[int]]:
    """Exact total domination number and one optimal set.

    Iterative deepening on the set size. At each node some undominated
    vertex is picked and the search branches on which of its neighbours
    joins the set, so only sets that make progress are explored.
    """
    n = g.n
    if n > max_vertices:
        raise InstanceTooLarge(f"{n} vertices exceeds brute-force limit {max_vertices}")
    if n == 0:
        return 0, frozenset()
    nbr = [0] * n
    for v in range(n):
        for w in g.adj[v]:
            nbr[v] |= 1 << w
    isolated = [v for v in range(n) if not nbr[v]]
    if isolated:
        raise NoTotalDominatingSet(f"vertex {isolated[0]} is isolated")
    full = (1 << n) - 1
    max_cover = max(bin(m).count("1") for m in nbr)
    # candidates per vertex: its distinct neighbours, biggest coverage first
    cands = [sorted({w for w in g.adj[v]}, key=lambda w: -bin(nbr[w]).count("1")) for v in range(n)]

    def search(chosen, covered, k):
        if covered == full:
            return chosen
        missing = bin(full & ~covered).count("1")
        if k == 0 or k * max_cover < missing:
            return None
        # branch on the undominated vertex with the fewest neighbours
        best = None
        rest = full & ~covered
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            if best is None or len(cands[v]) < len(cands[best]):
                best = v
            rest ^= low
        for w in cands[best]:
            if chosen >> w & 1:
                continue
            found = search(chosen | 1 << w, covered | nbr[w], k - 1)
            if found is not None:
                return found
        return None

    for k in range(1, n + 1):
        found = search(0, 0, k)
        if found is not None:
            return k, frozenset(v for v in range(n) if found >> v & 1)
    raise NoTotalDominatingSet("no total dominating set")  # unreachable without isolated vertices


def girth(g: Pseudograph) -> float:
    """Length of a shortest cycle; 1 with a loop, 2 with parallel edges, inf for forests."""
    if g.has_loops():
        return 1
    if not g.is_simple():
        return 2
    best = math.inf
    adj = g.adj
    for root in range(g.n):
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            if 2 * dist[x] + 1 >= best:
                break
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    best = min(best, dist[x] + dist[y] + 1)
    return best
