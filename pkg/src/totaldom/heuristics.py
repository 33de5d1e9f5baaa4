"""The greedy total-domination heuristics and their per-round traces.

Three procedures share one round structure and one cleanup step:

* :func:`run_algorithm_1c` builds a random pairing while it runs, so every
  neighbourhood query is answered by exposing fresh pairs;
* :func:`run_algorithm_1l` runs the same decisions on an explicit graph,
  where "degree d in the survival graph" means "not yet dominated";
* :func:`run_baseline` is the simpler three-rule process (pick an
  undominated ``v`` and a random neighbour ``u``; take both if ``u`` is
  undominated, else only ``u``), on a pairing or on a graph.

Every degree test inside a round reads the degrees from the start of the
round. The returned set is always checked with :func:`verify_tds`.
"""

from __future__ import annotations

import csv
import enum
import io
import random
from dataclasses import dataclass, field

from .graph import GraphError, Pseudograph, from_pairing, verify_tds
from .pairing import PairingState


class Branch(str, enum.Enum):
    SINGLE = "SINGLE"          # u_t already dominated: take u_t
    PAIR_U = "PAIR_U"          # u_t has another undominated neighbour: take u_t, v_t
    PAIR_W = "PAIR_W"          # v_t has another undominated neighbour w_t: take v_t, w_t
    PAIR_PRIME = "PAIR_PRIME"  # take a neighbour of each of v_t and u_t


class Variant(str, enum.Enum):
    ALG_1C = "1c"
    ALG_1L = "1l"
    BASELINE = "baseline"


class InvariantViolation(AssertionError):
    pass


@dataclass
class HeuristicConfig:
    eps: float = 0.0
    seed: int = 0
    variant: Variant = Variant.ALG_1C

    def __post_init__(self):
        if not 0 <= self.eps < 1:
            raise ValueError("eps must lie in [0, 1)")
        self.variant = Variant(self.variant)

    def keep_going(self, undominated: int, n: int) -> bool:
        return undominated > 0 and undominated >= self.eps * n


@dataclass
class RunTrace:
    """History of one run.

    Row ``t`` holds the state at the start of round ``t``; ``branches[t]``,
    ``exposed[t]`` and ``collisions`` describe round ``t`` itself, so
    ``len(rows) == rounds + 1``.
    """

    n: int
    d: int
    seed: int
    eps: float
    variant: Variant
    ys: list = field(default_factory=list)
    qs: list = field(default_factory=list)
    branches: list = field(default_factory=list)
    exposed: list = field(default_factory=list)
    collisions: set = field(default_factory=set)  # rounds where two picks coincided
    cleanup_added: int = 0
    d_size: int = 0

    @property
    def rounds(self) -> int:
        return len(self.branches)

    def record(self, y, q, branch=None, exposed=None, collided=False):
        if branch is not None:
            if collided:
                self.collisions.add(len(self.branches))
            self.branches.append(branch)
            self.exposed.append(exposed)
        self.ys.append(list(y))
        self.qs.append(q)

    def summary(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "seed": self.seed,
            "eps": self.eps,
            "variant": self.variant.value,
            "D_size": self.d_size,
            "rounds": self.rounds,
            "cleanup_added": self.cleanup_added,
        }

    def to_csv(self, stride: int = 1) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t"] + [f"Y_{j}" for j in range(self.d)] + ["Q", "branch"])
        for t in range(0, len(self.ys), stride):
            br = self.branches[t - 1].value if t else ""
            w.writerow([t, *self.ys[t], self.qs[t], br])
        return buf.getvalue()

    def violations(self) -> list[str]:
        """Per-round bound checks; an empty list means the trace is sound."""
        d = self.d
        out = []
        for t, br in enumerate(self.branches):
            dq = self.qs[t + 1] - self.qs[t]
            if dq not in (1, 2):
                out.append(f"round {t}: dQ={dq}")
            elif t not in self.collisions and dq != (1 if br is Branch.SINGLE else 2):
                out.append(f"round {t}: dQ={dq} for {br.value}")
            if self.exposed[t] > 4 * d - 3:
                out.append(f"round {t}: {self.exposed[t]} pairs exposed")
            y0, y1 = self.ys[t], self.ys[t + 1]
            if y1[0] > y0[0]:
                out.append(f"round {t}: Y_0 increased")
            if max(abs(a - b) for a, b in zip(y0, y1)) > 4 * d:
                out.append(f"round {t}: |dY| > 4d")
        return out


def _unique(seq):
    return list(dict.fromkeys(seq))


def cleanup(g: Pseudograph, D: set, rng: random.Random) -> int:
    """Extend ``D`` in place to a total dominating set of ``g``.

    For each undominated ``v`` a neighbour ``w`` is added, preferring one
    that is already dominated; if ``w`` is still undominated a neighbour of
    ``w`` is added too. Returns the number of vertices added.
    """
    adj = g.adj
    covered = bytearray(g.n)
    for x in D:
        for y in adj[x]:
            covered[y] = 1

    def add(x):
        D.add(x)
        for y in adj[x]:
            covered[y] = 1

    added = 0
    for v in range(g.n):
        if covered[v]:
            continue
        if not adj[v]:
            raise GraphError(f"vertex {v} is isolated")
        nbrs = _unique(adj[v])
        good = [w for w in nbrs if covered[w] and w not in D]
        w = rng.choice(good or nbrs)
        if w not in D:
            add(w)
            added += 1
        if not covered[w]:
            x = rng.choice(_unique(adj[w]))
            if x not in D:
                add(x)
                added += 1
    return added


# ------------------------------------------------------------- pairing side


def run_algorithm_1c(n: int, d: int, config: HeuristicConfig | None = None):
    """The greedy heuristic on a pairing exposed on the fly.

    Returns ``(graph, D, trace)``; ``graph`` is the collapsed pseudograph of
    the completed pairing and ``D`` a verified total dominating set of it.
    """
    config = config or HeuristicConfig()
    rng = random.Random(config.seed)
    state = PairingState(n, d)
    trace = RunTrace(n, d, config.seed, config.eps, Variant.ALG_1C)
    D: set[int] = set()
    pc = state.paired_count
    pairs = state.pairs
    choice = rng.choice
    snap: dict = {}
    nb: dict = {}

    def expose_rest(b):
        if pc[b] < d:
            for x in state.expose_all_remaining(b, rng, snap):
                nb.setdefault(b, []).append(x)
                nb.setdefault(x, []).append(b)

    def deg0(b):
        return snap.get(b, pc[b]) == 0

    trace.record(state.y, 0)
    while config.keep_going(state.y[0], n):
        snap.clear()
        nb.clear()
        before = len(pairs)
        q_before = len(D)
        collided = False

        v = state.sample_degree0_vertex(rng)
        u = state.expose_pair(v * d, rng, snap)
        nb[v] = [u]
        nb.setdefault(u, []).append(v)
        expose_rest(u)
        if not deg0(u):
            D.add(u)
            branch = Branch.SINGLE
        else:
            expose_rest(v)
            uv = (u, v)
            if any(x not in uv and deg0(x) for x in nb[u]):
                D.add(u)
                D.add(v)
                branch = Branch.PAIR_U
            else:
                W = _unique(x for x in nb[v] if x not in uv and deg0(x))
                if W:
                    w = choice(W)
                    expose_rest(w)
                    D.add(v)
                    D.add(w)
                    branch = Branch.PAIR_W
                else:
                    vs = _unique(x for x in nb[v] if x not in uv)
                    us = _unique(x for x in nb[u] if x not in uv)
                    vp = choice(vs) if vs else u
                    expose_rest(vp)
                    up = choice(us) if us else v
                    expose_rest(up)
                    D.add(vp)
                    D.add(up)
                    branch = Branch.PAIR_PRIME
            collided = u == v or len(D) - q_before != 2
        trace.record(state.y, len(D), branch, len(pairs) - before, collided)

    state.complete(rng)
    g = from_pairing(state)
    trace.cleanup_added = cleanup(g, D, rng)
    _finish(g, D, trace)
    return g, D, trace


def run_baseline(graph: Pseudograph | None = None, config: HeuristicConfig | None = None, *, n=None, d=None):
    """The three-rule heuristic, on ``graph`` if given, else on a fresh ``(n, d)`` pairing.

    Returns ``(graph, D, trace)``.
    """
    config = config or HeuristicConfig(variant=Variant.BASELINE)
    if graph is not None:
        return _baseline_graph(graph, config)
    if n is None or d is None:
        raise ValueError("give a graph or both n and d")
    rng = random.Random(config.seed)
    state = PairingState(n, d)
    trace = RunTrace(n, d, config.seed, config.eps, Variant.BASELINE)
    D: set[int] = set()
    pc = state.paired_count
    pairs = state.pairs
    snap: dict = {}
    trace.record(state.y, 0)
    while config.keep_going(state.y[0], n):
        snap.clear()
        before = len(pairs)
        q_before = len(D)
        v = state.sample_degree0_vertex(rng)
        u = state.expose_pair(v * d, rng, snap)
        if snap[u] == 0 and u != v:
            for b in (u, v):
                if pc[b] < d:
                    state.expose_all_remaining(b, rng, snap)
            D.add(u)
            D.add(v)
            branch = Branch.PAIR_U
        else:
            if pc[u] < d:
                state.expose_all_remaining(u, rng, snap)
            D.add(u)
            branch = Branch.SINGLE
        trace.record(state.y, len(D), branch, len(pairs) - before, len(D) - q_before == 0)
    state.complete(rng)
    g = from_pairing(state)
    trace.cleanup_added = cleanup(g, D, rng)
    _finish(g, D, trace)
    return g, D, trace


# --------------------------------------------------------------- graph side


class _Survival:
    """Survival graph bookkeeping: alive flags, current degrees and the
    sampler over undominated (full-degree) vertices."""

    def __init__(self, g: Pseudograph, d: int):
        self.g = g
        self.d = d
        n = g.n
        self.alive = bytearray(b"\x01") * n
        self.deg = [d] * n
        self.full = list(range(n))
        self.full_pos = list(range(n))
        self.hist = [0] * (d + 1)
        self.hist[0] = n
        self.half_edges = n * d

    @property
    def y(self):
        return self.hist[: self.d]

    def _drop_full(self, x):
        i = self.full_pos[x]
        if i < 0:
            return
        last = self.full.pop()
        if last != x:
            self.full[i] = last
            self.full_pos[last] = i
        self.full_pos[x] = -1

    def _move(self, x, old, new):
        # histogram is indexed by paired degree d - deg
        d = self.d
        self.hist[d - old] -= 1
        self.hist[d - new] += 1

    def delete(self, x):
        if not self.alive[x]:
            return
        d = self.d
        self.alive[x] = 0
        self._drop_full(x)
        self.half_edges -= self.deg[x]
        self.hist[d - self.deg[x]] -= 1
        self.hist[d] += 1
        for y in self.g.adj[x]:
            if y != x and self.alive[y]:
                old = self.deg[y]
                self.deg[y] = old - 1
                self.half_edges -= 1
                self._move(y, old, old - 1)
                if old == d:
                    self._drop_full(y)


def _check_regular(g: Pseudograph) -> int:
    degs = set(g.degrees())
    if len(degs) != 1:
        raise GraphError("input graph is not regular")
    (d,) = degs
    if d < 1:
        raise GraphError("input graph has isolated vertices")
    return d


def run_algorithm_1l(g: Pseudograph, config: HeuristicConfig | None = None):
    """The greedy heuristic on an explicit regular graph. Returns ``(D, trace)``."""
    config = config or HeuristicConfig(variant=Variant.ALG_1L)
    d = _check_regular(g)
    rng = random.Random(config.seed)
    n = g.n
    s = _Survival(g, d)
    adj, deg, alive = g.adj, s.deg, s.alive
    choice = rng.choice
    trace = RunTrace(n, d, config.seed, config.eps, Variant.ALG_1L)
    D: set[int] = set()
    trace.record(s.y, 0)
    while config.keep_going(len(s.full), n):
        half_before = s.half_edges
        q_before = len(D)
        v = s.full[rng.randrange(len(s.full))]
        u = choice(adj[v])
        uv = (u, v)
        if deg[u] != d:
            D.add(u)
            s.delete(u)
            branch = Branch.SINGLE
        elif any(x not in uv and alive[x] and deg[x] == d for x in adj[u]):
            D.add(u)
            D.add(v)
            s.delete(u)
            s.delete(v)
            branch = Branch.PAIR_U
        else:
            W = _unique(x for x in adj[v] if x not in uv and deg[x] == d)
            if W:
                w = choice(W)
                D.add(w)
                D.add(v)
                for x in (w, v, u):
                    s.delete(x)
                branch = Branch.PAIR_W
            else:
                vs = _unique(x for x in adj[v] if x not in uv)
                us = _unique(x for x in adj[u] if x not in uv)
                vp = choice(vs) if vs else u
                up = choice(us) if us else v
                D.add(vp)
                D.add(up)
                for x in (u, up, v, vp):
                    s.delete(x)
                branch = Branch.PAIR_PRIME
        collided = u == v or len(D) - q_before != (1 if branch is Branch.SINGLE else 2)
        exposed = (half_before - s.half_edges) // 2
        trace.record(s.y, len(D), branch, exposed, collided)
    trace.cleanup_added = cleanup(g, D, rng)
    _finish(g, D, trace)
    return D, trace


def _baseline_graph(g: Pseudograph, config: HeuristicConfig):
    d = _check_regular(g)
    rng = random.Random(config.seed)
    n = g.n
    s = _Survival(g, d)
    adj, deg = g.adj, s.deg
    trace = RunTrace(n, d, config.seed, config.eps, Variant.BASELINE)
    D: set[int] = set()
    trace.record(s.y, 0)
    while config.keep_going(len(s.full), n):
        half_before = s.half_edges
        q_before = len(D)
        v = s.full[rng.randrange(len(s.full))]
        u = rng.choice(adj[v])
        if deg[u] == d and u != v:
            D.add(u)
            D.add(v)
            s.delete(u)
            s.delete(v)
            branch = Branch.PAIR_U
        else:
            D.add(u)
            s.delete(u)
            branch = Branch.SINGLE
        exposed = (half_before - s.half_edges) // 2
        trace.record(s.y, len(D), branch, exposed, len(D) == q_before)
    trace.cleanup_added = cleanup(g, D, rng)
    _finish(g, D, trace)
    return g, D, trace


def _finish(g, D, trace):
    trace.d_size = len(D)
    verdict = verify_tds(g, D)
    if not verdict:
        raise InvariantViolation(f"output is not a total dominating set (vertex {verdict.witness} uncovered)")


def run(variant, n: int, d: int, config: HeuristicConfig):
    """Dispatch by variant; returns ``(graph, D, trace)``.

    The explicit-graph algorithm runs on a simple graph drawn by rejection
    from the pairing model.
    """
    variant = Variant(variant)
    if variant is Variant.ALG_1C:
        return run_algorithm_1c(n, d, config)
    if variant is Variant.BASELINE:
        return run_baseline(None, config, n=n, d=d)
    from .graph import random_simple_regular

    # separate stream for the graph so the run itself stays seeded by config.seed
    g = random_simple_regular(n, d, random.Random(f"graph:{config.seed}"))
    D, trace = run_algorithm_1l(g, config)
    return g, D, trace
