"""Chains through an entourage: graphs, recurrence, components.

A D-chain is a finite sequence where each step lands inside D's cross
section at the mapped point: (f(x_{i-1}), x_i) in D. On a finite sample set
those steps form a directed graph, and the recurrence notions become graph
questions: chain recurrent nodes lie on directed cycles, chain components
are strongly connected pieces, and refining D down a ladder of entourages
shrinks both until the picture stabilizes.

Everything here is sound per entourage: every reported edge satisfies the
entourage predicate exactly, so reported chains are genuine chains. What a
finite sample set cannot do is witness chains passing between samples;
callers state their grid resolution for that reason.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .entourage import GaugeBall, MetricBall
from .report import Report
from .systems import TorusAutomorphism


# ---------------------------------------------------------------------------
# spatial index for candidate lookup


class _CellIndex:
    """Uniform bins over embedded coordinates. Query radius must not exceed
    the cell width, so all candidates sit in the 3^dim neighboring cells."""

    def __init__(self, coords, cell, wrap=None):
        self.wrap = wrap
        if wrap is not None:
            self.ncells = max(1, int(wrap / cell))
            self.cell = wrap / self.ncells
        else:
            self.ncells = None
            self.cell = cell
        self.bins = {}
        for i, c in enumerate(coords):
            self.bins.setdefault(self._key(c), []).append(i)
        self.dim = len(coords[0]) if coords else 0

    def _key(self, c):
        if self.wrap is not None:
            return tuple(int((v % self.wrap) / self.cell) % self.ncells for v in c)
        return tuple(int(math.floor(v / self.cell)) for v in c)

    def near(self, c):
        base = self._key(c)
        out = []
        deltas = [(-1, 0, 1)] * len(base)
        stack = [()]
        for choices in deltas:
            stack = [prefix + (d,) for prefix in stack for d in choices]
        for offs in stack:
            key = tuple(b + o for b, o in zip(base, offs))
            if self.ncells is not None:
                key = tuple(k % self.ncells for k in key)
            out.extend(self.bins.get(key, ()))
        return out


# ---------------------------------------------------------------------------
# chain graphs


@dataclass
class ChainGraph:
    """Directed graph of one-step chains on a fixed node set.

    Edge (i, j) exists iff (f(node_i), node_j) lies in the entourage the
    graph was built with. The SCC partition is computed once on demand.
    """

    nodes: tuple
    adjacency: tuple
    entourage_id: str
    _scc: list = field(default=None, repr=False)
    _comp_of: list = field(default=None, repr=False)

    @property
    def node_count(self):
        return len(self.nodes)

    @property
    def edge_count(self):
        return sum(len(a) for a in self.adjacency)

    def successors(self, i):
        return self.adjacency[i]

    def has_edge(self, i, j):
        return j in self.adjacency[i]

    def scc(self):
        if self._scc is None:
            self._scc = strongly_connected_components(self.adjacency)
            self._comp_of = [0] * len(self.nodes)
            for ci, comp in enumerate(self._scc):
                for v in comp:
                    self._comp_of[v] = ci
        return self._scc

    def component_of(self, i):
        self.scc()
        return self._comp_of[i]

    def recurrent_indices(self):
        """Indices lying on a directed cycle: SCC of size >= 2 or self-loop."""
        out = set()
        for comp in self.scc():
            if len(comp) >= 2:
                out.update(comp)
        for i, adj in enumerate(self.adjacency):
            if i in adj:
                out.add(i)
        return frozenset(out)

    def verify_edges(self, system, D):
        """Re-check every stored edge against the entourage predicate."""
        for i, adj in enumerate(self.adjacency):
            fx = system.forward(self.nodes[i])
            for j in adj:
                if not D.accepts(fx, self.nodes[j]):
                    return False
        return True

    def to_text(self, node_id=None):
        """Adjacency listing, one `node_id: succ_id succ_id ...` line per node."""
        label = node_id or (lambda i: str(i))
        lines = []
        for i, adj in enumerate(self.adjacency):
            lines.append(f"{label(i)}: " + " ".join(label(j) for j in adj))
        return "\n".join(lines) + "\n"


def is_chain(system, seq, D):
    """Whether consecutive steps of seq all land inside D's cross-sections."""
    seq = list(seq)
    if len(seq) < 2:
        raise ValueError("A chain needs at least two points.")
    return all(
        D.accepts(system.forward(a), b) for a, b in zip(seq, seq[1:])
    )


def _ball_radius(D):
    if isinstance(D, MetricBall):
        return D.delta
    if isinstance(D, GaugeBall) and not D.at_arrival and D.sup_bound is not None:
        return D.sup_bound
    return None


def build_chain_graph(system, samples, D, entourage_id=None):
    """Edges exactly {(i, j) : (f(node_i), node_j) in D}.

    Uses a cell index over embedded coordinates when D is a metric ball (or
    a bounded gauge read at departure) and the system embeds its points;
    otherwise falls back to the full pairwise scan.
    """
    nodes = tuple(samples)
    if not nodes:
        raise ValueError("Chain graphs need a nonempty sample set.")
    images = _batch_forward(system, nodes)
    radius = _ball_radius(D)
    embeds = None
    if radius is not None and system.embedding_metric is not None:
        embeds = [system.embed(x) for x in nodes]

    adjacency = []
    if embeds is not None:
        wrap = 1.0 if system.embedding_metric == "torus" else None
        index = _CellIndex(embeds, radius, wrap=wrap)
        for i in range(len(nodes)):
            fx = images[i]
            cand = index.near(system.embed(fx))
            adjacency.append(tuple(sorted(
                j for j in set(cand) if D.accepts(fx, nodes[j])
            )))
    else:
        for i in range(len(nodes)):
            fx = images[i]
            adjacency.append(tuple(
                j for j in range(len(nodes)) if D.accepts(fx, nodes[j])
            ))
    return ChainGraph(nodes=nodes, adjacency=tuple(adjacency),
                      entourage_id=entourage_id or _describe(D))


def _describe(D):
    if isinstance(D, MetricBall):
        return f"ball({D.delta!r})"
    if isinstance(D, GaugeBall):
        return "gauge"
    return D.kind


def _batch_forward(system, nodes):
    if isinstance(system, TorusAutomorphism):
        pts = np.asarray(nodes, dtype=float)
        out = (pts @ np.asarray(system.matrix, dtype=float).T) % 1.0
        return [tuple(row) for row in out]
    return [system.forward(x) for x in nodes]


def torus_grid_graph(system, n, delta, entourage_id=None):
    """Chain graph of a torus automorphism on the n x n lattice, built with
    integer arithmetic only.

    The lattice is invariant under integer matrices, so f(node) is again a
    lattice point and the delta-ball around it is a fixed set of integer
    offsets; no floating-point distances enter the construction.
    """
    a, b = system.matrix[0]
    c, d = system.matrix[1]
    reach = int(delta * n) + 1
    offsets = []
    for di in range(-reach, reach + 1):
        for dj in range(-reach, reach + 1):
            wi = min(di % n, (-di) % n) / n
            wj = min(dj % n, (-dj) % n) / n
            if math.sqrt(wi * wi + wj * wj) < delta:
                offsets.append((di, dj))
    nodes = tuple((i / n, j / n) for i in range(n) for j in range(n))
    adjacency = []
    for i in range(n):
        for j in range(n):
            fi, fj = (a * i + b * j) % n, (c * i + d * j) % n
            adjacency.append(tuple(sorted(
                ((fi + di) % n) * n + ((fj + dj) % n) for di, dj in offsets
            )))
    return ChainGraph(nodes=nodes, adjacency=tuple(adjacency),
                      entourage_id=entourage_id or f"ball({delta!r})")


# ---------------------------------------------------------------------------
# strongly connected components, iterative


def strongly_connected_components(adjacency):
    """Tarjan's algorithm with an explicit stack; safe on graphs whose
    longest path is proportional to the node count."""
    n = len(adjacency)
    order = [0] * n
    low = [0] * n
    on_stack = bytearray(n)
    stack = []
    components = []
    counter = 0
    for root in range(n):
        if order[root]:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                counter += 1
                order[v] = low[v] = counter
                stack.append(v)
                on_stack[v] = 1
            descend = False
            adj = adjacency[v]
            while i < len(adj):
                w = adj[i]
                i += 1
                if not order[w]:
                    work.append((v, i))
                    work.append((w, 0))
                    descend = True
                    break
                if on_stack[w] and order[w] < low[v]:
                    low[v] = order[w]
            if descend:
                continue
            if low[v] == order[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = 0
                    comp.append(w)
                    if w == v:
                        break
                components.append(frozenset(comp))
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
    return components


def brute_force_cycle_nodes(adjacency):
    """Reference recurrence check: i is recurrent iff some walk returns to
    it. Quadratic; for cross-checking the SCC route on small graphs."""
    n = len(adjacency)
    out = set()
    for s in range(n):
        seen = set()
        queue = deque(adjacency[s])
        while queue:
            v = queue.popleft()
            if v == s:
                out.add(s)
                break
            if v in seen:
                continue
            seen.add(v)
            queue.extend(adjacency[v])
    return frozenset(out)


# ---------------------------------------------------------------------------
# recurrence


def chain_recurrent_set(graph):
    """Nodes admitting a chain from themselves back to themselves."""
    return frozenset(graph.nodes[i] for i in graph.recurrent_indices())


@dataclass
class ChainComponentSet:
    """Ladder-refined recurrence data.

    components partition recurrent_nodes; each is strongly connected in the
    chain graph of every ladder entourage. stabilization_index is the first
    ladder position whose partition equals the previous one (None when the
    ladder never settles, a resolution limit the caller must surface).
    """

    recurrent_nodes: frozenset
    components: tuple
    entourage_ladder: tuple
    stabilization_index: object
    history: tuple

    @property
    def component_count(self):
        return len(self.components)


def chain_components(graphs):
    """Intersect SCC partitions over a shrinking ladder of entourages.

    All graphs must share one node set. A node stays recurrent if it lies on
    a cycle at every ladder step; two nodes stay equivalent if every step
    keeps them in one SCC.
    """
    graphs = list(graphs)
    if not graphs:
        raise ValueError("The entourage ladder is empty.")
    nodes = graphs[0].nodes
    for g in graphs[1:]:
        if g.nodes != nodes:
            raise ValueError("Ladder graphs disagree on the node set.")

    recurrent = None
    labels = {}
    history = []
    stabilization = None
    previous = None
    for step, g in enumerate(graphs):
        g.scc()
        step_recurrent = g.recurrent_indices()
        recurrent = step_recurrent if recurrent is None else recurrent & step_recurrent
        labels = {
            i: labels.get(i, ()) + (g.component_of(i),)
            for i in recurrent
        }
        cells = {}
        for i, key in labels.items():
            cells.setdefault(key, set()).add(i)
        snapshot = frozenset(frozenset(c) for c in cells.values())
        history.append((len(recurrent), len(snapshot)))
        if previous is not None and snapshot == previous and stabilization is None:
            stabilization = step
        previous = snapshot

    components = sorted(previous, key=lambda c: (-len(c), sorted(c)[:1]))
    return ChainComponentSet(
        recurrent_nodes=frozenset(nodes[i] for i in recurrent),
        components=tuple(frozenset(nodes[i] for i in comp) for comp in components),
        entourage_ladder=tuple(g.entourage_id for g in graphs),
        stabilization_index=stabilization,
        history=tuple(history),
    )


# ---------------------------------------------------------------------------
# nonwandering set


def nonwandering_set(system, samples, probe, horizon):
    """Samples x where some sample in probe[x] returns to probe[x] within
    the horizon: a sound inner approximation of the nonwandering set."""
    if horizon < 1:
        raise ValueError("Horizon must be at least 1.")
    samples = list(samples)
    if isinstance(system, TorusAutomorphism) and isinstance(probe, MetricBall):
        return _nonwandering_torus(system, samples, probe.delta, horizon)
    out = []
    for x in samples:
        section = probe.cross_section(x)
        candidates = [z for z in samples if section.contains(z)]
        found = False
        for z in candidates:
            w = z
            for _ in range(horizon):
                w = system.forward(w)
                if section.contains(w):
                    found = True
                    break
            if found:
                break
        if found:
            out.append(x)
    return frozenset(out)


def _nonwandering_torus(system, samples, radius, horizon):
    pts = np.asarray(samples, dtype=float)
    m = np.asarray(system.matrix, dtype=float).T
    orbits = np.empty((horizon + 1,) + pts.shape)
    orbits[0] = pts
    for k in range(1, horizon + 1):
        orbits[k] = (orbits[k - 1] @ m) % 1.0
    index = _CellIndex([tuple(p) for p in pts], radius, wrap=1.0)
    out = []
    for i, x in enumerate(samples):
        cand = sorted(set(index.near(x)))
        gap = np.abs(pts[cand] - pts[i])
        gap = np.minimum(gap, 1.0 - gap)
        inside = np.sqrt((gap ** 2).sum(axis=1)) < radius
        cand = [c for c, keep in zip(cand, inside) if keep]
        if not cand:
            continue
        tail = orbits[1:, cand, :]
        gap = np.abs(tail - pts[i])
        gap = np.minimum(gap, 1.0 - gap)
        if (np.sqrt((gap ** 2).sum(axis=2)) < radius).any():
            out.append(samples[i])
    return frozenset(out)


# ---------------------------------------------------------------------------
# strong (gauge-weighted) chains


def strong_chain_reachable(system, x, y, gauge, samples):
    """Whether a chain from x to y exists with each step measured against
    the gauge at the mapped point: d(f(u), v) < gauge(f(u))."""
    nodes = list(samples)
    for extra in (x, y):
        if extra not in nodes:
            nodes.append(extra)
    images = {u: system.forward(u) for u in nodes}

    def step_ok(u, v):
        fu = images[u]
        return system.metric(fu, v) < gauge(fu)

    seen = set()
    queue = deque()
    for v in nodes:
        if step_ok(x, v):
            seen.add(v)
            queue.append(v)
    while queue:
        u = queue.popleft()
        for v in nodes:
            if v not in seen and step_ok(u, v):
                seen.add(v)
                queue.append(v)
    return y in seen


def strong_chain_recurrent_set(system, samples, gauge):
    """Samples that reach themselves through a gauge-weighted chain."""
    return frozenset(
        x for x in samples if strong_chain_reachable(system, x, x, gauge, samples)
    )


# ---------------------------------------------------------------------------
# reporting


def _component_diameter(system, comp, cap=1200):
    pts = sorted(comp, key=repr)
    if len(pts) > cap:
        stride = len(pts) // 512 + 1
        pts = pts[::stride]
    best = 0.0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = system.metric(pts[i], pts[j])
            if d > best:
                best = d
    return best


def component_report(system, ccs):
    """Structured document: one row per component with id, node count, and
    metric diameter (subsampled above 1200 nodes), plus the ladder data."""
    rep = Report(
        system=system.name,
        ladder=" ".join(ccs.entourage_ladder),
        recurrent_nodes=len(ccs.recurrent_nodes),
        component_count=ccs.component_count,
        stabilization_index=(
            "none" if ccs.stabilization_index is None else ccs.stabilization_index
        ),
    )
    rows = []
    for k, comp in enumerate(ccs.components):
        rows.append((k, len(comp), repr(_component_diameter(system, comp))))
    rep.add_table("components", ("id", "nodes", "diameter"), rows)
    return rep
