"""Concrete matroid models and the graph utilities the planners rely on.

Models implement a tiny protocol consumed by :class:`basis_relabel.core.Matroid`:
``size``, ``names``, ``calls`` (oracle-call counter), ``rank_of(ids)`` and
``indep(ids)``; optional fast paths ``greedy_ids`` and
``basis_fundamental_adjacency`` are used when the view carries no contraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .core import Matroid
from .errors import ConnectivityError, DomainError, ParseError, UsageError


# ---------------------------------------------------------------------------
# graphs


@dataclass(frozen=True)
class Graph:
    """Multigraph on vertices 0..n-1; edge ids are positions in the edge list."""

    n: int
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise DomainError(f"edge ({u},{v}) out of range for {self.n} vertices")

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_names(self) -> tuple:
        return tuple(f"{u}-{v}" for u, v in self.edges)

    def adjacency(self):
        """Per vertex, the incident (neighbour, edge id) pairs in edge-id order."""
        adj = [[] for _ in range(self.n)]
        for eid, (u, v) in enumerate(self.edges):
            adj[u].append((v, eid))
            if u != v:
                adj[v].append((u, eid))
        return adj

    def vertex_components(self) -> list:
        """Component label per vertex (labels are representative vertices)."""
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
        return [find(v) for v in range(self.n)]

    def is_connected(self) -> bool:
        return len(set(self.vertex_components())) <= 1


# ---------------------------------------------------------------------------
# matroid models


class _GraphicModel:
    kind = "graph"

    def __init__(self, graph: Graph):
        self.graph = graph
        self.size = graph.m
        self.names = graph.edge_names()
        self.calls = 0
        self._us = np.array([u for u, _ in graph.edges], dtype=np.int64)
        self._vs = np.array([v for _, v in graph.edges], dtype=np.int64)

    def _select(self, ids):
        sel = np.fromiter(ids, dtype=np.int64, count=len(ids))
        return self._us[sel], self._vs[sel]

    def rank_of(self, ids) -> int:
        self.calls += 1
        if not ids:
            return 0
        us, vs = self._select(ids)
        return int(_kernels.forest_rank(us, vs, self.graph.n))

    def indep(self, ids) -> bool:
        return self.rank_of(ids) == len(ids)

    def greedy_ids(self, live, contracted) -> tuple:
        self.calls += 1
        pus, pvs = self._select(contracted)
        us, vs = self._select(live)
        keep = np.zeros(len(live), dtype=np.int64)
        _kernels.forest_select(pus, pvs, us, vs, self.graph.n, keep)
        return tuple(e for e, k in zip(live, keep) if k)

    def basis_fundamental_adjacency(self, basis_ids, outside) -> dict:
        self.calls += 1
        tu, tv = self._select(basis_ids)
        fu, fv = self._select(outside)
        indptr, slots = _kernels.tree_paths(self.graph.n, tu, tv, fu, fv)
        result = {}
        for j, f in enumerate(outside):
            result[f] = tuple(basis_ids[s] for s in slots[indptr[j] : indptr[j + 1]])
        return result


@dataclass(frozen=True)
class Matrix:
    """Column matroid representation: one column per element.

    gf2 entries are 0/1 integers; rational entries are exact Fractions.
    """

    field: str
    rows: tuple

    def __post_init__(self):
        if self.field not in ("gf2", "rational"):
            raise UsageError(f"unknown field tag {self.field!r}")
        if not self.rows:
            raise UsageError("matrix needs at least one row")
        width = len(self.rows[0])
        coerced = []
        for row in self.rows:
            if len(row) != width:
                raise ParseError("matrix rows must have equal length")
            if self.field == "gf2":
                entries = tuple(int(x) for x in row)
                if any(x not in (0, 1) for x in entries):
                    raise ParseError("gf2 entries must be 0 or 1")
            else:
                entries = tuple(Fraction(x) for x in row)
            coerced.append(entries)
        object.__setattr__(self, "rows", tuple(coerced))

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0])

    def column(self, j) -> tuple:
        return tuple(row[j] for row in self.rows)


class _Gf2Model:
    kind = "matrix-gf2"

    def __init__(self, matrix: Matrix):
        self.matrix = matrix
        self.size = matrix.n_cols
        self.names = tuple(f"c{j}" for j in range(self.size))
        self.calls = 0
        self._cols = [
            sum(matrix.rows[i][j] << i for i in range(matrix.n_rows))
            for j in range(self.size)
        ]
        self._packed = (
            np.array(self._cols, dtype=np.int64) if matrix.n_rows <= 63 else None
        )

    def rank_of(self, ids) -> int:
        self.calls += 1
        if not ids:
            return 0
        if self._packed is not None:
            sel = np.fromiter(ids, dtype=np.int64, count=len(ids))
            return int(_kernels.gf2_rank(self._packed[sel]))
        return self._rank_bigint(ids)

    def _rank_bigint(self, ids) -> int:
        pivots = {}
        rank = 0
        for j in ids:
            v = self._cols[j]
            while v:
                p = v.bit_length() - 1
                if p not in pivots:
                    pivots[p] = v
                    rank += 1
                    break
                v ^= pivots[p]
        return rank

    def indep(self, ids) -> bool:
        return self.rank_of(ids) == len(ids)

    def greedy_ids(self, live, contracted) -> tuple:
        self.calls += 1
        pivots = {}

        def reduce(v):
            while v:
                p = v.bit_length() - 1
                if p not in pivots:
                    return v, p
                v ^= pivots[p]
            return 0, -1

        for j in contracted:
            v, p = reduce(self._cols[j])
            if v:
                pivots[p] = v
        chosen = []
        for j in live:
            v, p = reduce(self._cols[j])
            if v:
                pivots[p] = v
                chosen.append(j)
        return tuple(chosen)

    def basis_fundamental_adjacency(self, basis_ids, outside) -> dict:
        self.calls += 1
        pivots = {}
        for idx, b in enumerate(basis_ids):
            v, combo = self._cols[b], 1 << idx
            while v:
                p = v.bit_length() - 1
                if p not in pivots:
                    pivots[p] = (v, combo)
                    break
                pv, pc = pivots[p]
                v ^= pv
                combo ^= pc
        result = {}
        for f in outside:
            v, combo = self._cols[f], 0
            while v:
                p = v.bit_length() - 1
                pv, pc = pivots[p]
                v ^= pv
                combo ^= pc
            result[f] = tuple(
                basis_ids[i] for i in range(len(basis_ids)) if (combo >> i) & 1
            )
        return result


class _RationalModel:
    kind = "matrix-rational"

    def __init__(self, matrix: Matrix):
        self.matrix = matrix
        self.size = matrix.n_cols
        self.names = tuple(f"c{j}" for j in range(self.size))
        self.calls = 0
        self._cols = [matrix.column(j) for j in range(self.size)]
        self._n_rows = matrix.n_rows

    def rank_of(self, ids) -> int:
        self.calls += 1
        if not ids:
            return 0
        return self._rank_exact([list(self._cols[j]) for j in ids])

    def _rank_exact(self, cols) -> int:
        reduced = []  # (pivot_row, column entries as list)
        rank = 0
        for col in cols:
            col = list(col)
            for prow, pcol in reduced:
                factor = col[prow]
                if factor:
                    for i in range(self._n_rows):
                        col[i] -= factor * pcol[i]
            pivot = next((i for i, x in enumerate(col) if x), None)
            if pivot is not None:
                inv = Fraction(1) / col[pivot]
                col = [x * inv for x in col]
                reduced.append((pivot, col))
                rank += 1
        return rank

    def indep(self, ids) -> bool:
        return self.rank_of(ids) == len(ids)


class _UniformModel:
    kind = "uniform"

    def __init__(self, k, n):
        if not (0 <= k <= n):
            raise UsageError(f"uniform matroid needs 0 <= k <= n, got k={k}, n={n}")
        self.k = k
        self.size = n
        self.names = tuple(str(j) for j in range(n))
        self.calls = 0

    def rank_of(self, ids) -> int:
        self.calls += 1
        return min(self.k, len(ids))

    def indep(self, ids) -> bool:
        return self.rank_of(ids) == len(ids)


class _PredicateModel:
    kind = "predicate"

    def __init__(self, size, predicate, names=None):
        self.size = size
        self.names = names
        self.calls = 0
        self._predicate = predicate

    def indep(self, ids) -> bool:
        self.calls += 1
        return bool(self._predicate(frozenset(ids)))

    def rank_of(self, ids) -> int:
        chosen = []
        for e in ids:
            if self.indep(tuple(chosen) + (e,)):
                chosen.append(e)
        return len(chosen)


def graphic_matroid(graph: Graph) -> Matroid:
    """Forest matroid of a multigraph: a set of edges is independent when acyclic."""
    return Matroid(_GraphicModel(graph))


def linear_matroid(matrix: Matrix) -> Matroid:
    """Column matroid of a matrix over GF(2) or the rationals (exact arithmetic)."""
    if matrix.field == "gf2":
        return Matroid(_Gf2Model(matrix))
    return Matroid(_RationalModel(matrix))


def uniform_matroid(k: int, n: int) -> Matroid:
    """Sets of at most k elements out of n are independent."""
    return Matroid(_UniformModel(k, n))


def predicate_matroid(size: int, predicate, names=None) -> Matroid:
    """Matroid given by a raw independence predicate (test support)."""
    return Matroid(_PredicateModel(size, predicate, names))


def quotient_graph(graph: Graph, class_of) -> tuple:
    """Contract vertex classes; drops the edges that become self-loops.

    class_of[v] is any canonical representative of v's class.  Returns the
    quotient multigraph (classes relabelled densely) together with the
    original ids of the surviving edges, in id order.
    """
    reps = sorted(set(class_of))
    dense = {r: i for i, r in enumerate(reps)}
    edges = []
    kept = []
    for eid, (u, v) in enumerate(graph.edges):
        cu, cv = class_of[u], class_of[v]
        if cu == cv:
            continue
        edges.append((dense[cu], dense[cv]))
        kept.append(eid)
    return Graph(len(reps), tuple(edges)), tuple(kept)


# ---------------------------------------------------------------------------
# biconnectivity


@dataclass(frozen=True)
class BlockDecomposition:
    """2-edge-partition of a multigraph into blocks plus its cut vertices.

    Blocks cover all non-loop edges; bridges appear as single-edge blocks.
    Self-loops are reported separately.
    """

    blocks: tuple
    cut_vertices: tuple
    loops: tuple

    def block_of(self, eid):
        for i, blk in enumerate(self.blocks):
            if eid in blk:
                return i
        raise DomainError(f"edge {eid} not in any block")


def biconnected_blocks(graph: Graph) -> BlockDecomposition:
    """Lowpoint block decomposition (iterative, multigraph-aware)."""
    n, m = graph.n, graph.m
    adj = graph.adjacency()
    loops = tuple(eid for eid, (u, v) in enumerate(graph.edges) if u == v)
    num = [-1] * n
    low = [0] * n
    counter = 0
    blocks = []
    cuts = set()
    estack = []

    for root in range(n):
        if num[root] >= 0:
            continue
        num[root] = counter
        low[root] = counter
        counter += 1
        root_children = 0
        stack = [(root, -1, 0)]
        while stack:
            v, pe, i = stack[-1]
            if i < len(adj[v]):
                stack[-1] = (v, pe, i + 1)
                w, eid = adj[v][i]
                if eid == pe or w == v:
                    continue
                if num[w] < 0:
                    estack.append(eid)
                    num[w] = counter
                    low[w] = counter
                    counter += 1
                    stack.append((w, eid, 0))
                    if v == root:
                        root_children += 1
                elif num[w] < num[v]:
                    estack.append(eid)
                    if num[w] < low[v]:
                        low[v] = num[w]
            else:
                stack.pop()
                if not stack:
                    break
                parent = stack[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
                if low[v] >= num[parent]:
                    block = []
                    while True:
                        eid = estack.pop()
                        block.append(eid)
                        if eid == pe:
                            break
                    blocks.append(tuple(sorted(block)))
                    if parent != root:
                        cuts.add(parent)
        if root_children >= 2:
            cuts.add(root)

    blocks.sort(key=lambda blk: blk[0])
    covered = sum(len(b) for b in blocks) + len(loops)
    assert covered == m, "block decomposition must partition the edges"
    return BlockDecomposition(tuple(blocks), tuple(sorted(cuts)), loops)


# ---------------------------------------------------------------------------
# two vertex-disjoint paths (Menger step)


@dataclass(frozen=True)
class DisjointPaths:
    """Minimal edge set forming two vertex-disjoint paths between S and T.

    Either path may be empty when S and T share vertices.  When S (or T) is
    a single vertex, both paths may start (end) there and are disjoint
    everywhere else.
    """

    edges: frozenset
    paths: tuple
    vertex_paths: tuple


def two_disjoint_paths(graph: Graph, sources, sinks) -> DisjointPaths:
    """Two vertex-disjoint S-T paths of minimal total edge set.

    Unit vertex capacities via vertex splitting, max-flow capped at 2,
    deterministic augmenting order by edge id.  Raises ConnectivityError
    when fewer than two disjoint paths exist.
    """
    S = sorted(set(sources))
    T = sorted(set(sinks))
    if not S or not T:
        raise UsageError("both endpoint sets must be non-empty")
    for v in S + T:
        if not (0 <= v < graph.n):
            raise DomainError(f"vertex {v} out of range")
    Sset, Tset = set(S), set(T)

    # node ids: 2v = v_in, 2v+1 = v_out, then source and sink
    src = 2 * graph.n
    snk = 2 * graph.n + 1
    arcs = []  # [to, cap, flow, rev_index, edge_id]
    head = {}

    def add(frm, to, cap, eid=-1):
        head.setdefault(frm, []).append(len(arcs))
        arcs.append([to, cap, 0, len(arcs) + 1, eid])
        head.setdefault(to, []).append(len(arcs))
        arcs.append([frm, 0, 0, len(arcs) - 1, eid])

    s_cap = 2 if len(S) == 1 else 1
    t_cap = 2 if len(T) == 1 else 1
    for v in S:
        add(src, 2 * v, s_cap)
    for v in range(graph.n):
        cap = 1
        if v in Sset and len(S) == 1:
            cap = 2
        if v in Tset and len(T) == 1:
            cap = 2
        add(2 * v, 2 * v + 1, cap)
    for eid, (u, v) in enumerate(graph.edges):
        if u == v:
            continue
        # S vertices only emit, T vertices only receive (paths are minimal:
        # they touch S at their first vertex and T at their last)
        if u not in Tset and v not in Sset:
            add(2 * u + 1, 2 * v, 1, eid)
        if v not in Tset and u not in Sset:
            add(2 * v + 1, 2 * u, 1, eid)
    for v in T:
        add(2 * v + 1, snk, t_cap)

    def augment():
        parent_arc = {src: -1}
        queue = [src]
        qi = 0
        while qi < len(queue):
            u = queue[qi]
            qi += 1
            if u == snk:
                break
            for ai in head.get(u, ()):
                to, cap, flow, _, _ = arcs[ai]
                if to not in parent_arc and cap > flow:
                    parent_arc[to] = ai
                    queue.append(to)
        if snk not in parent_arc:
            return False
        node = snk
        while node != src:
            ai = parent_arc[node]
            arcs[ai][2] += 1
            arcs[arcs[ai][3]][2] -= 1
            node = arcs[arcs[ai][3]][0]
        return True

    flow = 0
    while flow < 2 and augment():
        flow += 1
    if flow < 2:
        raise ConnectivityError(
            "fewer than two vertex-disjoint paths between the endpoint sets"
        )

    paths = []
    vpaths = []
    for _ in range(2):
        edge_path = []
        vpath = []
        node = src
        while node != snk:
            for ai in head.get(node, ()):
                to, _, fl, _, eid = arcs[ai]
                if fl > 0:
                    arcs[ai][2] -= 1
                    if eid >= 0:
                        edge_path.append(eid)
                    if to not in (src, snk) and to % 2 == 0:
                        vpath.append(to // 2)
                    node = to
                    break
            else:  # pragma: no cover - flow conservation guarantees progress
                raise AssertionError("flow decomposition failed")
        paths.append(tuple(edge_path))
        vpaths.append(tuple(vpath))

    all_edges = frozenset(e for p in paths for e in p)
    return DisjointPaths(all_edges, tuple(paths), tuple(vpaths))
