"""Independence-oracle handles: rank, minors, circuits, exchange structure.

A :class:`Matroid` is an immutable view over a base model (graphic, linear,
uniform or predicate-backed, see :mod:`basis_relabel.models`).  Minor views
are layered records of contracted and deleted element sets; they are never
materialized, so one model implementation serves every minor of itself.
Ranks of a contraction follow the identity
``rank_view(X) = rank_base(X | T) - rank_base(T)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, PreconditionError, UsageError


def element_ids(xs) -> tuple:
    """Sorted tuple of distinct element ids."""
    return tuple(sorted({int(x) for x in xs}))


@dataclass(frozen=True)
class GroundSet:
    """Dense element ids 0..size-1 with optional display names."""

    size: int
    names: tuple | None = None

    def __post_init__(self):
        if self.size < 0:
            raise UsageError("ground set size must be >= 0")
        if self.names is not None and len(self.names) != self.size:
            raise UsageError("names must match ground set size")

    def name_of(self, e: int) -> str:
        if self.names is not None:
            return self.names[e]
        return str(e)


@dataclass(frozen=True)
class Circuit:
    """A minimal dependent set."""

    members: frozenset

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __contains__(self, e):
        return e in self.members


@dataclass(frozen=True)
class ComponentPartition:
    """Partition of the live elements into connected components.

    Two elements share a component id exactly when they are equal or some
    circuit contains both.  Ids are normalized: components are numbered
    0..count-1 in order of their smallest element.
    """

    label_of: dict
    count: int

    def same(self, e, f) -> bool:
        return self.label_of[e] == self.label_of[f]

    def members(self, cid) -> tuple:
        return tuple(sorted(e for e, c in self.label_of.items() if c == cid))


class FundamentalGraph:
    """Bipartite exchange structure of a basis.

    A basis element e and an outside element f are adjacent exactly when
    swapping them yields another basis; the closed neighbourhood of an
    outside element equals its fundamental circuit.
    """

    def __init__(self, elements, basis, adjacency):
        self.elements = tuple(elements)
        self.basis = frozenset(basis)
        self.adjacency = {e: frozenset(adjacency.get(e, ())) for e in self.elements}
        self._index = {e: i for i, e in enumerate(self.elements)}
        self._csr = None

    def __contains__(self, e):
        return e in self._index

    def neighbors(self, e) -> frozenset:
        if e not in self._index:
            raise DomainError(f"element {e} not in the exchange graph")
        return self.adjacency[e]

    def edge_count(self) -> int:
        return sum(len(v) for v in self.adjacency.values()) // 2

    def _as_csr(self):
        if self._csr is None:
            n = len(self.elements)
            indptr = np.zeros(n + 1, dtype=np.int64)
            for i, e in enumerate(self.elements):
                indptr[i + 1] = indptr[i] + len(self.adjacency[e])
            indices = np.empty(indptr[-1], dtype=np.int64)
            pos = 0
            for e in self.elements:
                for f in sorted(self.adjacency[e]):
                    indices[pos] = self._index[f]
                    pos += 1
            self._csr = (indptr, indices)
        return self._csr

    def distance(self, e, f):
        """BFS shortest-path length between two elements, None if unreachable."""
        if e not in self._index or f not in self._index:
            raise DomainError(f"elements {e}, {f} must belong to the exchange graph")
        if e == f:
            return 0
        indptr, indices = self._as_csr()
        dist = np.empty(len(self.elements), dtype=np.int64)
        _kernels.bfs_fill(indptr, indices, self._index[e], dist)
        d = int(dist[self._index[f]])
        return None if d < 0 else d

    def shortest_path(self, e, f):
        """Deterministic shortest path (list of elements), None if unreachable."""
        if e not in self._index or f not in self._index:
            raise DomainError(f"elements {e}, {f} must belong to the exchange graph")
        if e == f:
            return [e]
        indptr, indices = self._as_csr()
        n = len(self.elements)
        dist = np.empty(n, dtype=np.int64)
        parent = np.empty(n, dtype=np.int64)
        _kernels.bfs_parents(indptr, indices, self._index[e], dist, parent)
        j = self._index[f]
        if dist[j] < 0:
            return None
        path = [f]
        while parent[j] >= 0:
            j = int(parent[j])
            path.append(self.elements[j])
        path.reverse()
        return path

    def eccentricities(self) -> dict:
        """Max BFS distance from each element within its own component."""
        indptr, indices = self._as_csr()
        ecc = _kernels.all_eccentricities(indptr, indices)
        return {e: int(ecc[i]) for i, e in enumerate(self.elements)}

    def diameter(self) -> int:
        """Largest finite pairwise distance (0 for an edgeless graph)."""
        if not self.elements:
            return 0
        return max(self.eccentricities().values())

    def component_labels(self) -> dict:
        """Connected-component id per element, normalized by smallest member."""
        parent = {e: e for e in self.elements}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.elements:
            for f in self.adjacency[e]:
                ra, rb = find(e), find(f)
                if ra != rb:
                    parent[ra] = rb
        groups = {}
        for e in self.elements:
            groups.setdefault(find(e), []).append(e)
        roots = sorted(groups, key=lambda r: min(groups[r]))
        labels = {}
        for cid, r in enumerate(roots):
            for e in groups[r]:
                labels[e] = cid
        return labels


class Matroid:
    """Immutable independence-oracle view over a base model.

    All queries are pure; concurrent read-only use is safe.  The only
    mutable state is the oracle-call counter on the base model, kept for
    the benchmark harness.
    """

    def __init__(self, model, contracted=frozenset(), deleted=frozenset()):
        self._model = model
        self._contracted = frozenset(contracted)
        self._deleted = frozenset(deleted)
        if self._contracted & self._deleted:
            raise UsageError("contracted and deleted sets must be disjoint")
        self._elements = tuple(
            e for e in range(model.size) if e not in self._contracted and e not in self._deleted
        )
        self._element_set = frozenset(self._elements)
        self._contracted_ids = element_ids(self._contracted)
        self._rank_contracted = None
        self._full_rank = None

    # -- basic views --------------------------------------------------

    @property
    def ground(self) -> GroundSet:
        return GroundSet(self._model.size, getattr(self._model, "names", None))

    @property
    def elements(self) -> tuple:
        return self._elements

    @property
    def element_set(self) -> frozenset:
        return self._element_set

    @property
    def size(self) -> int:
        return len(self._elements)

    @property
    def contracted(self) -> frozenset:
        return self._contracted

    @property
    def deleted(self) -> frozenset:
        return self._deleted

    @property
    def model(self):
        return self._model

    @property
    def oracle_calls(self) -> int:
        return self._model.calls

    def name_of(self, e) -> str:
        return self.ground.name_of(e)

    def _check(self, xs) -> tuple:
        ids = element_ids(xs)
        for e in ids:
            if e not in self._element_set:
                raise DomainError(f"element {e} is not in this view's ground set")
        return ids

    # -- rank and independence ----------------------------------------

    def _base_rank(self, ids) -> int:
        return self._model.rank_of(ids)

    def rank(self, xs) -> int:
        """Size of a maximal independent subset of xs in this view."""
        ids = self._check(xs)
        if not self._contracted:
            return self._base_rank(ids)
        if self._rank_contracted is None:
            self._rank_contracted = self._base_rank(self._contracted_ids)
        merged = element_ids(set(ids) | self._contracted)
        return self._base_rank(merged) - self._rank_contracted

    def is_independent(self, xs) -> bool:
        ids = self._check(xs)
        if not self._contracted:
            return self._model.indep(ids)
        return self.rank(ids) == len(ids)

    @property
    def full_rank(self) -> int:
        if self._full_rank is None:
            self._full_rank = self.rank(self._elements)
        return self._full_rank

    def is_basis(self, xs) -> bool:
        ids = self._check(xs)
        return len(ids) == self.full_rank and self.is_independent(ids)

    def greedy_basis(self) -> tuple:
        """Deterministic basis: greedy augmentation in ascending element id."""
        fast = getattr(self._model, "greedy_ids", None)
        if fast is not None:
            return fast(self._elements, self._contracted_ids)
        chosen = []
        current = 0
        for e in self._elements:
            if self.rank(chosen + [e]) > current:
                chosen.append(e)
                current += 1
        return tuple(chosen)

    # -- minors ---------------------------------------------------------

    def contract(self, xs) -> "Matroid":
        ids = self._check(xs)
        return Matroid(self._model, self._contracted | set(ids), self._deleted)

    def delete(self, xs) -> "Matroid":
        ids = self._check(xs)
        return Matroid(self._model, self._contracted, self._deleted | set(ids))

    def loops(self) -> tuple:
        return tuple(e for e in self._elements if self.rank([e]) == 0)

    def coloops(self) -> tuple:
        r = self.full_rank
        return tuple(
            e for e in self._elements if self.rank([x for x in self._elements if x != e]) < r
        )

    def simplify(self):
        """Delete loops and all but the smallest element of each parallel class.

        Returns (simplified view, removed elements).
        """
        removed = list(self.loops())
        loopset = set(removed)
        reps = []
        for e in self._elements:
            if e in loopset:
                continue
            for r in reps:
                if self.rank([r, e]) == 1:
                    removed.append(e)
                    break
            else:
                reps.append(e)
        removed = element_ids(removed)
        if not removed:
            return self, ()
        return self.delete(removed), removed

    # -- circuits and the exchange graph --------------------------------

    def fundamental_circuit(self, basis, e) -> Circuit:
        """The unique circuit inside basis + {e}; its members are exactly the
        valid exchange partners of e."""
        bids = self._check(basis)
        (e,) = self._check([e])
        if e in bids:
            raise UsageError(f"element {e} already belongs to the basis")
        if not self.is_basis(bids):
            raise PreconditionError("fundamental_circuit requires a basis")
        members = {e}
        others = set(bids)
        for b in bids:
            candidate = element_ids((others - {b}) | {e})
            if self.is_independent(candidate):
                members.add(b)
        return Circuit(frozenset(members))

    def fundamental_graph(self, basis) -> FundamentalGraph:
        """Exchange graph of a basis over all live elements."""
        bids = self._check(basis)
        if not self.is_basis(bids):
            raise PreconditionError("fundamental_graph requires a basis")
        bset = set(bids)
        outside = [e for e in self._elements if e not in bset]
        adjacency = {e: set() for e in self._elements}
        fast = getattr(self._model, "basis_fundamental_adjacency", None)
        if fast is not None and not self._contracted:
            circuits = fast(bids, outside)
        else:
            circuits = {
                f: tuple(x for x in self.fundamental_circuit(bids, f) if x != f)
                for f in outside
            }
        for f, partners in circuits.items():
            for b in partners:
                adjacency[f].add(b)
                adjacency[b].add(f)
        return FundamentalGraph(self._elements, bset, adjacency)

    def components(self) -> ComponentPartition:
        """Connected components: the transitive closure of sharing a circuit.

        Computed as the connected components of the exchange graph of the
        greedy basis; equality with the circuit-based definition is covered
        by brute-force tests on small instances.
        """
        loops = self.loops()
        if loops:
            raise PreconditionError(
                f"components requires a loop-free view (loops: {list(loops)})"
            )
        graph = self.fundamental_graph(self.greedy_basis())
        labels = graph.component_labels()
        return ComponentPartition(labels, count=len(set(labels.values())) if labels else 0)


def graph_distance(graph: FundamentalGraph, e, f):
    """Shortest-path length between two elements of an exchange graph."""
    return graph.distance(e, f)
