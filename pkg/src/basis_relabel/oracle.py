"""Brute-force ground truth: enumeration, reconfiguration graph, exact distances.

Everything here is exponential and cap-guarded; it exists to validate the
planners and the feasibility characterization on desk-scale instances.
"""

from __future__ import annotations

from itertools import combinations, permutations

from .core import Circuit
from .errors import BudgetExceededError
from .labelled import LabelledBasis

DEFAULT_ELEMENT_CAP = 14
DEFAULT_STATE_CAP = 500_000


def _guard(matroid, cap):
    if matroid.size > cap:
        raise BudgetExceededError("oracle enumeration", cap)


def enumerate_bases(matroid, cap=DEFAULT_ELEMENT_CAP) -> list:
    """All bases in ascending lexicographic order."""
    _guard(matroid, cap)
    r = matroid.full_rank
    return [ids for ids in combinations(matroid.elements, r) if matroid.is_independent(ids)]


def enumerate_circuits(matroid, cap=DEFAULT_ELEMENT_CAP) -> list:
    """All minimal dependent sets, smallest first, lexicographic within a size."""
    _guard(matroid, cap)
    circuits = []
    found = []
    for size in range(1, matroid.full_rank + 2):
        for ids in combinations(matroid.elements, size):
            s = set(ids)
            if any(c <= s for c in found):
                continue
            if not matroid.is_independent(ids):
                found.append(s)
                circuits.append(Circuit(frozenset(ids)))
    return circuits


def exchange_pairs(matroid, basis_ids) -> list:
    """All valid (drop, add) pairs from a basis, ascending."""
    bset = set(basis_ids)
    outside = [f for f in matroid.elements if f not in bset]
    pairs = []
    for e in basis_ids:
        rest = bset - {e}
        for f in outside:
            if matroid.is_independent(rest | {f}):
                pairs.append((e, f))
    return pairs


class ReconfigGraph:
    """Reconfiguration graph over labelled bases, explored lazily from seeds.

    Nodes are canonical (element, label) tuples; edges are single exchanges
    and symmetric by construction.  Exchange pairs are memoized per basis so
    relabellings of the same basis share the oracle work.
    """

    def __init__(self, matroid, state_cap=DEFAULT_STATE_CAP):
        self.matroid = matroid
        self.state_cap = state_cap
        self._pairs_by_basis = {}

    def _pairs(self, basis: frozenset):
        key = tuple(sorted(basis))
        if key not in self._pairs_by_basis:
            self._pairs_by_basis[key] = exchange_pairs(self.matroid, key)
        return self._pairs_by_basis[key]

    def successors(self, state: LabelledBasis):
        for drop, add in self._pairs(state.basis):
            label = state.label_of(drop)
            replaced = list(state.by_label)
            replaced[label - 1] = add
            yield LabelledBasis(tuple(replaced))

    def bfs_distance(self, start: LabelledBasis, goal: LabelledBasis):
        """Exact minimum number of exchanges, or None when unreachable."""
        if start.key() == goal.key():
            return 0
        goal_key = goal.key()
        dist = {start.key(): 0}
        frontier = [start]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for state in frontier:
                for succ in self.successors(state):
                    k = succ.key()
                    if k in dist:
                        continue
                    if k == goal_key:
                        return d
                    dist[k] = d
                    nxt.append(succ)
                    if len(dist) > self.state_cap:
                        raise BudgetExceededError("reconfiguration BFS", self.state_cap)
            frontier = nxt
        return None

    def component_of(self, start: LabelledBasis) -> set:
        """All node keys reachable from start."""
        seen = {start.key()}
        frontier = [start]
        while frontier:
            nxt = []
            for state in frontier:
                for succ in self.successors(state):
                    k = succ.key()
                    if k not in seen:
                        seen.add(k)
                        nxt.append(succ)
                        if len(seen) > self.state_cap:
                            raise BudgetExceededError(
                                "reconfiguration BFS", self.state_cap
                            )
            frontier = nxt
        return seen


def bfs_distance(matroid, start: LabelledBasis, goal: LabelledBasis, state_cap=DEFAULT_STATE_CAP):
    """Exact exchange distance between two labelled bases (None if unreachable)."""
    return ReconfigGraph(matroid, state_cap).bfs_distance(start, goal)


def reconfig_components(matroid, element_cap=DEFAULT_ELEMENT_CAP, state_cap=DEFAULT_STATE_CAP):
    """Component label for every labelled basis (full enumeration).

    Returns a dict mapping node keys to component ids.  The node count is
    (#bases) * r!; the state cap guards the product.
    """
    bases = enumerate_bases(matroid, element_cap)
    r = matroid.full_rank
    total = len(bases)
    for _ in range(2, r + 1):
        total *= _
        if total > state_cap:
            raise BudgetExceededError("reconfiguration graph enumeration", state_cap)

    nodes = []
    index = {}
    for basis in bases:
        for perm in permutations(basis):
            key = tuple(sorted((e, i + 1) for i, e in enumerate(perm)))
            if key not in index:
                index[key] = len(nodes)
                nodes.append(LabelledBasis(perm))

    parent = list(range(len(nodes)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    graph = ReconfigGraph(matroid, state_cap)
    for i, state in enumerate(nodes):
        for succ in graph.successors(state):
            j = index[succ.key()]
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj

    labels = {}
    next_id = {}
    for i, state in enumerate(nodes):
        root = find(i)
        cid = next_id.setdefault(root, len(next_id))
        labels[state.key()] = cid
    return labels
