"""Low-diameter basis constructions and their exact-search subroutines.

Two constructions produce bases whose exchange graph has small diameter,
which makes label swaps cheap:

* ``low_diameter_spanning_tree`` works on a 2-connected graph.  It repeatedly
  picks a cycle whose contraction halves every remaining block (local search,
  ``halving_cycle``), drops one cycle edge, ties the cycle to the already
  contracted part with two vertex-disjoint paths minus one edge, contracts,
  and simplifies.  Layers shrink geometrically, so the final exchange graph
  has diameter O(log m).

* ``low_diameter_basis`` does the analogous construction on any connected
  matroid: largest circuit instead of halving cycle, and a minimal linking
  set with unit union-corank instead of the two paths.  Layer count is
  O(sqrt(r)).

Both record a :class:`ConstructionState` so tests can audit layer counts and
the distance-4 proximity between consecutive layers.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .core import Circuit, FundamentalGraph, Matroid
from .errors import (
    BudgetExceededError,
    ConnectivityError,
    PreconditionError,
    UsageError,
)
from .models import Graph, biconnected_blocks, quotient_graph, two_disjoint_paths

DEFAULT_CIRCUIT_BUDGET = 2_000_000
DEFAULT_LINKING_MAX_SIZE = 6


# ---------------------------------------------------------------------------
# construction bookkeeping


@dataclass(frozen=True)
class LayerEntry:
    """One processed block/component: what was chosen and what was added."""

    layer: int
    component: tuple
    circuit: tuple
    dropped: int | None
    connector: tuple
    dropped_connector: int | None
    added: tuple
    witness: tuple | None = None


@dataclass(frozen=True)
class ConstructionState:
    entries: tuple
    layer_of: dict
    basis: tuple

    @property
    def layer_count(self) -> int:
        return max((e.layer for e in self.entries), default=0)


def layer_proximity(graph: FundamentalGraph, state: ConstructionState) -> dict:
    """Max distance from each layer's elements to any earlier layer's element.

    Layer 1 is measured against the rest of layer 1 (its elements all hang
    off one dropped circuit edge, so the value is at most 2).
    """
    by_layer = {}
    for e, lay in state.layer_of.items():
        by_layer.setdefault(lay, []).append(e)
    result = {}
    for lay in sorted(by_layer):
        anchor = (
            set(by_layer[lay])
            if lay == 1
            else {e for l2, es in by_layer.items() if l2 < lay for e in es}
        )
        worst = 0
        for x in by_layer[lay]:
            best = None
            for y in anchor:
                if y == x:
                    continue
                d = graph.distance(x, y)
                if d is not None and (best is None or d < best):
                    best = d
            if best is not None:
                worst = max(worst, best)
        result[lay] = worst
    return result


# ---------------------------------------------------------------------------
# halving cycle (graphic local search)


def _check_simple_2connected(graph: Graph):
    if graph.m < 3:
        raise PreconditionError("halving cycle needs at least 3 edges")
    seen = set()
    for u, v in graph.edges:
        if u == v:
            raise PreconditionError("halving cycle requires a loop-free graph")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise PreconditionError("halving cycle requires a simple graph")
        seen.add(key)
    decomposition = biconnected_blocks(graph)
    if len(decomposition.blocks) != 1:
        raise PreconditionError("halving cycle requires a 2-connected graph")


def _order_cycle(graph: Graph, edge_ids):
    """Vertex/edge order around a simple cycle, canonical start and direction."""
    incident = {}
    for eid in edge_ids:
        u, v = graph.edges[eid]
        incident.setdefault(u, []).append((eid, v))
        incident.setdefault(v, []).append((eid, u))
    for v, inc in incident.items():
        assert len(inc) == 2, "cycle edges must form a simple cycle"
        inc.sort()
    start = min(incident)
    first_eid, nxt = incident[start][0]
    vseq = [start]
    eseq = [first_eid]
    prev_eid = first_eid
    cur = nxt
    while cur != start:
        vseq.append(cur)
        (e1, w1), (e2, w2) = incident[cur]
        eid, w = (e2, w2) if e1 == prev_eid else (e1, w1)
        eseq.append(eid)
        prev_eid = eid
        cur = w
    return vseq, eseq


def _spanning_tree_cycle(graph: Graph):
    """Fundamental cycle of the smallest-id non-tree edge of a BFS tree."""
    adj = graph.adjacency()
    parent = {0: (None, None)}
    order = [0]
    head = 0
    while head < len(order):
        v = order[head]
        head += 1
        for w, eid in adj[v]:
            if w not in parent:
                parent[w] = (v, eid)
                order.append(w)
    tree_edges = {eid for _, eid in parent.values() if eid is not None}
    chord = min(
        eid
        for eid, (u, v) in enumerate(graph.edges)
        if u != v and eid not in tree_edges
    )
    a, b = graph.edges[chord]
    seen_a = {}
    node = a
    while node is not None:
        seen_a[node] = True
        node = parent[node][0]
    node = b
    while node not in seen_a:
        node = parent[node][0]
    meet = node
    cycle = {chord}
    for end in (a, b):
        node = end
        while node != meet:
            v, eid = parent[node]
            cycle.add(eid)
            node = v
    return cycle


def _cycle_bridges(graph: Graph, vseq, eset):
    """Bridges of the cycle: chords and components of G minus the cycle vertices."""
    on_cycle = set(vseq)
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v in range(graph.n):
        if v not in on_cycle:
            parent[v] = v
    for eid, (u, v) in enumerate(graph.edges):
        if eid in eset or u in on_cycle or v in on_cycle:
            continue
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv

    bridges = {}
    for eid, (u, v) in enumerate(graph.edges):
        if eid in eset:
            continue
        if u in on_cycle and v in on_cycle:
            key = ("chord", eid)
        else:
            outside = v if u in on_cycle else u
            key = ("comp", find(outside))
        entry = bridges.setdefault(key, {"edges": set(), "attach": set()})
        entry["edges"].add(eid)
        if u in on_cycle:
            entry["attach"].add(u)
        if v in on_cycle:
            entry["attach"].add(v)
    return bridges


def _path_through_bridge(graph: Graph, bridge, va, vb, on_cycle):
    """Deterministic path from va to vb through bridge edges avoiding the cycle."""
    allowed = bridge["edges"]
    adj = {}
    for eid in sorted(allowed):
        u, v = graph.edges[eid]
        for x, y in ((u, v), (v, u)):
            if x in on_cycle and x not in (va, vb):
                continue
            if y in on_cycle and y not in (va, vb):
                continue
            adj.setdefault(x, []).append((y, eid))
    prev = {va: (None, None)}
    queue = [va]
    head = 0
    while head < len(queue) and vb not in prev:
        x = queue[head]
        head += 1
        for y, eid in adj.get(x, ()):
            if y not in prev:
                prev[y] = (x, eid)
                queue.append(y)
    assert vb in prev, "bridge must connect consecutive attachments"
    vpath = [vb]
    epath = []
    node = vb
    while prev[node][0] is not None:
        epath.append(prev[node][1])
        node = prev[node][0]
        vpath.append(node)
    vpath.reverse()
    epath.reverse()
    return vpath, epath


def halving_cycle_trace(graph: Graph):
    """Cycle whose contraction leaves every block with at most m/2 edges.

    Local search: while one bridge of the current cycle holds more than half
    of the edges, reroute the cycle through that bridge across the arc that
    carries all of its attachments.  The largest bridge size strictly
    decreases, so at most m iterations happen; the per-iteration sizes are
    returned as the trace.  Blocks of the contraction refine the bridges, so
    the block guarantee follows.
    """
    _check_simple_2connected(graph)
    m = graph.m
    vseq, eseq = _order_cycle(graph, _spanning_tree_cycle(graph))
    trace = []
    for _ in range(m + 1):
        eset = set(eseq)
        bridges = _cycle_bridges(graph, vseq, eset)
        largest = max((len(b["edges"]) for b in bridges.values()), default=0)
        trace.append(largest)
        if 2 * largest <= m:
            return tuple(sorted(eset)), tuple(trace)
        offenders = [
            (key, b) for key, b in bridges.items() if 2 * len(b["edges"]) > m
        ]
        assert len(offenders) == 1, "at most one bridge can exceed half the edges"
        _, bridge = offenders[0]
        pos = {v: i for i, v in enumerate(vseq)}
        ps = sorted(pos[v] for v in bridge["attach"])
        assert len(ps) >= 2, "2-connectivity gives every bridge two attachments"
        lo, hi = ps[0], ps[1]
        va, vb = vseq[lo], vseq[hi]
        # kept arc: from vb forward around the cycle back to va
        keep_v = [vseq[i % len(vseq)] for i in range(hi, lo + len(vseq) + 1)]
        keep_e = [eseq[i % len(vseq)] for i in range(hi, lo + len(vseq))]
        pvert, pedge = _path_through_bridge(graph, bridge, va, vb, set(vseq))
        vseq = keep_v[:-1] + pvert[:-1]
        eseq = keep_e + pedge
        assert len(vseq) == len(eseq) == len(set(vseq))
    raise AssertionError("halving-cycle local search failed to terminate")


def halving_cycle(graph: Graph) -> tuple:
    """Edge ids of a cycle all of whose contraction blocks have <= m/2 edges."""
    cycle, _ = halving_cycle_trace(graph)
    return cycle


# ---------------------------------------------------------------------------
# low-diameter spanning tree (graphic construction)


def _simplified_alive(graph: Graph, find):
    """Live edge ids after contraction: loops dropped, parallels deduped."""
    alive = []
    seen_pairs = set()
    for eid, (u, v) in enumerate(graph.edges):
        cu, cv = find(u), find(v)
        if cu == cv:
            continue
        key = (min(cu, cv), max(cu, cv))
        if key in seen_pairs:
            continue
        seen_pairs.add(key)
        alive.append(eid)
    return alive


def low_diameter_spanning_tree(graph: Graph):
    """Spanning tree of a 2-connected graph with O(log m) exchange diameter.

    Returns (sorted tree edge ids, ConstructionState).  Each round processes
    one block of the contracted, simplified graph that touches the growing
    contracted class: either a halving cycle minus one edge plus a two-path
    connector minus one edge, or a lone bridge edge.
    """
    if graph.n < 2:
        return (), ConstructionState((), {}, ())
    if not graph.is_connected():
        raise PreconditionError("low-diameter tree construction needs a connected graph")

    parent = list(range(graph.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = []
    layer_of = {}
    entries = []
    anchor = None
    prev_blocks = []  # (edge frozenset, layer, processed)

    for _ in range(graph.n):
        alive = _simplified_alive(graph, find)
        if not alive:
            break
        class_of = [find(v) for v in range(graph.n)]
        qgraph, kept = quotient_graph(graph, class_of)
        alive_set = set(alive)
        positions = [i for i, eid in enumerate(kept) if eid in alive_set]
        pos_edges = tuple(qgraph.edges[i] for i in positions)
        pos_ids = tuple(kept[i] for i in positions)
        sub = Graph(qgraph.n, pos_edges)
        decomposition = biconnected_blocks(sub)
        blocks = [tuple(pos_ids[i] for i in blk) for blk in decomposition.blocks]

        layers = {}
        for blk in blocks:
            bset = frozenset(blk)
            lay = 1
            for pset, play, processed in prev_blocks:
                if bset <= pset:
                    lay = play + (1 if processed else 0)
                    break
            layers[bset] = lay

        if anchor is None:
            target = blocks[0]
            assert len(blocks) == 1, "a 2-connected graph starts as one block"
        else:
            arep = find(anchor)
            touching = [
                blk
                for blk in blocks
                if any(find(graph.edges[e][0]) == arep or find(graph.edges[e][1]) == arep for e in blk)
            ]
            assert touching, "some block always touches the contracted class"
            target = min(touching, key=lambda blk: blk[0])

        layer = layers[frozenset(target)]
        if len(target) == 1:
            eid = target[0]
            added = (eid,)
            entry = LayerEntry(layer, tuple(target), (), None, (), None, added)
        else:
            sub_positions = [i for i, eid in zip(positions, pos_ids) if eid in set(target)]
            # block as its own dense graph
            block_ids = sorted(target)
            bverts = sorted({w for e in block_ids for w in (find(graph.edges[e][0]), find(graph.edges[e][1]))})
            vmap = {w: i for i, w in enumerate(bverts)}
            bgraph = Graph(
                len(bverts),
                tuple(
                    (vmap[find(graph.edges[e][0])], vmap[find(graph.edges[e][1])])
                    for e in block_ids
                ),
            )
            cyc_pos, _ = halving_cycle_trace(bgraph)
            cycle_ids = tuple(sorted(block_ids[i] for i in cyc_pos))
            dropped = min(cycle_ids)
            cycle_classes = {
                find(w) for e in cycle_ids for w in graph.edges[e]
            }
            connector = ()
            dropped_conn = None
            if anchor is not None and find(anchor) not in cycle_classes:
                connector = _connect_to_anchor(
                    graph, find, block_ids, cycle_classes, find(anchor)
                )
                dropped_conn = min(connector)
            added = tuple(sorted((set(cycle_ids) - {dropped}) | (set(connector) - {dropped_conn})))
            entry = LayerEntry(
                layer,
                tuple(sorted(target)),
                cycle_ids,
                dropped,
                tuple(sorted(connector)),
                dropped_conn,
                added,
            )

        for eid in entry.added:
            u, v = graph.edges[eid]
            ru, rv = find(u), find(v)
            assert ru != rv, "additions must stay a forest under contraction"
            parent[ru] = rv
            tree.append(eid)
            layer_of[eid] = entry.layer
        entries.append(entry)
        if anchor is None:
            anchor = graph.edges[entry.added[0]][0]
        prev_blocks = [
            (frozenset(blk), layers[frozenset(blk)], frozenset(blk) == frozenset(target))
            for blk in blocks
        ]

    assert len(set(find(v) for v in range(graph.n))) == 1, "tree must span the graph"
    assert len(tree) == graph.n - 1
    tree = tuple(sorted(tree))
    state = ConstructionState(tuple(entries), layer_of, tree)
    return tree, state


def _connect_to_anchor(graph: Graph, find, block_ids, cycle_classes, anchor_rep):
    """Two vertex-disjoint connectors from the contracted class to the cycle.

    Runs on the block's edges with the anchor class expanded back to original
    vertices, so the two paths enter the class at distinct vertices whenever
    possible (falls back to a fan from the single shared vertex otherwise).
    """
    # map endpoints: anchor-class endpoints stay original, others to class rep
    def endpoint(w):
        rep = find(w)
        return ("orig", w) if rep == anchor_rep else ("class", rep)

    nodes = {}
    edges = []
    for eid in sorted(block_ids):
        u, v = graph.edges[eid]
        a, b = endpoint(u), endpoint(v)
        for key in (a, b):
            if key not in nodes:
                nodes[key] = len(nodes)
        edges.append((nodes[a], nodes[b]))
    flow_graph = Graph(len(nodes), tuple(edges))
    sources = sorted(i for key, i in nodes.items() if key[0] == "orig")
    sinks = sorted(
        i for key, i in nodes.items() if key[0] == "class" and key[1] in cycle_classes
    )
    try:
        result = two_disjoint_paths(flow_graph, sources, sinks)
    except ConnectivityError:
        # single shared boundary vertex: fan out from the contracted class
        class_of = [find(v) for v in range(graph.n)]
        qgraph, kept = quotient_graph(graph, class_of)
        keep_pos = [i for i, eid in enumerate(kept) if eid in set(block_ids)]
        sub = Graph(qgraph.n, tuple(qgraph.edges[i] for i in keep_pos))
        sub_ids = [kept[i] for i in keep_pos]
        dense_of = {}
        reps = sorted(set(class_of))
        for i, r in enumerate(reps):
            dense_of[r] = i
        result = two_disjoint_paths(
            sub, [dense_of[anchor_rep]], sorted(dense_of[c] for c in cycle_classes)
        )
        return frozenset(sub_ids[e] for e in result.edges)
    return frozenset(sorted(block_ids)[e] for e in result.edges)


# ---------------------------------------------------------------------------
# largest circuit (exact search)


def largest_circuit(matroid: Matroid, budget=DEFAULT_CIRCUIT_BUDGET):
    """A maximum-cardinality circuit, or None when the matroid is free.

    Exact and exponential in the worst case: graphic handles run a longest
    cycle search on the contracted multigraph, everything else an ascending
    search over independent sets.  The node budget guards both.
    """
    if matroid.size == 0:
        return None
    if getattr(matroid.model, "kind", None) == "graph" and not matroid.deleted & set():
        return _largest_circuit_graphic(matroid, budget)
    return _largest_circuit_generic(matroid, budget)


def _largest_circuit_graphic(matroid: Matroid, budget):
    graph = matroid.model.graph
    parent = list(range(graph.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for eid in sorted(matroid.contracted):
        u, v = graph.edges[eid]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv

    live = matroid.elements
    loops = [e for e in live if find(graph.edges[e][0]) == find(graph.edges[e][1])]
    best = None
    if loops:
        best = (loops[0],)

    adj = {}
    for eid in live:
        if eid in loops:
            continue
        u, v = find(graph.edges[eid][0]), find(graph.edges[eid][1])
        adj.setdefault(u, []).append((v, eid))
        adj.setdefault(v, []).append((u, eid))
    for v in adj:
        adj[v].sort(key=lambda t: t[1])
    vertices = sorted(adj)
    nodes = 0

    def extend(start, current, visited, path):
        nonlocal best, nodes
        for w, eid in adj[current]:
            if eid in path:
                continue
            nodes += 1
            if nodes > budget:
                raise BudgetExceededError("largest_circuit", budget)
            if w == start and len(path) >= 1:
                if best is None or len(path) + 1 > len(best):
                    best = tuple(sorted(path | {eid}))
            elif w not in visited and w > start:
                if best is not None and len(path) + 1 + _reach_bound(w, visited) <= len(best):
                    continue
                extend(start, w, visited | {w}, path | {eid})

    def _reach_bound(w, visited):
        # loose bound: every unvisited vertex can contribute one edge
        return len(vertices) - len(visited)

    for s in vertices:
        extend(s, s, {s}, frozenset())
    if best is None:
        return None
    return Circuit(frozenset(best))


def _largest_circuit_generic(matroid: Matroid, budget):
    if getattr(matroid.model, "kind", None) == "uniform":
        r = matroid.full_rank
        if matroid.size > r:
            return Circuit(frozenset(matroid.elements[: r + 1]))
        return None
    elements = matroid.elements
    cap = matroid.full_rank + 1
    best = None
    nodes = 0

    def dfs(prefix):
        nonlocal best, nodes
        start = elements.index(prefix[-1]) + 1 if prefix else 0
        for idx in range(start, len(elements)):
            x = elements[idx]
            remaining = len(elements) - idx - 1
            ceiling = min(cap, len(prefix) + 1 + remaining + 1)
            if best is not None and ceiling <= len(best):
                continue
            nodes += 1
            if nodes > budget:
                raise BudgetExceededError("largest_circuit", budget)
            candidate = prefix + [x]
            if matroid.is_independent(candidate):
                if len(candidate) < cap:
                    dfs(candidate)
            elif best is None or len(candidate) > len(best):
                inside = set(candidate)
                circuit = {x} | {
                    y for y in prefix if matroid.is_independent(inside - {y})
                }
                if best is None or len(circuit) > len(best):
                    best = frozenset(circuit)

    dfs([])
    return Circuit(best) if best is not None else None


# ---------------------------------------------------------------------------
# linking sets (matroid analogue of the two disjoint paths)


@dataclass(frozen=True)
class LinkingCertificate:
    """Minimal connector P between two independent sets.

    The union of the two sets with the connector has corank one, so it holds
    a unique circuit; that circuit contains all of the connector and meets
    both sets, which is exactly what the distance-4 argument consumes.
    """

    connector: frozenset
    union_corank: int
    skew_to_prev: bool
    skew_to_new: bool
    circuit: frozenset


def linking_set(
    matroid: Matroid, prev_set, new_set, max_size=DEFAULT_LINKING_MAX_SIZE
) -> LinkingCertificate:
    """Smallest independent P, skew to both sets, making their union corank 1.

    Searched exhaustively by increasing size with cheap rank-arithmetic
    rejections first; the certificate (unique circuit through P meeting both
    sides) is verified before returning.
    """
    prev_ids = frozenset(prev_set)
    new_ids = frozenset(new_set)
    if prev_ids & new_ids:
        raise UsageError("the two sets must be disjoint")
    if not matroid.is_independent(prev_ids) or not matroid.is_independent(new_ids):
        raise PreconditionError("linking requires independent sets on both sides")
    pool = [e for e in matroid.elements if e not in prev_ids and e not in new_ids]
    base = prev_ids | new_ids
    for size in range(0, min(max_size, len(pool)) + 1):
        for combo in combinations(pool, size):
            pset = set(combo)
            if size and not matroid.is_independent(pset):
                continue
            if matroid.rank(prev_ids | pset) != len(prev_ids) + size:
                continue
            if matroid.rank(new_ids | pset) != len(new_ids) + size:
                continue
            union = base | pset
            if matroid.rank(union) != len(union) - 1:
                continue
            circuit = frozenset(
                x for x in union if matroid.is_independent(union - {x})
            )
            if not (pset <= circuit and circuit & prev_ids and circuit & new_ids):
                continue
            return LinkingCertificate(
                connector=frozenset(combo),
                union_corank=1,
                skew_to_prev=True,
                skew_to_new=True,
                circuit=circuit,
            )
    if matroid.components().count > 1:
        raise PreconditionError("linking requires a connected matroid")
    raise BudgetExceededError("linking_set", max_size)


# ---------------------------------------------------------------------------
# low-diameter basis (matroid construction)


def low_diameter_basis(
    matroid: Matroid,
    circuit_budget=DEFAULT_CIRCUIT_BUDGET,
    linking_max_size=DEFAULT_LINKING_MAX_SIZE,
):
    """Basis of a connected matroid whose exchange graph has small diameter.

    Rounds contract the basis built so far, simplify, and extend the basis
    inside one component of the result: largest circuit minus one element,
    tied back with a minimal linking set minus one element.  Returns
    (sorted basis, ConstructionState).
    """
    if matroid.size == 0:
        return (), ConstructionState((), {}, ())
    loops = matroid.loops()
    work = matroid.delete(loops) if loops else matroid
    if work.size == 0:
        return (), ConstructionState((), {}, ())
    if work.components().count != 1:
        raise PreconditionError("low-diameter basis construction needs a connected matroid")
    simplified, _ = work.simplify()

    basis = []
    layer_of = {}
    entries = []
    prev_comps = []  # (frozenset, layer, processed)

    while True:
        view = simplified.contract(basis) if basis else simplified
        view_s, _ = view.simplify()
        if view_s.size == 0:
            break
        partition = view_s.components()
        comps = [
            frozenset(partition.members(cid)) for cid in range(partition.count)
        ]

        layers = {}
        for comp in comps:
            lay = 1
            hits = [
                (pl, processed)
                for pset, pl, processed in prev_comps
                if pset & comp
            ]
            if hits:
                lay = max(pl + (1 if processed else 0) for pl, processed in hits)
            layers[comp] = lay

        target = min(comps, key=min)
        layer = layers[target]

        if len(target) == 1:
            circuit_ids = ()
            dropped = None
            new_part = tuple(target)
        else:
            others = [e for e in view_s.elements if e not in target]
            comp_view = view_s.delete(others) if others else view_s
            circuit = largest_circuit(comp_view, circuit_budget)
            assert circuit is not None, "a connected component with >1 element has a circuit"
            circuit_ids = tuple(sorted(circuit.members))
            dropped = circuit_ids[0]
            new_part = tuple(x for x in circuit_ids if x != dropped)

        if not basis:
            connector = ()
            dropped_conn = None
            witness = None
            added = new_part
        else:
            cert = linking_set(simplified, basis, new_part, linking_max_size)
            connector = tuple(sorted(cert.connector))
            dropped_conn = connector[0] if connector else None
            witness = tuple(sorted(cert.circuit))
            added = tuple(
                sorted(set(new_part) | (set(connector) - {dropped_conn}))
            )

        assert simplified.is_independent(set(basis) | set(added)), (
            "construction must keep the accumulated set independent"
        )
        for e in added:
            basis.append(e)
            layer_of[e] = layer
        entries.append(
            LayerEntry(
                layer,
                tuple(sorted(target)),
                circuit_ids,
                dropped,
                connector,
                dropped_conn,
                added,
                witness,
            )
        )
        prev_comps = [(comp, layers[comp], comp == target) for comp in comps]

    basis = tuple(sorted(basis))
    assert matroid.is_basis(basis), "construction must end in a basis"
    state = ConstructionState(tuple(entries), layer_of, basis)
    return basis, state
