"""Hot numeric kernels: union-find forest checks, GF(2) elimination, BFS.

Every kernel is written in nopython-compatible style and JIT-compiled with
numba unless the environment variable BASIS_RELABEL_KERNELS is set to
``python``, in which case the same functions run as plain Python over numpy
arrays (the reference fallback, also used when numba is not installed).
``benchmarks/bench_kernels.py`` times the two paths against each other.
"""

import os

import numpy as np

BACKEND_ENV = "BASIS_RELABEL_KERNELS"


def _pick_backend():
    choice = os.environ.get(BACKEND_ENV, "auto").lower()
    if choice not in ("auto", "numba", "python"):
        raise ValueError(f"{BACKEND_ENV} must be auto, numba or python (got {choice!r})")
    if choice == "python":
        return "python"
    try:
        import numba  # noqa: F401
    except ImportError:
        if choice == "numba":
            raise
        return "python"
    return "numba"


_BACKEND = _pick_backend()


def active_backend():
    """Name of the kernel backend in use: 'numba' or 'python'."""
    return _BACKEND


def _compile(fn):
    if _BACKEND == "python":
        return fn
    import numba

    return numba.njit(cache=True)(fn)


def _forest_rank(us, vs, n):
    """Number of edges that join two distinct trees when added in id order.

    Equals the graphic-matroid rank of the edge multiset (us[i], vs[i]).
    """
    parent = np.arange(n, dtype=np.int64)
    rank = 0
    for i in range(us.shape[0]):
        a = us[i]
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        b = vs[i]
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a != b:
            parent[a] = b
            rank += 1
    return rank


def _forest_select(pus, pvs, us, vs, n, keep):
    """Greedy forest over (us, vs) after force-merging the preload edges.

    keep[i] is set to 1 when edge i of (us, vs) joins two distinct trees.
    Returns the number of kept edges.
    """
    parent = np.arange(n, dtype=np.int64)
    for i in range(pus.shape[0]):
        a = pus[i]
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        b = pvs[i]
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a != b:
            parent[a] = b
    count = 0
    for i in range(us.shape[0]):
        a = us[i]
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        b = vs[i]
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a != b:
            parent[a] = b
            keep[i] = 1
            count += 1
        else:
            keep[i] = 0
    return count


def _gf2_rank(cols):
    """Rank of GF(2) column vectors, each packed into the bits of one int64."""
    pivots = np.zeros(63, dtype=np.int64)
    rank = 0
    for i in range(cols.shape[0]):
        v = cols[i]
        while v != 0:
            j = 0
            t = v >> 1
            while t != 0:
                t >>= 1
                j += 1
            if pivots[j] == 0:
                pivots[j] = v
                rank += 1
                break
            v ^= pivots[j]
    return rank


def _bfs_fill(indptr, indices, src, dist):
    """BFS levels from src into dist (-1 = unreachable). Returns max level."""
    n = dist.shape[0]
    for i in range(n):
        dist[i] = -1
    queue = np.empty(n, dtype=np.int64)
    head = 0
    tail = 0
    dist[src] = 0
    queue[tail] = src
    tail += 1
    far = 0
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        for k in range(indptr[u], indptr[u + 1]):
            w = indices[k]
            if dist[w] < 0:
                dist[w] = du + 1
                if du + 1 > far:
                    far = du + 1
                queue[tail] = w
                tail += 1
    return far


def _bfs_parents(indptr, indices, src, dist, parent):
    """BFS from src recording the first-discovered predecessor of each node."""
    n = dist.shape[0]
    for i in range(n):
        dist[i] = -1
        parent[i] = -1
    queue = np.empty(n, dtype=np.int64)
    head = 0
    tail = 0
    dist[src] = 0
    queue[tail] = src
    tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        for k in range(indptr[u], indptr[u + 1]):
            w = indices[k]
            if dist[w] < 0:
                dist[w] = du + 1
                parent[w] = u
                queue[tail] = w
                tail += 1


def _tree_paths(n, tu, tv, fu, fv):
    """Tree-path decomposition for every non-tree edge of a spanning forest.

    tu/tv are the endpoints of the forest edges (slot i = forest edge i),
    fu/fv the endpoints of the remaining edges.  Returns (indptr, slots)
    where slots[indptr[j]:indptr[j+1]] are the forest-edge slots on the
    unique tree path between fu[j] and fv[j].
    """
    r = tu.shape[0]
    nf = fu.shape[0]
    deg = np.zeros(n + 1, dtype=np.int64)
    for i in range(r):
        deg[tu[i] + 1] += 1
        deg[tv[i] + 1] += 1
    for i in range(n):
        deg[i + 1] += deg[i]
    nbr = np.empty(2 * r, dtype=np.int64)
    slot = np.empty(2 * r, dtype=np.int64)
    fill = deg.copy()
    for i in range(r):
        nbr[fill[tu[i]]] = tv[i]
        slot[fill[tu[i]]] = i
        fill[tu[i]] += 1
        nbr[fill[tv[i]]] = tu[i]
        slot[fill[tv[i]]] = i
        fill[tv[i]] += 1

    parent = np.full(n, -1, dtype=np.int64)
    pedge = np.full(n, -1, dtype=np.int64)
    depth = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for root in range(n):
        if depth[root] >= 0:
            continue
        depth[root] = 0
        head = 0
        tail = 0
        queue[tail] = root
        tail += 1
        while head < tail:
            u = queue[head]
            head += 1
            for k in range(deg[u], deg[u + 1]):
                w = nbr[k]
                if depth[w] < 0:
                    depth[w] = depth[u] + 1
                    parent[w] = u
                    pedge[w] = slot[k]
                    queue[tail] = w
                    tail += 1

    indptr = np.zeros(nf + 1, dtype=np.int64)
    total = 0
    for j in range(nf):
        a = fu[j]
        b = fv[j]
        length = 0
        while depth[a] > depth[b]:
            a = parent[a]
            length += 1
        while depth[b] > depth[a]:
            b = parent[b]
            length += 1
        while a != b:
            a = parent[a]
            b = parent[b]
            length += 2
        total += length
        indptr[j + 1] = total
    slots = np.empty(total, dtype=np.int64)
    pos = 0
    for j in range(nf):
        a = fu[j]
        b = fv[j]
        while depth[a] > depth[b]:
            slots[pos] = pedge[a]
            pos += 1
            a = parent[a]
        while depth[b] > depth[a]:
            slots[pos] = pedge[b]
            pos += 1
            b = parent[b]
        while a != b:
            slots[pos] = pedge[a]
            pos += 1
            slots[pos] = pedge[b]
            pos += 1
            a = parent[a]
            b = parent[b]
    return indptr, slots


forest_rank = _compile(_forest_rank)
forest_select = _compile(_forest_select)
gf2_rank = _compile(_gf2_rank)
bfs_fill = _compile(_bfs_fill)
bfs_parents = _compile(_bfs_parents)
tree_paths = _compile(_tree_paths)


def _all_eccentricities(indptr, indices):
    """Per-node BFS eccentricity restricted to each node's component."""
    n = indptr.shape[0] - 1
    ecc = np.zeros(n, dtype=np.int64)
    dist = np.empty(n, dtype=np.int64)
    for s in range(n):
        ecc[s] = bfs_fill(indptr, indices, s, dist)
    return ecc


all_eccentricities = _compile(_all_eccentricities)


def _all_eccentricities_py(indptr, indices):
    n = indptr.shape[0] - 1
    ecc = np.zeros(n, dtype=np.int64)
    dist = np.empty(n, dtype=np.int64)
    for s in range(n):
        ecc[s] = _bfs_fill(indptr, indices, s, dist)
    return ecc


RAW_KERNELS = {
    "forest_rank": _forest_rank,
    "forest_select": _forest_select,
    "gf2_rank": _gf2_rank,
    "bfs_fill": _bfs_fill,
    "bfs_parents": _bfs_parents,
    "tree_paths": _tree_paths,
    "all_eccentricities": _all_eccentricities_py,
}
