"""Compiled inner loops used by the samplers and experiment drivers."""

import heapq

import numpy as np
from numba import njit


@njit(cache=True)
def preorder_parents(deg):
    """Parent of each vertex of the plane tree with preorder outdegrees ``deg``."""
    n = deg.shape[0]
    parent = np.full(n, -1, np.int64)
    stack = np.empty(n, np.int64)
    left = np.empty(n, np.int64)
    top = 0
    for i in range(n):
        if i > 0:
            p = stack[top - 1]
            parent[i] = p
            left[top - 1] -= 1
            if left[top - 1] == 0:
                top -= 1
        if deg[i] > 0:
            stack[top] = i
            left[top] = deg[i]
            top += 1
    return parent


@njit(cache=True)
def plane_tree_height(deg):
    n = deg.shape[0]
    left = np.empty(n + 1, np.int64)
    sdepth = np.empty(n + 1, np.int64)
    top = 0
    best = 0
    for i in range(n):
        d = 0
        if i > 0:
            d = sdepth[top - 1] + 1
            if d > best:
                best = d
            left[top - 1] -= 1
            if left[top - 1] == 0:
                top -= 1
        if deg[i] > 0:
            left[top] = deg[i]
            sdepth[top] = d
            top += 1
    return best


@njit(cache=True)
def _block_sssp(src, k1, adj_off, adj, adj_w, weighted, dist, queue):
    for i in range(k1):
        dist[i] = np.inf
    dist[src] = 0.0
    if not weighted:
        head = 0
        tail = 1
        queue[0] = src
        while head < tail:
            u = queue[head]
            head += 1
            for e in range(adj_off[u], adj_off[u + 1]):
                v = adj[e]
                if dist[v] == np.inf:
                    dist[v] = dist[u] + 1.0
                    queue[tail] = v
                    tail += 1
        return
    h = [(0.0, src)]
    while len(h) > 0:
        d, u = heapq.heappop(h)
        if d > dist[u]:
            continue
        for e in range(adj_off[u], adj_off[u + 1]):
            v = adj[e]
            nd = d + adj_w[e]
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(h, (nd, v))


@njit(cache=True)
def _block_adjacency(b, mem_off, e_off, eu, ev, w, weighted):
    k1 = mem_off[b + 1] - mem_off[b] + 1
    e0, e1 = e_off[b], e_off[b + 1]
    cnt = np.zeros(k1 + 1, np.int64)
    for e in range(e0, e1):
        cnt[eu[e] + 1] += 1
        cnt[ev[e] + 1] += 1
    for i in range(k1):
        cnt[i + 1] += cnt[i]
    adj = np.empty(cnt[k1], np.int64)
    adj_w = np.ones(cnt[k1])
    pos = cnt[:k1].copy()
    for e in range(e0, e1):
        a, c = eu[e], ev[e]
        we = w[e] if weighted else 1.0
        adj[pos[a]] = c
        adj_w[pos[a]] = we
        pos[a] += 1
        adj[pos[c]] = a
        adj_w[pos[c]] = we
        pos[c] += 1
    return k1, cnt, adj, adj_w


@njit(cache=True)
def flat_metrics(n, bstar, mem_off, mem, e_off, eu, ev, w, weighted, want_diameter):
    """Height from vertex 0 and (optionally) diameter of a block-tree graph.

    Blocks are listed so that every block's star is vertex 0 or a member of
    an earlier block.  Local vertex 0 of a block is its star and local
    vertex ``i >= 1`` is ``mem[mem_off[b] + i - 1]``.
    """
    nb = bstar.shape[0]
    depth = np.zeros(n)
    down = np.zeros(n)
    height = 0.0
    diam = 0.0
    kmax = 1
    for b in range(nb):
        k = mem_off[b + 1] - mem_off[b]
        if k > kmax:
            kmax = k
    dist = np.empty(kmax + 1)
    queue = np.empty(kmax + 1, np.int64)
    for b in range(nb):
        s = bstar[b]
        m0 = mem_off[b]
        k = mem_off[b + 1] - m0
        if k == 1 and e_off[b + 1] - e_off[b] == 1:
            d = w[e_off[b]] if weighted else 1.0
            v = mem[m0]
            depth[v] = depth[s] + d
        else:
            k1, ao, adj, aw = _block_adjacency(b, mem_off, e_off, eu, ev, w, weighted)
            _block_sssp(0, k1, ao, adj, aw, weighted, dist, queue)
            for i in range(1, k1):
                depth[mem[m0 + i - 1]] = depth[s] + dist[i]
    for v in range(n):
        if depth[v] > height:
            height = depth[v]
    if not want_diameter:
        return height, 0.0
    for b in range(nb - 1, -1, -1):
        s = bstar[b]
        m0 = mem_off[b]
        k = mem_off[b + 1] - m0
        if k == 1 and e_off[b + 1] - e_off[b] == 1:
            d = w[e_off[b]] if weighted else 1.0
            top = d + down[mem[m0]]
        else:
            k1, ao, adj, aw = _block_adjacency(b, mem_off, e_off, eu, ev, w, weighted)
            top = 0.0
            for src in range(k1):
                _block_sssp(src, k1, ao, adj, aw, weighted, dist, queue)
                if src == 0:
                    for j in range(1, k1):
                        c = dist[j] + down[mem[m0 + j - 1]]
                        if c > top:
                            top = c
                else:
                    hs = down[mem[m0 + src - 1]]
                    for j in range(src + 1, k1):
                        c = hs + dist[j] + down[mem[m0 + j - 1]]
                        if c > diam:
                            diam = c
        if down[s] + top > diam:
            diam = down[s] + top
        if top > down[s]:
            down[s] = top
    return height, diam


@njit(cache=True)
def gw_attempts(pois, sizes, target):
    """Run Boltzmann size attempts on pre-drawn streams until one hits ``target``.

    Each vertex consumes one Poisson count; each block one size.  Returns
    ``(status, ip0, is0, ip1, is1)``: status 1 means the attempt starting at
    ``(ip0, is0)`` and ending at ``(ip1, is1)`` reached exactly ``target``
    vertices; status 0 means a stream ran out while the attempt starting at
    ``(ip0, is0)`` was in progress.
    """
    ip = 0
    js = 0
    npois = pois.shape[0]
    nsize = sizes.shape[0]
    while True:
        ip0 = ip
        is0 = js
        total = 1
        done = 0
        over = False
        while done < total:
            if ip >= npois:
                return 0, ip0, is0, ip, js
            m = pois[ip]
            ip += 1
            done += 1
            for _ in range(m):
                if js >= nsize:
                    return 0, ip0, is0, ip, js
                total += sizes[js]
                js += 1
            if total > target:
                over = True
                break
        if not over and total == target:
            return 1, ip0, is0, ip, js


@njit(cache=True)
def forest_sizes_hit(xi, roots, cap):
    """Sizes of GW forests drawn from the ``xi`` stream, one forest per entry of ``roots``.

    Sizes above ``cap`` are reported as ``cap + 1``.  Returns the sizes and the
    number of stream entries consumed, or -1 if the stream ran out.
    """
    out = np.empty(roots.shape[0], np.int64)
    pos = 0
    nx_ = xi.shape[0]
    for r in range(roots.shape[0]):
        pending = roots[r]
        size = 0
        while pending > 0:
            if size > cap:
                break
            if pos >= nx_:
                return out, -1
            pending += xi[pos] - 1
            pos += 1
            size += 1
        out[r] = size if size <= cap else cap + 1
    return out, pos


@njit(cache=True)
def compound_sizes(pois, sizes, runs, cap):
    """Sizes of Boltzmann objects built from Poisson block counts and block sizes.

    Sizes above ``cap`` are reported as ``cap + 1``.  Returns the sizes and
    the stream positions consumed, or ``-1`` positions if a stream ran out.
    """
    out = np.empty(runs, np.int64)
    ip = 0
    js = 0
    for r in range(runs):
        total = 1
        done = 0
        while done < total and total <= cap:
            if ip >= pois.shape[0]:
                return out, -1, -1
            m = pois[ip]
            ip += 1
            done += 1
            for _ in range(m):
                if js >= sizes.shape[0]:
                    return out, -1, -1
                total += sizes[js]
                js += 1
        out[r] = total if total <= cap else cap + 1
    return out, ip, js


@njit(cache=True)
def bra_block(face_cdf, fac_cdf, u, pos, eu, ev, kind, tail, head):
    """One rooted outerplanar block from the uniform stream ``u`` starting at ``pos``.

    Returns ``(status, pos, edges, vertices, root)``; status 0 means the
    stream ran out and -1 that the scratch arrays are too small.  Local
    label 0 is the star and 1 the head of the first edge.
    """
    cap = eu.shape[0]
    nu = u.shape[0]
    ne = 0
    nxt = 2
    root = -1
    top = 1
    kind[0] = 1
    tail[0] = 0
    head[0] = 1
    while top > 0:
        top -= 1
        k, t, h = kind[top], tail[top], head[top]
        if ne >= cap:
            return -1, pos, ne, nxt, root
        eu[ne] = t
        ev[ne] = h
        ne += 1
        if pos >= nu:
            return 0, pos, ne, nxt, root
        r = u[pos]
        pos += 1
        if k == 1:
            s = np.searchsorted(face_cdf, r, side="right") + 2
            if s == 2:
                root = h
                continue
            if pos >= nu:
                return 0, pos, ne, nxt, root
            at = int(u[pos] * (s - 1))
            pos += 1
            if top + s - 1 > cap:
                return -1, pos, ne, nxt, root
            prev = t
            for i in range(s - 1):
                cur = h if i == s - 2 else nxt + i
                kind[top] = 1 if i == at else 0
                tail[top] = prev
                head[top] = cur
                top += 1
                prev = cur
            nxt += s - 2
        else:
            m = np.searchsorted(fac_cdf, r, side="right") + 1
            if m == 1:
                continue
            if top + m > cap:
                return -1, pos, ne, nxt, root
            prev = t
            for i in range(m):
                cur = h if i == m - 1 else nxt + i
                kind[top] = 0
                tail[top] = prev
                head[top] = cur
                top += 1
                prev = cur
            nxt += m - 1
    return 1, pos, ne, nxt, root
