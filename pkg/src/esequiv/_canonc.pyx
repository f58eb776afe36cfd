# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled canonical labeling kernel.

Byte-identical twin of ``_canon_py.canon_encode`` for structures with at
most 64 events; the dispatcher falls back to the pure version beyond that.
"""

from libc.stdlib cimport malloc, free
from libc.string cimport memcpy

KERNEL_NAME = "compiled"

ctypedef unsigned long long u64

cdef extern from *:
    """
    static inline int popcnt64(unsigned long long x) {
    #if defined(__GNUC__) || defined(__clang__)
        return __builtin_popcountll(x);
    #else
        int c = 0; while (x) { x &= x - 1; c++; } return c;
    #endif
    }
    """
    int popcnt64(u64 x) nogil


cdef struct Ctx:
    int n
    u64 down[64]
    u64 up[64]
    u64 cf[64]
    int lranks[64]
    int enc_len
    unsigned char best[4681]      # 1 + 64 + 512 + 252 max encoding bytes
    int have_best
    int best_perm[64]
    int n_gens
    int gens_cap
    int *gens                     # n_gens rows of n vertex images


cdef void _refine(Ctx *ctx, int *colors) noexcept:
    cdef int n = ctx.n
    cdef u64 cell[64]
    # signature rows: (old colour, then 3 counts per cell); lexicographic order
    cdef int sig[64][193]
    cdef int order[64]
    cdef int width, k, v, c, i, j, tmp, newk
    cdef u64 dv, uv, cv
    while True:
        k = 0
        for v in range(n):
            if colors[v] + 1 > k:
                k = colors[v] + 1
        if k == n:
            return
        for c in range(k):
            cell[c] = 0
        for v in range(n):
            cell[colors[v]] |= (<u64>1) << v
        width = 1 + 3 * k
        for v in range(n):
            sig[v][0] = colors[v]
            dv = ctx.down[v]
            uv = ctx.up[v]
            cv = ctx.cf[v]
            for c in range(k):
                sig[v][1 + 3 * c] = popcnt64(dv & cell[c])
                sig[v][2 + 3 * c] = popcnt64(uv & cell[c])
                sig[v][3 + 3 * c] = popcnt64(cv & cell[c])
        # insertion sort of vertex indices by signature row
        for v in range(n):
            order[v] = v
        for i in range(1, n):
            j = i
            while j > 0 and _sig_less(sig[order[j]], sig[order[j - 1]], width):
                tmp = order[j]
                order[j] = order[j - 1]
                order[j - 1] = tmp
                j -= 1
        newk = 0
        for i in range(n):
            if i > 0 and _sig_less(sig[order[i - 1]], sig[order[i]], width):
                newk += 1
            colors[order[i]] = newk
        newk += 1
        if newk == k:
            return


cdef inline bint _sig_less(int *a, int *b, int width) noexcept:
    cdef int i
    for i in range(width):
        if a[i] != b[i]:
            return a[i] < b[i]
    return False


cdef void _encode(Ctx *ctx, int *colors, unsigned char *out) noexcept:
    cdef int n = ctx.n
    cdef int perm[64]
    cdef int v, i, j, nb, pos
    cdef unsigned char acc
    for v in range(n):
        perm[colors[v]] = v
    out[0] = <unsigned char>n
    pos = 1
    for i in range(n):
        out[pos] = <unsigned char>ctx.lranks[perm[i]]
        pos += 1
    acc = 0
    nb = 0
    for i in range(n):
        for j in range(n):
            acc = (acc << 1) | <unsigned char>((ctx.down[perm[j]] >> perm[i]) & 1)
            nb += 1
            if nb == 8:
                out[pos] = acc
                pos += 1
                acc = 0
                nb = 0
    if nb:
        out[pos] = acc << (8 - nb)
        pos += 1
        acc = 0
        nb = 0
    for i in range(n):
        for j in range(i + 1, n):
            acc = (acc << 1) | <unsigned char>((ctx.cf[perm[i]] >> perm[j]) & 1)
            nb += 1
            if nb == 8:
                out[pos] = acc
                pos += 1
                acc = 0
                nb = 0
    if nb:
        out[pos] = acc << (8 - nb)
        pos += 1
    ctx.enc_len = pos


cdef void _leaf(Ctx *ctx, int *colors) except *:
    cdef int n = ctx.n
    cdef unsigned char enc[4681]
    cdef int perm[64]
    cdef int v, i, cmp
    cdef int *row
    for v in range(n):
        perm[colors[v]] = v
    _encode(ctx, colors, enc)
    if not ctx.have_best:
        memcpy(ctx.best, enc, ctx.enc_len)
        memcpy(ctx.best_perm, perm, n * sizeof(int))
        ctx.have_best = 1
        return
    cmp = 0
    for i in range(ctx.enc_len):
        if enc[i] != ctx.best[i]:
            cmp = -1 if enc[i] < ctx.best[i] else 1
            break
    if cmp < 0:
        memcpy(ctx.best, enc, ctx.enc_len)
        memcpy(ctx.best_perm, perm, n * sizeof(int))
    elif cmp == 0:
        # tie: record the automorphism best_perm[i] -> perm[i]
        if ctx.n_gens == ctx.gens_cap:
            ctx.gens_cap = ctx.gens_cap * 2 if ctx.gens_cap else 16
            ctx.gens = <int *>realloc_ints(ctx.gens, ctx.gens_cap * 64)
        row = ctx.gens + ctx.n_gens * 64
        cmp = 1  # reuse as "is identity" flag
        for i in range(n):
            row[ctx.best_perm[i]] = perm[i]
        for i in range(n):
            if row[i] != i:
                cmp = 0
                break
        if cmp == 0:
            ctx.n_gens += 1


cdef int *realloc_ints(int *old, int count) except NULL:
    cdef int *out = <int *>malloc(count * sizeof(int))
    if out == NULL:
        raise MemoryError()
    if old != NULL:
        memcpy(out, old, (count // 2) * sizeof(int))
        free(old)
    return out


cdef int _find(int *parent, int x) noexcept:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


cdef void _rec(Ctx *ctx, int *colors, int *path, int depth) except *:
    cdef int n = ctx.n
    cdef int k = 0
    cdef int v, c, target, i, a, b, fv
    cdef int child[64]
    cdef int explored[64]
    cdef int n_explored = 0
    cdef int gens_seen = -1
    cdef int parent[64]
    cdef int *g
    cdef bint fixes, skip
    for v in range(n):
        if colors[v] + 1 > k:
            k = colors[v] + 1
    if k == n:
        _leaf(ctx, colors)
        return
    target = -1
    for c in range(k):
        a = 0
        for v in range(n):
            if colors[v] == c:
                a += 1
        if a >= 2:
            target = c
            break
    for v in range(n):
        if colors[v] != target:
            continue
        if n_explored:
            if ctx.n_gens != gens_seen:
                for i in range(n):
                    parent[i] = i
                for i in range(ctx.n_gens):
                    g = ctx.gens + i * 64
                    fixes = True
                    for a in range(depth):
                        if g[path[a]] != path[a]:
                            fixes = False
                            break
                    if fixes:
                        for a in range(n):
                            b = _find(parent, a)
                            fv = _find(parent, g[a])
                            if b != fv:
                                if b < fv:
                                    parent[fv] = b
                                else:
                                    parent[b] = fv
                gens_seen = ctx.n_gens
            fv = _find(parent, v)
            skip = False
            for i in range(n_explored):
                if _find(parent, explored[i]) == fv:
                    skip = True
                    break
            if skip:
                continue
        # individualize v within its cell, then refine
        c = colors[v]
        for i in range(n):
            if colors[i] > c or (colors[i] == c and i != v):
                child[i] = colors[i] + 1
            else:
                child[i] = colors[i]
        _refine(ctx, child)
        path[depth] = v
        _rec(ctx, child, path, depth + 1)
        explored[n_explored] = v
        n_explored += 1


def canon_encode(n, lranks, down, cf):
    """Return (canonical encoding bytes, permutation position -> vertex)."""
    if n == 0:
        return b"\x00", []
    if n > 64:
        raise ValueError("compiled kernel supports at most 64 events")
    cdef Ctx ctx
    cdef int v, u
    cdef u64 m
    cdef int colors[64]
    cdef int path[64]
    ctx.n = n
    ctx.have_best = 0
    ctx.n_gens = 0
    ctx.gens_cap = 0
    ctx.gens = NULL
    for v in range(n):
        ctx.down[v] = <u64>down[v]
        ctx.cf[v] = <u64>cf[v]
        ctx.lranks[v] = lranks[v]
        ctx.up[v] = 0
    for v in range(n):
        m = ctx.down[v]
        for u in range(n):
            if (m >> u) & 1:
                ctx.up[u] |= (<u64>1) << v
    ranks = {r: i for i, r in enumerate(sorted(set(lranks)))}
    for v in range(n):
        colors[v] = ranks[lranks[v]]
    try:
        _refine(&ctx, colors)
        _rec(&ctx, colors, path, 0)
        enc = bytes(ctx.best[: ctx.enc_len])
        perm = [ctx.best_perm[i] for i in range(n)]
    finally:
        if ctx.gens != NULL:
            free(ctx.gens)
    return enc, perm
