# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the hot loops.

Same contract as the pure-Python module ``bicext._pyops``; one of the two
is selected at import time by :mod:`bicext.kernels`.  Elements of a ball
are passed as three parallel coordinate sequences ``ii, jj, aa`` in
lexicographic ``(i, j, a)`` order, so the flat index of an in-ball triple
is ``(i * (N + 1) + j) * ncut + (a - lo)``.
"""

from array import array as _pyarray

BACKEND = "compiled"


cdef inline void _mul6_c(int i1, int j1, int a1, int i2, int j2, int a2,
                         int* ri, int* rj, int* ra) noexcept nogil:
    cdef int c
    if j1 < i2:
        ri[0] = i1 - j1 + i2
        rj[0] = j2
        c = j1 - i2 + a1
        ra[0] = c if c > a2 else a2
    elif j1 == i2:
        ri[0] = i1
        rj[0] = j2
        ra[0] = a1 if a1 > a2 else a2
    else:
        ri[0] = i1
        rj[0] = j1 - i2 + j2
        c = i2 - j1 + a2
        ra[0] = a1 if a1 > c else c


def mul6(int i1, int j1, int a1, int i2, int j2, int a2):
    """Raw product of two triples; returns the result triple."""
    cdef int ri, rj, ra
    _mul6_c(i1, j1, a1, i2, j2, a2, &ri, &rj, &ra)
    return (ri, rj, ra)


def product_table(ii, jj, aa, int N, int lo, int ncut):
    """Flat ``n*n`` table of product indexes; ``-1`` marks an escape.

    Entry ``x*n + y`` is the ball index of ``element[x] * element[y]`` or
    ``-1`` when the product's pair part leaves the ``N``-ball.  The cutoff
    of a product of ball members never leaves the enumerated cutoff window,
    so only the pair part can escape.
    """
    cdef int[:] vi = ii
    cdef int[:] vj = jj
    cdef int[:] va = aa
    cdef int n = vi.shape[0]
    out_py = _pyarray("i", bytes(4 * n * n)) if n else _pyarray("i")
    cdef int[:] out = out_py
    cdef int width = N + 1
    cdef int x, y, pos, i1, j1, a1, ri, rj, ra
    pos = 0
    with nogil:
        for x in range(n):
            i1 = vi[x]; j1 = vj[x]; a1 = va[x]
            for y in range(n):
                _mul6_c(i1, j1, a1, vi[y], vj[y], va[y], &ri, &rj, &ra)
                if ri <= N and rj <= N:
                    out[pos] = (ri * width + rj) * ncut + (ra - lo)
                else:
                    out[pos] = -1
                pos += 1
    return out_py


def assoc_violation(ii, jj, aa):
    """First triple index ``(x, y, z)`` with ``(xy)z != x(yz)``, else None.

    Products are evaluated in the full semigroup (no truncation), so a None
    result is a genuine exhaustive associativity check for the ball.
    """
    cdef int[:] vi = ii
    cdef int[:] vj = jj
    cdef int[:] va = aa
    cdef int n = vi.shape[0]
    cdef int x, y, z
    cdef int li, lj, la, ri, rj, ra, mi, mj, ma, si, sj, sa
    cdef int bad_x = -1, bad_y = -1, bad_z = -1
    with nogil:
        for x in range(n):
            for y in range(n):
                _mul6_c(vi[x], vj[x], va[x], vi[y], vj[y], va[y],
                        &li, &lj, &la)
                for z in range(n):
                    _mul6_c(li, lj, la, vi[z], vj[z], va[z], &ri, &rj, &ra)
                    _mul6_c(vi[y], vj[y], va[y], vi[z], vj[z], va[z],
                            &mi, &mj, &ma)
                    _mul6_c(vi[x], vj[x], va[x], mi, mj, ma, &si, &sj, &sa)
                    if ri != si or rj != sj or ra != sa:
                        bad_x = x; bad_y = y; bad_z = z
                        break
                if bad_x >= 0:
                    break
            if bad_x >= 0:
                break
    if bad_x >= 0:
        return (bad_x, bad_y, bad_z)
    return None


def retraction_scan(ii, jj, aa, int k):
    """Homomorphism sweep for the cutoff-raising map ``a -> max(a, k)``.

    Returns ``(violation, counts)`` where ``violation`` is the first pair
    ``(x, y)`` with ``map(x*y) != map(x)*map(y)`` (or None) and ``counts``
    is a 4-tuple tallying the pairs by ``(a1 <= k, a2 <= k)`` — the four
    argument-case combinations the map distinguishes, in the order
    (low,low), (low,high), (high,low), (high,high).
    """
    cdef int[:] vi = ii
    cdef int[:] vj = jj
    cdef int[:] va = aa
    cdef int n = vi.shape[0]
    cdef long long c0 = 0, c1 = 0, c2 = 0, c3 = 0
    cdef int bad_x = -1, bad_y = -1
    cdef int x, y, i1, j1, a1, b1, a2, b2
    cdef int ri, rj, ra, si, sj, sa, rb
    cdef bint lowx
    with nogil:
        for x in range(n):
            i1 = vi[x]; j1 = vj[x]; a1 = va[x]
            b1 = a1 if a1 > k else k
            lowx = a1 <= k
            for y in range(n):
                a2 = va[y]
                if lowx:
                    if a2 <= k:
                        c0 += 1
                    else:
                        c1 += 1
                else:
                    if a2 <= k:
                        c2 += 1
                    else:
                        c3 += 1
                _mul6_c(i1, j1, a1, vi[y], vj[y], a2, &ri, &rj, &ra)
                b2 = a2 if a2 > k else k
                _mul6_c(i1, j1, b1, vi[y], vj[y], b2, &si, &sj, &sa)
                if bad_x < 0:
                    rb = ra if ra > k else k
                    if ri != si or rj != sj or rb != sa:
                        bad_x = x; bad_y = y
    violation = (bad_x, bad_y) if bad_x >= 0 else None
    return violation, (c0, c1, c2, c3)


def closure_fixpoint(table, int n, pairs):
    """Smallest translation-closed partition refining nothing but ``pairs``.

    ``table`` is the flat product-index table for the ball universe and
    ``pairs`` a flat sequence ``x0, y0, x1, y1, ...`` of generator index
    pairs.  Union-find with path halving plus a dirty-class worklist:
    whenever two classes merge, the surviving class is rescanned — for every
    ball element ``s``, the in-ball left products ``s*m`` and right products
    ``m*s`` over members ``m`` of the class are chained into one class.
    Returns the parent array (fully path-compressed).
    """
    cdef int[:] tab = table
    parent_py = _pyarray("i", range(n))
    cdef int[:] parent = parent_py
    size_py = _pyarray("i", bytes(4 * n)) if n else _pyarray("i")
    cdef int[:] size = size_py
    nxt_py = _pyarray("i", range(n))
    cdef int[:] nxt = nxt_py
    buf_py = _pyarray("i", bytes(4 * n)) if n else _pyarray("i")
    cdef int[:] buf = buf_py
    on_stack = bytearray(n)
    cdef unsigned char[:] dirty = on_stack
    stack = []

    cdef int x, rx, ry, tmp, r, cnt, c, s, base, prev, p, t, idx

    for x in range(n):
        size[x] = 1

    def _union(int ux, int uy):
        cdef int urx, ury, utmp
        urx = ux
        while parent[urx] != urx:
            parent[urx] = parent[parent[urx]]
            urx = parent[urx]
        ury = uy
        while parent[ury] != ury:
            parent[ury] = parent[parent[ury]]
            ury = parent[ury]
        if urx == ury:
            return
        if size[urx] < size[ury]:
            utmp = urx; urx = ury; ury = utmp
        parent[ury] = urx
        size[urx] += size[ury]
        utmp = nxt[urx]; nxt[urx] = nxt[ury]; nxt[ury] = utmp
        if not dirty[urx]:
            dirty[urx] = 1
            stack.append(urx)

    for idx in range(0, len(pairs), 2):
        _union(pairs[idx], pairs[idx + 1])

    while stack:
        r = stack.pop()
        dirty[r] = 0
        rx = r
        while parent[rx] != rx:
            parent[rx] = parent[parent[rx]]
            rx = parent[rx]
        if rx != r:
            continue          # absorbed meanwhile; survivor was pushed
        cnt = 0
        c = r
        while True:           # snapshot members before any further splice
            buf[cnt] = c
            cnt += 1
            c = nxt[c]
            if c == r:
                break
        if cnt == 1:
            continue
        for s in range(n):
            base = s * n
            prev = -1
            for t in range(cnt):
                p = tab[base + buf[t]]
                if p >= 0:
                    if prev >= 0:
                        _union(prev, p)
                    prev = p
            prev = -1
            for t in range(cnt):
                p = tab[buf[t] * n + s]
                if p >= 0:
                    if prev >= 0:
                        _union(prev, p)
                    prev = p

    for x in range(n):
        rx = x
        while parent[rx] != rx:
            parent[rx] = parent[parent[rx]]
            rx = parent[rx]
        parent[x] = rx
    return parent_py
