"""Pure-Python kernels for the hot loops.

Same contract as the compiled module ``bicext._fastops``; one of the two is
selected at import time by :mod:`bicext.kernels`.  Elements of a ball are
passed as three parallel coordinate sequences ``ii, jj, aa`` enumerated in
lexicographic ``(i, j, a)`` order, so the flat index of an in-ball triple is
``(i * (N + 1) + j) * ncut + (a - lo)``.
"""

from array import array

BACKEND = "pure"


def mul6(i1, j1, a1, i2, j2, a2):
    """Raw product of two triples; returns the result triple."""
    if j1 < i2:
        c = j1 - i2 + a1
        return (i1 - j1 + i2, j2, c if c > a2 else a2)
    if j1 == i2:
        return (i1, j2, a1 if a1 > a2 else a2)
    c = i2 - j1 + a2
    return (i1, j1 - i2 + j2, a1 if a1 > c else c)


def product_table(ii, jj, aa, N, lo, ncut):
    """Flat ``n*n`` table of product indexes; ``-1`` marks an escape.

    Entry ``x*n + y`` is the ball index of ``element[x] * element[y]`` or
    ``-1`` when the product's pair part leaves the ``N``-ball.  The cutoff
    of a product of ball members never leaves the enumerated cutoff window,
    so only the pair part can escape.
    """
    n = len(ii)
    width = N + 1
    out = array("i", [0]) * (n * n)
    pos = 0
    for x in range(n):
        i1 = ii[x]; j1 = jj[x]; a1 = aa[x]
        for y in range(n):
            i2 = ii[y]; j2 = jj[y]; a2 = aa[y]
            if j1 < i2:
                ri = i1 - j1 + i2; rj = j2
                c = j1 - i2 + a1
                ra = c if c > a2 else a2
            elif j1 == i2:
                ri = i1; rj = j2
                ra = a1 if a1 > a2 else a2
            else:
                ri = i1; rj = j1 - i2 + j2
                c = i2 - j1 + a2
                ra = a1 if a1 > c else c
            if ri <= N and rj <= N:
                out[pos] = (ri * width + rj) * ncut + (ra - lo)
            else:
                out[pos] = -1
            pos += 1
    return out


def assoc_violation(ii, jj, aa):
    """First triple index ``(x, y, z)`` with ``(xy)z != x(yz)``, else None.

    Products are evaluated in the full semigroup (no truncation), so a None
    result is a genuine exhaustive associativity check for the ball.
    """
    n = len(ii)
    triples = list(zip(ii, jj, aa))
    for x in range(n):
        t1 = triples[x]
        for y in range(n):
            left = mul6(*t1, *triples[y])
            t2 = triples[y]
            for z in range(n):
                lhs = mul6(*left, *triples[z])
                rhs = mul6(*t1, *mul6(*t2, *triples[z]))
                if lhs != rhs:
                    return (x, y, z)
    return None


def retraction_scan(ii, jj, aa, k):
    """Homomorphism sweep for the cutoff-raising map ``a -> max(a, k)``.

    Returns ``(violation, counts)`` where ``violation`` is the first pair
    ``(x, y)`` with ``map(x*y) != map(x)*map(y)`` (or None) and ``counts``
    is a 4-tuple tallying the pairs by ``(a1 <= k, a2 <= k)`` — the four
    argument-case combinations the map distinguishes, in the order
    (low,low), (low,high), (high,low), (high,high).
    """
    n = len(ii)
    triples = list(zip(ii, jj, aa))
    counts = [0, 0, 0, 0]
    violation = None
    for x in range(n):
        i1, j1, a1 = triples[x]
        b1 = a1 if a1 > k else k
        lowx = a1 <= k
        for y in range(n):
            i2, j2, a2 = triples[y]
            counts[(0 if lowx else 2) + (0 if a2 <= k else 1)] += 1
            ri, rj, ra = mul6(i1, j1, a1, i2, j2, a2)
            si, sj, sa = mul6(i1, j1, b1, i2, j2, a2 if a2 > k else k)
            if violation is None:
                if (ri, rj, ra if ra > k else k) != (si, sj, sa):
                    violation = (x, y)
    return violation, tuple(counts)


def closure_fixpoint(table, n, pairs):
    """Smallest translation-closed partition refining nothing but ``pairs``.

    ``table`` is the flat product-index table for the ball universe and
    ``pairs`` a flat sequence ``x0, y0, x1, y1, ...`` of generator index
    pairs.  Union-find with path halving plus a dirty-class worklist:
    whenever two classes merge, the surviving class is rescanned — for every
    ball element ``s``, the in-ball left products ``s*m`` and right products
    ``m*s`` over members ``m`` of the class are chained into one class.
    Returns the parent array (fully path-compressed).
    """
    parent = array("i", range(n))
    size = array("i", [1]) * n
    nxt = array("i", range(n))        # circular member lists
    on_stack = bytearray(n)
    stack = []

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx = find(x)
        ry = find(y)
        if rx == ry:
            return
        if size[rx] < size[ry]:
            rx, ry = ry, rx
        parent[ry] = rx
        size[rx] += size[ry]
        nxt[rx], nxt[ry] = nxt[ry], nxt[rx]   # splice member cycles
        if not on_stack[rx]:
            on_stack[rx] = 1
            stack.append(rx)

    for p in range(0, len(pairs), 2):
        union(pairs[p], pairs[p + 1])

    buf = array("i", [0]) * n
    while stack:
        r = stack.pop()
        on_stack[r] = 0
        if find(r) != r:
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
                p = table[base + buf[t]]
                if p >= 0:
                    if prev >= 0:
                        union(prev, p)
                    prev = p
            prev = -1
            for t in range(cnt):
                p = table[buf[t] * n + s]
                if p >= 0:
                    if prev >= 0:
                        union(prev, p)
                    prev = p

    for x in range(n):
        parent[x] = find(x)
    return parent
