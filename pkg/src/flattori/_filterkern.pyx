# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled lane of the certificate-search inner loop.

Same candidate order and same congruence test as ``kernels_py.run_filter``;
arithmetic is int64 (callers pre-check that entries cannot overflow).
"""

from libc.stdlib cimport malloc, free


cdef inline bint _congruence_ok(long long* g, int n) nogil:
    cdef int half = n // 2
    cdef int a, b, i
    cdef long long s, want
    for a in range(n):
        for b in range(a, n):
            s = 0
            for i in range(half):
                s += g[i * n + a] * g[(i + half) * n + b]
                s += g[(i + half) * n + a] * g[i * n + b]
            want = 1 if (b - a == half or a - b == half) else 0
            if s != want:
                return False
    return True


def run_filter(basis_flat, int n, int bound, long long budget, int max_hits=1):
    """int64 twin of kernels_py.run_filter; identical outputs."""
    cdef int k = len(basis_flat)
    cdef int size = n * n
    cdef long long nodes = 0
    hits = []
    if k == 0:
        return hits, 0, True

    cdef long long* mats = <long long*> malloc(k * size * sizeof(long long))
    # partial[t*size + j]: sum of the first t+1 chosen terms
    cdef long long* partial = <long long*> malloc((k + 1) * size * sizeof(long long))
    cdef int* pos = <int*> malloc(k * sizeof(int))
    cdef int* digidx = <int*> malloc(k * sizeof(int))
    cdef long long* digvals = <long long*> malloc(2 * bound * sizeof(long long))
    if mats == NULL or partial == NULL or pos == NULL or digidx == NULL or digvals == NULL:
        raise MemoryError()

    cdef int i, j, t, s, h, ndig, carry, lvl
    cdef long long c
    cdef bint exhausted = True
    cdef bint stopped = False

    try:
        for i in range(k):
            row = basis_flat[i]
            for j in range(size):
                mats[i * size + j] = row[j]

        for h in range(1, bound + 1):
            ndig = 2 * h
            for i in range(h):
                digvals[2 * i] = i + 1
                digvals[2 * i + 1] = -(i + 1)
            for s in range(1, k + 1):
                # first combination 0,1,...,s-1
                for t in range(s):
                    pos[t] = t
                while True:
                    # --- iterate digit tuples for this combination ---
                    for t in range(s):
                        digidx[t] = 0
                    for j in range(size):
                        partial[j] = 0  # level 0: empty sum
                    lvl = 0  # partial[0..lvl] valid; rebuild from lvl
                    while True:
                        # rebuild partial sums from level lvl
                        for t in range(lvl, s):
                            c = digvals[digidx[t]]
                            for j in range(size):
                                partial[(t + 1) * size + j] = partial[t * size + j] + c * mats[pos[t] * size + j]
                        # shell condition: max |digit| == h
                        carry = 0
                        for t in range(s):
                            if digidx[t] >= 2 * (h - 1):
                                carry = 1
                                break
                        if carry:
                            if nodes >= budget:
                                stopped = True
                                break
                            nodes += 1
                            if _congruence_ok(partial + s * size, n):
                                coords = [0] * k
                                for t in range(s):
                                    coords[pos[t]] = int(digvals[digidx[t]])
                                hits.append(tuple(coords))
                                if len(hits) >= max_hits:
                                    stopped = True
                                    break
                        # advance digit odometer (rightmost fastest)
                        t = s - 1
                        while t >= 0:
                            digidx[t] += 1
                            if digidx[t] < ndig:
                                break
                            digidx[t] = 0
                            t -= 1
                        if t < 0:
                            break
                        lvl = t
                    if stopped:
                        break
                    # advance combination (lexicographic)
                    t = s - 1
                    while t >= 0 and pos[t] == k - s + t:
                        t -= 1
                    if t < 0:
                        break
                    pos[t] += 1
                    for j in range(t + 1, s):
                        pos[j] = pos[j - 1] + 1
                if stopped:
                    break
            if stopped:
                break
        if stopped:
            exhausted = False
        return hits, int(nodes), bool(exhausted)
    finally:
        free(mats)
        free(partial)
        free(pos)
        free(digidx)
        free(digvals)
