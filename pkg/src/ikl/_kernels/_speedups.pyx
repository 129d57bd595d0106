# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: transition walks, reachability, pair-graph equivalence
search, and product reachability. Mirrors the pure-Python paths next to each
call site; differential tests keep the two in lockstep."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def walk(int[:, ::1] delta, Py_ssize_t q, word):
    """Iterated transition function: run ``word`` (tuple of symbol indices)
    from q. Returns -1 on an out-of-range symbol index."""
    cdef Py_ssize_t a
    cdef Py_ssize_t nsym = delta.shape[1]
    for sym in word:
        a = sym
        if a < 0 or a >= nsym:
            return -1
        q = delta[q, a]
    return q


def reach_order(int[:, ::1] delta, Py_ssize_t q0):
    """States reachable from q0 in breadth-first discovery order (symbol order)."""
    cdef Py_ssize_t n = delta.shape[0]
    cdef Py_ssize_t nsym = delta.shape[1]
    cdef cnp.ndarray[cnp.int32_t, ndim = 1] order_arr = np.empty(n, dtype=np.int32)
    cdef int[::1] order = order_arr
    cdef cnp.ndarray[cnp.uint8_t, ndim = 1] seen_arr = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] seen = seen_arr
    cdef Py_ssize_t head = 0, tail = 0, q, a, t

    seen[q0] = 1
    order[tail] = <int> q0
    tail += 1
    while head < tail:
        q = order[head]
        head += 1
        for a in range(nsym):
            t = delta[q, a]
            if not seen[t]:
                seen[t] = 1
                order[tail] = <int> t
                tail += 1
    return order_arr[:tail].copy()


def pair_witness(int[:, ::1] da, long long[::1] pa, Py_ssize_t qa,
                 int[:, ::1] db, long long[::1] pb, Py_ssize_t qb):
    """Shortest lexicographically-least word on which the two structures'
    packed outputs differ, or None if they agree everywhere."""
    cdef Py_ssize_t nb = db.shape[0]
    cdef Py_ssize_t total = da.shape[0] * nb
    cdef Py_ssize_t nsym = da.shape[1]
    cdef cnp.ndarray[cnp.int64_t, ndim = 1] parent_arr = np.full(total, -1, dtype=np.int64)
    cdef long long[::1] parent = parent_arr
    cdef cnp.ndarray[cnp.int8_t, ndim = 1] psym_arr = np.zeros(total, dtype=np.int8)
    cdef signed char[::1] psym = psym_arr
    cdef cnp.ndarray[cnp.uint8_t, ndim = 1] seen_arr = np.zeros(total, dtype=np.uint8)
    cdef unsigned char[::1] seen = seen_arr
    cdef cnp.ndarray[cnp.int64_t, ndim = 1] queue_arr = np.empty(total, dtype=np.int64)
    cdef long long[::1] queue = queue_arr
    cdef Py_ssize_t head = 0, tail = 0
    cdef long long code, nxt
    cdef Py_ssize_t sa, sb, ta, tb, a, depth

    if pa[qa] != pb[qb]:
        return np.empty(0, dtype=np.int32)
    code = qa * nb + qb
    seen[code] = 1
    queue[tail] = code
    tail += 1
    while head < tail:
        code = queue[head]
        head += 1
        sa = code // nb
        sb = code % nb
        for a in range(nsym):
            ta = da[sa, a]
            tb = db[sb, a]
            nxt = ta * nb + tb
            if not seen[nxt]:
                seen[nxt] = 1
                parent[nxt] = code
                psym[nxt] = <signed char> a
                if pa[ta] != pb[tb]:
                    depth = 0
                    code = nxt
                    while parent[code] >= 0:
                        depth += 1
                        code = parent[code]
                    out_arr = np.empty(depth, dtype=np.int32)
                    code = nxt
                    while parent[code] >= 0:
                        depth -= 1
                        out_arr[depth] = psym[code]
                        code = parent[code]
                    return out_arr
                queue[tail] = nxt
                tail += 1
    return None


def product_reach(int[::1] cat_delta, long long[::1] offsets, long long[::1] cat_bits,
                  Py_ssize_t nsym, int[::1] inits):
    """Reachable part of the componentwise product.

    cat_delta holds each factor's delta table flattened row-major, factor i
    starting at offsets[i] * nsym; cat_bits holds each factor's 0/1 outputs at
    offsets[i]. Returns (delta table (m, nsym), packed outputs (m,),
    component-state table (m, k)) with ids in breadth-first discovery order.
    """
    cdef Py_ssize_t k = inits.shape[0]
    cdef Py_ssize_t cap = 1024
    cdef cnp.ndarray[cnp.int32_t, ndim = 2] tup_arr = np.empty((cap, k), dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim = 2] del_arr = np.empty((cap, nsym), dtype=np.int32)
    cdef cnp.ndarray[cnp.int64_t, ndim = 1] lam_arr = np.empty(cap, dtype=np.int64)
    cdef int[:, ::1] tup = tup_arr
    cdef int[:, ::1] dele = del_arr
    cdef long long[::1] lam = lam_arr
    cdef dict id_of = {}
    cdef Py_ssize_t head = 0, count = 0
    cdef Py_ssize_t i, a, q, dst
    cdef long long key, bitsv
    cdef object got

    key = 0
    for i in range(k - 1, -1, -1):
        key = key * (offsets[i + 1] - offsets[i]) + inits[i]
    id_of[key] = 0
    for i in range(k):
        tup[0, i] = inits[i]
    count = 1
    while head < count:
        bitsv = 0
        for i in range(k):
            q = tup[head, i]
            if cat_bits[offsets[i] + q]:
                bitsv |= (<long long> 1) << i
        lam[head] = bitsv
        for a in range(nsym):
            key = 0
            for i in range(k - 1, -1, -1):
                q = tup[head, i]
                q = cat_delta[(offsets[i] + q) * nsym + a]
                key = key * (offsets[i + 1] - offsets[i]) + q
            got = id_of.get(key)
            if got is None:
                dst = count
                id_of[key] = dst
                if count == cap:
                    cap *= 2
                    tup_arr = _grow2(tup_arr, cap)
                    del_arr = _grow2(del_arr, cap)
                    lam_arr = _grow1(lam_arr, cap)
                    tup = tup_arr
                    dele = del_arr
                    lam = lam_arr
                # decode key back into component states
                for i in range(k):
                    tup[dst, i] = <int> (key % (offsets[i + 1] - offsets[i]))
                    key //= offsets[i + 1] - offsets[i]
                count += 1
            else:
                dst = got
            dele[head, a] = <int> dst
        head += 1
    return del_arr[:count].copy(), lam_arr[:count].copy(), tup_arr[:count].copy()


def _grow2(cnp.ndarray arr, Py_ssize_t cap):
    out = np.empty((cap, arr.shape[1]), dtype=arr.dtype)
    out[: arr.shape[0]] = arr
    return out


def _grow1(cnp.ndarray arr, Py_ssize_t cap):
    out = np.empty(cap, dtype=arr.dtype)
    out[: arr.shape[0]] = arr
    return out
