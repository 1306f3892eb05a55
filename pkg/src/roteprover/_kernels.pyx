# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: subset construction, partition refinement and the
pruned word-tree search."""

import numpy as np

cimport numpy as cnp
from libc.stdint cimport int32_t, int64_t, uint8_t, uint64_t
from libc.stdlib cimport free, malloc, realloc
from libc.string cimport memset

cnp.import_array()


cdef inline uint64_t _mix(uint64_t x) noexcept nogil:
    # splitmix64 finalizer
    x += 0x9E3779B97F4A7C15ULL
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL
    return x ^ (x >> 31)


# -- subset construction ------------------------------------------------------------
# Subsets are stored unsorted; the hash is a sum over members so it does not
# depend on order, and equality is tested against the stamp marks of the
# candidate, so successor sets never need sorting.

cdef struct SubsetStore:
    int32_t* members
    int64_t* offsets
    uint64_t* hashes
    int64_t n_sets
    int64_t cap_sets
    int64_t n_members
    int64_t cap_members
    int64_t* slots
    int64_t n_slots


cdef int _store_init(SubsetStore* st) noexcept nogil:
    st.cap_sets = 1024
    st.cap_members = 16384
    st.n_sets = 0
    st.n_members = 0
    st.members = <int32_t*>malloc(st.cap_members * sizeof(int32_t))
    st.offsets = <int64_t*>malloc((st.cap_sets + 1) * sizeof(int64_t))
    st.hashes = <uint64_t*>malloc(st.cap_sets * sizeof(uint64_t))
    st.n_slots = 4096
    st.slots = <int64_t*>malloc(st.n_slots * sizeof(int64_t))
    if st.members == NULL or st.offsets == NULL or st.slots == NULL or st.hashes == NULL:
        return -1
    memset(st.slots, 0xff, st.n_slots * sizeof(int64_t))
    st.offsets[0] = 0
    return 0


cdef void _store_free(SubsetStore* st) noexcept nogil:
    free(st.members)
    free(st.offsets)
    free(st.hashes)
    free(st.slots)


cdef int _rehash(SubsetStore* st) noexcept nogil:
    cdef int64_t new_n = st.n_slots * 2
    cdef int64_t* slots = <int64_t*>malloc(new_n * sizeof(int64_t))
    cdef int64_t i, pos
    if slots == NULL:
        return -1
    memset(slots, 0xff, new_n * sizeof(int64_t))
    for i in range(st.n_sets):
        pos = <int64_t>(st.hashes[i] & <uint64_t>(new_n - 1))
        while slots[pos] >= 0:
            pos = (pos + 1) & (new_n - 1)
        slots[pos] = i
    free(st.slots)
    st.slots = slots
    st.n_slots = new_n
    return 0


cdef int64_t _intern(SubsetStore* st, const int32_t* buf, Py_ssize_t k, uint64_t h,
                     const int32_t* mark, int32_t stamp) noexcept nogil:
    """Index of the subset ``buf[0:k]`` (whose members carry ``stamp`` in
    ``mark``), adding it if new; -2 on allocation failure."""
    cdef int64_t pos = <int64_t>(h & <uint64_t>(st.n_slots - 1))
    cdef int64_t idx, start, stop, q
    cdef bint same
    while True:
        idx = st.slots[pos]
        if idx < 0:
            break
        if st.hashes[idx] == h:
            start = st.offsets[idx]
            stop = st.offsets[idx + 1]
            if stop - start == k:
                same = True
                for q in range(start, stop):
                    if mark[st.members[q]] != stamp:
                        same = False
                        break
                if same:
                    return idx
        pos = (pos + 1) & (st.n_slots - 1)
    if st.n_sets + 1 > st.cap_sets:
        st.cap_sets *= 2
        st.offsets = <int64_t*>realloc(st.offsets, (st.cap_sets + 1) * sizeof(int64_t))
        st.hashes = <uint64_t*>realloc(st.hashes, st.cap_sets * sizeof(uint64_t))
        if st.offsets == NULL or st.hashes == NULL:
            return -2
    while st.n_members + k > st.cap_members:
        st.cap_members *= 2
        st.members = <int32_t*>realloc(st.members, st.cap_members * sizeof(int32_t))
        if st.members == NULL:
            return -2
    idx = st.n_sets
    for q in range(k):
        st.members[st.n_members + q] = buf[q]
    st.n_members += k
    st.hashes[idx] = h
    st.n_sets += 1
    st.offsets[st.n_sets] = st.n_members
    st.slots[pos] = idx
    if st.n_sets * 2 > st.n_slots:
        if _rehash(st) < 0:
            return -2
    return idx


def subset_construction(indptr, indices, Py_ssize_t nred, start, accepting,
                        Py_ssize_t max_states=50_000_000):
    """Determinize a nondeterministic automaton given in CSR form.

    The successors of state s on symbol r are
    ``indices[indptr[s * nred + r]:indptr[s * nred + r + 1]]``.  Returns
    ``(table, labels)``: table[S, r] is the subset reached from S on r (-1
    when empty) and labels[S] is 1 when S meets ``accepting``.  Subset 0 is
    ``start``.
    """
    cdef const int64_t[::1] ptr = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const int32_t[::1] nxt = np.ascontiguousarray(indices, dtype=np.int32)
    cdef const uint8_t[::1] acc = np.ascontiguousarray(accepting, dtype=np.uint8)
    cdef int32_t[::1] first = np.unique(np.asarray(start, dtype=np.int32))
    cdef Py_ssize_t n = acc.shape[0]
    cdef SubsetStore st
    cdef int32_t* mark = NULL
    cdef int32_t* buf = NULL
    cdef int32_t* rows = NULL
    cdef int64_t cap_rows = 0, head = 0, idx, a, b, m, q, q0, q1
    cdef int32_t stamp = 1, t, s
    cdef uint64_t h
    cdef Py_ssize_t r, k, i
    cdef int failed = 0
    if ptr.shape[0] != n * nred + 1:
        raise ValueError("indptr must have states * symbols + 1 entries")
    mark = <int32_t*>malloc((n + 1) * sizeof(int32_t))
    buf = <int32_t*>malloc((n + 1) * sizeof(int32_t))
    if mark == NULL or buf == NULL or _store_init(&st) < 0:
        free(mark)
        free(buf)
        raise MemoryError()
    memset(mark, 0, (n + 1) * sizeof(int32_t))
    h = 0
    for i in range(first.shape[0]):
        buf[i] = first[i]
        mark[first[i]] = stamp
        h += _mix(<uint64_t>first[i])
    _intern(&st, buf, first.shape[0], h, mark, stamp)
    with nogil:
        while head < st.n_sets:
            if st.n_sets > max_states:
                failed = 1
                break
            if (head + 1) * nred > cap_rows:
                cap_rows = (head + 1) * nred * 2
                rows = <int32_t*>realloc(rows, cap_rows * sizeof(int32_t))
                if rows == NULL:
                    failed = 2
                    break
            a = st.offsets[head]
            b = st.offsets[head + 1]
            for r in range(nred):
                stamp += 1
                k = 0
                h = 0
                for m in range(a, b):
                    s = st.members[m]
                    q0 = ptr[s * nred + r]
                    q1 = ptr[s * nred + r + 1]
                    for q in range(q0, q1):
                        t = nxt[q]
                        if mark[t] != stamp:
                            mark[t] = stamp
                            buf[k] = t
                            k += 1
                            h += _mix(<uint64_t>t)
                if k == 0:
                    rows[head * nred + r] = -1
                    continue
                idx = _intern(&st, buf, k, h, mark, stamp)
                if idx < 0:
                    failed = 2
                    break
                rows[head * nred + r] = <int32_t>idx
            if failed:
                break
            head += 1
    try:
        if failed == 1:
            raise MemoryError(f"subset construction exceeded {max_states} states")
        if failed == 2:
            raise MemoryError("out of memory in subset construction")
        table = np.empty((st.n_sets, nred), dtype=np.int32)
        if st.n_sets:
            table[:] = np.asarray(<int32_t[:st.n_sets * nred]>rows).reshape(st.n_sets, nred)
        labels = np.zeros(st.n_sets, dtype=np.int32)
        for i in range(st.n_sets):
            for m in range(st.offsets[i], st.offsets[i + 1]):
                if acc[st.members[m]]:
                    labels[i] = 1
                    break
        return table, labels
    finally:
        free(rows)
        free(mark)
        free(buf)
        _store_free(&st)


# -- partition refinement -----------------------------------------------------------

def refine(table, labels):
    """Coarsest partition compatible with labels and transitions (Moore).

    A state's signature is its class followed by the classes of its
    successors (-1 for the dead state); classes are renumbered through an
    open-addressing table keyed by signature until their number stabilizes.
    """
    cdef const int32_t[:, ::1] T = np.ascontiguousarray(table, dtype=np.int32)
    cdef Py_ssize_t n = T.shape[0], nsym = T.shape[1]
    cdef int32_t[::1] cls = np.unique(np.asarray(labels), return_inverse=True)[1].astype(np.int32).reshape(-1)
    cdef int32_t[::1] new = np.empty(n, dtype=np.int32)
    cdef int64_t n_slots = 16
    cdef int64_t* slots
    cdef int32_t* reps
    cdef int64_t count, prev, pos
    cdef Py_ssize_t s, j, rep
    cdef uint64_t h
    cdef int32_t ts, tr, cs, cr
    cdef bint same
    if n == 0:
        return np.zeros(0, dtype=np.int32)
    while n_slots < 2 * n:
        n_slots *= 2
    slots = <int64_t*>malloc(n_slots * sizeof(int64_t))
    reps = <int32_t*>malloc(n * sizeof(int32_t))
    if slots == NULL or reps == NULL:
        free(slots)
        free(reps)
        raise MemoryError()
    prev = int(np.asarray(cls).max()) + 1
    try:
        with nogil:
            while True:
                memset(slots, 0xff, n_slots * sizeof(int64_t))
                count = 0
                for s in range(n):
                    h = _mix(<uint64_t>cls[s])
                    for j in range(nsym):
                        ts = T[s, j]
                        h = _mix(h ^ <uint64_t>(cls[ts] if ts >= 0 else -1))
                    pos = <int64_t>(h & <uint64_t>(n_slots - 1))
                    while True:
                        if slots[pos] < 0:
                            slots[pos] = count
                            reps[count] = <int32_t>s
                            new[s] = <int32_t>count
                            count += 1
                            break
                        rep = reps[slots[pos]]
                        same = cls[rep] == cls[s]
                        if same:
                            for j in range(nsym):
                                ts = T[s, j]
                                tr = T[rep, j]
                                cs = cls[ts] if ts >= 0 else -1
                                cr = cls[tr] if tr >= 0 else -1
                                if cs != cr:
                                    same = False
                                    break
                        if same:
                            new[s] = new[rep]
                            break
                        pos = (pos + 1) & (n_slots - 1)
                for s in range(n):
                    cls[s] = new[s]
                if count == prev:
                    break
                prev = count
        return np.asarray(cls).copy()
    finally:
        free(slots)
        free(reps)


# -- pruned search over binary words ------------------------------------------------

cdef struct Search:
    int num
    int den
    int strict
    int max_len
    int want_words
    int64_t max_nodes
    int64_t nodes
    int max_depth
    int truncated
    int exhausted
    uint8_t* word
    int32_t* runs      # runs[L * stride + p]: common suffix length of w[:L] and w[:L-p]
    int32_t* rho       # rho[m]: distinct factors of length m
    int64_t* counts
    int stride


cdef inline int _extend(Search* S, int L, uint8_t c) noexcept nogil:
    """Append c to the word of length L; return the longest repeated suffix
    length of the new word, or -1 if the new word violates a constraint
    (state is left untouched in that case)."""
    cdef int n = L + 1
    cdef int p, run, lrs = 0, m
    cdef int32_t* old = S.runs + L * S.stride
    cdef int32_t* new = S.runs + n * S.stride
    S.word[L] = c
    for p in range(1, n):
        if S.word[n - 1 - p] == c:
            run = (old[p] if p < L else 0) + 1
        else:
            run = 0
        new[p] = run
        if run > lrs:
            lrs = run
        if run:
            # the suffix with period p has length run + p
            if S.strict:
                if S.den * (run + p) >= S.num * p:
                    return -1
            elif S.den * (run + p) > S.num * p:
                return -1
    for m in range(lrs + 1, n + 1):
        if S.rho[m] + 1 > 2 * m:
            return -1
    for m in range(lrs + 1, n + 1):
        S.rho[m] += 1
    return lrs


cdef inline void _retract(Search* S, int n, int lrs) noexcept nogil:
    cdef int m
    for m in range(lrs + 1, n + 1):
        S.rho[m] -= 1


cdef int _dfs(Search* S, int L, list maximal) except -1:
    """Explore the subtree below the valid word of length L."""
    cdef int c, lrs, children = 0
    S.nodes += 1
    S.counts[L] += 1
    if L > S.max_depth:
        S.max_depth = L
    if S.max_nodes > 0 and S.nodes > S.max_nodes:
        S.exhausted = 1
        return 0
    for c in range(2):
        lrs = _extend(S, L, <uint8_t>c)
        if lrs < 0:
            continue
        children += 1
        if L + 1 > S.max_len:
            S.truncated = 1
            _retract(S, L + 1, lrs)
            continue
        _dfs(S, L + 1, maximal)
        _retract(S, L + 1, lrs)
        if S.exhausted:
            return 0
    if children == 0 and S.want_words:
        maximal.append(bytes([S.word[i] + 48 for i in range(L)]).decode())
    return 0


def search(int num, int den, bint strict, int max_len, bint first_fixed=True,
           bint want_words=True, int64_t max_nodes=0):
    """Depth-first enumeration of binary Rote words avoiding the exponent bound.

    Returns ``(counts, maximal, max_depth, truncated, exhausted)`` where
    counts[n] is the number of valid words of length n (first letter 0 when
    ``first_fixed``), ``maximal`` the valid words with no valid extension and
    ``truncated`` tells whether some word of length ``max_len`` extends.
    """
    cdef Search S
    cdef int first
    cdef int lrs
    if max_len < 1:
        raise ValueError("max_len must be positive")
    S.num = num
    S.den = den
    S.strict = strict
    S.max_len = max_len
    S.want_words = want_words
    S.max_nodes = max_nodes
    S.nodes = 0
    S.max_depth = 0
    S.truncated = 0
    S.exhausted = 0
    S.stride = max_len + 2
    S.word = <uint8_t*>malloc(max_len + 2)
    S.runs = <int32_t*>malloc((max_len + 2) * S.stride * sizeof(int32_t))
    S.rho = <int32_t*>malloc((max_len + 2) * sizeof(int32_t))
    S.counts = <int64_t*>malloc((max_len + 2) * sizeof(int64_t))
    if S.word == NULL or S.runs == NULL or S.rho == NULL or S.counts == NULL:
        free(S.word); free(S.runs); free(S.rho); free(S.counts)
        raise MemoryError()
    memset(S.runs, 0, (max_len + 2) * S.stride * sizeof(int32_t))
    memset(S.rho, 0, (max_len + 2) * sizeof(int32_t))
    memset(S.counts, 0, (max_len + 2) * sizeof(int64_t))
    maximal = []
    try:
        for first in range(1 if first_fixed else 2):
            lrs = _extend(&S, 0, <uint8_t>first)
            _dfs(&S, 1, maximal)
            _retract(&S, 1, lrs)
            if S.exhausted:
                break
        counts = [int(S.counts[i]) for i in range(max_len + 1)]
        return counts, maximal, S.max_depth, bool(S.truncated), bool(S.exhausted)
    finally:
        free(S.word); free(S.runs); free(S.rho); free(S.counts)
