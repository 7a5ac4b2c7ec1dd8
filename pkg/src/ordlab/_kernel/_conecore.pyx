# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled cone-search kernel; exact behavioral twin of `pycore`.

Same flat interface and identical outputs (the parity tests enforce it);
the sign array, trail, queue and DFS stack live in C buffers.
"""

from cpython.mem cimport PyMem_Malloc, PyMem_Free

CONFLICT_ANTISYMMETRY = 1
CONFLICT_IDENTITY = 2
CONFLICT_CLOSURE = 3

STATUS_DONE = 0
STATUS_SOLUTION_LIMIT = 1
STATUS_NODE_BUDGET = 2


cdef struct Conflict:
    int kind
    int i
    int j
    int p


cdef int _propagate_c(
    int n,
    int e,
    const int* inv,
    const int* prod,
    signed char* signs,
    int* queue,
    int* queue_len,
    int* trail,
    int* trail_len,
    Conflict* conflict,
) noexcept nogil:
    """Returns 0 on success, 1 on conflict; appends assignments to trail."""
    cdef int head = 0
    cdef int i, j, k, p, s, sj, sp
    cdef long base
    while head < queue_len[0]:
        i = queue[head]
        head += 1
        s = signs[i]
        j = inv[i]
        sj = signs[j]
        if sj == s:
            conflict.kind = 1; conflict.i = i; conflict.j = j; conflict.p = -1
            return 1
        if sj == 0:
            signs[j] = <signed char>(-s)
            trail[trail_len[0]] = j; trail_len[0] += 1
            queue[queue_len[0]] = j; queue_len[0] += 1
        base = <long>i * n
        for k in range(n):
            if signs[k] != s:
                continue
            p = prod[base + k]
            if p >= 0:
                if p == e:
                    conflict.kind = 2; conflict.i = i; conflict.j = k; conflict.p = -1
                    return 1
                sp = signs[p]
                if sp == -s:
                    conflict.kind = 3; conflict.i = i; conflict.j = k; conflict.p = p
                    return 1
                if sp == 0:
                    signs[p] = <signed char>s
                    trail[trail_len[0]] = p; trail_len[0] += 1
                    queue[queue_len[0]] = p; queue_len[0] += 1
            p = prod[<long>k * n + i]
            if p >= 0:
                if p == e:
                    conflict.kind = 2; conflict.i = k; conflict.j = i; conflict.p = -1
                    return 1
                sp = signs[p]
                if sp == -s:
                    conflict.kind = 3; conflict.i = k; conflict.j = i; conflict.p = p
                    return 1
                if sp == 0:
                    signs[p] = <signed char>s
                    trail[trail_len[0]] = p; trail_len[0] += 1
                    queue[queue_len[0]] = p; queue_len[0] += 1
    return 0


def propagate(n, e, inv, prod, signs, queue, trail):
    """Python-visible propagation; mutates signs/queue/trail like pycore."""
    cdef int nn = n
    cdef int ee = e
    cdef int[::1] inv_view = _as_int_array(inv, nn)
    cdef int[::1] prod_view = _as_int_array(prod, nn * nn)
    cdef signed char* csigns = <signed char*>PyMem_Malloc(nn)
    cdef int* cqueue = <int*>PyMem_Malloc(nn * sizeof(int))
    cdef int* ctrail = <int*>PyMem_Malloc(nn * sizeof(int))
    cdef int qlen = 0, tlen = 0, rc
    cdef Conflict conflict
    cdef int idx
    try:
        for idx in range(nn):
            csigns[idx] = <signed char>signs[idx]
        for item in queue:
            cqueue[qlen] = item
            qlen += 1
        rc = _propagate_c(nn, ee, &inv_view[0], &prod_view[0], csigns,
                          cqueue, &qlen, ctrail, &tlen, &conflict)
        for idx in range(nn):
            signs[idx] = csigns[idx]
        for idx in range(tlen):
            trail.append(ctrail[idx])
        if rc:
            return (conflict.kind, conflict.i, conflict.j, conflict.p)
        return None
    finally:
        PyMem_Free(csigns)
        PyMem_Free(cqueue)
        PyMem_Free(ctrail)


cdef int[::1] _as_int_array(seq, Py_ssize_t expected):
    # a typed memoryview keeps its backing buffer alive
    from array import array as _array
    cdef object buf
    if isinstance(seq, _array) and seq.typecode == "i":
        buf = seq
    else:
        buf = _array("i", seq)
    cdef int[::1] view = buf
    if view.shape[0] != expected:
        raise ValueError("table has unexpected length")
    return view


def enumerate_complete(
    n,
    e,
    inv,
    prod,
    decisions,
    seeds,
    solution_limit=0,
    node_budget=0,
    find_one=False,
):
    """Depth-first enumeration; see pycore.enumerate_complete."""
    cdef int nn = n
    cdef int ee = e
    cdef int[::1] inv_view = _as_int_array(inv, nn)
    cdef int[::1] prod_view = _as_int_array(prod, <Py_ssize_t>nn * nn)
    cdef int ndec = len(decisions)
    cdef int limit = 1 if find_one else (solution_limit or 0)
    cdef long budget = node_budget or 0
    cdef long nodes = 0

    cdef signed char* signs = <signed char*>PyMem_Malloc(nn)
    cdef int* cdec = <int*>PyMem_Malloc((ndec if ndec else 1) * sizeof(int))
    cdef int* trail = <int*>PyMem_Malloc(nn * sizeof(int))
    cdef int* queue = <int*>PyMem_Malloc(nn * sizeof(int))
    # frame: decision position, sign state, trail mark
    cdef int* f_pos = <int*>PyMem_Malloc((ndec + 1) * sizeof(int))
    cdef int* f_state = <int*>PyMem_Malloc((ndec + 1) * sizeof(int))
    cdef int* f_mark = <int*>PyMem_Malloc((ndec + 1) * sizeof(int))

    cdef int tlen = 0, qlen = 0, depth, t, t2, state, v, sign, rc, idx
    cdef Conflict conflict
    solutions = []
    try:
        for idx in range(nn):
            signs[idx] = 0
        for idx in range(ndec):
            cdec[idx] = decisions[idx]
        for i, s in seeds:
            if signs[<int>i] == -<int>s:
                return (STATUS_DONE, [])
            if signs[<int>i] == 0:
                signs[<int>i] = <signed char>s
                trail[tlen] = i; tlen += 1
                queue[qlen] = i; qlen += 1
        if _propagate_c(nn, ee, &inv_view[0], &prod_view[0], signs,
                        queue, &qlen, trail, &tlen, &conflict):
            return (STATUS_DONE, [])

        t = _next_unassigned(signs, cdec, ndec, 0)
        if t < 0:
            return (STATUS_DONE, [_signs_tuple(signs, nn)])

        f_pos[0] = t; f_state[0] = 0; f_mark[0] = tlen
        depth = 0
        while depth >= 0:
            while tlen > f_mark[depth]:
                tlen -= 1
                signs[trail[tlen]] = 0
            state = f_state[depth]
            if state == 2:
                depth -= 1
                continue
            f_state[depth] = state + 1
            sign = 1 if state == 0 else -1
            nodes += 1
            if budget and nodes > budget:
                return (STATUS_NODE_BUDGET, solutions)
            v = cdec[f_pos[depth]]
            signs[v] = <signed char>sign
            trail[tlen] = v; tlen += 1
            queue[0] = v; qlen = 1
            if _propagate_c(nn, ee, &inv_view[0], &prod_view[0], signs,
                            queue, &qlen, trail, &tlen, &conflict):
                continue
            t2 = _next_unassigned(signs, cdec, ndec, f_pos[depth] + 1)
            if t2 < 0:
                solutions.append(_signs_tuple(signs, nn))
                if limit and len(solutions) >= limit:
                    return (STATUS_SOLUTION_LIMIT, solutions)
                continue
            depth += 1
            f_pos[depth] = t2; f_state[depth] = 0; f_mark[depth] = tlen
        return (STATUS_DONE, solutions)
    finally:
        PyMem_Free(signs)
        PyMem_Free(cdec)
        PyMem_Free(trail)
        PyMem_Free(queue)
        PyMem_Free(f_pos)
        PyMem_Free(f_state)
        PyMem_Free(f_mark)


cdef int _next_unassigned(signed char* signs, int* decisions, int ndec, int start) noexcept nogil:
    cdef int t
    for t in range(start, ndec):
        if signs[decisions[t]] == 0:
            return t
    return -1


cdef tuple _signs_tuple(signed char* signs, int n):
    cdef int i
    return tuple([<int>signs[i] for i in range(n)])
