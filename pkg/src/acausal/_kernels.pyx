# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``_kernels_py``; see that module for the algorithm."""

from libc.stdlib cimport malloc, free

IMPLEMENTATION = "cython"


def fixed_point_count(table, fmap):
    cdef Py_ssize_t i, n = len(fmap)
    cdef long count = 0
    for i in range(n):
        if table[fmap[i]] == i:
            count += 1
    return count


def first_violation(table, fmaps):
    cdef Py_ssize_t D = len(table), i, k
    cdef long count
    for k, fm in enumerate(fmaps):
        count = 0
        for i in range(D):
            if table[fm[i]] == i:
                count += 1
                if count == 2:
                    break
        if count != 1:
            return k
    return -1


cdef int _scan(int D, int nmaps, const int* maps, int first_lo, int first_hi,
               int* out, int out_cap, int* n_out) nogil:
    # out receives found tables back to back; returns 1 if out overflowed
    cdef int* t = <int*> malloc(D * sizeof(int))
    cdef int k, i, p, q, count, maxpos, fail_pos
    cdef const int* fm
    for q in range(D):
        t[q] = 0
    t[0] = first_lo
    n_out[0] = 0
    while True:
        fail_pos = -1
        for k in range(nmaps):
            fm = maps + k * D
            count = 0
            maxpos = 0
            for i in range(D):
                p = fm[i]
                if p > maxpos:
                    maxpos = p
                if t[p] == i:
                    count += 1
                    if count == 2:
                        break
            if count != 1:
                fail_pos = maxpos
                break
        if fail_pos < 0:
            if n_out[0] >= out_cap:
                free(t)
                return 1
            for q in range(D):
                out[n_out[0] * D + q] = t[q]
            n_out[0] += 1
            fail_pos = D - 1
        for q in range(fail_pos + 1, D):
            t[q] = 0
        p = fail_pos
        while p > 0:
            t[p] += 1
            if t[p] < D:
                break
            t[p] = 0
            p -= 1
        if p == 0:
            t[0] += 1
            if t[0] >= first_hi:
                free(t)
                return 0


def scan_tables(int D, fmaps, int first_lo, int first_hi):
    if first_lo >= first_hi:
        return []
    cdef int nmaps = len(fmaps)
    cdef int* maps = <int*> malloc(max(nmaps, 1) * D * sizeof(int))
    cdef int k, i, n_out = 0, overflow = 1
    cdef int cap = 4096
    cdef int* out = NULL
    try:
        for k in range(nmaps):
            fm = fmaps[k]
            for i in range(D):
                maps[k * D + i] = fm[i]
        while overflow:
            free(out)
            out = <int*> malloc(cap * D * sizeof(int))
            with nogil:
                overflow = _scan(D, nmaps, maps, first_lo, first_hi, out, cap, &n_out)
            cap *= 4
        return [tuple(out[k * D + i] for i in range(D)) for k in range(n_out)]
    finally:
        free(maps)
        free(out)
