# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernel; see ``_homcount_py`` for the reference version."""
from libc.stdlib cimport malloc, free


cdef int *_to_c(seq) except NULL:
    cdef Py_ssize_t k, m = len(seq)
    cdef int *out = <int *> malloc((m + 1) * sizeof(int))
    if out == NULL:
        raise MemoryError()
    for k in range(m):
        out[k] = seq[k]
    return out


def count_assignments(int n, int nvars, mult, inv, int identity, rel_offsets,
                      rel_letters, due_offsets, due_rels):
    if nvars == 0:
        return 1
    cdef int *M = _to_c(mult)
    cdef int *I = _to_c(inv)
    cdef int *RO = _to_c(rel_offsets)
    cdef int *RL = _to_c(rel_letters)
    cdef int *DO = _to_c(due_offsets)
    cdef int *DR = _to_c(due_rels)
    cdef int *val = <int *> malloc(nvars * sizeof(int))
    cdef unsigned long long total = 0
    cdef int depth = 0, last = nvars - 1
    cdef int k, r, t, x, e, code, ok
    try:
        if val == NULL:
            raise MemoryError()
        val[0] = -1
        with nogil:
            while depth >= 0:
                val[depth] += 1
                if val[depth] >= n:
                    depth -= 1
                    continue
                ok = 1
                for k in range(DO[depth], DO[depth + 1]):
                    r = DR[k]
                    x = identity
                    for t in range(RO[r], RO[r + 1]):
                        code = RL[t]
                        e = val[code >> 1]
                        if code & 1:
                            e = I[e]
                        x = M[x * n + e]
                    if x != identity:
                        ok = 0
                        break
                if not ok:
                    continue
                if depth == last:
                    total += 1
                else:
                    depth += 1
                    val[depth] = -1
    finally:
        free(M); free(I); free(RO); free(RL); free(DO); free(DR); free(val)
    return total
