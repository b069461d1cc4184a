# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled jet evaluation of polynomial vector fields.

See ``varjet.kernels`` for the table layout; ``varjet._fieldkernel_py`` is the
reference implementation of the same interface.
"""
import numpy as np


cdef class FieldKernel:
    cdef readonly int n, M, n_slots
    cdef int n_pairs, n_ops, n_terms
    cdef int[::1] pi, pj, pl, op_dst, op_src, op_var, t_comp, t_slot
    cdef double complex[::1] t_coef

    def __init__(self, int n, int M, int n_slots, I, J, L, op_dst, op_src, op_var,
                 t_comp, t_slot, t_coef):
        self.n = n
        self.M = M
        self.n_slots = n_slots
        self.pi = np.ascontiguousarray(I, dtype=np.int32)
        self.pj = np.ascontiguousarray(J, dtype=np.int32)
        self.pl = np.ascontiguousarray(L, dtype=np.int32)
        self.op_dst = np.ascontiguousarray(op_dst, dtype=np.int32)
        self.op_src = np.ascontiguousarray(op_src, dtype=np.int32)
        self.op_var = np.ascontiguousarray(op_var, dtype=np.int32)
        self.t_comp = np.ascontiguousarray(t_comp, dtype=np.int32)
        self.t_slot = np.ascontiguousarray(t_slot, dtype=np.int32)
        self.t_coef = np.ascontiguousarray(t_coef, dtype=np.complex128)
        self.n_pairs = self.pi.shape[0]
        self.n_ops = self.op_dst.shape[0]
        self.n_terms = self.t_comp.shape[0]

    def __call__(self, state, double complex scale, out):
        cdef const double complex[:, ::1] st = np.ascontiguousarray(state, dtype=np.complex128)
        cdef double complex[:, ::1] o = out
        # per-call workspace keeps concurrent calls on one kernel safe
        cdef double complex[:, ::1] work = np.empty((self.n_slots, self.M), dtype=np.complex128)
        with nogil:
            self._eval(st, scale, o, work)
        return out

    cdef void _eval(self, const double complex[:, ::1] st, double complex scale,
                    double complex[:, ::1] o, double complex[:, ::1] work) noexcept nogil:
        cdef int i, j, t, dst, src, var, c, s
        cdef int M = self.M
        cdef double complex acc
        for j in range(M):
            work[0, j] = 0
        work[0, 0] = 1
        for i in range(self.n):
            for j in range(M):
                work[1 + i, j] = st[i, j]
        for t in range(self.n_ops):
            dst = self.op_dst[t]
            src = self.op_src[t]
            var = self.op_var[t]
            for j in range(M):
                work[dst, j] = 0
            for s in range(self.n_pairs):
                work[dst, self.pl[s]] += work[src, self.pi[s]] * work[var, self.pj[s]]
        for i in range(self.n):
            for j in range(M):
                o[i, j] = 0
        for t in range(self.n_terms):
            c = self.t_comp[t]
            s = self.t_slot[t]
            acc = self.t_coef[t] * scale
            for j in range(M):
                o[c, j] += acc * work[s, j]
