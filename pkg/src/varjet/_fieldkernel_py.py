"""Numpy fallback for the compiled field kernel (same interface as ``_fieldkernel``)."""
import numpy as np
import scipy.sparse as sp


class FieldKernel:
    def __init__(self, n, M, n_slots, I, J, L, op_dst, op_src, op_var, t_comp, t_slot, t_coef):
        self.n = n
        self.M = M
        self.n_slots = n_slots
        self.I = np.asarray(I, dtype=np.intp)
        self.J = np.asarray(J, dtype=np.intp)
        self.fold = sp.csr_matrix(
            (np.ones(len(L)), (np.asarray(L), np.arange(len(L)))), shape=(M, len(L))
        )
        self.ops = list(zip(op_dst, op_src, op_var))
        coef = np.zeros((n, n_slots), dtype=complex)
        np.add.at(coef, (np.asarray(t_comp), np.asarray(t_slot)), np.asarray(t_coef))
        self.coef = coef

    def __call__(self, state, scale, out):
        state = np.asarray(state)
        work = np.empty((self.n_slots, self.M), dtype=complex)
        work[0] = 0.0
        work[0, 0] = 1.0
        work[1 : self.n + 1] = state
        for dst, src, var in self.ops:
            a = work[src]
            b = work[var]
            work[dst] = self.fold @ (a[self.I] * b[self.J])
        np.matmul(self.coef, work, out=out)
        if scale != 1:
            out *= scale
        return out
