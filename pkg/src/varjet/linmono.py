"""Linearized fundamental matrices, monodromies and commutator jet rows.

A jet ``(Y_1..Y_k)`` linearizes to the block lower-triangular matrix ``Phi_k``
acting on ``S^k + ... + S^1``.  Column and row groups are ordered by
*decreasing* degree: the top-left block is ``Y_1^{.k}`` and the bottom block
row is ``(Y_k | ... | Y_1)``.  Inside a group, coordinates follow the
graded-lex monomial order of :mod:`varjet.symtensor`.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .cpath import PolygonalPath, commutator_path
from .errors import NoObstruction
from .jetflow import IntegratorConfig, JetState, PolyVectorField, integrate_jet
from .symtensor import SymMap, faa_coeff, monomial_basis, partitions, sym_dim, sym_identity, sym_map_product

__all__ = [
    "BlockFundamental",
    "JetRow",
    "JetEntry",
    "assemble_phi",
    "system_matrix",
    "monodromy",
    "monodromy_pair",
    "commutator",
    "commutator_loop_monodromy",
    "sup_norm",
    "jet_row",
    "k436_entry",
    "antisymmetric_pairs",
    "write_matrix_csv",
    "read_matrix_csv",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 1e-9


def _group_offsets(n: int, k: int) -> dict[int, slice]:
    """Column slice of each degree group, highest degree first."""
    out, pos = {}, 0
    for d in range(k, 0, -1):
        w = sym_dim(n, d)
        out[d] = slice(pos, pos + w)
        pos += w
    return out


@dataclass
class BlockFundamental:
    """Dense ``N x N`` matrix on ``S^k + ... + S^1`` with degree-indexed blocks."""

    n: int
    order: int
    matrix: np.ndarray

    def __post_init__(self):
        N = self.size
        self.matrix = np.asarray(self.matrix, dtype=complex)
        if self.matrix.shape != (N, N):
            raise ValueError(f"expected a {N}x{N} matrix, got {self.matrix.shape}")

    @property
    def size(self) -> int:
        return sum(sym_dim(self.n, d) for d in range(1, self.order + 1))

    def groups(self) -> dict[int, slice]:
        return _group_offsets(self.n, self.order)

    def block(self, r: int, c: int) -> np.ndarray:
        """Block mapping degree ``c`` to degree ``r`` (zero unless ``r <= c``)."""
        g = self.groups()
        return self.matrix[g[r], g[c]]

    def truncate(self, k: int) -> "BlockFundamental":
        """Order-``k`` fundamental matrix: the bottom-right sub-block."""
        if not 1 <= k <= self.order:
            raise ValueError(f"order {k} outside 1..{self.order}")
        m = sum(sym_dim(self.n, d) for d in range(1, k + 1))
        return BlockFundamental(self.n, k, self.matrix[-m:, -m:].copy())

    def inverse(self) -> "BlockFundamental":
        return BlockFundamental(self.n, self.order, np.linalg.inv(self.matrix))

    def __matmul__(self, other: "BlockFundamental") -> "BlockFundamental":
        _check_same(self, other)
        return BlockFundamental(self.n, self.order, self.matrix @ other.matrix)

    def deviation(self) -> float:
        """``sup_norm(M - Id)``."""
        return sup_norm(self.matrix - np.eye(self.size))


def _check_same(a: BlockFundamental, b: BlockFundamental) -> None:
    if (a.n, a.order) != (b.n, b.order):
        raise ValueError(f"size mismatch: (n={a.n}, k={a.order}) vs (n={b.n}, k={b.order})")


def _products(blocks: Sequence[SymMap]):
    memo: dict[tuple[int, ...], SymMap] = {}

    def prod(parts: tuple[int, ...]) -> SymMap:
        if parts not in memo:
            if len(parts) == 1:
                memo[parts] = blocks[parts[0] - 1]
            else:
                memo[parts] = sym_map_product(prod(parts[:-1]), blocks[parts[-1] - 1])
        return memo[parts]

    return prod


def assemble_phi(jet: JetState | Sequence[SymMap]) -> BlockFundamental:
    """Linearize a jet: ``block(r, c) = sum faa_coeff(parts) Y_{i1} . ... . Y_{ir}``.

    The sum runs over multisets ``{i1..ir}`` of ``r`` parts adding up to ``c``.
    """
    blocks = list(jet.blocks if isinstance(jet, JetState) else jet)
    k = len(blocks)
    if k < 1:
        raise ValueError("jet order must be >= 1")
    n = blocks[0].n
    g = _group_offsets(n, k)
    N = sum(sym_dim(n, d) for d in range(1, k + 1))
    out = np.zeros((N, N), dtype=complex)
    prod = _products(blocks)
    for c in range(1, k + 1):
        for r in range(1, c + 1):
            acc = out[g[r], g[c]]
            for parts in partitions(c, r):
                acc += faa_coeff(parts) * prod(parts).entries
    return BlockFundamental(n, k, out)


def system_matrix(A: Sequence[SymMap]) -> BlockFundamental:
    """Coefficient matrix of the linearized order-k system.

    ``block(r, c) = binom(c, r-1) * A_{c-r+1} . Id^{.(r-1)}`` for ``c >= r``.
    """
    A = list(A)
    k = len(A)
    if k < 1:
        raise ValueError("need at least A_1")
    n = A[0].n
    for j, a in enumerate(A, 1):
        if a.n != n or a.a != j or a.b != 1:
            raise ValueError(f"A_{j} has the wrong shape")
    g = _group_offsets(n, k)
    N = sum(sym_dim(n, d) for d in range(1, k + 1))
    out = np.zeros((N, N), dtype=complex)
    for r in range(1, k + 1):
        ident = sym_identity(n, r - 1) if r > 1 else None
        for c in range(r, k + 1):
            blk = A[c - r] if ident is None else sym_map_product(A[c - r], ident)
            out[g[r], g[c]] = comb(c, r - 1) * blk.entries
    return BlockFundamental(n, k, out)


def monodromy(
    X: PolyVectorField,
    ivp,
    loop: PolygonalPath,
    k: int,
    cfg: IntegratorConfig | None = None,
    singularities: Iterable[complex] | None = None,
    backend: str | None = None,
) -> BlockFundamental:
    """Order-``k`` monodromy along a closed loop: the linearized end-point jet."""
    if not loop.closed:
        raise ValueError("monodromy needs a closed loop")
    jet = integrate_jet(X, ivp, loop, k, cfg, singularities, backend=backend)
    return assemble_phi(jet)


def commutator(M1, M2) -> np.ndarray:
    """``M1 M2 - M2 M1``."""
    a = M1.matrix if isinstance(M1, BlockFundamental) else np.asarray(M1)
    b = M2.matrix if isinstance(M2, BlockFundamental) else np.asarray(M2)
    if a.shape != b.shape:
        raise ValueError(f"size mismatch: {a.shape} vs {b.shape}")
    return a @ b - b @ a


def sup_norm(M) -> float:
    """Largest entry modulus."""
    a = M.matrix if isinstance(M, BlockFundamental) else np.asarray(M)
    return float(np.max(np.abs(a))) if a.size else 0.0


def monodromy_pair(X, ivp, loop_a, loop_b, k, cfg=None, singularities=None, backend=None):
    return (
        monodromy(X, ivp, loop_a, k, cfg, singularities, backend),
        monodromy(X, ivp, loop_b, k, cfg, singularities, backend),
    )


def commutator_loop_monodromy(X, ivp, loop_a, loop_b, k, cfg=None, singularities=None, backend=None):
    """Monodromy along the single loop ``a, b, a^-1, b^-1`` (equals ``Mb^-1 Ma^-1 Mb Ma``)."""
    return monodromy(X, ivp, commutator_path(loop_a, loop_b), k, cfg, singularities, backend)


# --- jet rows -----------------------------------------------------------------


@dataclass(frozen=True)
class JetEntry:
    """Surviving jet-row entry; ``row`` and ``column`` are 1-based."""

    row: int
    column: int
    degree: int
    index_in_group: int
    exponents: tuple[int, ...]
    value: complex


@dataclass
class JetRow:
    """Bottom ``n`` rows of ``M - Id`` with entries below ``cap`` set to zero."""

    n: int
    order: int
    matrix: np.ndarray
    cap: float

    def entries(self) -> list[JetEntry]:
        out = []
        g = _group_offsets(self.n, self.order)
        rows, cols = np.nonzero(self.matrix)
        for r, c in sorted(zip(rows.tolist(), cols.tolist()), key=lambda rc: (rc[1], rc[0])):
            for d, sl in g.items():
                if sl.start <= c < sl.stop:
                    idx = c - sl.start
                    out.append(JetEntry(r + 1, c + 1, d, idx + 1, monomial_basis(self.n, d)[idx], complex(self.matrix[r, c])))
                    break
        return out

    def __len__(self) -> int:
        return int(np.count_nonzero(self.matrix))


def jet_row(M: BlockFundamental, cap: float = DEFAULT_CAP) -> JetRow:
    if cap < 0:
        raise ValueError("cap must be non-negative")
    D = M.matrix - np.eye(M.size)
    row = D[-M.n :, :].copy()
    row[np.abs(row) < cap] = 0
    return JetRow(M.n, M.order, row, cap)


def antisymmetric_pairs(row: JetRow, rtol: float = 1e-6) -> list[tuple[JetEntry, JetEntry]]:
    """Surviving top-degree entries ``(a, b)`` in different rows with ``b = -a``."""
    top = [e for e in row.entries() if e.degree == row.order]
    out = []
    for i, a in enumerate(top):
        for b in top[i + 1 :]:
            if a.row != b.row and abs(a.value + b.value) <= rtol * max(abs(a.value), abs(b.value)):
                out.append((a, b))
    return out


def k436_entry(row: JetRow, selector: str = "unpaired") -> JetEntry:
    """The obstruction coefficient in the last row of an order-k commutator jet row.

    Candidates are the surviving last-row entries of the top-degree column
    group.  ``selector="unpaired"`` (default) drops entries that are the
    negative of an entry in another row and returns the largest remaining one;
    ``selector="max"`` returns the largest candidate outright.
    """
    cands = [e for e in row.entries() if e.row == row.n and e.degree == row.order]
    if not cands:
        raise NoObstruction(f"no entry of row {row.n} survives the cap {row.cap:g}")
    if selector == "unpaired":
        paired = {(e.row, e.column) for pair in antisymmetric_pairs(row) for e in pair}
        cands = [e for e in cands if (e.row, e.column) not in paired] or cands
    elif selector != "max":
        raise ValueError(f"unknown selector {selector!r}")
    return max(cands, key=lambda e: (abs(e.value), -e.column))


# --- CSV export ---------------------------------------------------------------


def write_matrix_csv(M, path: str | Path) -> None:
    """Row-major CSV with one ``re,im`` column pair per matrix entry."""
    a = M.matrix if isinstance(M, (BlockFundamental, JetRow)) else np.asarray(M)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        for row in np.atleast_2d(a):
            cells = []
            for z in row:
                z = complex(z)
                cells += [repr(z.real), repr(z.imag)]
            w.writerow(cells)


def read_matrix_csv(path: str | Path) -> np.ndarray:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [[float(x) for x in r] for r in csv.reader(fh) if r]
    a = np.array(rows)
    return a[:, 0::2] + 1j * a[:, 1::2]
