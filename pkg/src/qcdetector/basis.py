"""Hilbert space of N collective spins tensored with a truncated boson mode.

The spin ensemble is restricted to the maximal-spin sector s = N/2 (the
total angular momentum is conserved, so the ground-state physics lives in
the N+1 Dicke states |s, m>, m = -s..s).  The boson mode keeps occupancies
0..M with a hard truncation.  Flat indexing is boson-major,

    flat = n_boson * (N + 1) + m_index,        m = m_index - N/2,

so each spin block is contiguous in storage and spin-only operators are
block diagonal.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

# scipy CSR uses 32-bit indices by default; keep dim safely below that.
MAX_DIM = 2**31 - 1

SPIN_AXES = ("x", "y", "z", "plus", "minus")
BOSON_KINDS = ("annihilate", "create", "number", "position")


@dataclass(frozen=True)
class BasisSpec:
    """Geometry of the (N+1)(M+1)-dimensional product space."""

    n_spins: int
    fock_cutoff: int
    dim: int

    @property
    def spin(self) -> float:
        """Total spin s = N/2 of the Dicke sector."""
        return self.n_spins / 2.0

    def boson_occupancy(self) -> np.ndarray:
        """n_boson per flat index."""
        return np.arange(self.dim) // (self.n_spins + 1)

    def magnetic_number(self) -> np.ndarray:
        """m = m_index - N/2 per flat index."""
        return np.arange(self.dim) % (self.n_spins + 1) - self.spin

    def flat_index(self, m_index: int, n_boson: int) -> int:
        """Flat index of |s, m_index - N/2> x |n_boson>."""
        return n_boson * (self.n_spins + 1) + m_index


@dataclass(frozen=True)
class SparseOperator:
    """Sparse matrix on the product space, tagged Hermitian or not.

    The wrapped CSR matrix is shared and must be treated as read-only.
    """

    matrix: sp.csr_matrix
    hermitian: bool

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def nnz(self) -> int:
        return self.matrix.nnz

    def entries(self):
        """Iterate (row, col, value) over stored entries."""
        coo = self.matrix.tocoo()
        yield from zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist())

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        return self.matrix @ amplitudes

    def expectation(self, amplitudes: np.ndarray) -> complex:
        return complex(np.vdot(amplitudes, self.matrix @ amplitudes))


def _as_operator(matrix, hermitian) -> SparseOperator:
    m = matrix.tocsr().astype(np.complex128)
    m.sum_duplicates()
    m.sort_indices()
    return SparseOperator(matrix=m, hermitian=hermitian)


def make_basis(n_spins: int, fock_cutoff: int) -> BasisSpec:
    """Build the basis geometry for N spins and boson occupancies 0..M."""
    if n_spins < 1:
        raise ValueError(f"n_spins must be >= 1, got {n_spins}")
    if fock_cutoff < 0:
        raise ValueError(f"fock_cutoff must be >= 0, got {fock_cutoff}")
    dim = (n_spins + 1) * (fock_cutoff + 1)
    if dim > MAX_DIM:
        raise ValueError(f"dim {dim} exceeds index-type limit {MAX_DIM}")
    return BasisSpec(n_spins=int(n_spins), fock_cutoff=int(fock_cutoff), dim=dim)


@lru_cache(maxsize=32)
def _spin_blocks(n_spins: int):
    """Collective spin matrices on the (N+1)-dimensional Dicke sector.

    Ladder action S+|s,m> = sqrt(s(s+1) - m(m+1)) |s,m+1>, m ascending.
    """
    s = n_spins / 2.0
    m = np.arange(n_spins + 1) - s
    raise_coeff = np.sqrt(s * (s + 1.0) - m[:-1] * (m[:-1] + 1.0))
    plus = sp.diags(raise_coeff, -1)
    minus = plus.T
    return {
        "plus": plus.tocsr(),
        "minus": minus.tocsr(),
        "x": ((plus + minus) / 2.0).tocsr(),
        "y": ((plus - minus) / 2j).tocsr(),
        "z": sp.diags(m).tocsr(),
    }


@lru_cache(maxsize=32)
def _boson_blocks(fock_cutoff: int):
    """Truncated mode matrices on occupancies 0..M; d'|M> = 0."""
    n = np.arange(fock_cutoff + 1)
    annihilate = sp.diags(np.sqrt(n[1:]), 1) if fock_cutoff > 0 else sp.csr_matrix((1, 1))
    create = annihilate.T
    return {
        "annihilate": annihilate.tocsr(),
        "create": create.tocsr(),
        "number": sp.diags(n.astype(float)).tocsr(),
        "position": (annihilate + create).tocsr(),
    }


def spin_operator(basis: BasisSpec, axis: str) -> SparseOperator:
    """S_axis acting on the full space (identity on the boson factor)."""
    if axis not in SPIN_AXES:
        raise ValueError(f"axis must be one of {SPIN_AXES}, got {axis!r}")
    block = _spin_blocks(basis.n_spins)[axis]
    full = sp.kron(sp.identity(basis.fock_cutoff + 1), block, format="csr")
    return _as_operator(full, hermitian=axis in ("x", "y", "z"))


def boson_operator(basis: BasisSpec, kind: str) -> SparseOperator:
    """Mode operator on the full space (identity on the spin factor)."""
    if kind not in BOSON_KINDS:
        raise ValueError(f"kind must be one of {BOSON_KINDS}, got {kind!r}")
    block = _boson_blocks(basis.fock_cutoff)[kind]
    full = sp.kron(block, sp.identity(basis.n_spins + 1), format="csr")
    return _as_operator(full, hermitian=kind in ("number", "position"))


def parity_diagonal(basis: BasisSpec) -> np.ndarray:
    """Diagonal of Pi = exp{i pi (d'd + S_z + N/2)}: (-1)^(n + m_index)."""
    n = basis.boson_occupancy()
    m_index = np.arange(basis.dim) % (basis.n_spins + 1)
    return 1.0 - 2.0 * ((n + m_index) % 2)


def parity_operator(basis: BasisSpec) -> SparseOperator:
    """Conserved parity Pi as a diagonal sparse operator."""
    return _as_operator(sp.diags(parity_diagonal(basis)), hermitian=True)
