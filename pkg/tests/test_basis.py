import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qcdetector.basis import (
    BasisSpec,
    boson_operator,
    make_basis,
    parity_diagonal,
    parity_operator,
    spin_operator,
)


@pytest.mark.parametrize(
    "n,m,dim",
    [(4, 6, 35), (80, 80, 6561), (1, 0, 2)],
)
def test_dimensions(n, m, dim):
    basis = make_basis(n, m)
    assert basis.dim == dim
    assert basis.dim == (basis.n_spins + 1) * (basis.fock_cutoff + 1)


def test_rejects_bad_sizes():
    with pytest.raises(ValueError):
        make_basis(0, 4)
    with pytest.raises(ValueError):
        make_basis(4, -1)
    with pytest.raises(ValueError):
        make_basis(2**16, 2**16)


def test_index_bijection():
    basis = make_basis(3, 5)
    seen = set()
    for nb in range(6):
        for mi in range(4):
            seen.add(basis.flat_index(mi, nb))
    assert seen == set(range(basis.dim))
    # boson-major: spin index varies fastest
    assert basis.flat_index(0, 1) == 4
    assert_allclose(basis.magnetic_number()[:4], [-1.5, -0.5, 0.5, 1.5])
    assert_allclose(basis.boson_occupancy()[:5], [0, 0, 0, 0, 1])


def test_ladder_coefficient():
    basis = make_basis(2, 0)  # s = 1
    plus = spin_operator(basis, "plus").matrix
    assert abs(plus[2, 1] - math.sqrt(2)) < 1e-14
    assert abs(plus[1, 0] - math.sqrt(2)) < 1e-14


def test_sz_diagonal_ascending():
    basis = make_basis(2, 0)
    sz = spin_operator(basis, "z").matrix.toarray()
    assert_allclose(sz, np.diag([-1.0, 0.0, 1.0]), atol=1e-15)


def test_all_up_sy_squared():
    n = 4
    basis = make_basis(n, 0)
    sy = spin_operator(basis, "y").matrix
    up = np.zeros(basis.dim, dtype=complex)
    up[-1] = 1.0
    val = np.vdot(sy @ up, sy @ up).real
    assert abs(val - n / 4.0) < 1e-14


def test_boson_number_diagonal():
    basis = make_basis(1, 2)
    num = boson_operator(basis, "number").matrix.toarray()
    assert_allclose(np.diag(num), [0, 0, 1, 1, 2, 2], atol=1e-15)


def test_boson_ladder_entry():
    basis = make_basis(1, 3)
    d = boson_operator(basis, "annihilate").matrix
    # <n=2, m| d |n=3, m>
    i, j = basis.flat_index(0, 2), basis.flat_index(0, 3)
    assert abs(d[i, j] - math.sqrt(3)) < 1e-14


def test_hard_truncation():
    basis = make_basis(2, 4)
    d = boson_operator(basis, "annihilate").matrix
    n_op = (d.conj().T @ d).toarray()
    top = np.zeros(basis.dim, dtype=complex)
    top[basis.flat_index(1, 4)] = 1.0
    assert_allclose(n_op @ top, 4.0 * top, atol=1e-14)
    create = boson_operator(basis, "create").matrix
    assert np.linalg.norm((create @ top)) == 0.0


@pytest.mark.parametrize("n", [2, 5, 10])
def test_su2_algebra(n):
    basis = make_basis(n, 2)
    sx, sy, sz = (spin_operator(basis, a).matrix for a in "xyz")
    comm = sx @ sy - sy @ sx - 1j * sz
    assert abs(comm).max() < 1e-12
    s = basis.spin
    casimir = (sx @ sx + sy @ sy + sz @ sz).toarray()
    assert_allclose(casimir, s * (s + 1) * np.eye(basis.dim), atol=1e-12)


def test_truncated_boson_commutator():
    basis = make_basis(2, 5)
    d = boson_operator(basis, "annihilate").matrix
    comm = (d @ d.conj().T - d.conj().T @ d).toarray()
    below = 5 * 3
    assert_allclose(comm[:below, :below], np.eye(below), atol=1e-12)
    # the top Fock block carries the truncation defect -M
    assert_allclose(np.diag(comm)[below:], -5.0, atol=1e-12)


def test_builders_deterministic():
    a = spin_operator(make_basis(6, 4), "x").matrix
    b = spin_operator(make_basis(6, 4), "x").matrix
    assert np.array_equal(a.indices, b.indices)
    assert np.array_equal(a.data, b.data)


def test_hermitian_flags_and_pairing():
    basis = make_basis(3, 3)
    for name, herm in [("x", True), ("y", True), ("z", True), ("plus", False)]:
        op = spin_operator(basis, name)
        assert op.hermitian is herm
        if herm:
            assert abs(op.matrix - op.matrix.conj().T).max() == 0.0


def test_entries_iterator_no_duplicates():
    op = spin_operator(make_basis(4, 2), "x")
    seen = set()
    for r, c, v in op.entries():
        assert (r, c) not in seen
        assert r < op.dim and c < op.dim
        seen.add((r, c))


def test_parity_diagonal_alternates():
    basis = make_basis(2, 2)
    par = parity_diagonal(basis)
    assert_allclose(par[:6], [1, -1, 1, -1, 1, -1])
    op = parity_operator(basis)
    assert op.hermitian
    assert_allclose(op.matrix.diagonal(), par)


def test_invalid_axis_and_kind():
    basis = make_basis(2, 2)
    with pytest.raises(ValueError):
        spin_operator(basis, "w")
    with pytest.raises(ValueError):
        boson_operator(basis, "destroy")
