import random

import pytest

from superprolong.gaussian import ONE, ZERO, GaussianRational
from superprolong.gsalg import GradedDim, ParityError, rank
from superprolong.liesuper import (
    BilinearForm,
    DegenerateFormError,
    GlElement,
    SuperAlgebraBasis,
    bracket,
    clifford_rep,
    conjugate_algebra,
    gl_algebra,
    identity,
    is_subalgebra,
    matmul,
    matscale,
    osp_algebra,
    p_algebra,
    spin_w_algebra,
    standard_even_form,
    standard_odd_form,
    transpose,
    v_parities,
)

from conftest import rand_gr


def E(i, j, n, vp=None):
    M = [[0] * n for _ in range(n)]
    M[i][j] = 1
    return GlElement.from_rows(M, vp or (0,) * n)


# --- bracket -------------------------------------------------------------

def test_even_self_bracket_vanishes():
    A = GlElement.from_rows([[1, 2], [3, 4]], (0, 0))
    assert bracket(A, A).is_zero()


def test_odd_self_bracket_is_twice_square():
    X = GlElement.from_rows([[0, 1], [1, 0]], (0, 1))
    B = bracket(X, X)
    assert B.parity == 0
    assert B.matrix == matscale(matmul(X.matrix, X.matrix), 2)
    assert not B.is_zero()


def test_e12_e21():
    B = bracket(E(0, 1, 2), E(1, 0, 2))
    assert B.matrix == GlElement.from_rows([[1, 0], [0, -1]], (0, 0)).matrix


def test_inhomogeneous_matrix_rejected():
    with pytest.raises(ParityError):
        GlElement.from_rows([[1, 1], [0, 0]], (0, 1))


# --- subalgebras ---------------------------------------------------------

def test_gl11_is_subalgebra():
    assert is_subalgebra(gl_algebra(1, 1))


def test_abelian_line():
    assert is_subalgebra(SuperAlgebraBasis.from_elements((0, 0), [E(0, 1, 2)]))


def test_e12_e21_not_closed():
    assert not is_subalgebra(SuperAlgebraBasis.from_elements((0, 0), [E(0, 1, 2), E(1, 0, 2)]))


# --- forms ---------------------------------------------------------------

def test_so2():
    assert osp_algebra(standard_even_form(2, 0)).dim == GradedDim(1, 0)


def test_sp2():
    assert osp_algebra(standard_even_form(0, 2)).dim == GradedDim(3, 0)


def test_osp22():
    g = osp_algebra(standard_even_form(2, 2))
    assert g.dim == GradedDim(4, 4)
    assert g.dim.total == 8


def test_periplectic_even_part_is_gl():
    g = p_algebra(standard_odd_form(2))
    assert g.dim.even == 4
    assert not g.space.is_zero()


def test_degenerate_form_rejected():
    with pytest.raises(DegenerateFormError):
        BilinearForm.from_rows([[1, 0], [0, 0]], (0, 0), 0)


def test_odd_symplectic_part_needs_even_size():
    with pytest.raises(DegenerateFormError):
        standard_even_form(1, 1)


@pytest.mark.parametrize("m", range(0, 4))
@pytest.mark.parametrize("n", range(0, 4))
def test_osp_dimension_formula(m, n):
    if m + n == 0:
        return
    g = osp_algebra(standard_even_form(m, 2 * n))
    assert g.dim == GradedDim(m * (m - 1) // 2 + n * (2 * n + 1), 2 * m * n)


def _random_even_form(rng, m, n2):
    while True:
        A = [[rand_gr(rng) for _ in range(m)] for _ in range(m)]
        S = [[A[i][j] + A[j][i] for j in range(m)] for i in range(m)]
        B = [[rand_gr(rng) for _ in range(n2)] for _ in range(n2)]
        K = [[B[i][j] - B[j][i] for j in range(n2)] for i in range(n2)]
        size = m + n2
        J = [[ZERO] * size for _ in range(size)]
        for i in range(m):
            for j in range(m):
                J[i][j] = S[i][j]
        for i in range(n2):
            for j in range(n2):
                J[m + i][m + j] = K[i][j]
        if rank(J) == size:
            return BilinearForm.from_rows(J, v_parities(m, n2), 0)


def _random_odd_form(rng, n):
    while True:
        B = [[rand_gr(rng) for _ in range(n)] for _ in range(n)]
        if rank(B) == n:
            break
    J = [[ZERO] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            J[i][n + j] = B[i][j]
            J[n + j][i] = B[i][j]
    return BilinearForm.from_rows(J, v_parities(n, n), 1)


@pytest.mark.parametrize("m,n2", [(1, 2), (2, 2), (3, 2), (1, 4), (3, 4)])
def test_random_osp_closed(m, n2):
    rng = random.Random(m * 10 + n2)
    for _ in range(2):
        assert is_subalgebra(osp_algebra(_random_even_form(rng, m, n2)))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_random_p_closed(n):
    rng = random.Random(n)
    for _ in range(2):
        assert is_subalgebra(p_algebra(_random_odd_form(rng, n)))


@pytest.mark.parametrize("m,n2", [(2, 0), (1, 2), (2, 2)])
def test_osp_conjugation(m, n2):
    rng = random.Random(42 + m)
    J = standard_even_form(m, n2)
    vp = J.vparities
    size = len(vp)
    for _ in range(3):
        while True:
            T = [[rand_gr(rng) if vp[r] == vp[c] else ZERO for c in range(size)] for r in range(size)]
            if rank(T) == size:
                break
        J2 = BilinearForm(matmul(matmul(transpose(T), J.matrix), T), 0, vp)
        assert osp_algebra(J2).space == conjugate_algebra(osp_algebra(J), T).space


# --- Clifford and spinors ------------------------------------------------

def test_clifford_1_0():
    rep = clifford_rep(1, 0)
    assert rep.spinor_dim == 1
    g = rep.gammas[0]
    assert matmul(g, g) == identity(1)


def test_clifford_2_0():
    g1, g2 = clifford_rep(2, 0).gammas
    assert matmul(g1, g1) == identity(2) == matmul(g2, g2)
    assert matmul(g1, g2) == matscale(matmul(g2, g1), -1)


@pytest.mark.parametrize("p,q", [(p, q) for p in range(6) for q in range(6) if 1 <= p + q <= 5])
def test_clifford_relations(p, q):
    rep = clifford_rep(p, q)
    d = rep.spinor_dim
    for i, gi in enumerate(rep.gammas):
        for j, gj in enumerate(rep.gammas):
            anti = tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(matmul(gi, gj), matmul(gj, gi)))
            eta = rep.eta(i) if i == j else 0
            assert anti == matscale(identity(d), 2 * eta)


@pytest.mark.parametrize("p,q,dim", [(2, 0, GradedDim(1, 2)), (3, 0, GradedDim(3, 2)),
                                     (2, 1, GradedDim(3, 2)), (4, 0, GradedDim(6, 4))])
def test_spin_w_dims_and_closure(p, q, dim):
    g = spin_w_algebra(p, q)
    assert g.dim == dim
    assert is_subalgebra(g)


# --- super Jacobi --------------------------------------------------------

def _random_element(rng, g, parity):
    part = [e for e in g.elements if e.parity == parity]
    vp = g.vparities
    out = GlElement.from_rows([[0] * len(vp)] * len(vp), vp, parity)
    for e in part:
        out = out + e.scaled(rand_gr(rng))
    return out


ALGEBRAS = {
    "gl(2|1)": lambda: gl_algebra(2, 1),
    "osp(2|2)": lambda: osp_algebra(standard_even_form(2, 2)),
    "p(2)": lambda: p_algebra(standard_odd_form(2)),
    "spin_w(3,0)": lambda: spin_w_algebra(3, 0),
}


@pytest.mark.parametrize("name", ALGEBRAS)
def test_super_jacobi(name):
    g = ALGEBRAS[name]()
    rng = random.Random(name)
    sign = lambda a, b: -1 if (a.parity and b.parity) else 1
    for _ in range(100):
        A, B, C = (_random_element(rng, g, rng.randint(0, 1)) for _ in range(3))
        lhs = bracket(A, bracket(B, C))
        rhs = bracket(bracket(A, B), C) + bracket(B, bracket(A, C)).scaled(sign(A, B))
        assert (lhs - rhs).is_zero()
        assert g.contains(lhs)
