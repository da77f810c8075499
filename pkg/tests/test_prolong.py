import random
from fractions import Fraction

import pytest

from superprolong.gaussian import ZERO, GaussianRational
from superprolong.gsalg import GradedDim, MixedData, check_mixed, induced_complex_part, model_space, rank
from superprolong.liesuper import (
    GlElement,
    SuperAlgebraBasis,
    conjugate_algebra,
    gl_algebra,
    osp_algebra,
    p_algebra,
    spin_w_algebra,
    standard_even_form,
    standard_odd_form,
    v_parities,
    zero_algebra,
)
from superprolong.prolong import (
    InvalidMixedDataError,
    ProlongationTower,
    antisym_pairs,
    derivative_rank,
    finite_type,
    first_prolongation,
    h02_dimension,
    hom_mu_real,
    is_admissible,
    kth_prolongation,
    level_in_gl,
    super_antisymmetrize,
)

from conftest import rand_gr, random_subalgebras

HALF = GaussianRational(Fraction(1, 2))


def zero_el(vp, par=0):
    n = len(vp)
    return GlElement.from_rows([[0] * n for _ in range(n)], vp, par)


# --- the antisymmetrizer -------------------------------------------------

def test_symmetric_S_is_killed():
    vp = (0, 0)
    # S(e1)(e2) = S(e2)(e1) = e1 + e2
    S = [GlElement.from_rows([[1, 1], [0, 1]], vp), GlElement.from_rows([[1, 0], [1, 0]], vp)]
    dS = super_antisymmetrize(S)
    assert all(not any(v) for v in dS.values())


def test_odd_odd_pair_symmetrizes():
    vp = (1, 1)
    S = [GlElement.from_rows([[0, 1], [0, 0]], vp), GlElement.from_rows([[0, 0], [3, 0]], vp)]
    dS = super_antisymmetrize(S)
    # S(v)w = (1, 0), S(w)v = (0, 3)
    assert dS[(0, 1)] == (HALF, HALF * 3)
    assert dS[(0, 1)] == dS[(1, 0)]


def test_e12_example():
    vp = (0, 0)
    S = [GlElement.from_rows([[0, 1], [0, 0]], vp), zero_el(vp)]
    assert super_antisymmetrize(S)[(0, 1)] == (HALF, ZERO)


def test_antisym_pairs_include_odd_diagonal():
    assert antisym_pairs((0, 1)) == [(0, 1), (1, 1)]


# --- first prolongation and the tower ------------------------------------

def test_gl1_first_prolongation():
    assert first_prolongation(gl_algebra(1, 0)).dim == GradedDim(1, 0)


def test_zero_algebra_tower():
    t = ProlongationTower(zero_algebra(2, 1))
    assert all(t.level(k).is_zero() for k in range(4))


def test_gl1_never_terminates():
    t = ProlongationTower(gl_algebra(1, 0))
    assert [d.total for d in t.dims(6)] == [1] * 7
    assert str(finite_type(gl_algebra(1, 0), kmax=6)) == "undecided(6)"


@pytest.mark.parametrize("n", [1, 2, 3])
def test_gl_n_first_prolongation(n):
    assert first_prolongation(gl_algebra(n, 0)).dim == GradedDim(n * n * (n + 1) // 2, 0)


def test_finite_type_of_zero_algebra():
    ft = finite_type(zero_algebra(2, 0))
    assert ft.finite and ft.k == 0


def test_spin_w_3_0_finite():
    ft = finite_type(spin_w_algebra(3, 0))
    assert ft.finite and ft.k >= 1
    assert str(ft) == "finite(1)"


def test_kmax_validated():
    with pytest.raises(ValueError):
        finite_type(gl_algebra(1, 0), kmax=0)


# --- H^{0,2} -------------------------------------------------------------

def _hom_lambda2(vp):
    n = len(vp)
    pairs = antisym_pairs(vp)
    par = [(vp[p] + vp[q] + vp[r]) % 2 for (p, q) in pairs for r in range(n)]
    return GradedDim(len(par) - sum(par), sum(par))


def _hom(vp, g):
    # e_a^* (x) G_b is even iff |a| = |G_b|
    ge, go = g.dim.even, g.dim.odd
    even = sum(ge if p == 0 else go for p in vp)
    total = len(vp) * g.dim.total
    return GradedDim(even, total - even)


@pytest.mark.parametrize("ne,no", [(2, 0), (1, 1), (2, 1)])
def test_h02_of_gl_vanishes(ne, no):
    assert h02_dimension(gl_algebra(ne, no)).total == 0


@pytest.mark.parametrize("ne,no", [(2, 0), (1, 1), (3, 0)])
def test_h02_of_zero_is_everything(ne, no):
    vp = v_parities(ne, no)
    assert h02_dimension(zero_algebra(ne, no)) == _hom_lambda2(vp)


def test_h02_osp3():
    g = osp_algebra(standard_even_form(3, 0))
    assert first_prolongation(g).is_zero()
    expected = _hom_lambda2(g.vparities) - _hom(g.vparities, g)
    assert h02_dimension(g) == expected


# --- real structure ------------------------------------------------------

def _level0_real(g, mixed):
    t = ProlongationTower(g)
    return t, hom_mu_real(t, 0, mixed)


def test_totally_real_gives_full_real_form():
    g = gl_algebra(2, 0)
    _, W = _level0_real(g, model_space(2, 0))
    assert W.dim.even == g.dim.even
    K = g.dim.even
    assert check_mixed(MixedData((0,) * K, W, induced_complex_part(W))).valid


def test_fully_complex_gives_realification():
    g = gl_algebra(2, 0)
    _, W = _level0_real(g, model_space(0, 2))
    assert W.dim.even == 2 * g.dim.even


def test_osp_mixed_real_even_dim():
    g = osp_algebra(standard_even_form(2, 2))
    _, W = _level0_real(g, model_space(2, 0, 2))
    # o(2, R) plus sp(2, C) viewed really
    assert W.dim.even == 1 + 6


def test_hom_mu_real_needs_previous_level():
    g = gl_algebra(1, 0)
    t = ProlongationTower(g)
    with pytest.raises(ValueError):
        hom_mu_real(t, 1, model_space(1, 0))


def test_osp_admissible_on_model_space():
    adm = is_admissible(osp_algebra(standard_even_form(2, 2)), model_space(2, 0, 2))
    assert adm.status == "admissible" and str(adm) == "admissible"
    assert adm.levels[0].real_even_dim == 7


def test_gl_on_strictly_mixed_space_fails_span():
    adm = is_admissible(gl_algebra(2, 0), model_space(1, 1))
    assert str(adm) == "inadmissible(0)"
    assert adm.levels[0].verdict.failed == "span"


def test_gl1_real_admissibility_is_undecided():
    adm = is_admissible(gl_algebra(1, 0), model_space(1, 0), kmax=4)
    assert str(adm) == "undecided(4)"


def test_invalid_mixed_input_rejected():
    bad = MixedData.from_generators((0, 0), [(1, 0)], [])
    with pytest.raises(InvalidMixedDataError):
        is_admissible(gl_algebra(2, 0), bad)
    with pytest.raises(InvalidMixedDataError):
        is_admissible(gl_algebra(2, 0), model_space(1, 0))


# --- invariants ----------------------------------------------------------

CONSTRUCTORS = {
    "gl(1|0)": lambda: gl_algebra(1, 0),
    "gl(2|0)": lambda: gl_algebra(2, 0),
    "gl(1|1)": lambda: gl_algebra(1, 1),
    "gl(2|1)": lambda: gl_algebra(2, 1),
    "osp(2|2)": lambda: osp_algebra(standard_even_form(2, 2)),
    "osp(3|0)": lambda: osp_algebra(standard_even_form(3, 0)),
    "osp(1|2)": lambda: osp_algebra(standard_even_form(1, 2)),
    "p(1)": lambda: p_algebra(standard_odd_form(1)),
    "p(2)": lambda: p_algebra(standard_odd_form(2)),
    "spin_w(2,0)": lambda: spin_w_algebra(2, 0),
    "spin_w(3,0)": lambda: spin_w_algebra(3, 0),
    "zero(2|1)": lambda: zero_algebra(2, 1),
}


@pytest.mark.parametrize("name", CONSTRUCTORS)
def test_definition_agreement_constructors(name):
    g = CONSTRUCTORS[name]()
    assert first_prolongation(g) == kth_prolongation(ProlongationTower(g), 1)


@pytest.mark.parametrize("idx", range(10))
def test_definition_agreement_random(idx):
    g = random_subalgebras(2024)[idx]
    assert first_prolongation(g) == kth_prolongation(ProlongationTower(g), 1)


@pytest.mark.parametrize("name", CONSTRUCTORS)
def test_truncation(name):
    t = ProlongationTower(CONSTRUCTORS[name]())
    dims = t.dims(4)
    for a, b in zip(dims, dims[1:]):
        if a.total == 0:
            assert b.total == 0


@pytest.mark.parametrize("name", CONSTRUCTORS)
def test_rank_nullity(name):
    g = CONSTRUCTORS[name]()
    vp = g.vparities
    r = derivative_rank(g)
    assert _hom(vp, g) == first_prolongation(g).dim + r
    assert h02_dimension(g) == _hom_lambda2(vp) - r


@pytest.mark.parametrize("m,n2", [(2, 0), (3, 0), (2, 2), (1, 2)])
def test_monotonicity_osp_in_gl(m, n2):
    h = osp_algebra(standard_even_form(m, n2))
    g = gl_algebra(m, n2)
    big = level_in_gl(g, first_prolongation(g))
    assert big.contains_subspace(level_in_gl(h, first_prolongation(h)))


def test_monotonicity_nontrivial():
    # diagonal matrices inside gl(2): nonzero first prolongation
    vp = (0, 0)
    h = SuperAlgebraBasis.from_elements(vp, [[[1, 0], [0, 0]], [[0, 0], [0, 1]]])
    g = gl_algebra(2, 0)
    small = level_in_gl(h, first_prolongation(h))
    assert not small.is_zero()
    assert level_in_gl(g, first_prolongation(g)).contains_subspace(small)


def _random_even_T(rng, vp):
    n = len(vp)
    while True:
        T = [[rand_gr(rng) if vp[r] == vp[c] else ZERO for c in range(n)] for r in range(n)]
        if rank(T) == n:
            return T


@pytest.mark.parametrize("which", ["gl(1|1)", "random"])
def test_equivariance(which):
    rng = random.Random(which)
    if which == "random":
        g = next(h for h in random_subalgebras(5) if not first_prolongation(h).is_zero())
    else:
        g = CONSTRUCTORS[which]()
    d = first_prolongation(g).dim
    for _ in range(20):
        T = _random_even_T(rng, g.vparities)
        assert first_prolongation(conjugate_algebra(g, T)).dim == d
