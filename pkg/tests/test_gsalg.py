import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from superprolong.gaussian import I, ONE, ZERO, GaussianRational
from superprolong.gsalg import (
    GradedDim,
    MixedData,
    ParityError,
    check_mixed,
    echelon,
    induced_complex_part,
    intersect,
    kernel,
    model_space,
    mul_i,
    rank,
    real_span,
    realify,
    subspace_sum,
)
from superprolong.gsalg import full_space, zero_subspace

from conftest import gauss, rand_gr


def vec(*xs):
    return tuple(GaussianRational(x) if not isinstance(x, GaussianRational) else x for x in xs)


# --- echelon -------------------------------------------------------------

def test_echelon_spanning_set_of_full_space():
    S = echelon([(1, 0), (1, 1)], (0, 0))
    assert S.basis == (vec(1, 0), vec(0, 1))
    assert S.dim == GradedDim(2, 0)


def test_echelon_empty():
    S = echelon([], (0, 0))
    assert S.is_zero() and S.dim == GradedDim(0, 0)


def test_echelon_dependent_pair():
    S = echelon([(2, 4), (1, 2)], (0, 0))
    assert S.basis == (vec(1, 2),)
    assert S.dim == GradedDim(1, 0)


def test_echelon_rejects_inhomogeneous():
    with pytest.raises(ParityError):
        echelon([(1, 1)], (0, 1))


def test_echelon_splits_parities():
    S = echelon([(1, 0, 0), (0, 2, 3)], (0, 1, 1))
    assert S.dim == GradedDim(1, 1)


# --- kernel --------------------------------------------------------------

def test_kernel_identity_is_zero():
    Id = [[1 if i == j else 0 for j in range(3)] for i in range(3)]
    assert kernel(Id, (0, 0, 0)).is_zero()


def test_kernel_zero_map_is_everything():
    K = kernel([[0, 0, 0]], (0, 0, 1))
    assert K.dim == GradedDim(2, 1)


def test_kernel_rank_one():
    K = kernel([[1, 1], [2, 2]], (0, 0))
    assert K.basis == (vec(1, -1),)


def test_kernel_inhomogeneous_matrix():
    with pytest.raises(ParityError):
        kernel([[1, 1]], (0, 1), row_parities=(0,))


# --- intersect -----------------------------------------------------------

def test_intersect_examples():
    A = echelon([(1, 0), (0, 1)], (0, 0))
    B = echelon([(1, 1)], (0, 0))
    assert intersect(A, A) == A
    assert intersect(A, zero_subspace((0, 0))).is_zero()
    assert intersect(A, B) == B


# --- realification -------------------------------------------------------

def test_realify_line():
    R = realify(full_space((0,)))
    assert R.dim == GradedDim(2, 0)
    assert R == echelon([(1, 0), (0, 1)], (0, 0), "R")


def test_realify_zero():
    assert realify(zero_subspace((0, 0))).is_zero()


def test_realify_complex_line():
    R = realify(echelon([(ONE, I)], (0, 0)))
    assert R.dim.even == 2
    # (1, i) -> (1,0,0,1), i(1, i) = (i, -1) -> (0,1,-1,0)
    assert R == echelon([(1, 0, 0, 1), (0, 1, -1, 0)], (0, 0, 0, 0), "R")


def test_mul_i_examples():
    Rn = real_span([(1, 0), (0, 1)], (0, 0))
    iRn = mul_i(Rn)
    assert intersect(Rn, iRn).is_zero()
    F = full_space((0, 0, 0, 0), "R")
    assert mul_i(F) == F
    S = real_span([(1, 0), (I, 0)], (0, 0))
    assert mul_i(S) == S


# --- mixed data ----------------------------------------------------------

def test_model_spaces_are_mixed():
    for n1, n2, m in [(1, 0, 0), (0, 1, 0), (1, 1, 0), (2, 1, 2), (0, 0, 2)]:
        assert check_mixed(model_space(n1, n2, m)).valid


def test_totally_real_plane_is_valid():
    # R^2 in C^2 with V_C = 0 is the standard real form
    d = MixedData.from_generators((0, 0), [(1, 0), (0, 1)], [])
    assert check_mixed(d).valid


def test_half_real_line_fails_span():
    d = MixedData.from_generators((0, 0), [(1, 0)], [])
    v = check_mixed(d)
    assert not v.valid and v.failed == "span"


def test_complex_part_not_contained():
    base = model_space(2, 0)
    bad = MixedData(base.parities, base.real, realify(echelon([(1, 0)], (0, 0))))
    v = check_mixed(bad)
    assert not v.valid and v.failed == "containment"


def test_complex_part_not_i_invariant():
    base = model_space(2, 0)
    bad = MixedData(base.parities, base.real, real_span([(1, 0)], (0, 0)))
    v = check_mixed(bad)
    assert not v.valid and v.failed == "i-invariance"


def test_wrong_complex_part_fails_intersection():
    base = model_space(1, 1)
    bad = MixedData(base.parities, base.real, zero_subspace((0, 0, 0, 0), "R"))
    v = check_mixed(bad)
    assert not v.valid and v.failed == "intersection"


def test_induced_complex_part_examples():
    Rn = real_span([(1, 0, 0), (0, 1, 0), (0, 0, 1)], (0, 0, 0))
    assert induced_complex_part(Rn).is_zero()
    Cn = realify(full_space((0, 0, 0)))
    assert induced_complex_part(Cn) == Cn
    mixed = model_space(1, 1)
    assert induced_complex_part(mixed.real) == realify(echelon([(0, 1)], (0, 0)))


# --- properties ----------------------------------------------------------

PAR = (0, 0, 1, 1)


def graded_vectors(parities):
    n = len(parities)

    def build(p, xs):
        return tuple(x if parities[k] == p else ZERO for k, x in enumerate(xs))

    return st.lists(st.builds(build, st.sampled_from([0, 1]), st.lists(gauss, min_size=n, max_size=n)),
                    max_size=5)


@given(graded_vectors(PAR), graded_vectors(PAR))
def test_dimension_formula(a, b):
    A, B = echelon(a, PAR), echelon(b, PAR)
    lhs = subspace_sum(A, B).dim + intersect(A, B).dim
    assert lhs == A.dim + B.dim


@given(graded_vectors(PAR), st.randoms(use_true_random=False))
def test_echelon_is_a_projection(a, r):
    S = echelon(a, PAR)
    vecs = []
    for p in (0, 1):
        part = S.part(p)
        for _ in range(len(part) + 2):
            coeffs = [GaussianRational(r.randint(-3, 3), r.randint(-2, 2)) for _ in part]
            vecs.append(tuple(sum((c * v[k] for c, v in zip(coeffs, part)), ZERO) for k in range(len(PAR))))
        vecs.extend(part)
    r.shuffle(vecs)
    assert echelon(vecs, PAR) == S


@given(graded_vectors(PAR))
def test_realified_complex_space_is_i_invariant(a):
    R = realify(echelon(a, PAR))
    assert mul_i(R) == R
    assert induced_complex_part(R) == R


def _random_even_transform(rng, parities):
    n = len(parities)
    while True:
        T = [[rand_gr(rng) if parities[r] == parities[c] else ZERO for c in range(n)] for r in range(n)]
        if rank(T) == n:
            return T


MODELS = [(2, 0, 0), (1, 1, 0), (0, 2, 0), (1, 1, 1), (2, 0, 2)]


@pytest.mark.parametrize("n1,n2,m", MODELS)
def test_transformed_model_spaces_are_valid(n1, n2, m):
    rng = random.Random(100 * n1 + 10 * n2 + m)
    base = model_space(n1, n2, m)
    for _ in range(50):
        T = _random_even_transform(rng, base.parities)
        assert check_mixed(base.transformed(T)).valid


@pytest.mark.parametrize("n,m", [(2, 0), (3, 0), (2, 1)])
def test_real_subspaces_of_wrong_dimension_fail(n, m):
    rng = random.Random(7 * n + m)
    parities = (0,) * n + (1,) * m
    for _ in range(50):
        d = rng.randint(0, n - 1)
        gens = [tuple(rand_gr(rng) for _ in range(n)) + (ZERO,) * m for _ in range(d)]
        mixed = MixedData.from_generators(parities, gens, [])
        mixed = MixedData.from_real(mixed.real)
        v = check_mixed(mixed)
        assert not v.valid and v.failed == "span"
