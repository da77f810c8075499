"""Matrix Lie superalgebras inside gl(V).

An element of gl(V) is flattened to coordinates indexed by ``c * N + r`` for
the matrix entry ``M[r][c]`` (source basis vector c, target basis vector r), so
gl(V) = Hom(V, V) uses the same ordering as every other Hom space in the
package.  The parity of that slot is ``|c| + |r|``.

Bilinear forms follow the convention J(v, w) = (-1)^{|v||w|} J(w, v); an odd
form pairs V_0 with V_1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .gaussian import GaussianRational, I, ONE, ZERO, to_gr
from .gsalg import (
    GradedDim,
    GradedSubspace,
    ParityError,
    echelon,
    graded_kernel,
    rank,
)

__all__ = [
    "GlElement",
    "SuperAlgebraBasis",
    "BilinearForm",
    "CliffordRep",
    "DegenerateFormError",
    "bracket",
    "is_subalgebra",
    "gl_algebra",
    "form_algebra",
    "osp_algebra",
    "p_algebra",
    "standard_even_form",
    "standard_odd_form",
    "clifford_rep",
    "spin_w_algebra",
    "generated_subalgebra",
    "conjugate_algebra",
    "v_parities",
]

Matrix = tuple[tuple[GaussianRational, ...], ...]


class DegenerateFormError(ValueError):
    """The bilinear form is degenerate, has the wrong shape, or the wrong symmetry."""


def v_parities(n_even: int, n_odd: int) -> tuple[int, ...]:
    return (0,) * n_even + (1,) * n_odd


# ---------------------------------------------------------------------------
# small exact matrix helpers

def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(tuple(to_gr(x) for x in r) for r in rows)


def zeros(n: int, m: int | None = None) -> Matrix:
    m = n if m is None else m
    return tuple((ZERO,) * m for _ in range(n))


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def matmul(A: Matrix, B: Matrix) -> Matrix:
    n, k = len(A), len(B)
    m = len(B[0]) if B else 0
    out = []
    for i in range(n):
        Ai = A[i]
        row = []
        for j in range(m):
            s = ZERO
            for t in range(k):
                a = Ai[t]
                if a:
                    b = B[t][j]
                    if b:
                        s = s + a * b
            row.append(s)
        out.append(tuple(row))
    return tuple(out)


def matadd(A: Matrix, B: Matrix, sb=1) -> Matrix:
    return tuple(tuple(a + sb * b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def matscale(A: Matrix, s) -> Matrix:
    return tuple(tuple(a * s for a in r) for r in A)


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A)) if A else ()


def matinv(A: Matrix) -> Matrix:
    n = len(A)
    M = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(A)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        inv = ONE / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return tuple(tuple(r[n:]) for r in M)


def flatten(M: Matrix) -> tuple:
    """gl(V) coordinates: slot c * N + r holds M[r][c]."""
    n = len(M)
    return tuple(M[r][c] for c in range(n) for r in range(n))


def unflatten(v: Sequence, n: int) -> Matrix:
    return tuple(tuple(to_gr(v[c * n + r]) for c in range(n)) for r in range(n))


def gl_parities(vpar: Sequence[int]) -> tuple[int, ...]:
    return tuple((vpar[c] + vpar[r]) % 2 for c in range(len(vpar)) for r in range(len(vpar)))


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GlElement:
    """Homogeneous element of gl(V); ``vparities`` grades the basis of V."""

    matrix: Matrix
    parity: int
    vparities: tuple[int, ...]

    def __post_init__(self):
        n = len(self.vparities)
        if len(self.matrix) != n or any(len(r) != n for r in self.matrix):
            raise ValueError(f"matrix must be {n}x{n}")
        for r in range(n):
            for c in range(n):
                if self.matrix[r][c] and (self.vparities[r] + self.vparities[c]) % 2 != self.parity:
                    raise ParityError(
                        f"entry ({r},{c}) violates the block structure of a "
                        f"{'odd' if self.parity else 'even'} element"
                    )

    @classmethod
    def from_rows(cls, rows, vparities: Sequence[int], parity: int | None = None) -> "GlElement":
        M = as_matrix(rows)
        vparities = tuple(vparities)
        if parity is None:
            pars = {(vparities[r] + vparities[c]) % 2
                    for r in range(len(M)) for c in range(len(M)) if M[r][c]}
            if len(pars) > 1:
                raise ParityError("matrix is not homogeneous")
            parity = pars.pop() if pars else 0
        return cls(M, parity, vparities)

    def __add__(self, other):
        return GlElement(matadd(self.matrix, other.matrix), self.parity, self.vparities)

    def __sub__(self, other):
        return GlElement(matadd(self.matrix, other.matrix, -1), self.parity, self.vparities)

    def scaled(self, s) -> "GlElement":
        return GlElement(matscale(self.matrix, to_gr(s)), self.parity, self.vparities)

    def is_zero(self) -> bool:
        return not any(x for r in self.matrix for x in r)

    def apply(self, v: Sequence) -> tuple:
        return tuple(sum((a * to_gr(x) for a, x in zip(row, v)), ZERO) for row in self.matrix)

    def flat(self) -> tuple:
        return flatten(self.matrix)


def bracket(A: GlElement, B: GlElement) -> GlElement:
    """[A, B] = AB - (-1)^{|A||B|} BA."""
    if A.vparities != B.vparities:
        raise ValueError("ambient mismatch in bracket")
    AB = matmul(A.matrix, B.matrix)
    BA = matmul(B.matrix, A.matrix)
    sign = -1 if (A.parity and B.parity) else 1
    return GlElement(matadd(AB, BA, -sign), (A.parity + B.parity) % 2, A.vparities)


@dataclass(frozen=True)
class SuperAlgebraBasis:
    """A graded subspace of gl(V), presented by its echelon basis."""

    vparities: tuple[int, ...]
    space: GradedSubspace
    name: str = ""

    @classmethod
    def from_elements(cls, vparities: Sequence[int], elements: Iterable, name: str = "") -> "SuperAlgebraBasis":
        vparities = tuple(vparities)
        vecs = []
        for e in elements:
            if isinstance(e, GlElement):
                if e.vparities != vparities:
                    raise ValueError("element lives on a different V")
                vecs.append(e.flat())
            else:
                vecs.append(flatten(as_matrix(e)))
        return cls(vparities, echelon(vecs, gl_parities(vparities)), name)

    @property
    def n(self) -> int:
        return len(self.vparities)

    @property
    def vdim(self) -> GradedDim:
        odd = sum(self.vparities)
        return GradedDim(self.n - odd, odd)

    @property
    def dim(self) -> GradedDim:
        return self.space.dim

    @property
    def elements(self) -> list[GlElement]:
        n = self.n
        out = [GlElement(unflatten(v, n), 0, self.vparities) for v in self.space.basis_even]
        out += [GlElement(unflatten(v, n), 1, self.vparities) for v in self.space.basis_odd]
        return out

    def contains(self, A: GlElement) -> bool:
        return self.space.contains(A.flat())

    def __str__(self) -> str:
        label = self.name or "algebra"
        return f"{label} ⊆ gl({self.vdim}), dim {self.dim}"


def is_subalgebra(S: SuperAlgebraBasis) -> bool:
    """True iff every bracket of basis elements stays in the span."""
    els = S.elements
    for i in range(len(els)):
        for j in range(i, len(els)):
            if not S.contains(bracket(els[i], els[j])):
                return False
    return True


def gl_algebra(n_even: int, n_odd: int) -> SuperAlgebraBasis:
    vp = v_parities(n_even, n_odd)
    n = len(vp)
    vecs = []
    for k in range(n * n):
        vecs.append(tuple(ONE if j == k else ZERO for j in range(n * n)))
    return SuperAlgebraBasis(vp, echelon(vecs, gl_parities(vp)), f"gl({n_even}|{n_odd})")


def zero_algebra(n_even: int, n_odd: int) -> SuperAlgebraBasis:
    vp = v_parities(n_even, n_odd)
    return SuperAlgebraBasis(vp, GradedSubspace(gl_parities(vp), "C"), "0")


def generated_subalgebra(vparities: Sequence[int], elements: Iterable[GlElement], name: str = "") -> SuperAlgebraBasis:
    """Smallest subalgebra containing the given homogeneous elements."""
    S = SuperAlgebraBasis.from_elements(vparities, elements, name)
    while True:
        els = S.elements
        new = [bracket(a, b) for i, a in enumerate(els) for b in els[i:]]
        new = [x for x in new if not S.contains(x)]
        if not new:
            return S
        S = SuperAlgebraBasis.from_elements(vparities, els + new, name)


def conjugate_algebra(S: SuperAlgebraBasis, T) -> SuperAlgebraBasis:
    """T^{-1} S T for an invertible even T."""
    T = as_matrix(T)
    Tinv = matinv(T)
    GlElement(T, 0, S.vparities)
    els = [GlElement(matmul(matmul(Tinv, e.matrix), T), e.parity, S.vparities) for e in S.elements]
    return SuperAlgebraBasis.from_elements(S.vparities, els, S.name)


# ---------------------------------------------------------------------------
# bilinear forms and their orthosymplectic / periplectic algebras

@dataclass(frozen=True)
class BilinearForm:
    matrix: Matrix
    parity: int
    vparities: tuple[int, ...]

    def __post_init__(self):
        J, vp, n = self.matrix, self.vparities, len(self.vparities)
        if len(J) != n or any(len(r) != n for r in J):
            raise DegenerateFormError(f"form must be {n}x{n}")
        for a in range(n):
            for b in range(n):
                if J[a][b] and (vp[a] + vp[b]) % 2 != self.parity:
                    raise DegenerateFormError(f"entry ({a},{b}) has the wrong parity")
                sign = -1 if (vp[a] and vp[b]) else 1
                if J[a][b] != sign * J[b][a]:
                    raise DegenerateFormError("form is not supersymmetric")
        if rank(J) != n:
            raise DegenerateFormError("form is degenerate")

    @classmethod
    def from_rows(cls, rows, vparities: Sequence[int], parity: int) -> "BilinearForm":
        return cls(as_matrix(rows), parity, tuple(vparities))

    def __call__(self, v: Sequence, w: Sequence):
        J = self.matrix
        return sum((to_gr(v[a]) * J[a][b] * to_gr(w[b])
                    for a in range(len(J)) for b in range(len(J)) if J[a][b]), ZERO)


def standard_even_form(m: int, n2: int) -> BilinearForm:
    """J_0 = identity on C^m and J_1 = [[0, I], [-I, 0]] on C^{n2}."""
    if n2 % 2:
        raise DegenerateFormError("an even form needs an even-dimensional odd part")
    n = n2 // 2
    size = m + n2
    J = [[0] * size for _ in range(size)]
    for i in range(m):
        J[i][i] = 1
    for i in range(n):
        J[m + i][m + n + i] = 1
        J[m + n + i][m + i] = -1
    return BilinearForm.from_rows(J, v_parities(m, n2), 0)


def standard_odd_form(n: int) -> BilinearForm:
    """Odd form pairing e_i (even) with f_i (odd): matrix [[0, I], [I, 0]]."""
    size = 2 * n
    J = [[0] * size for _ in range(size)]
    for i in range(n):
        J[i][n + i] = 1
        J[n + i][i] = 1
    return BilinearForm.from_rows(J, v_parities(n, n), 1)


def form_algebra(J: BilinearForm, name: str = "") -> SuperAlgebraBasis:
    """All A with J(Av, w) + (-1)^{|A||v|} J(v, Aw) = 0 for homogeneous v, w."""
    vp = J.vparities
    n = len(vp)
    Jm = J.matrix
    gp = gl_parities(vp)
    rows = []
    for par in (0, 1):
        for a in range(n):
            sign = -1 if (par and vp[a]) else 1
            for b in range(n):
                row: dict[int, GaussianRational] = {}
                # (A^T J)_ab = sum_c A[c][a] J[c][b]
                for c in range(n):
                    if Jm[c][b]:
                        k = a * n + c
                        if gp[k] == par:
                            row[k] = row.get(k, ZERO) + Jm[c][b]
                # (-1)^{par |a|} (J A)_ab = sum_c J[a][c] A[c][b]
                for c in range(n):
                    if Jm[a][c]:
                        k = b * n + c
                        if gp[k] == par:
                            row[k] = row.get(k, ZERO) + sign * Jm[a][c]
                row = {k: v for k, v in row.items() if v}
                if row:
                    rows.append(row)
    space = graded_kernel(rows, gp)
    return SuperAlgebraBasis(vp, space, name)


def osp_algebra(J: BilinearForm) -> SuperAlgebraBasis:
    if J.parity != 0:
        raise DegenerateFormError("osp needs an even form")
    odd = sum(J.vparities)
    return form_algebra(J, f"osp({len(J.vparities) - odd}|{odd})")


def p_algebra(J: BilinearForm) -> SuperAlgebraBasis:
    if J.parity != 1:
        raise DegenerateFormError("p needs an odd form")
    odd = sum(J.vparities)
    if 2 * odd != len(J.vparities):
        raise DegenerateFormError("an odd non-degenerate form needs dim V_0 = dim V_1")
    return form_algebra(J, f"p({odd})")


# ---------------------------------------------------------------------------
# Clifford modules and the spinor superization

@dataclass(frozen=True)
class CliffordRep:
    signature: tuple[int, int]
    gammas: tuple[Matrix, ...]

    @property
    def spinor_dim(self) -> int:
        return len(self.gammas[0]) if self.gammas else 1

    def eta(self, i: int) -> int:
        return 1 if i < self.signature[0] else -1

    def check_relations(self) -> bool:
        d = self.spinor_dim
        Id = identity(d)
        for i, gi in enumerate(self.gammas):
            for j, gj in enumerate(self.gammas):
                lhs = matadd(matmul(gi, gj), matmul(gj, gi))
                rhs = matscale(Id, 2 * self.eta(i)) if i == j else zeros(d)
                if lhs != rhs:
                    return False
        return True


_S1 = as_matrix([[0, 1], [1, 0]])
_S2 = as_matrix([[0, -I], [I, 0]])
_S3 = as_matrix([[1, 0], [0, -1]])


def kron(A: Matrix, B: Matrix) -> Matrix:
    return tuple(
        tuple(A[i][j] * B[k][l] for j in range(len(A[0])) for l in range(len(B[0])))
        for i in range(len(A)) for k in range(len(B))
    )


def _euclidean_gammas(n: int) -> list[Matrix]:
    """n anticommuting square-one matrices of size 2^{floor(n/2)}."""
    if n == 1:
        return [identity(1)]
    gammas, chir = [_S1, _S2], _S3
    k = 1
    while 2 * k < n - 1:
        Id = identity(len(chir))
        gammas = [kron(g, _S1) for g in gammas + [chir]] + [kron(Id, _S2)]
        chir = kron(Id, _S3)
        k += 1
    gammas = gammas + [chir]
    return gammas[:n]


def clifford_rep(p: int, q: int) -> CliffordRep:
    """Generators with g_i g_j + g_j g_i = 2 eta_ij, eta = diag(+1 x p, -1 x q)."""
    if p < 0 or q < 0 or p + q < 1:
        raise ValueError("need p, q >= 0 and p + q >= 1")
    gs = _euclidean_gammas(p + q)
    gs = gs[:p] + [matscale(g, I) for g in gs[p:]]
    return CliffordRep((p, q), tuple(gs))


def so_generator(k: int, l: int, eta: Sequence[int]) -> Matrix:
    """Generator of so(eta) paired with (1/2) g_k g_l under the spin map."""
    n = len(eta)
    M = [[ZERO] * n for _ in range(n)]
    M[k][l] = to_gr(eta[l])
    M[l][k] = to_gr(-eta[k])
    return as_matrix(M)


def spin_w_algebra(p: int, q: int = 0) -> SuperAlgebraBasis:
    """so(V_0) acting on V_0 ⊕ S by (standard, spin), plus W = {v ↦ v·s}.

    V_0 = C^{p+q} with the form diag(+1 x p, -1 x q) and V_1 = S the Clifford
    module of :func:`clifford_rep`.  The so-generator pairing e_k, e_l acts on
    spinors by (1/2) g_k g_l, which makes Clifford multiplication equivariant.
    """
    rep = clifford_rep(p, q)
    N, S = p + q, rep.spinor_dim
    eta = [rep.eta(i) for i in range(N)]
    vp = v_parities(N, S)
    size = N + S
    half = GaussianRational(Fraction(1, 2))
    els = []
    for k in range(N):
        for l in range(k + 1, N):
            a = so_generator(k, l, eta)
            rho = matscale(matmul(rep.gammas[k], rep.gammas[l]), half)
            M = [[ZERO] * size for _ in range(size)]
            for r in range(N):
                for c in range(N):
                    M[r][c] = a[r][c]
            for r in range(S):
                for c in range(S):
                    M[N + r][N + c] = rho[r][c]
            els.append(GlElement(as_matrix(M), 0, vp))
    for j in range(S):
        M = [[ZERO] * size for _ in range(size)]
        for i in range(N):
            for r in range(S):
                M[N + r][i] = rep.gammas[i][r][j]
        els.append(GlElement(as_matrix(M), 1, vp))
    return SuperAlgebraBasis.from_elements(vp, els, f"spin({p},{q})⋉W")
