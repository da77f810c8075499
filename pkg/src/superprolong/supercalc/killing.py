"""Infinitesimal automorphisms on flat superdomains by polynomial ansatz.

Every solver turns a linear PDE in the coefficients of X into a finite linear
system over the monomial fields ``x^alpha θ^I ∂_k`` with total x-degree at most
``max_degree`` and all θ orders, and solves it exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Callable, Sequence

from ..gaussian import ZERO, to_gr
from ..gsalg import GradedDim, graded_kernel, rank
from ..liesuper import BilinearForm, DegenerateFormError
from .fields import SuperVectorField, vf_bracket
from .grassmann import GrassmannPoly

__all__ = [
    "DegenerateFrameError",
    "KillingResult",
    "ansatz_basis",
    "solve_field_equations",
    "killing_parallelization",
    "killing_metric",
    "standard_frame",
    "pushforward_frame",
    "evaluation_rank",
    "is_bracket_closed",
    "frame_matrix",
    "jacobian",
    "is_parallelization_automorphism",
]


class DegenerateFrameError(ValueError):
    pass


def _exponents(n: int, d: int):
    """All exponent vectors in n variables of total degree <= d, graded."""
    out = []
    for tot in range(d + 1):
        for a in product(range(tot + 1), repeat=n):
            if sum(a) == tot:
                out.append(a)
    return out if n else [()]


def ansatz_basis(n: int, m: int, parity: int, max_degree: int) -> list[SuperVectorField]:
    """Monomial fields x^alpha θ^I ∂_k of the given parity."""
    subsets = [I for r in range(m + 1) for I in combinations(range(m), r)]
    exps = _exponents(n, max_degree)
    zero = GrassmannPoly.zero(n, m)
    out = []
    for k in range(n + m):
        want = (parity + (k >= n)) % 2
        for I in subsets:
            if len(I) % 2 != want:
                continue
            for a in exps:
                c = [zero] * (n + m)
                c[k] = GrassmannPoly._raw(n, m, {(I, a): to_gr(1)})
                out.append(SuperVectorField(c, parity))
    return out


def _flatten_field(X: SuperVectorField, tag=()) -> dict:
    out = {}
    for k, c in enumerate(X.coeffs):
        for key, v in c.terms.items():
            out[(tag, k, key)] = v
    return out


def _combine(basis, coeffs, n, m, parity) -> SuperVectorField:
    acc = [GrassmannPoly.zero(n, m) for _ in range(n + m)]
    for b, c in zip(basis, coeffs):
        if not c:
            continue
        for k, bk in enumerate(b.coeffs):
            if bk:
                acc[k] = acc[k] + bk.scale(c)
    return SuperVectorField(acc, parity)


@dataclass
class KillingResult:
    even: list[SuperVectorField]
    odd: list[SuperVectorField]
    max_degree: int
    tail_zero: bool

    @property
    def dim(self) -> GradedDim:
        return GradedDim(len(self.even), len(self.odd))

    @property
    def basis(self) -> list[SuperVectorField]:
        return self.even + self.odd


def solve_field_equations(n: int, m: int, max_degree: int,
                          equations: Callable[[SuperVectorField], dict]) -> KillingResult:
    """Solve a linear system ``equations(X) = 0`` over the polynomial ansatz.

    ``equations`` maps a monomial field to a sparse dict of equation values;
    it must be linear.  Solutions come back echelonized in ansatz coordinates,
    one parity at a time.
    """
    found = {}
    tail = True
    for parity in (0, 1):
        basis = ansatz_basis(n, m, parity, max_degree)
        rows: dict = {}
        for j, b in enumerate(basis):
            for key, v in equations(b).items():
                if v:
                    rows.setdefault(key, {})[j] = v
        eqs = [rows[k] for k in sorted(rows, key=repr)]
        sol = graded_kernel(eqs, (0,) * len(basis))
        fields = [_combine(basis, vec, n, m, parity) for vec in sol.basis]
        found[parity] = fields
        if any(X.degree() >= max_degree for X in fields) and max_degree > 0:
            tail = False
    return KillingResult(found[0], found[1], max_degree, tail)


def standard_frame(n: int, m: int) -> list[SuperVectorField]:
    return [SuperVectorField.partial(n, m, k) for k in range(n + m)]


def frame_matrix(frame: Sequence[SuperVectorField]) -> list[list[GrassmannPoly]]:
    """A with E_i = Σ_j A_ij ∂_j."""
    return [list(E.coeffs) for E in frame]


def _check_frame(frame: Sequence[SuperVectorField], points) -> tuple[int, int]:
    if not frame:
        raise DegenerateFrameError("empty frame")
    n, m = frame[0].dims
    if len(frame) != n + m:
        raise DegenerateFrameError(f"a frame on R^{n}|{m} needs {n + m} fields, got {len(frame)}")
    for i, E in enumerate(frame):
        if E.dims != (n, m):
            raise DegenerateFrameError("frame fields live on different superdomains")
        if E.parity != int(i >= n):
            raise DegenerateFrameError(f"frame field {i} has parity {E.parity}")
    for p in points:
        M = [E.eval_body(p) for E in frame]
        if rank(M) < n + m:
            raise DegenerateFrameError(f"frame is not invertible at body point {list(map(str, p))}")
    return n, m


def killing_parallelization(frame: Sequence[SuperVectorField], max_degree: int = 2,
                            points: Sequence[Sequence] | None = None) -> KillingResult:
    """Fields X with [X, E_i] = 0 for every frame field, both parities."""
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    n = frame[0].n_even if frame else 0
    if points is None:
        points = [(0,) * n]
    n, m = _check_frame(frame, points)

    def eqs(b):
        out = {}
        for i, E in enumerate(frame):
            out.update(_flatten_field(vf_bracket(b, E), i))
        return out

    return solve_field_equations(n, m, max_degree, eqs)


def _metric_pair(J: list[list], Y: SuperVectorField, Z: SuperVectorField, n: int) -> GrassmannPoly:
    """g(Y, Z) = Σ Y^c (-1)^{|Z^d||c|} Z^d J_cd for a constant metric J."""
    N = len(J)
    out = GrassmannPoly.zero(*Y.dims)
    for c in range(N):
        yc = Y.coeffs[c]
        if not yc:
            continue
        for d in range(N):
            if not J[c][d]:
                continue
            zd = Z.coeffs[d]
            if not zd:
                continue
            s = -1 if (c >= n and zd.parity()) else 1
            out = out + (yc * zd).scale(J[c][d] * s)
    return out


def killing_metric(J: BilinearForm, max_degree: int = 2) -> KillingResult:
    """Super Killing fields of the flat metric J on R^{n|m}.

    Solves (L_X g)(∂_a, ∂_b) = -g([X,∂_a],∂_b) - (-1)^{|X||a|} g(∂_a,[X,∂_b]) = 0
    (the X(J_ab) term drops since J is constant).
    """
    if J.parity != 0:
        raise DegenerateFormError("killing_metric needs an even metric")
    vp = J.vparities
    n = sum(1 for p in vp if p == 0)
    m = len(vp) - n
    if list(vp) != [0] * n + [1] * m:
        raise ValueError("coordinates must be ordered even before odd")
    if max_degree < 1:
        raise ValueError("the ansatz needs degree at least 1")
    M = [[to_gr(x) for x in row] for row in J.matrix]
    parts = [SuperVectorField.partial(n, m, a) for a in range(n + m)]

    def eqs(X):
        out = {}
        brs = [vf_bracket(X, P) for P in parts]
        for a in range(n + m):
            for b in range(n + m):
                s = -1 if (X.parity and a >= n) else 1
                val = _metric_pair(M, brs[a], parts[b], n) + _metric_pair(M, parts[a], brs[b], n).scale(s)
                for key, v in val.terms.items():
                    out[(a, b, key)] = v
        return out

    return solve_field_equations(n, m, max_degree, eqs)


def pushforward_frame(F: Sequence[GrassmannPoly], Finv: Sequence[GrassmannPoly]) -> list[SuperVectorField]:
    """Frame E_a with E_a(q_b) = (∂_a F^b)∘F^{-1}: the standard frame moved by F."""
    n, m = F[0].dims
    frame = []
    for a in range(n + m):
        coeffs = [F[b].partial(a).substitute(Finv) for b in range(n + m)]
        frame.append(SuperVectorField(coeffs, int(a >= n)))
    return frame


def evaluation_rank(fields: Sequence[SuperVectorField], point: Sequence) -> int:
    """Rank of the matrix of values X(p) (rows) at a body point."""
    if not fields:
        return 0
    return rank([X.eval_body(point) for X in fields])


def is_bracket_closed(result: KillingResult) -> bool:
    """Every bracket of solution fields lies in the solution span."""
    basis = result.basis
    if not basis:
        return True
    n, m = basis[0].dims
    keys = {}

    def vec(X):
        v = {}
        for key, c in _flatten_field(X).items():
            j = keys.setdefault(key, len(keys))
            v[j] = c
        return v

    span = [vec(X) for X in basis]
    for X in basis:
        for Y in basis:
            Z = vf_bracket(X, Y)
            if Z.is_zero():
                continue
            z = vec(Z)
            N = len(keys)
            dense = [[r.get(j, ZERO) for j in range(N)] for r in span]
            if rank(dense + [[z.get(j, ZERO) for j in range(N)]]) != rank(dense):
                return False
    return True


def jacobian(f: Sequence[GrassmannPoly]) -> list[list[GrassmannPoly]]:
    """Jf_ij = ∂_{p_i} f♯(q_j)."""
    N = len(f)
    return [[f[j].partial(i) for j in range(N)] for i in range(N)]


def _matmul(A, B):
    N = len(A)
    K = len(B[0])
    out = []
    for i in range(N):
        row = []
        for j in range(K):
            acc = GrassmannPoly.zero(*A[0][0].dims)
            for k in range(len(B)):
                if A[i][k] and B[k][j]:
                    acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(row)
    return out


def is_parallelization_automorphism(f: Sequence[GrassmannPoly], A: Sequence[Sequence[GrassmannPoly]]) -> bool:
    """Test Jf = A^{-1} f♯(A) in the equivalent form A·Jf = f♯(A).

    ``f`` lists the pullbacks f♯(q_j) of the coordinates; ``A`` is the frame
    coefficient matrix (E_i = Σ_j A_ij ∂_j).
    """
    f = list(f)
    if not f:
        raise ValueError("empty coordinate map")
    n, m = f[0].dims
    if len(f) != n + m:
        raise ValueError(f"a map of R^{n}|{m} needs {n + m} coordinate images")
    for j, g in enumerate(f):
        if g.dims != (n, m):
            raise ValueError("coordinate images live on different superdomains")
        p = g.parity()
        if p is None or (g and p != int(j >= n)):
            raise ValueError(f"image of coordinate {j} has the wrong parity")
    if len(A) != n + m or any(len(r) != n + m for r in A):
        raise ValueError("frame matrix has the wrong shape")
    lhs = _matmul([list(r) for r in A], jacobian(f))
    rhs = [[a.substitute(f) for a in row] for row in A]
    return all(x == y for rl, rr in zip(lhs, rhs) for x, y in zip(rl, rr))
