"""Prolongation towers of matrix Lie superalgebras.

Level k of the tower is stored in the coordinates of Hom(V, g^(k-1)):
slot ``a * D + b`` is the coefficient of ``e_a^* ⊗ B_b``, where ``B_b`` runs
over the basis of level k-1 (even basis vectors first, then odd) and ``D`` is
its total dimension.  Level 0 is g itself in gl(V) coordinates, which are the
coordinates of Hom(V, V), so the recursion is uniform from level 0 upwards.

Real structures are carried level by level as real subspaces of the realified
coefficient space of each level (see :func:`hom_mu_real`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .gaussian import GaussianRational, ZERO, to_gr
from .gsalg import (
    GradedDim,
    GradedSubspace,
    MixedData,
    MixedVerdict,
    check_mixed,
    echelon,
    graded_kernel,
    induced_complex_part,
    realified_parities,
    complex_vector,
    _rref_field,
)
from .liesuper import GlElement, SuperAlgebraBasis, gl_parities

__all__ = [
    "ProlongationTower",
    "FiniteType",
    "Admissibility",
    "InvalidMixedDataError",
    "super_antisymmetrize",
    "antisym_pairs",
    "first_prolongation",
    "derivative_rank",
    "kth_prolongation",
    "finite_type",
    "h02_dimension",
    "hom_mu_real",
    "is_admissible",
    "level_in_gl",
    "DEFAULT_KMAX",
]

DEFAULT_KMAX = 8
HALF = GaussianRational(Fraction(1, 2))


class InvalidMixedDataError(ValueError):
    """The mixed data on V, or an induced level, is not a mixed structure."""


def antisym_pairs(vp: Sequence[int]) -> list[tuple[int, int]]:
    """Basis pairs of the super exterior square: p < q, plus (p, p) for odd p."""
    n = len(vp)
    return [(p, q) for p in range(n) for q in range(p, n) if p < q or vp[p]]


def hom_parities(vp: Sequence[int], target: Sequence[int]) -> tuple[int, ...]:
    return tuple((vp[a] + t) % 2 for a in range(len(vp)) for t in target)


def _basis_parities(space: GradedSubspace) -> tuple[int, ...]:
    d = space.dim
    return (0,) * d.even + (1,) * d.odd


# ---------------------------------------------------------------------------
# the super-antisymmetrizer

def super_antisymmetrize(S: Sequence[GlElement]) -> dict[tuple[int, int], tuple]:
    """(∂S)(v_p, v_q) = 1/2 (S(v_p) v_q - (-1)^{|p||q|} S(v_q) v_p).

    ``S`` lists the images S(e_a) of the basis vectors, each an element of
    gl(V) of the same parity.  The result maps every ordered pair of basis
    indices to a vector of V.
    """
    n = len(S)
    if n == 0:
        return {}
    vp = S[0].vparities
    if len(vp) != n:
        raise ValueError("S must assign an element of gl(V) to every basis vector of V")
    pars = {(s.parity + vp[a]) % 2 for a, s in enumerate(S) if not s.is_zero()}
    if len(pars) > 1:
        raise ValueError("S is not homogeneous")
    zero = (ZERO,) * n
    # S(e_p) e_q is column q of the matrix of S(e_p)
    cols = [None if s.is_zero() else [tuple(row[q] for row in s.matrix) for q in range(n)] for s in S]
    out = {}
    for p in range(n):
        for q in range(n):
            u = cols[p][q] if cols[p] else zero
            w = cols[q][p] if cols[q] else zero
            if vp[p] and vp[q]:
                out[(p, q)] = tuple(HALF * (x + y) for x, y in zip(u, w))
            else:
                out[(p, q)] = tuple(HALF * (x - y) for x, y in zip(u, w))
    return out


def _derivative_columns(g: SuperAlgebraBasis):
    """Columns of ∂ on the basis e_a^* ⊗ G_b of Hom(V, g), over Hom(Λ²V, V)."""
    vp = g.vparities
    n = len(vp)
    pairs = antisym_pairs(vp)
    els = g.elements
    zero = tuple((ZERO,) * n for _ in range(n))
    cols = []
    for a in range(n):
        for b, G in enumerate(els):
            S = [G if j == a else GlElement(zero, G.parity, vp) for j in range(n)]
            dS = super_antisymmetrize(S)
            col = {}
            for i, (p, q) in enumerate(pairs):
                for r, x in enumerate(dS[(p, q)]):
                    if x:
                        col[i * n + r] = x
            cols.append(col)
    row_par = tuple((vp[p] + vp[q] + vp[r]) % 2 for (p, q) in pairs for r in range(n))
    return cols, row_par


def _transpose_sparse(cols: list[dict]) -> list[dict]:
    rows: dict[int, dict] = {}
    for j, col in enumerate(cols):
        for i, v in col.items():
            rows.setdefault(i, {})[j] = v
    return [rows[i] for i in sorted(rows)]


def first_prolongation(g: SuperAlgebraBasis) -> GradedSubspace:
    """g^(1) = ker(∂ : Hom(V, g) -> Hom(Λ²V, V)), in Hom(V, g) coordinates."""
    cols, _ = _derivative_columns(g)
    col_par = hom_parities(g.vparities, _basis_parities(g.space))
    return graded_kernel(_transpose_sparse(cols), col_par)


def derivative_rank(g: SuperAlgebraBasis) -> GradedDim:
    """Rank of ∂ split by parity (∂ is even, so each parity is separate)."""
    cols, _ = _derivative_columns(g)
    col_par = hom_parities(g.vparities, _basis_parities(g.space))
    ranks = []
    for par in (0, 1):
        sub = [c for c, p in zip(cols, col_par) if p == par]
        piv, _ = _rref_field(_transpose_sparse(sub), "C")
        ranks.append(len(piv))
    return GradedDim(*ranks)


def h02_dimension(g: SuperAlgebraBasis) -> GradedDim:
    """dim coker ∂ = dim Hom(Λ²V, V) - rank ∂, by parity."""
    vp = g.vparities
    pairs = antisym_pairs(vp)
    row_par = [(vp[p] + vp[q] + vp[r]) % 2 for (p, q) in pairs for r in range(len(vp))]
    odd = sum(row_par)
    total = GradedDim(len(row_par) - odd, odd)
    return total - derivative_rank(g)


# ---------------------------------------------------------------------------
# the tower

def _symmetric_condition(vp: Sequence[int], prev: GradedSubspace, D_prev: int) -> list[dict]:
    """Equations X(v_a)(v_c) = (-1)^{|a||c|} X(v_c)(v_a) on Hom(V, prev).

    ``prev`` is the previous level in coordinates ``c * D_prev + d``.
    """
    n = len(vp)
    D = len(prev.basis)
    rows: dict[tuple[int, int, int], dict] = {}
    for b, B in enumerate(prev.basis):
        for idx, val in enumerate(B):
            if not val:
                continue
            c, d = divmod(idx, D_prev)
            for a in range(n):
                if a < c:
                    key, coef = (a, c, d), val
                elif a > c:
                    key = (c, a, d)
                    coef = val if (vp[a] and vp[c]) else -val
                elif vp[a]:
                    key, coef = (a, a, d), 2 * val
                else:
                    continue
                row = rows.setdefault(key, {})
                col = a * D + b
                nv = row.get(col, 0) + coef
                if nv:
                    row[col] = nv
                else:
                    row.pop(col, None)
    return [r for r in rows.values() if r]


@dataclass
class ProlongationTower:
    """Lazily computed levels g^(0) = g, g^(1), g^(2), ..."""

    g: SuperAlgebraBasis
    levels: list[GradedSubspace] = field(default_factory=list)

    def __post_init__(self):
        if not self.levels:
            self.levels.append(self.g.space)

    @property
    def vparities(self) -> tuple[int, ...]:
        return self.g.vparities

    def prev_dim(self, k: int) -> int:
        """Total dimension of level k-1 (level -1 is V)."""
        return len(self.vparities) if k == 0 else len(self.level(k - 1).basis)

    def level(self, k: int) -> GradedSubspace:
        if k < 0:
            raise ValueError("levels start at 0")
        while len(self.levels) <= k:
            j = len(self.levels)
            prev = self.levels[j - 1]
            vp = self.vparities
            if prev.is_zero():
                par = hom_parities(vp, ())
                self.levels.append(GradedSubspace(par, "C"))
                continue
            eqs = _symmetric_condition(vp, prev, self.prev_dim(j - 1))
            col_par = hom_parities(vp, _basis_parities(prev))
            self.levels.append(graded_kernel(eqs, col_par))
        return self.levels[k]

    def dims(self, kmax: int) -> list[GradedDim]:
        return [self.level(k).dim for k in range(kmax + 1)]


def kth_prolongation(tower: ProlongationTower, k: int) -> GradedSubspace:
    return tower.level(k)


def level_in_gl(g: SuperAlgebraBasis, level1: GradedSubspace) -> GradedSubspace:
    """Re-express a subspace of Hom(V, g) inside Hom(V, gl(V))."""
    n = len(g.vparities)
    gb = g.space.basis
    Dg = len(gb)
    vecs = []
    for x in level1.basis:
        out = [ZERO] * (n * n * n)
        for idx, val in enumerate(x):
            if not val:
                continue
            a, b = divmod(idx, Dg)
            for s, y in enumerate(gb[b]):
                if y:
                    out[a * n * n + s] = out[a * n * n + s] + val * y
        vecs.append(out)
    return echelon(vecs, hom_parities(g.vparities, gl_parities(g.vparities)))


# ---------------------------------------------------------------------------
# finite type

@dataclass(frozen=True)
class FiniteType:
    finite: bool
    k: int
    dims: tuple[GradedDim, ...]
    real_even_dims: tuple[int, ...] | None = None

    def __str__(self) -> str:
        return f"finite({self.k})" if self.finite else f"undecided({self.k})"


def finite_type(g: SuperAlgebraBasis, mixed: MixedData | None = None, kmax: int = DEFAULT_KMAX,
                tower: ProlongationTower | None = None) -> FiniteType:
    """finite(k) for the least k with g^(k) = 0, otherwise undecided(kmax).

    Vanishing of g^(k) forces every higher level to vanish, so finite(k) is a
    proof; a tower that has not vanished by kmax is never called infinite.
    """
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    tower = tower or ProlongationTower(g)
    dims = []
    for k in range(kmax + 1):
        dims.append(tower.level(k).dim)
        if tower.level(k).is_zero():
            break
    real = None
    if mixed is not None:
        adm = is_admissible(g, mixed, kmax, tower=tower)
        real = tuple(lv.real_even_dim for lv in adm.levels)
    if dims[-1].total == 0:
        return FiniteType(True, len(dims) - 1, tuple(dims), real)
    return FiniteType(False, kmax, tuple(dims), real)


# ---------------------------------------------------------------------------
# real prolongation and admissibility

@dataclass(frozen=True)
class LevelReal:
    """Mixed data on the coefficient space of one level (realified coordinates)."""

    real: GradedSubspace
    cplx: GradedSubspace


def _vector_mixed(mixed: MixedData) -> LevelReal:
    return LevelReal(mixed.real, mixed.cplx)


def _membership_rows(W: GradedSubspace) -> list[tuple[int, dict[int, Fraction]]]:
    """Linear forms vanishing exactly on W: for each non-pivot slot j,
    y_j - sum_p y_p W_p[j]."""
    piv = []
    for w in W.basis:
        p = next(j for j, x in enumerate(w) if x)
        piv.append((p, w))
    pivset = {p for p, _ in piv}
    forms = []
    for j in range(len(W.parities)):
        if j in pivset:
            continue
        form = {j: Fraction(1)}
        for p, w in piv:
            if w[j]:
                form[p] = -w[j]
        forms.append((j, form))
    return forms


def hom_mu_real(tower: ProlongationTower, k: int, mixed: MixedData,
                prev: LevelReal | None = None) -> GradedSubspace:
    """Real subspace of (g^(k))_0 of maps sending V_R into the real part and
    V_C into the complex part of level k-1.

    The result lives in realified coordinates of the coefficient space of the
    even basis of level k (slot 2b is Re, 2b+1 is Im of the b-th coefficient).
    ``prev`` is the mixed data of level k-1; for k = 0 it is V's own.
    """
    if prev is None:
        if k != 0:
            raise ValueError("pass the mixed data of the previous level")
        prev = _vector_mixed(mixed)
    vp = tower.vparities
    n = len(vp)
    level = tower.level(k)
    D = tower.prev_dim(k)
    even = level.basis_even
    K = len(even)
    if K == 0:
        return GradedSubspace((), "R")
    gens = []
    for W_sub, Vsub in ((prev.real, mixed.real), (prev.cplx, mixed.cplx)):
        forms = _membership_rows(W_sub)
        for w in Vsub.basis_even:
            gens.append((complex_vector(w), forms))
    rows = []
    for r, forms in gens:
        # c[b][d] = sum_a r_a B_b[a*D + d]
        cs = []
        for B in even:
            cb = {}
            for a, ra in enumerate(r):
                if not ra:
                    continue
                base = a * D
                for d in range(D):
                    x = B[base + d]
                    if x:
                        cb[d] = cb.get(d, ZERO) + ra * x
            cs.append(cb)
        for j, form in forms:
            row: dict[int, Fraction] = {}
            for slot, coef in form.items():
                d, im = divmod(slot, 2)
                for b, cb in enumerate(cs):
                    z = cb.get(d)
                    if not z:
                        continue
                    # Re f(r)_d = sum a_b Re z - b_b Im z ; Im = a_b Im z + b_b Re z
                    if im:
                        ca, cbeta = z.im, z.re
                    else:
                        ca, cbeta = z.re, -z.im
                    if ca:
                        row[2 * b] = row.get(2 * b, 0) + coef * ca
                    if cbeta:
                        row[2 * b + 1] = row.get(2 * b + 1, 0) + coef * cbeta
            row = {c: v for c, v in row.items() if v}
            if row:
                rows.append(row)
    return graded_kernel(rows, (0,) * (2 * K), "R")


def _full_level_real(level: GradedSubspace, WR: GradedSubspace, WC: GradedSubspace) -> LevelReal:
    """Extend even-part data by the whole (complex) odd part of the level."""
    K = level.dim.even
    total = len(level.basis)
    par = realified_parities(_basis_parities(level))

    def pad(vs):
        return [tuple(v) + (Fraction(0),) * (2 * (total - K)) for v in vs]

    odd_units = []
    for j in range(2 * K, 2 * total):
        odd_units.append(tuple(Fraction(1) if i == j else Fraction(0) for i in range(2 * total)))
    return LevelReal(
        echelon(pad(WR.basis) + odd_units, par, "R"),
        echelon(pad(WC.basis) + odd_units, par, "R"),
    )


@dataclass(frozen=True)
class LevelVerdict:
    k: int
    dim: GradedDim
    real_even_dim: int
    complex_even_dim: int
    verdict: MixedVerdict


@dataclass(frozen=True)
class Admissibility:
    status: str  # "admissible" | "inadmissible" | "undecided"
    k: int | None
    levels: tuple[LevelVerdict, ...]
    reason: str = ""

    def __str__(self) -> str:
        if self.status == "inadmissible":
            return f"inadmissible({self.k})"
        if self.status == "undecided":
            return f"undecided({self.k})"
        return "admissible"


def is_admissible(g: SuperAlgebraBasis, mixed: MixedData, kmax: int = DEFAULT_KMAX,
                  tower: ProlongationTower | None = None) -> Admissibility:
    """Check that (g^(k))_{0,R} defines a mixed structure at every level.

    Levels are examined until the tower vanishes (a zero space is trivially
    mixed) or kmax is passed, in which case the verdict is undecided.
    """
    if mixed.parities != g.vparities:
        raise InvalidMixedDataError("mixed data lives on a different V")
    base = check_mixed(mixed)
    if not base.valid:
        raise InvalidMixedDataError(f"mixed data on V is invalid: {base.message}")
    tower = tower or ProlongationTower(g)
    prev = _vector_mixed(mixed)
    out = []
    for k in range(kmax + 1):
        level = tower.level(k)
        if level.is_zero():
            return Admissibility("admissible", None, tuple(out))
        WR = hom_mu_real(tower, k, mixed, prev)
        WC = induced_complex_part(WR)
        K = level.dim.even
        verdict = check_mixed(MixedData((0,) * K, WR, WC))
        out.append(LevelVerdict(k, level.dim, WR.dim.even, WC.dim.even // 2, verdict))
        if not verdict.valid:
            return Admissibility("inadmissible", k, tuple(out), verdict.message)
        prev = _full_level_real(level, WR, WC)
    return Admissibility("undecided", kmax, tuple(out))
