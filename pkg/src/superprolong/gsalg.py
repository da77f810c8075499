"""Exact graded linear algebra over Q and Q(i).

Vectors are tuples of scalars.  A complex subspace stores
:class:`GaussianRational` entries; a real subspace of a complex space lives in
realified coordinates, where complex slot ``k`` becomes the real slots
``2k`` (real part) and ``2k + 1`` (imaginary part), each carrying the parity of
slot ``k``.  Every subspace is kept in reduced row echelon form, so two
subspaces are equal exactly when their stored bases are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .gaussian import GaussianRational, ONE, ZERO, to_gr

__all__ = [
    "ParityError",
    "AmbientError",
    "GradedDim",
    "GradedSubspace",
    "MixedData",
    "MixedVerdict",
    "echelon",
    "kernel",
    "rank",
    "intersect",
    "subspace_sum",
    "realify",
    "real_span",
    "mul_i",
    "complex_vector",
    "check_mixed",
    "induced_complex_part",
    "model_space",
    "solve_sparse",
]

COMPLEX = "C"
REAL = "R"


class ParityError(ValueError):
    """A vector or map is not homogeneous with respect to the grading."""


class AmbientError(ValueError):
    """Operands live in different ambient spaces."""


@dataclass(frozen=True, order=True)
class GradedDim:
    even: int = 0
    odd: int = 0

    @property
    def total(self) -> int:
        return self.even + self.odd

    def __add__(self, other: "GradedDim") -> "GradedDim":
        return GradedDim(self.even + other.even, self.odd + other.odd)

    def __sub__(self, other: "GradedDim") -> "GradedDim":
        return GradedDim(self.even - other.even, self.odd - other.odd)

    def __str__(self) -> str:
        return f"{self.even}|{self.odd}"

    def as_list(self) -> list[int]:
        return [self.even, self.odd]


# ---------------------------------------------------------------------------
# sparse Gauss-Jordan elimination

def _axpy(row: dict, f, piv: dict) -> None:
    """row -= f * piv, dropping zeros."""
    for c, v in piv.items():
        nv = row.get(c, 0) - f * v
        if nv:
            row[c] = nv
        else:
            row.pop(c, None)


def _rref(rows: Iterable[dict]) -> dict[int, dict]:
    """Incremental Gauss-Jordan; returns {pivot column: reduced row}.

    Pivot entries are 1 and every pivot column is zero in all other rows, so
    the result is the unique reduced echelon form of the row span.
    """
    pivots: dict[int, dict] = {}
    for src in rows:
        row = {c: v for c, v in src.items() if v}
        for c in [c for c in row if c in pivots]:
            f = row.get(c)
            if f:
                _axpy(row, f, pivots[c])
        if not row:
            continue
        p = min(row)
        inv = 1 / row[p]
        if inv != 1:
            row = {c: v * inv for c, v in row.items()}
        for other in pivots.values():
            f = other.get(p)
            if f:
                _axpy(other, f, row)
        pivots[p] = row
    return pivots


def _all_real(rows: Sequence[dict]) -> bool:
    for r in rows:
        for v in r.values():
            if type(v) is GaussianRational and v.im:
                return False
    return True


def _to_fraction_rows(rows: Sequence[dict]) -> list[dict]:
    out = []
    for r in rows:
        out.append({c: (v.re if type(v) is GaussianRational else Fraction(v)) for c, v in r.items()})
    return out


def _rref_field(rows: Sequence[dict], field: str) -> tuple[dict[int, dict], bool]:
    """Eliminate over the given field.  Returns (pivots, computed_over_Q)."""
    if field == REAL or _all_real(rows):
        return _rref(_to_fraction_rows(rows)), True
    return _rref([{c: to_gr(v) for c, v in r.items()} for r in rows]), False


def _kernel_sparse(rows: Sequence[dict], cols: Sequence[int], field: str) -> list[dict]:
    """Kernel basis (as sparse dicts over ``cols``) of the equations ``rows``."""
    pivots, over_q = _rref_field(rows, field)
    one = Fraction(1) if (over_q or field == REAL) else ONE
    basis = []
    for f in cols:
        if f in pivots:
            continue
        vec = {f: one}
        for p, prow in pivots.items():
            v = prow.get(f)
            if v:
                vec[p] = -v
        basis.append(vec)
    if field == COMPLEX and over_q:
        basis = [{c: GaussianRational._new(v, Fraction(0)) for c, v in b.items()} for b in basis]
    return basis


def solve_sparse(rows: Sequence[dict], cols: Sequence[int], field: str = COMPLEX) -> list[dict]:
    """Basis of the solution space of homogeneous sparse equations.

    ``rows`` are dicts column -> coefficient; only columns in ``cols`` are
    unknowns.  The returned basis is not canonicalized.
    """
    return _kernel_sparse(rows, cols, field)


# ---------------------------------------------------------------------------
# graded subspaces

def _zero(field: str):
    return Fraction(0) if field == REAL else ZERO


def _coerce(v, field: str):
    if field == REAL:
        if type(v) is GaussianRational:
            if v.im:
                raise ValueError("complex entry in a real coordinate vector")
            return v.re
        return Fraction(v)
    return to_gr(v)


@dataclass(frozen=True)
class GradedSubspace:
    """Sub-super-vector-space of a graded coordinate space.

    ``parities`` tags each ambient slot 0 (even) or 1 (odd).  ``field`` is
    ``"C"`` for complex subspaces and ``"R"`` for real subspaces written in
    realified coordinates.
    """

    parities: tuple[int, ...]
    field: str
    basis_even: tuple[tuple, ...] = ()
    basis_odd: tuple[tuple, ...] = ()

    @property
    def ambient_dim(self) -> GradedDim:
        odd = sum(self.parities)
        return GradedDim(len(self.parities) - odd, odd)

    @property
    def dim(self) -> GradedDim:
        return GradedDim(len(self.basis_even), len(self.basis_odd))

    @property
    def basis(self) -> tuple[tuple, ...]:
        return self.basis_even + self.basis_odd

    def is_zero(self) -> bool:
        return not self.basis_even and not self.basis_odd

    def part(self, parity: int) -> tuple[tuple, ...]:
        return self.basis_odd if parity else self.basis_even

    def contains(self, v: Sequence) -> bool:
        return _in_span(self, v)

    def contains_subspace(self, other: "GradedSubspace") -> bool:
        _same_ambient(self, other)
        return all(self.contains(v) for v in other.basis)

    def coordinates(self, v: Sequence) -> list:
        """Coefficients of ``v`` w.r.t. ``self.basis`` (raises if not in span)."""
        coeffs = []
        rest = list(_coerce(x, self.field) for x in v)
        for b in self.basis:
            p = _leading(b)
            c = rest[p]
            coeffs.append(c)
            if c:
                for j, bj in enumerate(b):
                    if bj:
                        rest[j] = rest[j] - c * bj
        if any(rest):
            raise ValueError("vector is not in the subspace")
        return coeffs

    def __str__(self) -> str:
        return f"GradedSubspace({self.field}, dim {self.dim} in {self.ambient_dim})"


def _leading(v: Sequence) -> int:
    for j, x in enumerate(v):
        if x:
            return j
    raise ValueError("zero vector")


def _same_ambient(a: GradedSubspace, b: GradedSubspace) -> None:
    if a.parities != b.parities or a.field != b.field:
        raise AmbientError(
            f"ambient mismatch: {a.field}{a.ambient_dim} vs {b.field}{b.ambient_dim}"
        )


def _vector_parity(v: Sequence, parities: Sequence[int]) -> int | None:
    par = None
    for x, p in zip(v, parities):
        if x:
            if par is None:
                par = p
            elif par != p:
                raise ParityError("inhomogeneous vector: support meets both parities")
    return par


def _dense(row: dict, n: int, field: str) -> tuple:
    z = _zero(field)
    out = [z] * n
    for c, v in row.items():
        out[c] = v if field == REAL else to_gr(v)
    return tuple(out)


def echelon(vectors: Iterable[Sequence], parities: Sequence[int], field: str = COMPLEX) -> GradedSubspace:
    """Canonical reduced echelon basis of the span of ``vectors``.

    ``field="R"`` takes the real span; the vectors must then already be in
    realified coordinates (use :func:`real_span` for complex input).
    """
    parities = tuple(int(p) for p in parities)
    n = len(parities)
    groups: tuple[list, list] = ([], [])
    for v in vectors:
        if len(v) != n:
            raise ValueError(f"vector of length {len(v)} in ambient of dimension {n}")
        vv = [_coerce(x, field) for x in v]
        par = _vector_parity(vv, parities)
        if par is None:
            continue
        groups[par].append({j: x for j, x in enumerate(vv) if x})
    parts = []
    for rows in groups:
        if not rows:
            parts.append(())
            continue
        piv, over_q = _rref_field(rows, field)
        parts.append(tuple(_dense(piv[p], n, field) for p in sorted(piv)))
    return GradedSubspace(parities, field, parts[0], parts[1])


def zero_subspace(parities: Sequence[int], field: str = COMPLEX) -> GradedSubspace:
    return GradedSubspace(tuple(parities), field)


def full_space(parities: Sequence[int], field: str = COMPLEX) -> GradedSubspace:
    n = len(parities)
    one = Fraction(1) if field == REAL else ONE
    z = _zero(field)
    vecs = [tuple(one if j == k else z for j in range(n)) for k in range(n)]
    return echelon(vecs, parities, field)


def _in_span(S: GradedSubspace, v: Sequence) -> bool:
    try:
        S.coordinates(v)
    except ValueError:
        return False
    return True


def rank(matrix: Sequence[Sequence], field: str = COMPLEX) -> int:
    rows = [{j: x for j, x in enumerate(r) if x} for r in matrix]
    piv, _ = _rref_field(rows, field)
    return len(piv)


def kernel(matrix: Sequence[Sequence], col_parities: Sequence[int],
           row_parities: Sequence[int] | None = None, field: str = COMPLEX) -> GradedSubspace:
    """Graded kernel of a homogeneous matrix (rows = equations).

    When ``row_parities`` is given the matrix must map each column parity
    into a single row parity; this is what makes the kernel graded.
    """
    col_parities = tuple(int(p) for p in col_parities)
    ncols = len(col_parities)
    rows = []
    for r in matrix:
        if len(r) != ncols:
            raise ValueError("shape mismatch between matrix and column parities")
        rows.append({j: x for j, x in enumerate(r) if x})
    if row_parities is not None:
        if len(row_parities) != len(rows):
            raise ValueError("shape mismatch between matrix and row parities")
        shift = None
        for i, r in enumerate(rows):
            for j in r:
                s = (row_parities[i] + col_parities[j]) % 2
                if shift is None:
                    shift = s
                elif s != shift:
                    raise ParityError("matrix is not homogeneous")
    return graded_kernel(rows, col_parities, field)


def graded_kernel(rows: Sequence[dict], col_parities: Sequence[int], field: str = COMPLEX) -> GradedSubspace:
    """Kernel of sparse equations, solved separately on each column parity."""
    col_parities = tuple(col_parities)
    n = len(col_parities)
    parts = []
    for par in (0, 1):
        cols = [j for j in range(n) if col_parities[j] == par]
        colset = set(cols)
        sub = []
        for r in rows:
            rr = {c: v for c, v in r.items() if c in colset}
            if rr:
                sub.append(rr)
        ker = _kernel_sparse(sub, cols, field)
        if ker:
            piv, _ = _rref_field(ker, field)
            parts.append(tuple(_dense(piv[p], n, field) for p in sorted(piv)))
        else:
            parts.append(())
    return GradedSubspace(col_parities, field, parts[0], parts[1])


def subspace_sum(A: GradedSubspace, B: GradedSubspace) -> GradedSubspace:
    _same_ambient(A, B)
    return echelon(A.basis + B.basis, A.parities, A.field)


def intersect(A: GradedSubspace, B: GradedSubspace) -> GradedSubspace:
    """A ∩ B, computed parity by parity from B's defining equations on A."""
    _same_ambient(A, B)
    n = len(A.parities)
    out = []
    for par in (0, 1):
        a_vecs = A.part(par)
        b_vecs = B.part(par)
        if not a_vecs or not b_vecs:
            out.append(())
            continue
        # x = sum_i c_i a_i lies in B iff x_j = sum_p x_p b_p[j] off B's pivots
        piv_cols = [_leading(b) for b in b_vecs]
        pivset = set(piv_cols)
        slots = [j for j in range(n) if A.parities[j] == par and j not in pivset]
        rows = []
        for j in slots:
            row = {}
            for i, a in enumerate(a_vecs):
                v = a[j]
                for p, b in zip(piv_cols, b_vecs):
                    if b[j] and a[p]:
                        v = v - a[p] * b[j]
                if v:
                    row[i] = v
            if row:
                rows.append(row)
        combos = _kernel_sparse(rows, list(range(len(a_vecs))), A.field)
        vecs = []
        for c in combos:
            v = [_zero(A.field)] * n
            for i, ci in c.items():
                for j, aj in enumerate(a_vecs[i]):
                    if aj:
                        v[j] = v[j] + ci * aj
            vecs.append(v)
        out.append(echelon(vecs, A.parities, A.field).part(par))
    return GradedSubspace(A.parities, A.field, out[0], out[1])


# ---------------------------------------------------------------------------
# real structures

def realified_parities(parities: Sequence[int]) -> tuple[int, ...]:
    return tuple(p for p in parities for _ in (0, 1))


def realify_vector(v: Sequence) -> tuple:
    out = []
    for x in v:
        z = to_gr(x)
        out.append(z.re)
        out.append(z.im)
    return tuple(out)


def complex_vector(w: Sequence) -> tuple:
    """Inverse of realification: pairs of real slots back to Q(i) entries."""
    return tuple(GaussianRational(w[2 * k], w[2 * k + 1]) for k in range(len(w) // 2))


def _times_i_real(w: Sequence) -> tuple:
    out = []
    for k in range(len(w) // 2):
        a, b = w[2 * k], w[2 * k + 1]
        out.append(-b)
        out.append(a)
    return tuple(out)


def real_span(vectors: Iterable[Sequence], parities: Sequence[int]) -> GradedSubspace:
    """Real span of complex vectors, as a real subspace of the realified ambient."""
    return echelon([realify_vector(v) for v in vectors], realified_parities(parities), REAL)


def realify(S: GradedSubspace) -> GradedSubspace:
    """View a complex subspace as a real one: each basis vector v gives v and i*v."""
    if S.field != COMPLEX:
        raise ValueError("realify expects a complex subspace")
    vecs = []
    for v in S.basis:
        w = realify_vector(v)
        vecs.append(w)
        vecs.append(_times_i_real(w))
    return echelon(vecs, realified_parities(S.parities), REAL)


def mul_i(S: GradedSubspace) -> GradedSubspace:
    """i * S for a real subspace S of a complex space."""
    if S.field != REAL:
        raise ValueError("mul_i expects a real subspace in realified coordinates")
    return echelon([_times_i_real(v) for v in S.basis], S.parities, REAL)


def complex_parities(S: GradedSubspace) -> tuple[int, ...]:
    return S.parities[::2]


def complexify_span(S: GradedSubspace) -> GradedSubspace:
    """Complex span of a real subspace."""
    return echelon([complex_vector(v) for v in S.basis], complex_parities(S), COMPLEX)


def induced_complex_part(VR: GradedSubspace) -> GradedSubspace:
    """V_R ∩ i V_R, the largest complex subspace contained in V_R."""
    return intersect(VR, mul_i(VR))


# ---------------------------------------------------------------------------
# mixed super vector spaces

@dataclass(frozen=True)
class MixedData:
    """(V, V_R, V_C) with V_R and V_C stored as real subspaces of realified V.

    With ``enforce_odd`` (the default) the whole odd part of V is added to both
    V_R and V_C, as required for a mixed super vector space.
    """

    parities: tuple[int, ...]
    real: GradedSubspace
    cplx: GradedSubspace

    @classmethod
    def from_generators(cls, parities: Sequence[int], realgen: Iterable[Sequence],
                        cplxgen: Iterable[Sequence], enforce_odd: bool = True) -> "MixedData":
        parities = tuple(parities)
        realgen = [tuple(to_gr(x) for x in v) for v in realgen]
        cplxgen = [tuple(to_gr(x) for x in v) for v in cplxgen]
        if enforce_odd:
            n = len(parities)
            for k in range(n):
                if parities[k]:
                    e = tuple(ONE if j == k else ZERO for j in range(n))
                    cplxgen.append(e)
        real = real_span(realgen + _with_i(cplxgen), parities)
        cplx = realify(echelon(cplxgen, parities, COMPLEX))
        return cls(parities, real, cplx)

    @classmethod
    def from_real(cls, real: GradedSubspace, cplx: GradedSubspace | None = None) -> "MixedData":
        """Mixed data from a real subspace; V_C defaults to V_R ∩ i V_R."""
        if cplx is None:
            cplx = induced_complex_part(real)
        return cls(complex_parities(real), real, cplx)

    def transformed(self, T: Sequence[Sequence]) -> "MixedData":
        """Image under the complex-linear map with matrix T (acting on columns)."""
        def app(w):
            v = complex_vector(w)
            return tuple(sum((to_gr(T[r][c]) * v[c] for c in range(len(v))), ZERO) for r in range(len(T)))
        real = real_span([app(w) for w in self.real.basis], self.parities)
        cplx = real_span([app(w) for w in self.cplx.basis], self.parities)
        return MixedData(self.parities, real, cplx)


def _with_i(cplxgen):
    # complex generators contribute both v and i v to the real span
    out = []
    for v in cplxgen:
        out.append(v)
        out.append(tuple(x * GaussianRational(0, 1) for x in v))
    return out


def model_space(n1: int, n2: int, n_odd: int = 0) -> MixedData:
    """V = C^{n1+n2|n_odd} with V_R = R^{n1} x C^{n2} and V_C = C^{n2} (plus odd)."""
    n = n1 + n2 + n_odd
    parities = (0,) * (n1 + n2) + (1,) * n_odd
    real, cplx = [], []
    for k in range(n):
        e = tuple(ONE if j == k else ZERO for j in range(n))
        if k < n1:
            real.append(e)
        else:
            cplx.append(e)
    return MixedData.from_generators(parities, real, cplx)


@dataclass(frozen=True)
class MixedVerdict:
    valid: bool
    failed: str | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.valid


def check_mixed(d: MixedData) -> MixedVerdict:
    """Decide whether (V, V_R, V_C) is a mixed super vector space.

    Checks, in order: V_C ⊆ V_R, i V_C = V_C, V_R + i V_R = V and
    V_R ∩ i V_R = V_C.  The last two together say that
    C ⊗ (V_R / V_C) -> V / V_C is bijective.
    """
    VR, VC = d.real, d.cplx
    if not VR.contains_subspace(VC):
        return MixedVerdict(False, "containment", "V_C is not contained in V_R")
    iVC = mul_i(VC)
    if iVC != VC:
        return MixedVerdict(False, "i-invariance", "V_C is not closed under multiplication by i")
    iVR = mul_i(VR)
    total = full_space(VR.parities, REAL)
    s = subspace_sum(VR, iVR)
    if s != total:
        return MixedVerdict(
            False, "span",
            f"V_R + iV_R has real dimension {s.dim} but V has {total.dim}",
        )
    cap = intersect(VR, iVR)
    if cap != VC:
        return MixedVerdict(
            False, "intersection",
            f"V_R ∩ iV_R has real dimension {cap.dim} but V_C has {VC.dim}",
        )
    return MixedVerdict(True)
