"""Families of superdomain endomorphisms over odd parameters η_1..η_n.

A family is stored as the pullbacks φ♯(q_a) of the coordinates, polynomials on
the superdomain R^{N | n+M} whose first n odd generators are the parameters.
The decomposition follows

    φ♯ = P_n ∘ ... ∘ P_1 ∘ φ₀♯,   P_k = 1 + Σ_{k ∈ I ⊆ {1..k}} η^I X_I,

with φ₀ the η-free base map and X_I a vector field of parity |I| on the
superdomain (it does not differentiate in η).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Sequence

from ..gaussian import ZERO, to_gr
from ..liesuper import matinv
from .fields import SuperVectorField
from .grassmann import GrassmannPoly

__all__ = [
    "NotInvertibleError",
    "Family",
    "Decomposition",
    "affine_part",
    "polynomial_inverse",
    "compose",
    "family_decompose",
    "recompose",
    "all_fields_satisfy",
]


class NotInvertibleError(ValueError):
    pass


def affine_part(F: Sequence[GrassmannPoly]):
    """Constant term c and linear matrix L (L[a][b] = coefficient of q_b in F^a)."""
    n, m = F[0].dims
    N = n + m
    c = [F[a].eval_body((0,) * n) if a < n else ZERO for a in range(N)]
    L = [[ZERO] * N for _ in range(N)]
    for a in range(N):
        for (I, al), v in F[a].terms.items():
            if a < n and not I and sum(al) == 1:
                L[a][al.index(1)] = v
            elif a >= n and len(I) == 1 and not any(al):
                L[a][n + I[0]] = v
    return c, L


def _apply_matrix(L, qs):
    N = len(L)
    out = []
    for a in range(N):
        acc = GrassmannPoly.zero(*qs[0].dims)
        for b in range(N):
            if L[a][b]:
                acc = acc + qs[b].scale(L[a][b])
        out.append(acc)
    return out


def compose(F: Sequence[GrassmannPoly], G: Sequence[GrassmannPoly]) -> list[GrassmannPoly]:
    """Coordinates of F after substituting G: (F^a)(G)."""
    return [f.substitute(G) for f in F]


def polynomial_inverse(F: Sequence[GrassmannPoly], max_iter: int | None = None) -> list[GrassmannPoly]:
    """Polynomial inverse of a superdomain automorphism, if it exists.

    Iterates G <- G - L^{-1}(F(G) - q) from the affine inverse.  This
    terminates for maps whose nonlinear part is nilpotent relative to the
    affine part (triangular polynomial maps, any odd corrections).  Raises
    NotInvertibleError when the affine part is singular or no polynomial
    inverse turns up within the iteration budget.
    """
    F = list(F)
    n, m = F[0].dims
    N = n + m
    c, L = affine_part(F)
    try:
        Li = matinv(L)
    except (ZeroDivisionError, ValueError) as exc:
        raise NotInvertibleError("map is not invertible at body level") from exc
    q = [GrassmannPoly.coord(n, m, a) for a in range(N)]
    G = _apply_matrix(Li, [q[a] - c[a] for a in range(N)])
    if max_iter is None:
        deg = max(1, max(f.degree() for f in F))
        max_iter = (N + 1) * deg + m + 2
    for _ in range(max_iter):
        R = [fg - qa for fg, qa in zip(compose(F, G), q)]
        if not any(R):
            if any(a - b for a, b in zip(compose(G, F), q)):
                break
            return G
        corr = _apply_matrix(Li, R)
        G = [g - r for g, r in zip(G, corr)]
    raise NotInvertibleError("no polynomial inverse found (inverse is not polynomial)")


@dataclass
class Family:
    """φ♯(q_a) for a = 0..N-1 on R^{n_even | n_params + n_odd}."""

    n_params: int
    n_even: int
    n_odd: int
    images: tuple[GrassmannPoly, ...]

    def __post_init__(self):
        self.images = tuple(self.images)
        N = self.n_even + self.n_odd
        if len(self.images) != N:
            raise ValueError(f"expected {N} coordinate images, got {len(self.images)}")
        for a, f in enumerate(self.images):
            if f.dims != (self.n_even, self.n_params + self.n_odd):
                raise ValueError(f"image {a} lives on {f.dims}, not on the parameter superdomain")
            p = f.parity()
            if p is None or (f and p != int(a >= self.n_even)):
                raise ValueError(f"image of coordinate {a} has the wrong parity")

    @property
    def big_dims(self):
        return self.n_even, self.n_params + self.n_odd

    def lift(self, f: GrassmannPoly) -> GrassmannPoly:
        """Function on the base superdomain, viewed on the parameter superdomain."""
        return f.embed(self.n_even, self.n_params + self.n_odd, odd_offset=self.n_params)

    def coords(self) -> list[GrassmannPoly]:
        ne, no = self.big_dims
        return [GrassmannPoly.coord(ne, no, a if a < ne else a + self.n_params)
                for a in range(self.n_even + self.n_odd)]

    def base(self) -> list[GrassmannPoly]:
        """φ₀: set every η to zero, drop the η slots."""
        out = []
        for f in self.images:
            g = f.set_odd_zero(range(self.n_params))
            terms = {(tuple(i - self.n_params for i in I), a): v for (I, a), v in g.terms.items()}
            out.append(GrassmannPoly._raw(self.n_even, self.n_odd, terms))
        return out

    def __eq__(self, other):
        return (isinstance(other, Family) and self.big_dims == other.big_dims
                and self.n_params == other.n_params and self.images == other.images)


@dataclass
class Decomposition:
    base: list[GrassmannPoly]
    fields: dict[tuple[int, ...], SuperVectorField]


def _lift_field(fam: Family, X: SuperVectorField) -> SuperVectorField:
    """X on the parameter superdomain, with zero ∂_η components."""
    ne, no = fam.big_dims
    zero = GrassmannPoly.zero(ne, no)
    coeffs = [fam.lift(c) for c in X.coeffs]
    coeffs = coeffs[: fam.n_even] + [zero] * fam.n_params + coeffs[fam.n_even:]
    return SuperVectorField(coeffs, X.parity)


def _eta(fam: Family, I) -> GrassmannPoly:
    ne, no = fam.big_dims
    return GrassmannPoly._raw(ne, no, {(tuple(I), (0,) * ne): to_gr(1)})


def _apply_P(fam: Family, k: int, fields, f: GrassmannPoly) -> GrassmannPoly:
    """P_k f = f + Σ_{k ∈ I} η^I X_I(f), I ⊆ {1..k} (0-based: contains k-1)."""
    out = f
    for I, X in fields.items():
        if max(I) != k - 1:
            continue
        out = out + _eta(fam, I) * _lift_field(fam, X).apply(f)
    return out


def recompose(n_params: int, base: Sequence[GrassmannPoly], fields: dict) -> Family:
    """Build φ♯(q_a) = P_n ∘ ... ∘ P_1 (φ₀♯ q_a)."""
    n_even, n_odd = base[0].dims
    fam = Family(n_params, n_even, n_odd,
                 [b.embed(n_even, n_params + n_odd, odd_offset=n_params) for b in base])
    imgs = list(fam.images)
    for k in range(1, n_params + 1):
        imgs = [_apply_P(fam, k, fields, f) for f in imgs]
    return Family(n_params, n_even, n_odd, imgs)


def _coefficient_of_eta(fam: Family, f: GrassmannPoly, I) -> GrassmannPoly:
    """The η-free g with η^I g the η^I-part of f (η's sit left of θ's)."""
    I = tuple(I)
    p = fam.n_params
    terms = {}
    for (J, a), v in f.terms.items():
        if tuple(j for j in J if j < p) == I:
            terms[(tuple(j - p for j in J if j >= p), a)] = v
    return GrassmannPoly._raw(fam.n_even, fam.n_odd, terms)


def family_decompose(fam: Family) -> Decomposition:
    """Recover φ₀ and the fields X_I; the result recomposes to fam exactly."""
    base = fam.base()
    psi = polynomial_inverse(base)
    # Q(q_a) = ψ^a(φ♯ q) with Q = P_n ∘ ... ∘ P_1
    Q = [g.substitute(list(fam.images)) for g in psi]
    fields: dict[tuple[int, ...], SuperVectorField] = {}
    p = fam.n_params
    for k in range(p, 0, -1):
        Qprev = [f.set_odd_zero([k - 1]) for f in Q]
        D = [a - b for a, b in zip(Q, Qprev)]
        sets = [I for r in range(1, k + 1) for I in combinations(range(k), r) if k - 1 in I]
        found: dict = {}
        for I in sets:
            coeffs = []
            for a in range(fam.n_even + fam.n_odd):
                R = D[a]
                for J, X in found.items():
                    R = R - _eta(fam, J) * _lift_field(fam, X).apply(Qprev[a])
                coeffs.append(_coefficient_of_eta(fam, R, I))
            found[I] = SuperVectorField(coeffs, len(I) % 2)
        fields.update(found)
        Q = Qprev
    dec = Decomposition(base, dict(sorted(fields.items(), key=lambda kv: (len(kv[0]), kv[0]))))
    if recompose(p, base, dec.fields) != fam:
        raise NotInvertibleError("family does not recompose; input is not a family of automorphisms")
    return dec


def all_fields_satisfy(dec: Decomposition, test: Callable[[SuperVectorField], bool]) -> bool:
    """Companion predicate: every X_I passes the supplied infinitesimal test."""
    return all(test(X) for X in dec.fields.values())
