"""Super vector fields X = Σ_k X^k ∂_k with coefficients on the left."""

from __future__ import annotations

from typing import Sequence

from ..gaussian import to_gr
from .grassmann import DomainMismatchError, GrassmannPoly

__all__ = ["ParityMismatchError", "SuperVectorField", "vf_apply", "vf_bracket", "is_even_real_vf"]


class ParityMismatchError(ValueError):
    pass


class SuperVectorField:
    """Homogeneous vector field on the superdomain R^{n|m}.

    The coefficient of ∂_{x_i} has parity |X|, that of ∂_{θ_j} parity |X|+1.
    """

    __slots__ = ("n_even", "n_odd", "coeffs", "parity")

    def __init__(self, coeffs: Sequence[GrassmannPoly], parity: int | None = None):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise ValueError("a vector field needs at least one coordinate")
        n, m = coeffs[0].dims
        if len(coeffs) != n + m:
            raise ValueError(f"expected {n + m} coefficients, got {len(coeffs)}")
        for c in coeffs:
            if c.dims != (n, m):
                raise DomainMismatchError("coefficients live on different superdomains")
        seen = set()
        for k, c in enumerate(coeffs):
            if not c:
                continue
            p = c.parity()
            if p is None:
                raise ParityMismatchError(f"coefficient {k} is not homogeneous")
            seen.add((p + (k >= n)) % 2)
        if len(seen) > 1:
            raise ParityMismatchError("coefficient parities are inconsistent with a homogeneous field")
        if parity is None:
            parity = seen.pop() if seen else 0
        elif seen and seen != {parity}:
            raise ParityMismatchError(f"coefficients give parity {seen.pop()}, declared {parity}")
        self.n_even, self.n_odd, self.coeffs, self.parity = n, m, coeffs, parity

    @classmethod
    def zero(cls, n_even: int, n_odd: int, parity: int = 0) -> "SuperVectorField":
        return cls([GrassmannPoly.zero(n_even, n_odd)] * (n_even + n_odd), parity)

    @classmethod
    def partial(cls, n_even: int, n_odd: int, k: int) -> "SuperVectorField":
        """The coordinate field ∂_k."""
        one = GrassmannPoly.const(n_even, n_odd, 1)
        zero = GrassmannPoly.zero(n_even, n_odd)
        return cls([one if j == k else zero for j in range(n_even + n_odd)], int(k >= n_even))

    @property
    def dims(self) -> tuple[int, int]:
        return self.n_even, self.n_odd

    def coord_parity(self, k: int) -> int:
        return int(k >= self.n_even)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def apply(self, f: GrassmannPoly) -> GrassmannPoly:
        if f.dims != self.dims:
            raise DomainMismatchError("function and field live on different superdomains")
        out = GrassmannPoly.zero(*self.dims)
        for k, c in enumerate(self.coeffs):
            if c:
                d = f.partial(k)
                if d:
                    out = out + c * d
        return out

    __call__ = apply

    def __add__(self, other: "SuperVectorField") -> "SuperVectorField":
        if other.dims != self.dims:
            raise DomainMismatchError("fields live on different superdomains")
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if other.parity != self.parity:
            raise ParityMismatchError("sum of fields of different parity")
        return SuperVectorField([a + b for a, b in zip(self.coeffs, other.coeffs)], self.parity)

    def __neg__(self):
        return SuperVectorField([-c for c in self.coeffs], self.parity)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "SuperVectorField":
        s = to_gr(s)
        return SuperVectorField([c.scale(s) for c in self.coeffs], self.parity)

    def times(self, f: GrassmannPoly) -> "SuperVectorField":
        """f·X for a homogeneous function f."""
        p = f.parity()
        if p is None:
            raise ParityMismatchError("multiplier is not homogeneous")
        return SuperVectorField([f * c for c in self.coeffs], (p + self.parity) % 2)

    def __eq__(self, other):
        if not isinstance(other, SuperVectorField):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return self.dims == other.dims
        return self.dims == other.dims and self.parity == other.parity and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.dims, self.coeffs))

    def is_real(self) -> bool:
        """Even-coordinate coefficients have real body."""
        return all(c.is_real() for c in self.coeffs[: self.n_even])

    def eval_body(self, point: Sequence) -> list:
        """X(p): the body of each coefficient at p."""
        return [c.eval_body(point) for c in self.coeffs]

    def degree(self) -> int:
        return max(c.degree() for c in self.coeffs)

    def to_expr(self, names: Sequence[str] | None = None) -> str:
        n, m = self.dims
        if names is None:
            names = [f"x{i + 1}" for i in range(n)] + [f"th{j + 1}" for j in range(m)]
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            parts.append(f"({c.to_expr(names)})*D[{names[k]}]")
        return " + ".join(parts) if parts else "0"

    def __str__(self):
        return self.to_expr()

    def __repr__(self):
        return f"SuperVectorField({self.n_even}|{self.n_odd}, parity={self.parity}: {self.to_expr()})"


def vf_apply(X: SuperVectorField, f: GrassmannPoly) -> GrassmannPoly:
    return X.apply(f)


def vf_bracket(X: SuperVectorField, Y: SuperVectorField) -> SuperVectorField:
    """[X, Y]^a = X(Y^a) - (-1)^{|X||Y|} Y(X^a)."""
    if X.dims != Y.dims:
        raise DomainMismatchError("fields live on different superdomains")
    sign = -1 if (X.parity and Y.parity) else 1
    coeffs = []
    for a in range(len(X.coeffs)):
        u = X.apply(Y.coeffs[a])
        w = Y.apply(X.coeffs[a])
        coeffs.append(u + w if sign < 0 else u - w)
    return SuperVectorField(coeffs, (X.parity + Y.parity) % 2)


def is_even_real_vf(X: SuperVectorField) -> bool:
    return X.parity == 0 and X.is_real()
