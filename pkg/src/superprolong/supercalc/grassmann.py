"""Exact Grassmann polynomials: polynomials in x_1..x_n tensored with the
exterior algebra on θ_1..θ_m.

A term is keyed by ``(I, alpha)`` where ``I`` is a strictly increasing tuple of
odd generator indices (0-based) and ``alpha`` the exponent vector of the even
coordinates.  The term stands for ``c * x^alpha * θ^I`` with
``θ^I = θ_{i1} θ_{i2} ...`` in increasing order.

Coordinates are numbered globally: ``0..n-1`` are the even coordinates,
``n..n+m-1`` the odd ones.  Odd derivatives are left derivatives.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ..gaussian import GaussianRational, ONE, ZERO, format_gr, to_gr

__all__ = [
    "DomainMismatchError",
    "GrassmannPoly",
    "merge_sign",
    "gp_add",
    "gp_mul",
    "gp_scale",
    "gp_partial",
]


class DomainMismatchError(ValueError):
    pass


def merge_sign(I: Sequence[int], J: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign and index set of θ^I θ^J; sign 0 when they share a generator."""
    if not I:
        return 1, tuple(J)
    if not J:
        return 1, tuple(I)
    sI = set(I)
    if sI.intersection(J):
        return 0, ()
    # count pairs (i in I, j in J) with i > j
    inv = 0
    for j in J:
        for i in I:
            if i > j:
                inv += 1
    return (-1 if inv & 1 else 1), tuple(sorted((*I, *J)))


class GrassmannPoly:
    __slots__ = ("n_even", "n_odd", "terms")

    def __init__(self, n_even: int, n_odd: int, terms: Mapping | None = None):
        self.n_even = n_even
        self.n_odd = n_odd
        clean = {}
        if terms:
            for (I, alpha), c in terms.items():
                c = to_gr(c)
                if not c:
                    continue
                I = tuple(I)
                alpha = tuple(alpha)
                if len(alpha) != n_even or any(a < 0 for a in alpha):
                    raise ValueError(f"bad exponent vector {alpha}")
                if any(I[k] >= I[k + 1] for k in range(len(I) - 1)) or any(not 0 <= i < n_odd for i in I):
                    raise ValueError(f"odd multi-index {I} is not strictly increasing in range")
                clean[(I, alpha)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, n_even, n_odd, terms):
        obj = object.__new__(cls)
        obj.n_even, obj.n_odd, obj.terms = n_even, n_odd, terms
        return obj

    # constructors

    @classmethod
    def zero(cls, n_even: int, n_odd: int) -> "GrassmannPoly":
        return cls._raw(n_even, n_odd, {})

    @classmethod
    def const(cls, n_even: int, n_odd: int, c=1) -> "GrassmannPoly":
        c = to_gr(c)
        return cls._raw(n_even, n_odd, {((), (0,) * n_even): c} if c else {})

    @classmethod
    def coord(cls, n_even: int, n_odd: int, k: int) -> "GrassmannPoly":
        """The k-th coordinate function (even coordinates first)."""
        if k < n_even:
            alpha = tuple(1 if j == k else 0 for j in range(n_even))
            return cls._raw(n_even, n_odd, {((), alpha): ONE})
        if k < n_even + n_odd:
            return cls._raw(n_even, n_odd, {((k - n_even,), (0,) * n_even): ONE})
        raise IndexError(f"coordinate {k} out of range")

    @classmethod
    def monomial(cls, n_even, n_odd, I, alpha, c=1) -> "GrassmannPoly":
        return cls(n_even, n_odd, {(tuple(I), tuple(alpha)): c})

    # basic queries

    @property
    def dims(self) -> tuple[int, int]:
        return self.n_even, self.n_odd

    def _check(self, other: "GrassmannPoly") -> None:
        if (self.n_even, self.n_odd) != (other.n_even, other.n_odd):
            raise DomainMismatchError(
                f"superdomain {self.n_even}|{self.n_odd} vs {other.n_even}|{other.n_odd}")

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def parity(self) -> int | None:
        """0 or 1 for homogeneous polynomials (zero counts as even), else None."""
        ps = {len(I) % 2 for I, _ in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def degree(self) -> int:
        """Total degree in the even coordinates (-1 for zero)."""
        return max((sum(a) for _, a in self.terms), default=-1)

    def odd_order(self) -> int:
        return max((len(I) for I, _ in self.terms), default=-1)

    def body(self) -> dict[tuple[int, ...], GaussianRational]:
        return {a: c for (I, a), c in self.terms.items() if not I}

    def body_poly(self) -> "GrassmannPoly":
        return GrassmannPoly._raw(self.n_even, self.n_odd,
                                  {k: c for k, c in self.terms.items() if not k[0]})

    def is_real(self) -> bool:
        """Real superfunction: the body has real coefficients."""
        return all(c.is_real() for c in self.body().values())

    def has_real_coefficients(self) -> bool:
        return all(c.is_real() for c in self.terms.values())

    def coefficient(self, I: Sequence[int]) -> "GrassmannPoly":
        """The polynomial in x multiplying θ^I."""
        I = tuple(I)
        return GrassmannPoly._raw(self.n_even, self.n_odd,
                                  {((), a): c for (J, a), c in self.terms.items() if J == I})

    def odd_support(self) -> list[tuple[int, ...]]:
        return sorted({I for I, _ in self.terms}, key=lambda I: (len(I), I))

    def eval_body(self, point: Sequence) -> GaussianRational:
        """Exact value of the body at a rational point."""
        pt = [to_gr(p) for p in point]
        total = ZERO
        for (I, a), c in self.terms.items():
            if I:
                continue
            v = c
            for p, e in zip(pt, a):
                if e:
                    v = v * p ** e
            total = total + v
        return total

    # arithmetic

    def __add__(self, other):
        if not isinstance(other, GrassmannPoly):
            other = GrassmannPoly.const(self.n_even, self.n_odd, other)
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v = v + c
                if v:
                    out[k] = v
                else:
                    del out[k]
        return GrassmannPoly._raw(self.n_even, self.n_odd, out)

    __radd__ = __add__

    def __neg__(self):
        return GrassmannPoly._raw(self.n_even, self.n_odd, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, GrassmannPoly):
            other = GrassmannPoly.const(self.n_even, self.n_odd, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s) -> "GrassmannPoly":
        s = to_gr(s)
        if not s:
            return GrassmannPoly.zero(self.n_even, self.n_odd)
        return GrassmannPoly._raw(self.n_even, self.n_odd, {k: c * s for k, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, GrassmannPoly):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for (I, a), c in self.terms.items():
            for (J, b), d in other.terms.items():
                sign, K = merge_sign(I, J)
                if not sign:
                    continue
                key = (K, tuple(x + y for x, y in zip(a, b)))
                v = c * d if sign > 0 else -(c * d)
                w = out.get(key)
                if w is None:
                    out[key] = v
                else:
                    w = w + v
                    if w:
                        out[key] = w
                    else:
                        del out[key]
        return GrassmannPoly._raw(self.n_even, self.n_odd, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = GrassmannPoly.const(self.n_even, self.n_odd, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, GrassmannPoly):
            return self.dims == other.dims and self.terms == other.terms
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self == GrassmannPoly.const(self.n_even, self.n_odd, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.n_even, self.n_odd, frozenset(self.terms.items())))

    # calculus

    def partial(self, k: int) -> "GrassmannPoly":
        """∂/∂(coordinate k); odd coordinates use the left derivative."""
        n = self.n_even
        out: dict = {}
        if k < n:
            for (I, a), c in self.terms.items():
                e = a[k]
                if not e:
                    continue
                b = a[:k] + (e - 1,) + a[k + 1:]
                out[(I, b)] = c * e
        elif k < n + self.n_odd:
            j = k - n
            for (I, a), c in self.terms.items():
                if j not in I:
                    continue
                pos = I.index(j)
                out[(I[:pos] + I[pos + 1:], a)] = -c if pos & 1 else c
        else:
            raise IndexError(f"coordinate {k} out of range")
        return GrassmannPoly._raw(self.n_even, self.n_odd, out)

    def substitute(self, images: Sequence["GrassmannPoly"]) -> "GrassmannPoly":
        """Composition: replace coordinate k by images[k].

        The images live on a (possibly different) target superdomain; even
        coordinates must go to even elements and odd ones to odd elements.
        """
        if len(images) != self.n_even + self.n_odd:
            raise ValueError("need one image per coordinate")
        if not images:
            return self
        tgt = images[0]
        for k, g in enumerate(images):
            tgt._check(g)
            want = 0 if k < self.n_even else 1
            p = g.parity()
            if p is None or (g and p != want):
                raise ValueError(f"image of coordinate {k} has the wrong parity")
        powers: dict = {}

        def pw(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = images[i] ** e
            return powers[key]

        one = GrassmannPoly.const(tgt.n_even, tgt.n_odd, 1)
        out = GrassmannPoly.zero(tgt.n_even, tgt.n_odd)
        for (I, a), c in self.terms.items():
            t = one.scale(c)
            for i, e in enumerate(a):
                if e:
                    t = t * pw(i, e)
            for j in I:
                t = t * images[self.n_even + j]
            out = out + t
        return out

    def set_odd_zero(self, js: Iterable[int]) -> "GrassmannPoly":
        """Set the listed odd generators to zero."""
        js = set(js)
        return GrassmannPoly._raw(self.n_even, self.n_odd,
                                  {k: c for k, c in self.terms.items() if not js.intersection(k[0])})

    def embed(self, n_even: int, n_odd: int, odd_offset: int = 0, even_offset: int = 0) -> "GrassmannPoly":
        """View as a polynomial on a larger superdomain with shifted indices."""
        if n_even < self.n_even + even_offset or n_odd < self.n_odd + odd_offset:
            raise ValueError("target superdomain too small")
        out = {}
        for (I, a), c in self.terms.items():
            b = (0,) * even_offset + a + (0,) * (n_even - self.n_even - even_offset)
            out[(tuple(i + odd_offset for i in I), b)] = c
        return GrassmannPoly._raw(n_even, n_odd, out)

    # printing

    def sorted_terms(self):
        return sorted(self.terms.items(),
                      key=lambda kv: (len(kv[0][0]), kv[0][0], -sum(kv[0][1]), tuple(-e for e in kv[0][1])))

    def to_expr(self, names: Sequence[str] | None = None) -> str:
        """Render in the expression language (x1.., th1..)."""
        if names is None:
            names = [f"x{i + 1}" for i in range(self.n_even)] + [f"th{j + 1}" for j in range(self.n_odd)]
        if not self.terms:
            return "0"
        parts = []
        for (I, a), c in self.sorted_terms():
            factors = []
            for i, e in enumerate(a):
                if e == 1:
                    factors.append(names[i])
                elif e:
                    factors.append(f"{names[i]}^{e}")
            factors += [names[self.n_even + j] for j in I]
            neg = False
            if c.is_real():
                neg = c.re < 0
                mag = format_gr(-c if neg else c)
            elif not c.re:
                neg = c.im < 0
                mag = format_gr(-c if neg else c)
            else:
                mag = f"({format_gr(c)})"
            if factors:
                body = "*".join(factors) if mag == "1" else mag + "*" + "*".join(factors)
            else:
                body = mag
            parts.append(("-" if neg else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __str__(self):
        return self.to_expr()

    def __repr__(self):
        return f"GrassmannPoly({self.n_even}|{self.n_odd}: {self.to_expr()})"


def gp_add(f: GrassmannPoly, g: GrassmannPoly) -> GrassmannPoly:
    return f + g


def gp_mul(f: GrassmannPoly, g: GrassmannPoly) -> GrassmannPoly:
    return f * g


def gp_scale(f: GrassmannPoly, s) -> GrassmannPoly:
    return f.scale(s)


def gp_partial(f: GrassmannPoly, coord: int) -> GrassmannPoly:
    return f.partial(coord)
