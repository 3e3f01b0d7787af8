"""Triangular sets and reduction to normal form.

A triangular set (T_1, ..., T_m) has each T_l monic of degree d_l >= 1 in
x_l, involving only x_1..x_l, with every x_l-coefficient reduced below the
degrees of the earlier polynomials.  ``normal_form`` computes the unique
reduced representative of a residue class modulo the generated ideal;
``mod_mul`` multiplies inside the quotient.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .poly import (
    Poly,
    as_poly,
    coeffs_in,
    degree,
    is_zero,
    lead_coeff,
    make_poly,
    poly_mul,
    poly_sub,
    top_var,
    variables_in,
)

_ZERO = Fraction(0)


class TriangularSet:
    """Ordered monic triangular family; may be empty.

    Validation is lazy and cached: ``violations()`` returns a list of
    human-readable invariant breaches (empty when the set is well formed).
    """

    __slots__ = ("polys", "degrees", "_violations", "_tails")

    def __init__(self, polys: Iterable = ()):
        self.polys = tuple(as_poly(p) for p in polys)
        self.degrees = tuple(degree(p, l + 1) for l, p in enumerate(self.polys))
        self._violations = None
        self._tails = None

    def __len__(self):
        return len(self.polys)

    def __eq__(self, other):
        if isinstance(other, TriangularSet):
            return self.polys == other.polys
        return NotImplemented

    def __hash__(self):
        return hash(self.polys)

    def __repr__(self):
        return f"TriangularSet({', '.join(repr(p) for p in self.polys)})"

    def violations(self) -> list:
        if self._violations is None:
            self._violations = _check(self)
        return list(self._violations)

    @property
    def ok(self) -> bool:
        return not self.violations()

    def require_valid(self) -> None:
        v = self.violations()
        if v:
            raise ValueError("invalid triangular set: " + "; ".join(v))

    def prefix(self, m: int) -> "TriangularSet":
        return TriangularSet(self.polys[:m])

    def _tail(self, level: int) -> tuple:
        # x_level-coefficients of T_level below the leading 1
        if self._tails is None:
            self._tails = [None] * len(self.polys)
        if self._tails[level - 1] is None:
            self._tails[level - 1] = tuple(coeffs_in(self.polys[level - 1], level)[:-1])
        return self._tails[level - 1]


def validate_triangular(ts: TriangularSet) -> list:
    """List of invariant violations; empty means the set is well formed."""
    return ts.violations()


def _check(ts: TriangularSet) -> list:
    out = []
    for l, p in enumerate(ts.polys, start=1):
        if isinstance(p, Fraction) or top_var(p) != l:
            out.append(f"T{l} is not a polynomial with top variable x{l}")
            continue
        d = degree(p, l)
        if d < 1:
            out.append(f"T{l} has degree {d} < 1 in x{l}")
            continue
        if lead_coeff(p, l) != 1:
            out.append(f"T{l} is not monic in x{l}")
        extra = [v for v in variables_in(p) if v > l]
        if extra:
            out.append(f"T{l} involves variables above x{l}: {sorted(extra)}")
        for k, c in enumerate(coeffs_in(p, l)):
            for j in range(1, l):
                dj = ts.degrees[j - 1]
                if degree(c, j) >= dj >= 1:
                    out.append(
                        f"coefficient of x{l}^{k} in T{l} has degree"
                        f" {degree(c, j)} >= d{j} = {dj} in x{j}"
                    )
    return out


def normal_form(f, ts: TriangularSet) -> Poly:
    """Unique reduced representative of ``f`` modulo the ideal of ``ts``.

    ``f`` may involve the variables covered by the set plus at most one
    higher variable, whose coefficients are then reduced.
    """
    ts.require_valid()
    f = as_poly(f)
    if top_var(f) > len(ts.polys) + 1:
        raise ValueError(
            f"x{top_var(f)} is more than one level above the triangular set ({len(ts.polys)} polynomials)"
        )
    return _nf(f, ts)


def _nf(f: Poly, ts: TriangularSet) -> Poly:
    if isinstance(f, Fraction):
        return f
    v = f.var
    if v > len(ts.polys):
        return make_poly(v, [_nf(c, ts) for c in f.coeffs])
    d = ts.degrees[v - 1]
    cs = list(f.coeffs)
    if len(cs) > d:
        tail = ts._tail(v)
        for k in range(len(cs) - 1, d - 1, -1):
            # Replacing the coefficient by its normal form before expanding
            # only drops an ideal multiple, so the residue class is kept.
            c = _nf(cs[k], ts)
            cs[k] = _ZERO
            if is_zero(c):
                continue
            base = k - d
            for j, tj in enumerate(tail):
                if not is_zero(tj):
                    cs[base + j] = poly_sub(cs[base + j], poly_mul(c, tj))
        del cs[d:]
    return make_poly(v, [_nf(c, ts) for c in cs])


def mod_mul(f, g, ts: TriangularSet) -> Poly:
    """normal_form(f * g) without materializing unreduced products twice."""
    f, g = as_poly(f), as_poly(g)
    m = len(ts.polys)
    if top_var(f) > m + 1 or top_var(g) > m + 1:
        raise ValueError("factor involves a variable beyond the triangular set")
    return normal_form(poly_mul(f, g), ts)
