"""Exact multivariate polynomial arithmetic over the rationals.

Values use a recursive-dense representation: a polynomial is either a plain
``Fraction`` (a constant) or an :class:`MPoly` in its top variable ``x_v``
whose dense coefficient vector holds values over strictly lower variables.
Variables are numbered from 1 and ordered x1 < x2 < ...  Everything is
exact; no floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

Poly = Union[Fraction, "MPoly"]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not a rational scalar: {x!r}")


def as_poly(x) -> Poly:
    if isinstance(x, MPoly):
        return x
    return as_fraction(x)


def is_zero(f: Poly) -> bool:
    return isinstance(f, Fraction) and f == 0


def rat_bitsize(q) -> int:
    """max(bitlength |num|, bitlength den) of the reduced fraction; 0 for 0."""
    q = as_fraction(q)
    if q == 0:
        return 0
    return max(abs(q.numerator).bit_length(), q.denominator.bit_length())


def format_fraction(q) -> str:
    q = as_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s.strip())


class MPoly:
    """Polynomial in ``x_var`` with coefficients over lower variables.

    Canonical form: degree >= 1 in its own variable, nonzero leading
    coefficient, and every coefficient either a Fraction or an MPoly with a
    strictly smaller ``var``.  Constants are plain Fractions, never MPoly,
    so structural equality is value equality.  Instances are immutable;
    build them with :func:`make_poly` or :func:`variable` plus operators.
    """

    __slots__ = ("var", "coeffs")

    def __init__(self, var: int, coeffs: tuple):
        self.var = var
        self.coeffs = coeffs

    def __add__(self, other):
        return poly_add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return poly_add(self, poly_neg(as_poly(other)))

    def __rsub__(self, other):
        return poly_add(as_poly(other), poly_neg(self))

    def __mul__(self, other):
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return poly_neg(self)

    def __pow__(self, k):
        return poly_pow(self, k)

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.var == other.var and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return False  # canonical MPoly is never constant
        return NotImplemented

    def __hash__(self):
        return hash((self.var, self.coeffs))

    def __bool__(self):
        return True

    def __repr__(self):
        from .textform import format_poly

        return format_poly(self)


def make_poly(var: int, coeffs: Iterable) -> Poly:
    """Normalize a dense coefficient vector in ``x_var`` into canonical form."""
    cs = [as_poly(c) for c in coeffs]
    while cs and is_zero(cs[-1]):
        cs.pop()
    if not cs:
        return _ZERO
    if len(cs) == 1:
        return cs[0]
    for c in cs:
        if isinstance(c, MPoly) and c.var >= var:
            raise ValueError(f"coefficient involves x{c.var}, not below x{var}")
    return MPoly(var, tuple(cs))


def variable(i: int) -> MPoly:
    if i < 1:
        raise ValueError("variables are numbered from 1")
    return MPoly(i, (_ZERO, _ONE))


def top_var(f: Poly) -> int:
    """Index of the top variable; 0 for constants."""
    return f.var if isinstance(f, MPoly) else 0


def variables_in(f: Poly) -> frozenset:
    if isinstance(f, Fraction):
        return frozenset()
    out = {f.var}
    for c in f.coeffs:
        out |= variables_in(c)
    return frozenset(out)


def degree(f: Poly, var: int) -> int:
    """Degree in ``x_var``; constants (including 0) have degree 0."""
    f = as_poly(f)
    if isinstance(f, Fraction) or f.var < var:
        return 0
    if f.var == var:
        return len(f.coeffs) - 1
    return max(degree(c, var) for c in f.coeffs)


def coeffs_in(f: Poly, var: int) -> list:
    """Dense coefficient list of ``f`` viewed as univariate in ``x_var``.

    ``var`` must be at least the top variable of ``f``.
    """
    f = as_poly(f)
    if isinstance(f, Fraction) or f.var < var:
        return [f]
    if f.var == var:
        return list(f.coeffs)
    raise ValueError(f"cannot view an x{f.var}-polynomial as univariate in x{var}")


def coeff_of(f: Poly, var: int, k: int) -> Poly:
    cs = coeffs_in(f, var)
    return cs[k] if k < len(cs) else _ZERO


def lead_coeff(f: Poly, var: int) -> Poly:
    return coeffs_in(f, var)[-1]


def poly_add(f, g) -> Poly:
    f, g = as_poly(f), as_poly(g)
    if isinstance(f, Fraction) and isinstance(g, Fraction):
        return f + g
    if isinstance(f, Fraction):
        f, g = g, f
    if isinstance(g, MPoly) and g.var > f.var:
        f, g = g, f
    if isinstance(g, MPoly) and g.var == f.var:
        n = max(len(f.coeffs), len(g.coeffs))
        cs = list(f.coeffs) + [_ZERO] * (n - len(f.coeffs))
        for i, c in enumerate(g.coeffs):
            cs[i] = poly_add(cs[i], c)
        return make_poly(f.var, cs)
    cs = list(f.coeffs)
    cs[0] = poly_add(cs[0], g)
    return make_poly(f.var, cs)


def poly_neg(f) -> Poly:
    f = as_poly(f)
    if isinstance(f, Fraction):
        return -f
    return MPoly(f.var, tuple(poly_neg(c) for c in f.coeffs))


def poly_sub(f, g) -> Poly:
    return poly_add(f, poly_neg(as_poly(g)))


def poly_mul(f, g) -> Poly:
    f, g = as_poly(f), as_poly(g)
    if isinstance(f, Fraction) and isinstance(g, Fraction):
        return f * g
    if isinstance(f, Fraction):
        f, g = g, f
    if isinstance(g, Fraction):
        if g == 0:
            return _ZERO
        return MPoly(f.var, tuple(poly_mul(c, g) for c in f.coeffs))
    if g.var > f.var:
        f, g = g, f
    if g.var < f.var:
        return make_poly(f.var, [poly_mul(c, g) for c in f.coeffs])
    out = [_ZERO] * (len(f.coeffs) + len(g.coeffs) - 1)
    for i, a in enumerate(f.coeffs):
        if is_zero(a):
            continue
        for j, b in enumerate(g.coeffs):
            if is_zero(b):
                continue
            out[i + j] = poly_add(out[i + j], poly_mul(a, b))
    return make_poly(f.var, out)


def poly_pow(f, k: int) -> Poly:
    if not isinstance(k, int) or k < 0:
        raise ValueError("exponent must be a nonnegative integer")
    result: Poly = _ONE
    base = as_poly(f)
    while k:
        if k & 1:
            result = poly_mul(result, base)
        base_needed = k >> 1
        if base_needed:
            base = poly_mul(base, base)
        k = base_needed
    return result


def poly_eval_prefix(f, point: Sequence) -> Poly:
    """Substitute x1..xm by the given rationals; keeps higher variables."""
    pt = [as_fraction(a) for a in point]
    return _eval(as_poly(f), pt)


def _eval(f: Poly, pt: list) -> Poly:
    if isinstance(f, Fraction):
        return f
    if f.var > len(pt):
        return make_poly(f.var, [_eval(c, pt) for c in f.coeffs])
    a = pt[f.var - 1]
    acc = _eval(f.coeffs[-1], pt)
    for c in reversed(f.coeffs[:-1]):
        acc = poly_add(poly_mul(acc, a), _eval(c, pt))
    return acc


def poly_shift(f, var: int, a) -> list:
    """Coefficients c_r with f = sum c_r (x_var - a)^r, ascending in r."""
    a = as_fraction(a)
    f = as_poly(f)
    v = top_var(f)
    if v < var:
        return [f]
    if v == var:
        return _taylor_shift(list(f.coeffs), a)
    shifted = [poly_shift(c, var, a) for c in f.coeffs]
    out = []
    for r in range(max(len(s) for s in shifted)):
        out.append(make_poly(v, [s[r] if r < len(s) else _ZERO for s in shifted]))
    while len(out) > 1 and is_zero(out[-1]):
        out.pop()
    return out


def _taylor_shift(cs: list, a: Fraction) -> list:
    # in-place Horner shift: rewrites [c_k] so that f(x) = sum cs[r] (x-a)^r
    n = len(cs)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            cs[j] = poly_add(cs[j], poly_mul(cs[j + 1], a))
    return cs


def shift_compose(coeffs: Sequence, var: int, a) -> Poly:
    """Inverse of :func:`poly_shift`: evaluate sum c_r (x_var - a)^r."""
    xa = poly_sub(variable(var), as_fraction(a))
    cs = [as_poly(c) for c in coeffs]
    acc = cs[-1]
    for c in reversed(cs[:-1]):
        acc = poly_add(poly_mul(acc, xa), c)
    return acc


def taylor_coeff(f, orders: Sequence[int], point: Sequence) -> Fraction:
    """Coefficient of prod_j (x_j - a_j)^{i_j} in the expansion of f at a.

    Equals the mixed partial derivative at the point divided by the product
    of factorials of the orders.
    """
    if len(orders) != len(point):
        raise ValueError("orders and point must have the same length")
    g = as_poly(f)
    if top_var(g) > len(point):
        raise ValueError("point does not cover all variables of f")
    for var in range(len(point), 0, -1):
        cs = poly_shift(g, var, point[var - 1])
        i = orders[var - 1]
        g = cs[i] if i < len(cs) else _ZERO
    assert isinstance(g, Fraction)
    return g


def taylor_table(f, point: Sequence) -> dict:
    """All nonzero shifted-basis coefficients of f at the point.

    Keys are index tuples (i_1, ..., i_m) with m = len(point).
    """
    pt = [as_fraction(a) for a in point]
    out: dict = {}

    def rec(g: Poly, var: int, idx: list) -> None:
        if var == 0:
            assert isinstance(g, Fraction)
            if g != 0:
                out[tuple(reversed(idx))] = g
            return
        for r, c in enumerate(poly_shift(g, var, pt[var - 1])):
            if is_zero(c):
                continue
            idx.append(r)
            rec(c, var - 1, idx)
            idx.pop()

    rec(as_poly(f), len(pt), [])
    return out


def poly_diff(f, var: int) -> Poly:
    """Formal partial derivative with respect to ``x_var``."""
    f = as_poly(f)
    if isinstance(f, Fraction) or f.var < var:
        return _ZERO
    if f.var > var:
        return make_poly(f.var, [poly_diff(c, var) for c in f.coeffs])
    return make_poly(var, [poly_mul(c, Fraction(k)) for k, c in enumerate(f.coeffs) if k > 0])


def all_coefficients(f) -> list:
    """Flat list of the scalar coefficients of f (empty for the zero poly)."""
    f = as_poly(f)
    if isinstance(f, Fraction):
        return [] if f == 0 else [f]
    out = []
    for c in f.coeffs:
        out.extend(all_coefficients(c))
    return out
