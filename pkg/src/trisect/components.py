"""Primary components of a zero-dimensional variety, arranged as a prefix tree.

A depth-l node carries the branch data at level l: the point coordinate,
the vanishing exponent delta, and a table of shifted-basis coefficients.
The represented polynomial is

    (x_l - a)^delta + sum_{(i_1..i_{l-1}, r)} c * prod_j (x_j - p_j)^{i_j} * (x_l - a)^r

over the ancestor prefix p, with indices bounded by the ancestor deltas and
all pure powers of (x_l - a) below delta absent, so every branch polynomial
specializes to (x_l - a)^delta at its own point prefix.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .poly import (
    Poly,
    as_fraction,
    as_poly,
    degree,
    format_fraction,
    lead_coeff,
    parse_fraction,
    poly_eval_prefix,
    poly_mul,
    poly_pow,
    poly_sub,
    taylor_table,
    top_var,
    variable,
)
from .triangular import TriangularSet, mod_mul, normal_form


class ShapeViolation(ValueError):
    """A polynomial is not a primary branch component at the given point."""


class NonUnitError(ValueError):
    """Inversion was asked for an element vanishing at the branch point."""


class PrimaryComponent:
    __slots__ = ("level", "point_coord", "delta", "ctable")

    def __init__(self, level: int, point_coord, delta: int, ctable: Optional[dict] = None):
        self.level = level
        self.point_coord = as_fraction(point_coord)
        self.delta = delta
        table = {}
        for idx, c in (ctable or {}).items():
            c = as_fraction(c)
            if c != 0:
                table[tuple(int(i) for i in idx)] = c
        self.ctable = table

    def __eq__(self, other):
        if isinstance(other, PrimaryComponent):
            return (
                self.level == other.level
                and self.point_coord == other.point_coord
                and self.delta == other.delta
                and self.ctable == other.ctable
            )
        return NotImplemented

    def __repr__(self):
        return (
            f"PrimaryComponent(level={self.level}, point={format_fraction(self.point_coord)},"
            f" delta={self.delta}, ctable={len(self.ctable)} entries)"
        )

    def items_sorted(self):
        return sorted(self.ctable.items())


class FamilyNode:
    __slots__ = ("component", "children")

    def __init__(self, component: PrimaryComponent, children: Iterable = ()):
        self.component = component
        self.children = tuple(children)

    def __eq__(self, other):
        if isinstance(other, FamilyNode):
            return self.component == other.component and self.children == other.children
        return NotImplemented


class PrimaryFamily:
    """Prefix tree of primary components over n variables; leaves at depth n."""

    __slots__ = ("n", "roots")

    def __init__(self, n: int, roots: Iterable):
        self.n = n
        self.roots = tuple(roots)

    def __eq__(self, other):
        if isinstance(other, PrimaryFamily):
            return self.n == other.n and self.roots == other.roots
        return NotImplemented

    @property
    def degrees(self) -> tuple:
        """Fiber degrees (d_1..d_n) read off the first branch at each level."""
        out = []
        nodes = self.roots
        while nodes:
            out.append(sum(c.component.delta for c in nodes))
            nodes = nodes[0].children
        if len(out) != self.n:
            raise ValueError(f"family depth {len(out)} does not match n = {self.n}")
        return tuple(out)


def walk(fam: PrimaryFamily) -> Iterator:
    """Depth-first iterator of (path, deltas, node); path includes the node's coordinate."""

    def rec(node: FamilyNode, path: tuple, deltas: tuple):
        path = path + (node.component.point_coord,)
        deltas = deltas + (node.component.delta,)
        yield path, deltas, node
        for c in node.children:
            yield from rec(c, path, deltas)

    for r in fam.roots:
        yield from rec(r, (), ())


def nodes_at_depth(fam: PrimaryFamily, depth: int) -> list:
    """[(path, deltas, node)] for all depth-``depth`` nodes, in DFS order."""
    return [(p, d, n) for p, d, n in walk(fam) if len(p) == depth]


def node_at(fam: PrimaryFamily, path: Sequence) -> FamilyNode:
    path = tuple(as_fraction(c) for c in path)
    nodes = fam.roots
    current = None
    for coord in path:
        match = [n for n in nodes if n.component.point_coord == coord]
        if not match:
            raise KeyError(f"no branch at {tuple(format_fraction(c) for c in path)}")
        current = match[0]
        nodes = current.children
    if current is None:
        raise KeyError("empty path")
    return current


def children_of(fam: PrimaryFamily, path: Sequence) -> tuple:
    if len(path) == 0:
        return fam.roots
    return node_at(fam, path).children


def validate_component(comp: PrimaryComponent, delta_prefix: Optional[Sequence[int]] = None) -> list:
    """Index-range and vanishing conditions; violations returned as strings."""
    out = []
    if comp.level < 1:
        out.append(f"level {comp.level} < 1")
    if comp.delta < 1:
        out.append(f"delta {comp.delta} < 1")
    if delta_prefix is not None and len(delta_prefix) != comp.level - 1:
        out.append(
            f"delta prefix has length {len(delta_prefix)}, expected {comp.level - 1}"
        )
        delta_prefix = None
    for idx, c in comp.items_sorted():
        if len(idx) != comp.level:
            out.append(f"index {idx} has length {len(idx)}, expected {comp.level}")
            continue
        if any(i < 0 for i in idx):
            out.append(f"index {idx} has a negative entry")
            continue
        r = idx[-1]
        if r >= comp.delta:
            out.append(f"index {idx}: power {r} of the main shift >= delta = {comp.delta}")
        if all(i == 0 for i in idx[:-1]):
            out.append(f"index {idx}: pure main-shift power below delta must vanish")
        if delta_prefix is not None:
            for u, i in enumerate(idx[:-1]):
                if i >= delta_prefix[u]:
                    out.append(
                        f"index {idx}: entry {i} at level {u + 1} >= delta_{u + 1} = {delta_prefix[u]}"
                    )
    return out


def expand_component(comp: PrimaryComponent, prefix: Sequence) -> Poly:
    """Standard-basis polynomial of the component over the given ancestor prefix."""
    prefix = tuple(as_fraction(a) for a in prefix)
    if len(prefix) != comp.level - 1:
        raise ValueError(f"prefix length {len(prefix)}, expected {comp.level - 1}")
    shifts = [poly_sub(variable(j + 1), prefix[j]) for j in range(comp.level - 1)]
    shifts.append(poly_sub(variable(comp.level), comp.point_coord))
    out = poly_pow(shifts[-1], comp.delta)
    for idx, c in comp.items_sorted():
        term: Poly = c
        for j, e in enumerate(idx):
            if e:
                term = poly_mul(term, poly_pow(shifts[j], e))
        out = out + term
    return out


def extract_component(t, path: Sequence, delta_prefix: Sequence[int] = ()) -> PrimaryComponent:
    """Inverse of :func:`expand_component`; raises ShapeViolation otherwise.

    ``path`` carries the full point prefix including the node's own
    coordinate; ``delta_prefix`` the exponents of the strict ancestors.
    """
    path = tuple(as_fraction(a) for a in path)
    l = len(path)
    if l < 1:
        raise ValueError("empty path")
    if len(delta_prefix) != l - 1:
        raise ValueError(f"delta prefix length {len(delta_prefix)}, expected {l - 1}")
    t = as_poly(t)
    if top_var(t) > l:
        raise ShapeViolation(f"polynomial involves x{top_var(t)} above level {l}")
    d = degree(t, l)
    if d < 1 or lead_coeff(t, l) != 1:
        raise ShapeViolation(f"not monic of positive degree in x{l}")
    for u in range(1, l):
        if degree(t, u) >= delta_prefix[u - 1]:
            raise ShapeViolation(
                f"degree {degree(t, u)} in x{u} is not below delta_{u} = {delta_prefix[u - 1]}"
            )
    leading = (0,) * (l - 1) + (d,)
    ctable = {}
    for idx, c in taylor_table(t, path).items():
        if idx == leading:
            continue
        if all(i == 0 for i in idx[:-1]):
            raise ShapeViolation(
                f"pure power {idx[-1]} of (x{l} - {format_fraction(path[-1])}) has"
                f" coefficient {format_fraction(c)}, expected 0"
            )
        ctable[idx] = c
    return PrimaryComponent(l, path[-1], d, ctable)


def validate_family(fam: PrimaryFamily) -> list:
    """All family invariants: component shapes, distinct siblings, equal
    delta-weighted fiber degrees per level, and full depth n."""
    out = []
    if fam.n < 1:
        out.append(f"n = {fam.n} < 1")
        return out
    if not fam.roots:
        out.append("family has no branches")
        return out
    fiber_sums: list = [dict() for _ in range(fam.n)]

    def visit(nodes: tuple, path: tuple, deltas: tuple):
        depth = len(path) + 1
        seen = set()
        for node in nodes:
            comp = node.component
            coord = comp.point_coord
            where = tuple(format_fraction(c) for c in path + (coord,))
            if coord in seen:
                out.append(f"node {where}: duplicate sibling coordinate")
            seen.add(coord)
            if comp.level != depth:
                out.append(f"node {where}: component level {comp.level} at depth {depth}")
            for v in validate_component(comp, deltas):
                out.append(f"node {where}: {v}")
            if depth < fam.n:
                if not node.children:
                    out.append(f"node {where}: no children above leaf depth {fam.n}")
                else:
                    visit(node.children, path + (coord,), deltas + (comp.delta,))
            elif node.children:
                out.append(f"node {where}: children below leaf depth {fam.n}")
        if depth <= fam.n:
            fiber_sums[depth - 1][path] = sum(n.component.delta for n in nodes)

    visit(fam.roots, (), ())
    for depth, sums in enumerate(fiber_sums, start=1):
        if not sums:
            continue
        values = sorted(set(sums.values()))
        if len(values) > 1:
            detail = "; ".join(
                f"fiber over {tuple(format_fraction(c) for c in p)} has degree {s}"
                for p, s in sorted(sums.items())
            )
            out.append(f"level {depth}: unequal fiber degrees {values} ({detail})")
    return out


def expanded_chain(fam: PrimaryFamily, path: Sequence) -> TriangularSet:
    """Triangular set of the expanded branch polynomials along a path."""
    path = tuple(as_fraction(c) for c in path)
    polys = []
    nodes = fam.roots
    for depth, coord in enumerate(path):
        match = [n for n in nodes if n.component.point_coord == coord]
        if not match:
            raise KeyError(f"no branch at {tuple(format_fraction(c) for c in path)}")
        polys.append(expand_component(match[0].component, path[:depth]))
        nodes = match[0].children
    return TriangularSet(polys)


def local_inverse(u, chain: TriangularSet, point: Sequence) -> Poly:
    """Inverse of a unit in the local quotient modulo a branch chain.

    Newton lifting from the constant 1/u(point); the residual 1 - u*v lies
    in the maximal ideal at the point, which is nilpotent in the quotient,
    so the exact residual test terminates within log2 of the local
    multiplicity plus a safety margin.
    """
    u = as_poly(u)
    if top_var(u) > len(chain.polys):
        raise ValueError("element involves a variable beyond the chain")
    point = tuple(as_fraction(a) for a in point)
    if len(point) != len(chain.polys):
        raise ValueError("point length must match the chain length")
    u0 = poly_eval_prefix(u, point)
    if u0 == 0:
        raise NonUnitError(
            f"value 0 at point {tuple(format_fraction(c) for c in point)}: not a unit"
        )
    v: Poly = Fraction(1) / u0
    mu = 1
    for d in chain.degrees:
        mu *= d
    for _ in range(mu.bit_length() + 2):
        w = mod_mul(u, v, chain)
        if w == 1:
            return v
        v = normal_form(poly_mul(v, poly_sub(Fraction(2), w)), chain)
    raise ArithmeticError("local inversion did not reach an exact inverse")


# ---------------------------------------------------------------------------
# family JSON format


def family_to_obj(fam: PrimaryFamily) -> dict:
    nodes = []
    for path, _deltas, node in walk(fam):
        comp = node.component
        nodes.append(
            {
                "path": [format_fraction(c) for c in path],
                "delta": comp.delta,
                "ctable": [
                    {"idx": list(idx), "coeff": format_fraction(c)}
                    for idx, c in comp.items_sorted()
                ],
            }
        )
    return {"n": fam.n, "degrees": list(fam.degrees), "nodes": nodes}


def family_from_obj(obj) -> PrimaryFamily:
    try:
        n = int(obj["n"])
        raw_nodes = obj["nodes"]
    except (KeyError, TypeError) as e:
        raise ValueError(f"malformed family object: missing {e}") from None
    roots: list = []
    stack: list = []  # (coord, children list) per open depth
    for item in raw_nodes:
        try:
            path = tuple(parse_fraction(c) for c in item["path"])
            delta = int(item["delta"])
            ctable = {tuple(int(i) for i in e["idx"]): parse_fraction(e["coeff"]) for e in item.get("ctable", [])}
        except (KeyError, TypeError, ValueError) as e:
            raise ValueError(f"malformed family node: {e}") from None
        depth = len(path)
        if depth < 1:
            raise ValueError("family node with empty path")
        del stack[depth - 1 :]
        if tuple(c for c, _ in stack) != path[:-1]:
            raise ValueError(
                f"node {[format_fraction(c) for c in path]} does not extend the previous branch"
            )
        node = FamilyNode(PrimaryComponent(depth, path[-1], delta, ctable), ())
        siblings = roots if depth == 1 else stack[-1][1]
        siblings.append(node)
        stack.append((path[-1], []))
        # children are attached when the subtree is complete; keep a mutable list
        node_children = stack[-1][1]
        object.__setattr__ if False else None
        # replace the placeholder node with one holding the mutable children later
        siblings[-1] = (node.component, node_children)
    return PrimaryFamily(n, [_freeze(c, ch) for c, ch in roots])


def _freeze(component: PrimaryComponent, children: list) -> FamilyNode:
    return FamilyNode(component, [_freeze(c, ch) for c, ch in children])


def family_to_json(fam: PrimaryFamily) -> str:
    return json.dumps(family_to_obj(fam), indent=2) + "\n"


def family_from_json(text: str) -> PrimaryFamily:
    return family_from_obj(json.loads(text))
