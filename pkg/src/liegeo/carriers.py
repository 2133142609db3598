"""Finite evaluation windows over the supported algebras.

A window is a finite-dimensional slice of an algebra over a finite field:
it owns a k-basis, enumerates all its elements in a fixed graded order, and
embeds the declared coefficient constants.  Windows are what the geometry
and logic layers quantify over.
"""

from __future__ import annotations

from itertools import combinations, product

from .errors import (AlgebraMismatchError, CapacityExceededError,
                     InfiniteFieldError, UnknownSymbolError)
from .freelie import FreeLie, Truncation
from .metabelian import Extension, Metabelian

DEFAULT_BUDGET = 200000


def _require_finite(field):
    if not hasattr(field, "elements"):
        raise InfiniteFieldError(
            "enumeration needs a finite field, got %s" % field.spec())


def graded_points(basis, field, budget=None):
    """Every k-combination of the basis, ordered by support size, then
    support positions, then coefficient tuples.  Deterministic."""
    _require_finite(field)
    cap = DEFAULT_BUDGET if budget is None else budget
    count = len(field.elements()) ** len(basis)
    if count > cap:
        raise CapacityExceededError(
            "window holds %d points, budget is %d" % (count, cap))
    return list(_iter_graded(basis, field))


def _iter_graded(basis, field):
    zero = None
    for b in basis:
        zero = b.scale(field.zero) if zero is None else zero
    if zero is None:
        return
    yield zero
    nonzero = field.nonzero_elements()
    for size in range(1, len(basis) + 1):
        for positions in combinations(range(len(basis)), size):
            for coeffs in product(nonzero, repeat=size):
                e = zero
                for pos, c in zip(positions, coeffs):
                    e = e.add(basis[pos].scale(c))
                yield e


class FreeLieWindow:
    """Degree-bounded slice of a free Lie algebra.

    By default the window is the nilpotent quotient: brackets truncate
    at the window degree, so the carrier is a finite algebra closed
    under its own multiplication.  With exact=True the same point set
    is read as a slice of the infinite algebra and products are exact;
    that is the regime for domain probes and union constructions.
    """

    kind = "free"

    def __init__(self, rank, field, degree, names=None, exact=False):
        self.rank = rank
        self.field = field
        self.degree = degree
        self.exact = exact
        self.algebra = FreeLie(rank, field)
        self.trunc = None if exact else Truncation(degree)
        self.names = list(names) if names else [
            "a%d" % (i + 1) for i in range(rank)]
        self._basis = self.algebra.basis_elements(degree)
        self._points = None

    def basis(self):
        return list(self._basis)

    def dim(self):
        return len(self._basis)

    def points(self, budget=None):
        if self._points is None:
            self._points = graded_points(self._basis, self.field, budget)
        return self._points

    def zero(self):
        return self.algebra.zero

    def a_generators(self):
        return self.algebra.gens()

    def embed_const(self, value):
        if value.alg != self.algebra:
            raise AlgebraMismatchError("constant from a different algebra")
        return value

    def render_element(self, e):
        return e.render(self.names)

    def describe(self):
        out = "free rank=%d field=%s degree=%d" % (
            self.rank, self.field.spec(), self.degree)
        return out + " exact" if self.exact else out


class MetabelianWindow:
    """Degree-bounded slice of a free metabelian Lie algebra."""

    kind = "metabelian"

    def __init__(self, rank, field, degree, names=None, exact=False):
        self.rank = rank
        self.field = field
        self.degree = degree
        self.exact = exact
        self.algebra = Metabelian(rank, field)
        self.trunc = None if exact else Truncation(degree)
        self.names = list(names) if names else [
            "a%d" % (i + 1) for i in range(rank)]
        self._basis = list(self.algebra.gens())
        for pair, exps in self.algebra.fit_basis_pairs(max(degree - 2, 0)):
            poly = self.algebra.ring.monomial(exps, field.one)
            self._basis.append(self.algebra.fit_element({pair: poly}))
        self._points = None

    def basis(self):
        return list(self._basis)

    def dim(self):
        return len(self._basis)

    def points(self, budget=None):
        if self._points is None:
            self._points = graded_points(self._basis, self.field, budget)
        return self._points

    def zero(self):
        return self.algebra.zero

    def a_generators(self):
        return self.algebra.gens()

    def embed_const(self, value):
        if value.alg != self.algebra:
            raise AlgebraMismatchError("constant from a different algebra")
        return value

    def render_element(self, e):
        return e.render(self.names)

    def describe(self):
        out = "metabelian rank=%d field=%s degree=%d" % (
            self.rank, self.field.spec(), self.degree)
        return out + " exact" if self.exact else out


class ExtensionWindow:
    """Window over a direct module extension of a metabelian algebra."""

    kind = "extension"

    def __init__(self, extension, degree, names=None):
        if not isinstance(extension, Extension) or not extension.free:
            raise AlgebraMismatchError(
                "windows need a free-module extension")
        self.algebra = extension
        self.field = extension.field
        self.degree = degree
        self.trunc = Truncation(degree)
        base_window = MetabelianWindow(extension.base.rank, self.field,
                                       degree, names)
        self.names = base_window.names
        self._basis = [extension.lift(b) for b in base_window.basis()]
        ring = extension.ring
        from .fields import _grlex_key
        monomials = [e for e in _all_monomials(ring, max(degree - 2, 0))]
        monomials.sort(key=_grlex_key)
        for i in range(extension.s):
            for exps in monomials:
                coords = [ring.zero] * extension.s
                coords[i] = ring.monomial(exps, self.field.one)
                from .metabelian import ExtensionElement
                self._basis.append(ExtensionElement(
                    extension, extension.base.zero, tuple(coords)))
        self._points = None

    def basis(self):
        return list(self._basis)

    def dim(self):
        return len(self._basis)

    def points(self, budget=None):
        if self._points is None:
            self._points = graded_points(self._basis, self.field, budget)
        return self._points

    def zero(self):
        return self.algebra.zero

    def a_generators(self):
        return self.algebra.gens()

    def embed_const(self, value):
        if isinstance(value, type(self.algebra.zero)):
            if value.alg != self.algebra:
                raise AlgebraMismatchError("constant from a different algebra")
            return value
        if value.alg != self.algebra.base:
            raise AlgebraMismatchError("constant from a different algebra")
        return self.algebra.lift(value)

    def render_element(self, e):
        return e.render(self.names)

    def describe(self):
        return "extension rank=%d s=%d field=%s degree=%d" % (
            self.algebra.base.rank, self.algebra.s, self.field.spec(),
            self.degree)


def _all_monomials(ring, max_degree):
    out = [(0,) * ring.nvars]
    seen = set(out)
    frontier = list(out)
    for _ in range(max_degree):
        grown = []
        for e in frontier:
            for i in range(ring.nvars):
                m = list(e)
                m[i] += 1
                m = tuple(m)
                if m not in seen:
                    seen.add(m)
                    grown.append(m)
        out.extend(grown)
        frontier = grown
    return out


class TableAlgebra:
    """Finite-dimensional Lie algebra given by structure constants.

    table maps (i, j) with i < j to {basis index: coefficient}; missing
    pairs multiply to zero.  When self_coefficients is set the whole
    algebra doubles as its own coefficient algebra and every basis
    element is addressable as a constant by name.
    """

    def __init__(self, field, names, table, self_coefficients=False):
        self.field = field
        self.names = tuple(names)
        self.dim = len(self.names)
        self.self_coefficients = self_coefficients
        self.table = {}
        for (i, j), row in table.items():
            if not i < j < self.dim:
                raise AlgebraMismatchError("bad structure pair (%d, %d)" % (i, j))
            entry = {k: c for k, c in row.items() if not field.is_zero(c)}
            if entry:
                self.table[(i, j)] = entry
        self.zero = TableElement(self, (field.zero,) * self.dim)
        self._check_jacobi()

    def basis_element(self, i):
        coeffs = [self.field.zero] * self.dim
        coeffs[i] = self.field.one
        return TableElement(self, tuple(coeffs))

    def element(self, coeffs):
        return TableElement(self, tuple(coeffs))

    def const(self, name):
        if name not in self.names:
            raise UnknownSymbolError("unknown constant %r" % name)
        return self.basis_element(self.names.index(name))

    def _pair(self, i, j):
        if i == j:
            return {}
        if i < j:
            return self.table.get((i, j), {})
        row = self.table.get((j, i), {})
        return {k: self.field.neg(c) for k, c in row.items()}

    def _check_jacobi(self):
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                for k in range(j + 1, self.dim):
                    acc = {}
                    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                        for m, cm in self._pair(a, b).items():
                            for t, ct in self._pair(m, c).items():
                                prev = acc.get(t, self.field.zero)
                                acc[t] = self.field.add(
                                    prev, self.field.mul(cm, ct))
                    if any(not self.field.is_zero(c) for c in acc.values()):
                        raise AlgebraMismatchError(
                            "structure constants violate the Jacobi identity")

    def __eq__(self, other):
        return (isinstance(other, TableAlgebra) and other.names == self.names
                and other.field == self.field and other.table == self.table)

    def __hash__(self):
        return hash(("table", self.names, self.field))

    def __repr__(self):
        return "TableAlgebra(%s)" % ", ".join(self.names)


class TableElement:
    __slots__ = ("alg", "coeffs", "_hash")

    def __init__(self, alg, coeffs):
        self.alg = alg
        self.coeffs = tuple(coeffs)
        self._hash = None

    def _check(self, other):
        if not isinstance(other, TableElement) or other.alg != self.alg:
            raise AlgebraMismatchError("elements of different table algebras")

    def is_zero(self):
        return all(self.alg.field.is_zero(c) for c in self.coeffs)

    def degree(self):
        return 0 if self.is_zero() else 1

    def add(self, other):
        self._check(other)
        f = self.alg.field
        return TableElement(self.alg, tuple(
            f.add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def sub(self, other):
        return self.add(other.neg())

    def neg(self):
        f = self.alg.field
        return TableElement(self.alg, tuple(f.neg(c) for c in self.coeffs))

    def scale(self, c):
        f = self.alg.field
        return TableElement(self.alg, tuple(f.mul(c, v) for v in self.coeffs))

    def bracket(self, other, trunc=None):
        self._check(other)
        f = self.alg.field
        acc = [f.zero] * self.alg.dim
        for i, ci in enumerate(self.coeffs):
            if f.is_zero(ci):
                continue
            for j, cj in enumerate(other.coeffs):
                if f.is_zero(cj):
                    continue
                for k, ck in self.alg._pair(i, j).items():
                    acc[k] = f.add(acc[k], f.mul(f.mul(ci, cj), ck))
        return TableElement(self.alg, tuple(acc))

    def support_items(self):
        f = self.alg.field
        return [(i, c) for i, c in enumerate(self.coeffs) if not f.is_zero(c)]

    def __eq__(self, other):
        return (isinstance(other, TableElement) and other.alg == self.alg
                and other.coeffs == self.coeffs)

    def __hash__(self):
        if self._hash is None:
            f = self.alg.field
            self._hash = hash((self.alg,
                               tuple(f.sort_key(c) for c in self.coeffs)))
        return self._hash

    def sort_key(self):
        f = self.alg.field
        return tuple(f.sort_key(c) for c in self.coeffs)

    def render(self, names=None):
        names = names or self.alg.names
        f = self.alg.field
        parts = []
        for i, c in enumerate(self.coeffs):
            if f.is_zero(c):
                continue
            parts.append(names[i] if c == f.one
                         else "%s*%s" % (f.render(c), names[i]))
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return "TableElement(%s)" % self.render()


class TableWindow:
    """A finite table algebra used whole as its own window."""

    kind = "table"

    def __init__(self, algebra, label=None):
        self.algebra = algebra
        self.field = algebra.field
        self.degree = None
        self.trunc = None
        self.names = list(algebra.names)
        self.label = label or "table"
        self._basis = [algebra.basis_element(i) for i in range(algebra.dim)]
        self._points = None

    def basis(self):
        return list(self._basis)

    def dim(self):
        return len(self._basis)

    def points(self, budget=None):
        if self._points is None:
            self._points = graded_points(self._basis, self.field, budget)
        return self._points

    def zero(self):
        return self.algebra.zero

    def a_generators(self):
        if self.algebra.self_coefficients:
            return list(self._basis)
        return []

    def embed_const(self, value):
        if isinstance(value, str):
            return self.algebra.const(value)
        if isinstance(value, TableElement) and value.alg == self.algebra:
            return value
        raise AlgebraMismatchError(
            "table carrier has no embedding for this constant")

    def render_element(self, e):
        return e.render(self.names)

    def describe(self):
        return "table %s dim=%d field=%s" % (
            self.label, self.algebra.dim, self.field.spec())


def nilpotent_pair_algebra(field, n):
    """Class-2 nilpotent algebra on a_1..a_n, b_1..b_n, c_1..c_n where
    only [a_i, b_i] = c_i is nonzero; every c_i is central."""
    names = (["a%d" % (i + 1) for i in range(n)]
             + ["b%d" % (i + 1) for i in range(n)]
             + ["c%d" % (i + 1) for i in range(n)])
    table = {(i, n + i): {2 * n + i: field.one} for i in range(n)}
    return TableAlgebra(field, names, table, self_coefficients=True)


def abelian_algebra(field, dim, names=None):
    names = names or ["e%d" % (i + 1) for i in range(dim)]
    return TableAlgebra(field, names, {})


_TABLE_REGISTRY = {
    "nilpotent1": lambda field: nilpotent_pair_algebra(field, 1),
    "nilpotent2": lambda field: nilpotent_pair_algebra(field, 2),
    "abelian1": lambda field: abelian_algebra(field, 1),
    "abelian2": lambda field: abelian_algebra(field, 2),
    "abelian3": lambda field: abelian_algebra(field, 3),
}


def parse_carrier_spec(text, field, degree):
    """Carrier descriptions for the command line.

    free:<rank> | mb:<rank> | mbext:<rank>:<s> | table:<name>, with the
    field and truncation degree supplied separately.
    """
    parts = text.split(":")
    kind = parts[0]
    if kind == "free" and len(parts) == 2:
        return FreeLieWindow(int(parts[1]), field, degree)
    if kind == "mb" and len(parts) == 2:
        return MetabelianWindow(int(parts[1]), field, degree)
    if kind == "mbext" and len(parts) == 3:
        from .metabelian import build_extension, free_module
        base = Metabelian(int(parts[1]), field)
        ext = build_extension(base, free_module(base, int(parts[2])))
        return ExtensionWindow(ext, degree)
    if kind == "table" and len(parts) == 2 and parts[1] in _TABLE_REGISTRY:
        return TableWindow(_TABLE_REGISTRY[parts[1]](field), parts[1])
    raise UnknownSymbolError("unknown carrier spec %r" % text)
