"""Free metabelian Lie algebras and their direct module extensions.

An element is a linear part over the generators a_1..a_r plus a Fitting part.
The Fitting radical is an R-module for R = k[x1..xr], acting by u*x_i = [u, a_i].
Normal form for the Fitting part: combinations e_{kj}*m where e_{kj} = [a_k, a_j]
(k > j, 0-based) and the monomial m only involves variables x_l with l >= j;
this is the classical basis of left-normed brackets [a_k,a_j,a_{i1},..,a_{is}]
with k > j <= i1 <= ... <= is.  Products of e_{kj} by smaller variables are
rewritten through the Jacobi relation e_{kj}*x_i = e_{ki}*x_j - e_{ji}*x_k.
"""

from __future__ import annotations

from .errors import (AlgebraMismatchError, InfiniteFieldError, InternalError,
                     UnsupportedAlgebraError)
from .fields import Poly, PolyRing
from .linalg import ModulePresentation, rank


class Metabelian:
    """Free metabelian Lie algebra of the given rank over a field."""

    def __init__(self, rank, field):
        self.rank = rank
        self.field = field
        self.ring = PolyRing(field, tuple("x%d" % (i + 1) for i in range(rank)))
        self.zero = MetabelianElement(self, (field.zero,) * rank, {})

    def gen(self, i):
        if not 0 <= i < self.rank:
            raise AlgebraMismatchError("generator index %d out of range" % i)
        linear = [self.field.zero] * self.rank
        linear[i] = self.field.one
        return MetabelianElement(self, tuple(linear), {})

    def gens(self):
        return [self.gen(i) for i in range(self.rank)]

    def fit_element(self, pairs):
        """Element of the Fitting radical from a {(k, j): Poly} mapping."""
        return MetabelianElement(self, (self.field.zero,) * self.rank,
                                 _fit_normalize(self, pairs))

    def linear_form(self, coeffs):
        """p(c) = sum c_i * x_i in R, the module weight of a linear tuple."""
        out = self.ring.zero
        for i, c in enumerate(coeffs):
            if not self.field.is_zero(c):
                out = out + self.ring.var(i).scale(c)
        return out

    def fit_basis_pairs(self, module_degree):
        """Normal-form basis of Fit up to module-monomial degree, as
        ((k, j), exps) pairs in a fixed order."""
        out = []
        for k in range(self.rank):
            for j in range(k):
                for exps in _restricted_monomials(self.ring, j, module_degree):
                    out.append(((k, j), exps))
        out.sort(key=lambda p: (sum(p[1]), p[0], p[1]))
        return out

    def __eq__(self, other):
        return (isinstance(other, Metabelian) and other.rank == self.rank
                and other.field == self.field)

    def __hash__(self):
        return hash(("metabelian", self.rank, self.field))

    def __repr__(self):
        return "Metabelian(rank=%d, field=%r)" % (self.rank, self.field)


def _restricted_monomials(ring, min_var, max_degree):
    """Exponent tuples of total degree <= max_degree using vars >= min_var."""
    out = [(0,) * ring.nvars]
    for _ in range(max_degree):
        grown = []
        for e in out:
            lead = min_var
            for i in range(ring.nvars - 1, -1, -1):
                if e[i] > 0:
                    lead = max(min_var, i)
                    break
            for i in range(lead, ring.nvars):
                m = list(e)
                m[i] += 1
                grown.append(tuple(m))
        out = sorted(set(out) | set(grown), key=lambda e: (sum(e), e))
    return [e for e in out if all(k == 0 for k in e[:min_var])]


def _fit_normalize(alg, raw):
    """Rewrite a raw {(k, j): Poly} Fitting combination into normal form."""
    ring = alg.ring
    out = {}
    stack = [(pair, poly) for pair, poly in sorted(raw.items())]
    while stack:
        (k, j), poly = stack.pop()
        if poly.is_zero():
            continue
        good = {}
        for exps, c in poly.coeffs.items():
            bad = next((i for i in range(j) if exps[i] > 0), None)
            if bad is None:
                good[exps] = c
                continue
            # e_{kj} * x_i = e_{ki} * x_j - e_{ji} * x_k   (i < j < k)
            i = bad
            rest = list(exps)
            rest[i] -= 1
            rest = tuple(rest)
            xj = list(rest)
            xj[j] += 1
            xk = list(rest)
            xk[k] += 1
            stack.append(((k, i), ring.monomial(tuple(xj), c)))
            stack.append(((j, i), ring.monomial(tuple(xk), alg.field.neg(c))))
        if good:
            add = Poly(ring, good)
            prev = out.get((k, j))
            total = add if prev is None else prev + add
            if total.is_zero():
                out.pop((k, j), None)
            else:
                out[(k, j)] = total
    return out


class MetabelianElement:
    """Immutable: linear coefficient tuple plus normal-form Fitting part."""

    __slots__ = ("alg", "linear", "fit", "_hash")

    def __init__(self, alg, linear, fit):
        self.alg = alg
        self.linear = tuple(linear)
        self.fit = {p: q for p, q in fit.items() if not q.is_zero()}
        self._hash = None

    def _check(self, other):
        if not isinstance(other, MetabelianElement) or other.alg != self.alg:
            raise AlgebraMismatchError("elements of different metabelian algebras")

    def is_zero(self):
        return not self.fit and all(self.alg.field.is_zero(c) for c in self.linear)

    def in_fitting(self):
        return all(self.alg.field.is_zero(c) for c in self.linear)

    def degree(self):
        if self.is_zero():
            return 0
        d = 1 if any(not self.alg.field.is_zero(c) for c in self.linear) else 0
        for q in self.fit.values():
            d = max(d, 2 + q.total_degree())
        return d

    def add(self, other):
        self._check(other)
        field = self.alg.field
        linear = tuple(field.add(a, b) for a, b in zip(self.linear, other.linear))
        fit = dict(self.fit)
        for p, q in other.fit.items():
            prev = fit.get(p)
            total = q if prev is None else prev + q
            if total.is_zero():
                fit.pop(p, None)
            else:
                fit[p] = total
        return MetabelianElement(self.alg, linear, fit)

    def sub(self, other):
        return self.add(other.neg())

    def neg(self):
        field = self.alg.field
        return MetabelianElement(
            self.alg, tuple(field.neg(c) for c in self.linear),
            {p: -q for p, q in self.fit.items()})

    def scale(self, c):
        field = self.alg.field
        if field.is_zero(c):
            return self.alg.zero
        return MetabelianElement(
            self.alg, tuple(field.mul(c, v) for v in self.linear),
            {p: q.scale(c) for p, q in self.fit.items()})

    def bracket(self, other, trunc=None):
        self._check(other)
        alg = self.alg
        field = alg.field
        pu = alg.linear_form(self.linear)
        pv = alg.linear_form(other.linear)
        raw = {}

        def put(pair, poly):
            prev = raw.get(pair)
            raw[pair] = poly if prev is None else prev + poly

        # linear x linear lands on the basic brackets e_{ji}
        for j in range(alg.rank):
            for i in range(j):
                c = field.sub(field.mul(self.linear[j], other.linear[i]),
                              field.mul(self.linear[i], other.linear[j]))
                if not field.is_zero(c):
                    put((j, i), alg.ring.const(c))
        # Fitting parts act through the module structure
        if not pv.is_zero():
            for pair, q in self.fit.items():
                put(pair, q * pv)
        if not pu.is_zero():
            for pair, q in other.fit.items():
                put(pair, -(q * pu))
        fit = _fit_normalize(alg, raw)
        if trunc is not None:
            cap = trunc.max_degree - 2
            fit = {p: _degree_cap(q, cap) for p, q in fit.items()}
            fit = {p: q for p, q in fit.items() if not q.is_zero()}
        return MetabelianElement(alg, (field.zero,) * alg.rank, fit)

    def fit_action(self, poly):
        """Module action of a polynomial on a Fitting element."""
        if not self.in_fitting():
            raise UnsupportedAlgebraError("module action on a non-Fitting element")
        return MetabelianElement(
            self.alg, self.linear,
            _fit_normalize(self.alg, {p: q * poly for p, q in self.fit.items()}))

    def support_items(self):
        """Sorted (key, coefficient) pairs for generic linear algebra."""
        field = self.alg.field
        out = [((0, i, ()), c) for i, c in enumerate(self.linear)
               if not field.is_zero(c)]
        for (k, j), q in self.fit.items():
            for exps, c in q.coeffs.items():
                out.append(((1, (k, j), exps), c))
        return sorted(out)

    def __eq__(self, other):
        return (isinstance(other, MetabelianElement) and other.alg == self.alg
                and other.linear == self.linear and other.fit == self.fit)

    def __hash__(self):
        if self._hash is None:
            field = self.alg.field
            items = tuple(sorted((p, q.sort_key()) for p, q in self.fit.items()))
            self._hash = hash((self.alg,
                               tuple(field.sort_key(c) for c in self.linear), items))
        return self._hash

    def sort_key(self):
        field = self.alg.field
        return (tuple(field.sort_key(c) for c in self.linear),
                tuple(sorted((p, q.sort_key()) for p, q in self.fit.items())))

    def render(self, names=None):
        alg = self.alg
        field = alg.field
        if names is None:
            names = ["a%d" % (i + 1) for i in range(alg.rank)]
        parts = []
        for i, c in enumerate(self.linear):
            if field.is_zero(c):
                continue
            parts.append(names[i] if c == field.one else
                         "%s*%s" % (field.render(c), names[i]))
        for (k, j) in sorted(self.fit):
            q = self.fit[(k, j)]
            body = "[%s, %s]" % (names[k], names[j])
            for exps in sorted(q.coeffs, key=lambda e: (sum(e), e)):
                c = q.coeffs[exps]
                term = body
                for i, m in enumerate(exps):
                    for _ in range(m):
                        term = "[%s, %s]" % (term, names[i])
                parts.append(term if c == field.one else
                             "%s*%s" % (field.render(c), term))
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return "MetabelianElement(%s)" % self.render()


def _degree_cap(poly, cap):
    return Poly(poly.ring, {e: c for e, c in poly.coeffs.items() if sum(e) <= cap})


def is_in_fitting(element):
    """Membership in the Fitting radical, cross-checked two ways.

    The quick test reads the linear part; the defining test computes
    [[u, a_i], u] for every generator.  Both must agree.
    """
    alg = element.alg
    quick = element.in_fitting()
    defining = all(
        element.bracket(alg.gen(i)).bracket(element).is_zero()
        for i in range(alg.rank))
    if quick != defining:
        raise InternalError("Fitting membership checks disagree")
    return quick


def phi_independent(elements, exhaustive_budget=4096):
    """Linear independence modulo the Fitting radical.

    Runs the rank check on linear parts and, when the coefficient-tuple
    space fits the budget, the defining check over all nonzero tuples;
    the two must agree.  Needs a finite field for the defining check.
    """
    if not elements:
        return True
    alg = elements[0].alg
    field = alg.field
    matrix = [list(e.linear) for e in elements]
    by_rank = rank(matrix, field) == len(elements)
    if not hasattr(field, "elements"):
        raise InfiniteFieldError(
            "independence modulo Fit over an infinite field")
    scalars = field.elements()
    if len(scalars) ** len(elements) <= exhaustive_budget:
        from itertools import product
        exhaustive = True
        for tup in product(scalars, repeat=len(elements)):
            if all(field.is_zero(c) for c in tup):
                continue
            combo = alg.zero
            for c, e in zip(tup, elements):
                combo = combo.add(e.scale(c))
            if combo.in_fitting():
                exhaustive = False
                break
        if exhaustive != by_rank:
            raise InternalError("independence checks disagree")
    return by_rank


# ---------------------------------------------------------------------------
# Direct module extensions A + M.


class Extension:
    """Direct module extension of a free metabelian algebra.

    For a free module of rank s the arithmetic is fully supported (elements
    carry an extra vector of polynomials acted on by R).  A presentation with
    relations is kept as a handle for rank and dimension questions only.
    """

    def __init__(self, base, presentation):
        self.base = base
        self.presentation = presentation
        self.s = presentation.n_generators
        self.free = not presentation.relations
        self.field = base.field
        self.ring = base.ring
        self.zero = ExtensionElement(
            self, base.zero, (self.ring.zero,) * self.s) if self.free else None

    def module_rank(self):
        return self.presentation.rank()

    def gen(self, i):
        self._need_free()
        return ExtensionElement(self, self.base.gen(i), (self.ring.zero,) * self.s)

    def gens(self):
        return [self.gen(i) for i in range(self.base.rank)]

    def module_gen(self, i):
        self._need_free()
        coords = [self.ring.zero] * self.s
        coords[i] = self.ring.one
        return ExtensionElement(self, self.base.zero, tuple(coords))

    def lift(self, element):
        self._need_free()
        return ExtensionElement(self, element, (self.ring.zero,) * self.s)

    def _need_free(self):
        if not self.free:
            raise UnsupportedAlgebraError(
                "element arithmetic needs a free extension module")

    def __eq__(self, other):
        return (isinstance(other, Extension) and other.base == self.base
                and other.presentation is self.presentation)

    def __hash__(self):
        return hash(("extension", self.base, id(self.presentation)))

    def __repr__(self):
        return "Extension(%r, s=%d%s)" % (
            self.base, self.s, "" if self.free else ", presented")


class ExtensionElement:
    """Element of a free-module extension: base element plus module vector."""

    __slots__ = ("alg", "base", "module", "_hash")

    def __init__(self, alg, base, module):
        self.alg = alg
        self.base = base
        self.module = tuple(module)
        self._hash = None

    def _check(self, other):
        if not isinstance(other, ExtensionElement) or other.alg != self.alg:
            raise AlgebraMismatchError("elements of different extensions")

    def is_zero(self):
        return self.base.is_zero() and all(q.is_zero() for q in self.module)

    def in_fitting(self):
        return self.base.in_fitting()

    def degree(self):
        d = self.base.degree()
        for q in self.module:
            if not q.is_zero():
                d = max(d, 2 + q.total_degree())
        return d

    def add(self, other):
        self._check(other)
        return ExtensionElement(self.alg, self.base.add(other.base),
                                tuple(a + b for a, b in zip(self.module, other.module)))

    def sub(self, other):
        return self.add(other.neg())

    def neg(self):
        return ExtensionElement(self.alg, self.base.neg(),
                                tuple(-q for q in self.module))

    def scale(self, c):
        return ExtensionElement(self.alg, self.base.scale(c),
                                tuple(q.scale(c) for q in self.module))

    def bracket(self, other, trunc=None):
        self._check(other)
        alg = self.alg
        base = self.base.bracket(other.base, trunc)
        pu = alg.base.linear_form(self.base.linear)
        pv = alg.base.linear_form(other.base.linear)
        module = tuple(a * pv - b * pu
                       for a, b in zip(self.module, other.module))
        if trunc is not None:
            cap = trunc.max_degree - 2
            module = tuple(_degree_cap(q, cap) for q in module)
        return ExtensionElement(alg, base, module)

    def support_items(self):
        out = [((0, key), c) for key, c in self.base.support_items()]
        for i, q in enumerate(self.module):
            for exps, c in q.coeffs.items():
                out.append(((1, i, exps), c))
        return sorted(out)

    def __eq__(self, other):
        return (isinstance(other, ExtensionElement) and other.alg == self.alg
                and other.base == self.base and other.module == self.module)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.alg, self.base,
                               tuple(q.sort_key() for q in self.module)))
        return self._hash

    def sort_key(self):
        return (self.base.sort_key(), tuple(q.sort_key() for q in self.module))

    def render(self, names=None):
        parts = []
        base = self.base.render(names)
        if base != "0":
            parts.append(base)
        for i, q in enumerate(self.module):
            if q.is_zero():
                continue
            body = q.render()
            if body == "1":
                parts.append("t%d" % (i + 1))
            else:
                parts.append("(%s)*t%d" % (body, i + 1))
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return "ExtensionElement(%s)" % self.render()


def build_extension(base, presentation, torsion_degree_bound=4):
    """Extension handle for base + M; raises TorsionDetectedError when the
    degree-bounded probe finds torsion in the presentation."""
    if presentation.ring != base.ring:
        raise AlgebraMismatchError("module presented over the wrong ring")
    presentation.check_torsion_free(torsion_degree_bound)
    return Extension(base, presentation)


def free_module(base, s):
    """The free module presentation R^s over base's ring."""
    return ModulePresentation(base.ring, s, ())
