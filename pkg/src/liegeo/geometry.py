"""Algebraic sets over finite carrier windows.

Solution sets are enumerated exactly inside a window; radicals are
kernels of evaluation matrices; closures, irreducible decomposition,
unions via relative-ideal products, direct products, dimension and the
coordinate-algebra functors all run on top of those two primitives.
Every result records the window and degree bounds it was computed in.
"""

from __future__ import annotations

import itertools

from .carriers import DEFAULT_BUDGET
from .errors import (AlgebraMismatchError, CapacityExceededError,
                     EmptyWindowError, InternalError, NotADomainError,
                     UnsupportedAlgebraError, WindowTooSmallError)
from .linalg import in_span, nullspace, row_space_key, rref
from .metabelian import Extension
from .terms import (EquationSystem, Evaluator, Lowered, ZERO, free_vars,
                    substitute, term_degree, Var)


class SpanBuilder:
    """Row-echelon span of sparse vectors keyed by support keys."""

    def __init__(self, field):
        self.field = field
        self.rows = {}

    def reduce(self, vec):
        field = self.field
        vec = {k: c for k, c in vec.items() if not field.is_zero(c)}
        while vec:
            k = min(vec)
            row = self.rows.get(k)
            if row is None:
                return vec
            c = vec[k]
            for kk, vv in row.items():
                nv = field.sub(vec.get(kk, field.zero), field.mul(c, vv))
                if field.is_zero(nv):
                    vec.pop(kk, None)
                else:
                    vec[kk] = nv
        return vec

    def add(self, vec):
        """Insert the vector; True when it enlarged the span."""
        rem = self.reduce(vec)
        if not rem:
            return False
        k = min(rem)
        inv = self.field.inv(rem[k])
        self.rows[k] = {kk: self.field.mul(inv, c) for kk, c in rem.items()}
        return True

    def contains(self, vec):
        return not self.reduce(vec)

    def dim(self):
        return len(self.rows)


def _support(element):
    return dict(element.support_items())


class AlgebraicSet:
    """A finite set of points of window^n, tagged with its provenance."""

    def __init__(self, system, window, points, budget, regime):
        self.system = system
        self.window = window
        self.budget = budget
        self.regime = regime
        self.points = tuple(sorted(points, key=_point_key))
        self._affine = None

    @property
    def affine(self):
        if self._affine is None:
            self._affine = Affine(self.window, self.system.variables,
                                  self.budget)
        return self._affine

    def with_points(self, points, regime=None):
        out = AlgebraicSet(self.system, self.window, points, self.budget,
                           regime or self.regime)
        out._affine = self._affine
        return out

    def point_set(self):
        return frozenset(self.points)

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        return (isinstance(other, AlgebraicSet)
                and other.system.variables == self.system.variables
                and other.window.describe() == self.window.describe()
                and set(other.points) == set(self.points))

    def __repr__(self):
        return "AlgebraicSet(%d points, %s)" % (len(self.points), self.regime)

    def render_points(self):
        win = self.window
        return [tuple(win.render_element(e) for e in p) for p in self.points]


def _point_key(point):
    return tuple(e.sort_key() for e in point)


class Affine:
    """The enumerated affine space window^n for named variables."""

    def __init__(self, window, variables, budget=DEFAULT_BUDGET):
        self.window = window
        self.variables = tuple(variables)
        self.budget = budget
        base = window.points(budget)
        n = len(self.variables)
        total = len(base) ** n
        if total > budget:
            raise CapacityExceededError(
                "affine space has %d candidate points, budget is %d"
                % (total, budget))
        self.points = list(itertools.product(base, repeat=n))
        self.evaluator = Evaluator(window, self.variables)

    def solutions(self, equations):
        ev = self.evaluator
        out = []
        for p in self.points:
            if all(ev.vanishes(eq, p) for eq in equations):
                out.append(p)
        return out


def solve(system, window, budget=DEFAULT_BUDGET):
    """Enumerate the solution set of the system inside the window."""
    _check_window(system, window)
    affine = Affine(window, system.variables, budget)
    aset = AlgebraicSet(system, window, affine.solutions(system.equations),
                        budget, regime="enumerated")
    aset._affine = affine
    return aset


def point_set(system, window, points, budget=DEFAULT_BUDGET):
    """Wrap an arbitrary finite subset of window^n for closure work."""
    _check_window(system, window)
    return AlgebraicSet(system, window, points, budget, regime="subset")


def _check_window(system, window):
    spec = system.spec
    if window.field != spec.field:
        raise AlgebraMismatchError("window field %s does not match system %s"
                                   % (window.field.spec(), spec.field.spec()))
    if spec.kind == "free" and window.kind == "free":
        if window.algebra.rank != spec.rank:
            raise AlgebraMismatchError("window rank differs from system rank")
    if spec.kind == "metabelian" and window.kind != "metabelian":
        raise AlgebraMismatchError(
            "metabelian coefficients need a metabelian window")


def _radical_degree(aset, degree):
    if degree is not None:
        return degree
    best = aset.window.degree or 1
    for eq in aset.system.equations:
        best = max(best, term_degree(eq))
    return best


class RadicalWindow:
    """Degree-bounded radical of a point set: the vanishing kernel.

    Rows are coordinates over the lowered window's term basis, kept in
    reduced echelon form so equal radicals compare equal by key.
    """

    def __init__(self, system, window, points, degree):
        self.system = system
        self.window = window
        self.degree = degree
        self.lowered = Lowered(system, degree)
        if self.lowered.dim() == 0:
            raise EmptyWindowError(
                "no terms of degree at most %d" % degree)
        field = window.field
        ev = Evaluator(window, system.variables)
        columns = []
        terms = self.lowered.term_basis()
        for p in points:
            index = {}
            per_term = []
            for t in terms:
                vec = {}
                for key, c in ev.at(t, p).support_items():
                    idx = index.setdefault(key, len(index))
                    vec[idx] = c
                per_term.append(vec)
            columns.append((len(index), per_term))
        d = len(terms)
        transposed = []
        for width, per_term in columns:
            for j in range(width):
                transposed.append([per_term[i].get(j, field.zero)
                                   for i in range(d)])
        if transposed:
            kernel = nullspace(transposed, field)
        else:
            kernel = [[field.one if i == j else field.zero
                       for j in range(d)] for i in range(d)]
        self.rows = rref(kernel, field)[0]
        self.key = row_space_key(self.rows, field)

    def dim(self):
        return len(self.rows)

    def terms(self):
        return [self.lowered.coords_to_term(row) for row in self.rows]

    def contains_term(self, term):
        coords = self.lowered.term_coords(term)
        if coords is None:
            return False
        return in_span(self.rows, coords, self.window.field)

    def quotient_dim(self):
        """Dimension of the coordinate algebra window A[X]/Rad."""
        return self.lowered.dim() - len(self.rows)


def radical(aset, degree=None):
    """Vanishing ideal of the set, windowed at the degree bound."""
    degree = _radical_degree(aset, degree)
    return RadicalWindow(aset.system, aset.window, aset.points, degree)


class _ClosureEngine:
    """Shared evaluation table for closures of subsets of one affine."""

    def __init__(self, aset, degree):
        self.aset = aset
        self.field = aset.window.field
        self.degree = degree
        self.lowered = Lowered(aset.system, degree)
        if self.lowered.dim() == 0:
            raise EmptyWindowError("no terms of degree at most %d" % degree)
        ev = aset.affine.evaluator
        self.candidates = aset.affine.points
        terms = self.lowered.term_basis()
        self.nterms = len(terms)
        index = {}
        self.table = []
        for p in self.candidates:
            per_term = []
            for t in terms:
                vec = {}
                for key, c in ev.at(t, p).support_items():
                    vec[index.setdefault(key, len(index))] = c
                per_term.append(vec)
            self.table.append(per_term)
        self.point_index = {p: i for i, p in enumerate(self.candidates)}
        self._closure_memo = {}
        self._kernel_memo = {}

    def indices(self, points):
        return frozenset(self.point_index[p] for p in points)

    def kernel(self, idx_set):
        hit = self._kernel_memo.get(idx_set)
        if hit is not None:
            return hit
        field = self.field
        transposed = []
        for pi in sorted(idx_set):
            width = 0
            per_term = self.table[pi]
            for vec in per_term:
                if vec:
                    width = max(width, 1 + max(vec))
            for j in range(width):
                transposed.append([per_term[i].get(j, field.zero)
                                   for i in range(self.nterms)])
        if transposed:
            rows = rref(nullspace(transposed, field), field)[0]
        else:
            rows = [[field.one if i == j else field.zero
                     for j in range(self.nterms)] for i in range(self.nterms)]
        self._kernel_memo[idx_set] = rows
        return rows

    def _vanishes(self, row, pi):
        field = self.field
        acc = {}
        per_term = self.table[pi]
        for i, c in enumerate(row):
            if field.is_zero(c):
                continue
            for j, v in per_term[i].items():
                nv = field.add(acc.get(j, field.zero), field.mul(c, v))
                if field.is_zero(nv):
                    acc.pop(j, None)
                else:
                    acc[j] = nv
        return not acc

    def closure(self, idx_set):
        hit = self._closure_memo.get(idx_set)
        if hit is not None:
            return hit
        rows = self.kernel(idx_set)
        out = frozenset(
            pi for pi in range(len(self.candidates))
            if all(self._vanishes(row, pi) for row in rows))
        self._closure_memo[idx_set] = out
        return out


def is_algebraic(aset, degree=None):
    """Closure verdict: (is the set closed, its closure)."""
    degree = _radical_degree(aset, degree)
    engine = _ClosureEngine(aset, degree)
    idx = engine.indices(aset.points)
    cl = engine.closure(idx)
    closure_points = [engine.candidates[i] for i in sorted(cl)]
    closure_set = aset.with_points(closure_points, regime="closure")
    return cl == idx, closure_set


def closure(aset, degree=None):
    return is_algebraic(aset, degree)[1]


# ---------------------------------------------------------------------------
# Relative ideals, zero divisors and unions.


def _subalgebra_basis(generators, degree_bound, field, trunc=None):
    span = SpanBuilder(field)
    basis = []
    queue = []
    for g in generators:
        if g.is_zero() or g.degree() > degree_bound:
            continue
        if span.add(_support(g)):
            basis.append(g)
            queue.append(g)
    while queue:
        e = queue.pop(0)
        for b in list(basis):
            p = e.bracket(b, trunc)
            if p.is_zero() or p.degree() > degree_bound:
                continue
            if span.add(_support(p)):
                basis.append(p)
                queue.append(p)
    return basis


def relative_ideal(x, a_generators, degree_bound, field, trunc=None):
    """Window basis of the ideal generated by x inside the subalgebra
    generated by the coefficient constants together with x."""
    multipliers = _subalgebra_basis(list(a_generators) + [x], degree_bound,
                                    field, trunc)
    span = SpanBuilder(field)
    basis = []
    if not x.is_zero() and x.degree() <= degree_bound and span.add(_support(x)):
        basis.append(x)
    queue = list(basis)
    while queue:
        e = queue.pop(0)
        for m in multipliers:
            p = e.bracket(m, trunc)
            if p.is_zero() or p.degree() > degree_bound:
                continue
            if span.add(_support(p)):
                basis.append(p)
                queue.append(p)
    return basis


_PROBE_CACHE = {}


def zero_divisor_probe(window, degree_bound=None, budget=DEFAULT_BUDGET):
    """Search the window for x, y with vanishing relative-ideal products.

    Returns the first witness pair in graded order, or None.  A None is
    only a statement about this window, not a proof of domainhood.
    Ideals are generated one degree beyond the window so a top-degree
    element still meets its bracket multiples; products are exact.
    """
    bound = degree_bound if degree_bound is not None else (
        (window.degree or 0) + 1)
    cache_key = (window.describe(), bound, budget)
    if cache_key in _PROBE_CACHE:
        return _PROBE_CACHE[cache_key]
    field = window.field
    trunc = getattr(window, "trunc", None)
    a_gens = window.a_generators()
    candidates = [p for p in window.points(budget) if not p.is_zero()]
    ideals = {}

    def ideal_of(i):
        if i not in ideals:
            ideals[i] = relative_ideal(candidates[i], a_gens, bound, field,
                                       trunc)
        return ideals[i]

    witness = None
    for i, x in enumerate(candidates):
        for j in range(i, len(candidates)):
            y = candidates[j]
            if not x.bracket(y, trunc).is_zero():
                continue
            if all(f.bracket(g, trunc).is_zero()
                   for f in ideal_of(i) for g in ideal_of(j)):
                witness = (x, y)
                break
        if witness is not None:
            break
    _PROBE_CACHE[cache_key] = witness
    return witness


def union(z1, z2, ideal_bound=None, override=False, degree=None):
    """A system cutting out z1 ∪ z2, built from relative-ideal products.

    Needs the window to look like an A-domain; a zero-divisor witness
    raises NotADomainError unless override is set.  Equality of V(S)
    with the union is verified on the enumerated window.
    """
    if z1.system.variables != z2.system.variables:
        raise AlgebraMismatchError("unions need identical variable lists")
    if z1.window.describe() != z2.window.describe():
        raise AlgebraMismatchError("unions need a common window")
    window = z1.window
    if not override:
        witness = zero_divisor_probe(window, ideal_bound)
        if witness is not None:
            raise NotADomainError(
                "zero-divisor pair found in the window: %s, %s"
                % (window.render_element(witness[0]),
                   window.render_element(witness[1])))
    system = z1.system
    bound = ideal_bound if ideal_bound is not None else max(
        window.degree or 1,
        max((term_degree(e) for e in
             tuple(system.equations) + tuple(z2.system.equations)),
            default=1))
    lowered = Lowered(system, bound)
    field = window.field
    trunc = getattr(window, "trunc", None)
    a_gens = [lowered.algebra.gen(i) for i in range(system.spec.rank)]
    eqs1 = system.equations or (ZERO,)
    eqs2 = z2.system.equations or (ZERO,)
    span = SpanBuilder(field)
    products = []
    for s1 in eqs1:
        i1 = relative_ideal(lowered.to_element(s1), a_gens, bound, field,
                            trunc)
        if not i1:
            # s1 vanishes identically, so V(s1) is everything and the
            # union collapses to it; an empty product system says so.
            return system.with_equations(())
        for s2 in eqs2:
            i2 = relative_ideal(lowered.to_element(s2), a_gens, bound, field,
                                trunc)
            if not i2:
                return system.with_equations(())
            for f in i1:
                for g in i2:
                    p = f.bracket(g, trunc)
                    if p.is_zero():
                        continue
                    if span.add(_support(p)):
                        products.append(lowered.element_term(p))
    out = system.with_equations(tuple(products))
    solved = set(z1.affine.solutions(out.equations))
    expected = set(z1.points) | set(z2.points)
    if solved != expected:
        raise WindowTooSmallError(
            "union system cuts out %d points, expected %d; raise the "
            "relative-ideal degree bound" % (len(solved), len(expected)))
    return out


def product(z1, z2):
    """Direct product of algebraic sets, with z2's variables renamed
    away from z1's when they collide."""
    if z1.system.spec != z2.system.spec:
        raise AlgebraMismatchError("products need a common coefficient "
                                   "algebra and field")
    used = set(z1.system.variables)
    renaming = {}
    for v in z2.system.variables:
        name = v
        while name in used:
            name += "_"
        renaming[v] = Var(name)
        used.add(name)
    variables = tuple(z1.system.variables) + tuple(
        renaming[v].name for v in z2.system.variables)
    equations = tuple(z1.system.equations) + tuple(
        substitute(e, renaming) for e in z2.system.equations)
    system = EquationSystem(z1.system.spec, variables, equations)
    points = [p + q for p in z1.points for q in z2.points]
    budget = max(z1.budget, z2.budget)
    return AlgebraicSet(system, z1.window, points, budget, regime="product")


DECOMPOSE_CAPACITY = 12


def decompose(aset, degree=None, capacity=DECOMPOSE_CAPACITY):
    """Irreducible components, pairwise incomparable, lex-sorted."""
    if len(aset.points) > capacity:
        raise CapacityExceededError(
            "decompose handles at most %d points, set has %d"
            % (capacity, len(aset.points)))
    if not aset.points:
        return []
    degree = _radical_degree(aset, degree)
    engine = _ClosureEngine(aset, degree)
    whole = engine.indices(aset.points)
    if engine.closure(whole) != whole:
        raise UnsupportedAlgebraError(
            "decompose needs a closed set; take the closure first")
    closed = set()
    members = sorted(whole)
    for r in range(1, len(members) + 1):
        for combo in itertools.combinations(members, r):
            cl = engine.closure(frozenset(combo))
            if cl <= whole:
                closed.add(cl)
    irreducible = []
    for c in closed:
        if _is_irreducible(c, engine):
            irreducible.append(c)
    components = [c for c in irreducible
                  if not any(c < d for d in irreducible)]
    covered = frozenset().union(*components) if components else frozenset()
    if covered != whole:
        raise InternalError("components fail to cover the set")
    out = []
    for c in sorted(components,
                    key=lambda c: [_point_key(engine.candidates[i])
                                   for i in sorted(c)]):
        pts = [engine.candidates[i] for i in sorted(c)]
        out.append(aset.with_points(pts, regime="component"))
    return out


def _is_irreducible(c, engine):
    if not c:
        return False
    if len(c) == 1:
        return True
    # any proper closed cover refines to a cover by two maximal proper
    # closed subsets, so those are the only pairs worth testing
    members = sorted(c)
    proper = set()
    for r in range(1, len(members)):
        for combo in itertools.combinations(members, r):
            cl = engine.closure(frozenset(combo))
            if cl != c:
                proper.add(cl)
    maximal = []
    for a in sorted(proper, key=len, reverse=True):
        if not any(a < b for b in maximal):
            maximal.append(a)
    for i, a in enumerate(maximal):
        for b in maximal[i + 1:]:
            if a | b == c:
                return False
    return True


def dimension(obj, degree=None, capacity=DECOMPOSE_CAPACITY):
    """Krull-style dimension by chains of irreducible closed subsets,
    or the module rank of a metabelian extension."""
    if isinstance(obj, Extension):
        return obj.module_rank()
    aset = obj
    if not aset.points:
        raise UnsupportedAlgebraError("the empty set has no dimension")
    if len(aset.points) > capacity:
        raise CapacityExceededError(
            "dimension chain search handles at most %d points" % capacity)
    degree = _radical_degree(aset, degree)
    engine = _ClosureEngine(aset, degree)
    whole = engine.indices(aset.points)
    closed = set()
    members = sorted(whole)
    for r in range(1, len(members) + 1):
        for combo in itertools.combinations(members, r):
            cl = engine.closure(frozenset(combo))
            if cl <= whole:
                closed.add(cl)
    irr = [c for c in closed if _is_irreducible(c, engine)]
    irr.sort(key=len)
    best = {}
    longest = 0
    for c in irr:
        depth = 0
        for d in irr:
            if d < c and d in best:
                depth = max(depth, best[d] + 1)
        best[c] = depth
        longest = max(longest, depth)
    return longest


# ---------------------------------------------------------------------------
# Coordinate algebras and the category equivalence.


class CoPresentation:
    """Variables plus a radical system, presenting a coordinate algebra."""

    def __init__(self, system, window, radical_window):
        self.system = system
        self.window = window
        self.radical = radical_window
        self.variables = system.variables

    def key(self):
        return self.radical.key

    def terms(self):
        return self.radical.terms()

    def __eq__(self, other):
        return (isinstance(other, CoPresentation)
                and other.variables == self.variables
                and other.key() == self.key())

    def __repr__(self):
        return "CoPresentation(%d radical rows on %d variables)" % (
            self.radical.dim(), len(self.variables))


def functor_F(aset, degree=None):
    """Algebraic set to co-presentation: take the windowed radical."""
    rad = radical(aset, degree)
    return CoPresentation(aset.system, aset.window, rad)


def functor_G(cp, budget=DEFAULT_BUDGET):
    """Co-presentation to algebraic set: solve the radical system."""
    system = cp.system.with_equations(tuple(cp.terms()))
    return solve(system, cp.window, budget)


class PolynomialMap:
    """A tuple of terms in the source variables, one per target variable."""

    def __init__(self, source, target, components):
        if len(components) != len(target.system.variables):
            raise AlgebraMismatchError(
                "need one component per target variable")
        for comp in components:
            loose = free_vars(comp) - set(source.system.variables)
            if loose:
                raise AlgebraMismatchError(
                    "component uses unknown variables %s"
                    % ", ".join(sorted(loose)))
        self.source = source
        self.target = target
        self.components = tuple(components)

    def apply(self, point):
        ev = self.source.affine.evaluator
        return tuple(ev.at(c, point) for c in self.components)

    def is_morphism(self):
        target_points = set(self.target.points)
        return all(self.apply(p) in target_points for p in self.source.points)

    def pullback_check(self, degree=None):
        """Substituted target-radical terms must vanish on the source."""
        rad = radical(self.target, degree)
        mapping = dict(zip(self.target.system.variables, self.components))
        ev = self.source.affine.evaluator
        for t in rad.terms():
            pulled = substitute(t, mapping)
            for p in self.source.points:
                if not ev.vanishes(pulled, p):
                    return False
        return True


def homomorphism_count(aset, degree=None):
    """Number of coefficient-fixing homomorphisms from the coordinate
    algebra into the carrier, found by exhausting variable images."""
    rad = radical(aset, degree)
    ev = aset.affine.evaluator
    terms = rad.terms()
    count = 0
    for p in aset.affine.points:
        if all(ev.vanishes(t, p) for t in terms):
            count += 1
    return count


def noetherian_probe(system, window, budget=DEFAULT_BUDGET):
    """Greedy finite subsystem with the same solution set."""
    affine = Affine(window, system.variables, budget)
    ev = affine.evaluator
    current = list(affine.points)
    chosen = []
    for eq in system.equations:
        kept = [p for p in current if ev.vanishes(eq, p)]
        if len(kept) < len(current):
            chosen.append(eq)
            current = kept
    return system.with_equations(tuple(chosen))
