"""Universal sentences and quasi-identities over finite carriers.

Sentences quantify over the window's points but multiply exactly: a
window stands in for the algebra it slices, not for its nilpotent
quotient.  The axiom suite gets semantics-preserving fast paths on
metabelian windows; every fast path is cross-checked against the
exhaustive evaluator in the test suite.
"""

from __future__ import annotations

import itertools

from .carriers import DEFAULT_BUDGET
from .errors import (CapacityExceededError, InfiniteFieldError,
                     UnknownSymbolError, WindowTooSmallError)
from .geometry import SpanBuilder, _support, radical, solve
from .linalg import nullspace, row_space_key, rref
from .terms import (Bracket, Const, Evaluator, Lowered, Sum, Var, free_vars,
                    render_term, substitute)


class QuasiIdentity:
    """Universally quantified implication: all premises zero forces the
    conclusion zero."""

    def __init__(self, variables, premises, conclusion):
        self.variables = tuple(variables)
        self.premises = tuple(premises)
        self.conclusion = conclusion
        bound = set(self.variables)
        for t in self.premises + (self.conclusion,):
            loose = free_vars(t) - bound
            if loose:
                raise UnknownSymbolError(
                    "unbound variables %s" % ", ".join(sorted(loose)))

    def render(self, field):
        left = " & ".join("%s = 0" % render_term(p, field)
                          for p in self.premises) or "0 = 0"
        return "%s -> %s = 0" % (left, render_term(self.conclusion, field))

    def __repr__(self):
        return "QuasiIdentity(%d premises)" % len(self.premises)


class UniversalSentence:
    """Universally quantified disjunction of (equations, disequations)
    conjunctions."""

    def __init__(self, variables, disjuncts):
        self.variables = tuple(variables)
        self.disjuncts = tuple(
            (tuple(eqs), tuple(diseqs)) for eqs, diseqs in disjuncts)
        bound = set(self.variables)
        for eqs, diseqs in self.disjuncts:
            for t in eqs + diseqs:
                loose = free_vars(t) - bound
                if loose:
                    raise UnknownSymbolError(
                        "unbound variables %s" % ", ".join(sorted(loose)))

    def render(self, field):
        parts = []
        for eqs, diseqs in self.disjuncts:
            lits = (["%s = 0" % render_term(t, field) for t in eqs]
                    + ["%s != 0" % render_term(t, field) for t in diseqs])
            parts.append("(" + " & ".join(lits) + ")")
        return " | ".join(parts)

    def __repr__(self):
        return "UniversalSentence(%d disjuncts)" % len(self.disjuncts)


class CheckResult:
    """Verdict of a sentence check, with the first falsifying witness."""

    def __init__(self, holds, witness, checked, method="exhaustive"):
        self.holds = holds
        self.witness = witness
        self.checked = checked
        self.method = method

    def witness_rendered(self, window):
        if self.witness is None:
            return None
        return {name: window.render_element(value)
                for name, value in self.witness.items()}

    def __repr__(self):
        return "CheckResult(holds=%r, checked=%d)" % (self.holds,
                                                      self.checked)


def _sentence_holds_at(sentence, values, ev):
    point = tuple(values)
    if isinstance(sentence, QuasiIdentity):
        for p in sentence.premises:
            if not ev.at(p, point).is_zero():
                return True
        return ev.at(sentence.conclusion, point).is_zero()
    for eqs, diseqs in sentence.disjuncts:
        if (all(ev.at(t, point).is_zero() for t in eqs)
                and all(not ev.at(t, point).is_zero() for t in diseqs)):
            return True
    return False


def check_sentence(sentence, window, budget=DEFAULT_BUDGET):
    """Exhaustive truth of the sentence over the window's points.

    Assignments are enumerated in graded product order, so a returned
    witness is minimal in that order.
    """
    points = window.points(budget)
    n = len(sentence.variables)
    total = len(points) ** n
    if total > budget:
        raise CapacityExceededError(
            "sentence needs %d assignments, budget is %d" % (total, budget))
    ev = Evaluator(window, sentence.variables, trunc=None)
    checked = 0
    for values in itertools.product(points, repeat=n):
        checked += 1
        if not _sentence_holds_at(sentence, values, ev):
            witness = dict(zip(sentence.variables, values))
            return CheckResult(False, witness, checked)
    return CheckResult(True, None, checked)


# ---------------------------------------------------------------------------
# The axiom suite.


def _xyx(x, y):
    return Bracket(Bracket(x, y), x)


def phi1_sentence():
    v = [Var("x1"), Var("x2"), Var("x3"), Var("x4")]
    body = Bracket(Bracket(v[0], v[1]), Bracket(v[2], v[3]))
    return UniversalSentence([w.name for w in v], [((body,), ())])


def phi2_sentence():
    x, y = Var("x"), Var("y")
    return QuasiIdentity(["x", "y"],
                         [_xyx(x, y), Bracket(Bracket(x, y), y)],
                         Bracket(x, y))


def phi3_sentence():
    x, y, z = Var("x"), Var("y"), Var("z")
    return UniversalSentence(
        ["x", "y", "z"],
        [((x,), ()),
         ((), (Bracket(x, y),)),
         ((), (Bracket(x, z),)),
         ((Bracket(y, z),), ())])


def annihilator_quasi_identity(constants):
    """Commuting with each listed constant forces commuting with all y.

    constants are (label, element) pairs of the carrier; this is the
    finite centraliser-collapse quasi-identity family."""
    x, y = Var("x"), Var("y")
    premises = [Bracket(x, Const(label, value)) for label, value in constants]
    return QuasiIdentity(["x", "y"], premises, Bracket(x, y))


class AxiomVerdict:
    def __init__(self, axiom, holds, witness, method, provisos=()):
        self.axiom = axiom
        self.holds = holds
        self.witness = witness
        self.method = method
        self.provisos = tuple(provisos)

    def __repr__(self):
        return "AxiomVerdict(%s, holds=%r)" % (self.axiom, self.holds)


def fit_members(window, budget=DEFAULT_BUDGET):
    """Points x of the window with [[x, y], x] = 0 for every window y."""
    points = window.points(budget)
    if window.kind == "metabelian":
        return [p for p in points if p.in_fitting()]
    out = []
    for x in points:
        if all(x.bracket(y).bracket(x).is_zero() for y in points):
            out.append(x)
    return out


def _check_phi1(window, budget):
    basis = window.basis()
    total = len(basis) ** 4
    if total > budget:
        raise CapacityExceededError(
            "phi1 needs %d basis quadruples, budget is %d" % (total, budget))
    checked = 0
    for quad in itertools.product(basis, repeat=4):
        checked += 1
        val = quad[0].bracket(quad[1]).bracket(quad[2].bracket(quad[3]))
        if not val.is_zero():
            witness = {"x%d" % (i + 1): q for i, q in enumerate(quad)}
            return AxiomVerdict("Phi1", False,
                                _render_witness(witness, window),
                                "multilinear-basis")
    return AxiomVerdict("Phi1", True, None, "multilinear-basis")


def _check_phi2(window, budget):
    result = check_sentence(phi2_sentence(), window, budget)
    return AxiomVerdict("Phi2", result.holds,
                        result.witness_rendered(window), "exhaustive")


def _check_phi3(window, budget):
    field = window.field
    points = window.points(budget)
    basis = window.basis()
    for x in points:
        if x.is_zero():
            continue
        # the centraliser of x in the window is the kernel of w -> [x, w]
        images = [x.bracket(b) for b in basis]
        index = {}
        cols = []
        for img in images:
            vec = {}
            for key, c in img.support_items():
                vec[index.setdefault(key, len(index))] = c
            cols.append(vec)
        matrix = [[cols[j].get(i, field.zero) for j in range(len(basis))]
                  for i in range(len(index))]
        if matrix:
            kernel = nullspace(matrix, field)
        else:
            kernel = [[field.one if i == j else field.zero
                       for j in range(len(basis))] for i in range(len(basis))]
        members = []
        for coords in kernel:
            e = window.zero()
            for c, b in zip(coords, basis):
                if not field.is_zero(c):
                    e = e.add(b.scale(c))
            members.append(e)
        # commutation is bilinear, so kernel basis pairs decide it
        for i, y in enumerate(members):
            for z in members[i:]:
                if not y.bracket(z).is_zero():
                    witness = {"x": x, "y": y, "z": z}
                    return AxiomVerdict("Phi3", False,
                                        _render_witness(witness, window),
                                        "centraliser-kernel")
    return AxiomVerdict("Phi3", True, None, "centraliser-kernel")


def _check_phi4(window, r, budget):
    provisos = []
    if window.kind == "metabelian":
        if r >= window.algebra.rank:
            # r+1 linear parts in an r-dimensional space always admit a
            # dependent combination, which lies in the Fitting radical
            return AxiomVerdict("Phi4", True, None, "linear-rank")
    field = window.field
    if not hasattr(field, "elements"):
        raise InfiniteFieldError(
            "Phi4 enumerates scalar combinations, needs a finite field")
    points = window.points(budget)
    fit = set(fit_members(window, budget))
    if len(fit) == len(points):
        provisos.append("fit_degenerate")
        return AxiomVerdict("Phi4", True, None, "exhaustive", provisos)
    n = r + 1
    total = len(points) ** n
    if total > budget:
        raise CapacityExceededError(
            "phi4 needs %d tuples, budget is %d" % (total, budget))
    scalars = [c for c in _nonzero_tuples(field, n)]
    for tup in itertools.product(points, repeat=n):
        # phi(tup) holds when no nonzero combination falls into Fit
        if any(_combine(tup, alphas, window) in fit for alphas in scalars):
            continue
        witness = {"x%d" % (i + 1): v for i, v in enumerate(tup)}
        return AxiomVerdict("Phi4", False, _render_witness(witness, window),
                            "exhaustive", provisos)
    return AxiomVerdict("Phi4", True, None, "exhaustive", provisos)


def _nonzero_tuples(field, n):
    for alphas in itertools.product(field.elements(), repeat=n):
        if any(not field.is_zero(a) for a in alphas):
            yield alphas


def _combine(tup, alphas, window):
    e = window.zero()
    for a, v in zip(alphas, tup):
        if not window.field.is_zero(a):
            e = e.add(v.scale(a))
    return e


def _check_phi5(window, poly, budget):
    """z1 z2 acted on by f(a1..ar) vanishing must force z1 z2 = 0."""
    field = window.field
    axiom = "Phi5'(%s)" % poly.render()
    # the bracket image lies inside the Fitting window; if f acts
    # injectively there the axiom holds outright
    basis = window.basis()
    span = SpanBuilder(field)
    products = []
    for i, b1 in enumerate(basis):
        for b2 in basis[i + 1:]:
            p = b1.bracket(b2)
            if not p.is_zero() and span.add(_support(p)):
                products.append(p)
    index = {}
    cols = []
    for p in products:
        vec = {}
        for key, c in p.fit_action(poly).support_items():
            vec[index.setdefault(key, len(index))] = c
        cols.append(vec)
    matrix = [[cols[j].get(i, field.zero) for j in range(len(products))]
              for i in range(len(index))]
    kernel = nullspace(matrix, field) if matrix else [
        [field.one if i == j else field.zero for j in range(len(products))]
        for i in range(len(products))]
    if not kernel or not products:
        return AxiomVerdict(axiom, True, None, "action-kernel")
    # a kernel element need not be a single bracket; fall back to the
    # exhaustive pair scan before claiming a failure
    points = window.points(budget)
    total = len(points) ** 2
    if total > budget:
        raise CapacityExceededError(
            "phi5 needs %d pairs, budget is %d" % (total, budget))
    for z1, z2 in itertools.product(points, repeat=2):
        w = z1.bracket(z2)
        if w.is_zero():
            continue
        if w.fit_action(poly).is_zero():
            witness = {"z1": z1, "z2": z2}
            return AxiomVerdict(axiom, False,
                                _render_witness(witness, window),
                                "exhaustive")
    return AxiomVerdict(axiom, True, None, "exhaustive")


def _render_witness(witness, window):
    return {name: window.render_element(v) for name, v in witness.items()}


class SuiteResult:
    def __init__(self, window, verdicts):
        self.window = window
        self.verdicts = list(verdicts)

    def all_hold(self):
        return all(v.holds for v in self.verdicts)

    def __repr__(self):
        return "SuiteResult(%s)" % ", ".join(
            "%s=%s" % (v.axiom, "pass" if v.holds else "fail")
            for v in self.verdicts)


def phi_suite(window, r=None, polys=None, budget=DEFAULT_BUDGET):
    """Run the axiom battery on a carrier window."""
    if r is None:
        if window.kind == "metabelian":
            r = window.algebra.rank
        else:
            raise UnknownSymbolError(
                "table carriers need an explicit coefficient rank r")
    verdicts = [
        _check_phi1(window, budget),
        _check_phi2(window, budget),
        _check_phi3(window, budget),
        _check_phi4(window, r, budget),
    ]
    if polys:
        if window.kind != "metabelian":
            raise UnknownSymbolError(
                "module-action axioms need a metabelian window")
        for poly in polys:
            verdicts.append(_check_phi5(window, poly, budget))
    return SuiteResult(window, verdicts)


# ---------------------------------------------------------------------------
# Quasivariety radical saturation.


class SaturationResult:
    """Stable ideal window of the saturation chain, in radical shape."""

    def __init__(self, lowered, rows, key, rounds):
        self.lowered = lowered
        self.rows = rows
        self.key = key
        self.rounds = rounds

    def dim(self):
        return len(self.rows)

    def terms(self):
        return [self.lowered.coords_to_term(row) for row in self.rows]


def saturate_radical(system, quasi_identities, degree, budget=DEFAULT_BUDGET):
    """Fixpoint of the saturation chain inside the degree window.

    Round zero is the windowed ideal generated by the system; each round
    substitutes window basis terms into the quasi-identities, adjoins
    conclusions whose premises already lie in the current ideal, and
    closes under bracketing again.
    """
    lowered = Lowered(system, degree)
    field = system.spec.field
    trunc = lowered.window.trunc
    basis_terms = lowered.term_basis()
    generators = [lowered.algebra.gen(i)
                  for i in range(lowered.algebra.rank)]

    span = SpanBuilder(field)
    elements = []

    def adjoin(e):
        if e.is_zero():
            return False
        coords = lowered.element_coords(e)
        if coords is None:
            return False
        if span.add(_support(e)):
            elements.append(e)
            return True
        return False

    def close_ideal():
        queue = list(elements)
        while queue:
            e = queue.pop(0)
            for g in generators:
                p = e.bracket(g, trunc)
                if adjoin(p):
                    queue.append(p)

    for eq in system.equations:
        e = lowered.to_element(eq)
        if not e.is_zero() and lowered.element_coords(e) is None:
            raise WindowTooSmallError(
                "equation of degree above %d, raise the saturation degree"
                % degree)
        adjoin(e)
    close_ideal()

    arity = {q: len(q.variables) for q in quasi_identities}
    max_arity = max(arity.values(), default=0)
    if max_arity and len(basis_terms) ** max_arity > budget:
        raise CapacityExceededError(
            "saturation substitutions exceed budget %d" % budget)

    def contains(term):
        e = lowered.to_element(term)
        if e.is_zero():
            return True
        coords = lowered.element_coords(e)
        if coords is None:
            return False
        return span.contains(_support(e))

    rounds = 0
    changed = True
    while changed:
        changed = False
        rounds += 1
        for q in quasi_identities:
            for tup in itertools.product(basis_terms, repeat=arity[q]):
                mapping = dict(zip(q.variables, tup))
                if all(contains(substitute(p, mapping)) for p in q.premises):
                    e = lowered.to_element(substitute(q.conclusion, mapping))
                    if adjoin(e):
                        changed = True
        if changed:
            close_ideal()

    coords_rows = [lowered.element_coords(e) for e in elements]
    rows = rref([r for r in coords_rows if r is not None], field)[0]
    return SaturationResult(lowered, rows, row_space_key(rows, field), rounds)


def enumerate_quasi_identities(window, arity=2, max_premises=2,
                               budget=DEFAULT_BUDGET):
    """All valid quasi-identities over a small term pool on the carrier.

    The pool holds the variables, their pairwise sums and brackets; a
    candidate is kept when the exhaustive check confirms it on the
    window.  Deterministic order, premise sets by size then position.
    """
    names = ["z%d" % (i + 1) for i in range(arity)]
    variables = [Var(n) for n in names]
    pool = list(variables)
    for i in range(arity):
        for j in range(i + 1, arity):
            pool.append(Sum((variables[i], variables[j])))
    for i in range(arity):
        for j in range(i + 1, arity):
            pool.append(Bracket(variables[i], variables[j]))
    out = []
    indices = range(len(pool))
    for npremises in range(0, max_premises + 1):
        for premise_idx in itertools.combinations(indices, npremises):
            for concl_idx in indices:
                if concl_idx in premise_idx:
                    continue
                qi = QuasiIdentity(names,
                                   [pool[i] for i in premise_idx],
                                   pool[concl_idx])
                if check_sentence(qi, window, budget).holds:
                    out.append(qi)
    return out


# ---------------------------------------------------------------------------
# Discrimination and geometric equivalence.


def discriminates(cp, window, targets, budget=DEFAULT_BUDGET):
    """A homomorphism out of the co-presented algebra keeping every
    target nonzero, or None when every assignment kills one."""
    relations = cp.terms()
    variables = cp.variables
    points = window.points(budget)
    total = len(points) ** len(variables)
    if total > budget:
        raise CapacityExceededError(
            "discrimination needs %d assignments, budget is %d"
            % (total, budget))
    ev = Evaluator(window, variables)
    for tup in itertools.product(points, repeat=len(variables)):
        if not all(ev.at(rel, tup).is_zero() for rel in relations):
            continue
        if all(not ev.at(t, tup).is_zero() for t in targets):
            return dict(zip(variables, tup))
    return None


def geo_equiv_probe(window_b, window_c, corpus, degree=None,
                    budget=DEFAULT_BUDGET):
    """Compare radical windows over two carriers system by system.

    Returns (equivalent, divergence) where divergence names the first
    system whose radicals differ, with both canonical keys.
    """
    for i, system in enumerate(corpus):
        rad_b = radical(solve(system, window_b, budget), degree)
        rad_c = radical(solve(system, window_c, budget), degree)
        if rad_b.key != rad_c.key:
            return False, {
                "index": i,
                "system": system.render(),
                "left_rows": len(rad_b.rows),
                "right_rows": len(rad_c.rows),
            }
    return True, None
