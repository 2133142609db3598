"""Lie polynomial terms, the system file parser, and evaluation.

Terms are immutable trees over variables, constants of the coefficient
algebra, scalar multiples, sums and brackets.  A system fixes the
coefficient algebra (zero, free or metabelian of some rank), the ground
field and the variable list; evaluation substitutes carrier elements for
variables and is a homomorphism fixing the constants.
"""

from __future__ import annotations

import re

from .errors import (AlgebraMismatchError, ParseError, UnknownSymbolError,
                     UnsupportedAlgebraError)
from .fields import parse_field_spec
from .freelie import FreeLie, std_factorization
from .metabelian import Metabelian, MetabelianElement


class Zero:
    __slots__ = ()

    def __eq__(self, other):
        return isinstance(other, Zero)

    def __hash__(self):
        return hash("term-zero")

    def __repr__(self):
        return "Zero()"


class Var:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __eq__(self, other):
        return isinstance(other, Var) and other.name == self.name

    def __hash__(self):
        return hash(("term-var", self.name))

    def __repr__(self):
        return "Var(%r)" % self.name


class Const:
    """A named constant holding its exact value in the coefficient algebra."""

    __slots__ = ("label", "value", "_hash")

    def __init__(self, label, value):
        self.label = label
        self.value = value
        self._hash = None

    def __eq__(self, other):
        return (isinstance(other, Const) and other.label == self.label
                and other.value == self.value)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("term-const", self.label, self.value))
        return self._hash

    def __repr__(self):
        return "Const(%r)" % self.label


class Sum:
    __slots__ = ("children", "_hash")

    def __init__(self, children):
        self.children = tuple(children)
        self._hash = None

    def __eq__(self, other):
        return isinstance(other, Sum) and other.children == self.children

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("term-sum", self.children))
        return self._hash

    def __repr__(self):
        return "Sum(%r)" % (self.children,)


class ScalarMul:
    __slots__ = ("coeff", "child", "_hash")

    def __init__(self, coeff, child):
        self.coeff = coeff
        self.child = child
        self._hash = None

    def __eq__(self, other):
        return (isinstance(other, ScalarMul) and other.child == self.child
                and other.coeff == self.coeff)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("term-smul", self.coeff, self.child))
        return self._hash

    def __repr__(self):
        return "ScalarMul(%r, %r)" % (self.coeff, self.child)


class Bracket:
    __slots__ = ("left", "right", "_hash")

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self._hash = None

    def __eq__(self, other):
        return (isinstance(other, Bracket) and other.left == self.left
                and other.right == self.right)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("term-bracket", self.left, self.right))
        return self._hash

    def __repr__(self):
        return "Bracket(%r, %r)" % (self.left, self.right)


ZERO = Zero()


def free_vars(term):
    if isinstance(term, Var):
        return {term.name}
    if isinstance(term, Sum):
        out = set()
        for c in term.children:
            out |= free_vars(c)
        return out
    if isinstance(term, ScalarMul):
        return free_vars(term.child)
    if isinstance(term, Bracket):
        return free_vars(term.left) | free_vars(term.right)
    return set()


def substitute(term, mapping):
    """Replace variables by terms; mapping is {name: term}."""
    if isinstance(term, Var):
        return mapping.get(term.name, term)
    if isinstance(term, Sum):
        return Sum(tuple(substitute(c, mapping) for c in term.children))
    if isinstance(term, ScalarMul):
        return ScalarMul(term.coeff, substitute(term.child, mapping))
    if isinstance(term, Bracket):
        return Bracket(substitute(term.left, mapping),
                       substitute(term.right, mapping))
    return term


def render_term(term, field):
    if isinstance(term, Zero):
        return "0"
    if isinstance(term, Var):
        return term.name
    if isinstance(term, Const):
        return term.label
    if isinstance(term, Bracket):
        return "[%s, %s]" % (render_term(term.left, field),
                             render_term(term.right, field))
    if isinstance(term, ScalarMul):
        if isinstance(term.child, Sum):
            inner = Sum(tuple(ScalarMul(term.coeff, c)
                              for c in term.child.children))
            return render_term(inner, field)
        if term.coeff == field.one:
            return render_term(term.child, field)
        return "%s*%s" % (field.render(term.coeff),
                          render_term(term.child, field))
    if isinstance(term, Sum):
        return " + ".join(render_term(c, field) for c in term.children)
    raise UnsupportedAlgebraError("unknown term node %r" % (term,))


def term_degree(term):
    """Upper bound on the multiplication depth of a term."""
    if isinstance(term, (Zero,)):
        return 0
    if isinstance(term, Var):
        return 1
    if isinstance(term, Const):
        return term.value.degree() if term.value is not None else 1
    if isinstance(term, Sum):
        return max(term_degree(c) for c in term.children)
    if isinstance(term, ScalarMul):
        return term_degree(term.child)
    return term_degree(term.left) + term_degree(term.right)


class AlgebraSpec:
    """Coefficient algebra declaration: zero, free(r) or metabelian(r)."""

    def __init__(self, kind, rank, field):
        if kind not in ("zero", "free", "metabelian"):
            raise UnsupportedAlgebraError("unknown algebra kind %r" % kind)
        if kind == "zero":
            rank = 0
        self.kind = kind
        self.rank = rank
        self.field = field
        if kind == "free":
            self._algebra = FreeLie(rank, field)
        elif kind == "metabelian":
            self._algebra = Metabelian(rank, field)
        else:
            self._algebra = None

    def algebra(self):
        return self._algebra

    def const(self, i):
        """The constant term a_{i+1}."""
        if self._algebra is None or not 0 <= i < self.rank:
            raise UnknownSymbolError("constant a%d is not declared" % (i + 1))
        return Const("a%d" % (i + 1), self._algebra.gen(i))

    def const_names(self):
        return ["a%d" % (i + 1) for i in range(self.rank)]

    def describe(self):
        if self.kind == "zero":
            return "zero field=%s" % self.field.spec()
        return "%s rank=%d field=%s" % (self.kind, self.rank,
                                        self.field.spec())

    def __eq__(self, other):
        return (isinstance(other, AlgebraSpec) and other.kind == self.kind
                and other.rank == self.rank and other.field == self.field)

    def __hash__(self):
        return hash((self.kind, self.rank, self.field))

    def __repr__(self):
        return "AlgebraSpec(%s)" % self.describe()


class EquationSystem:
    """Equations f = 0 over declared variables and coefficient algebra."""

    def __init__(self, spec, variables, equations):
        self.spec = spec
        self.variables = tuple(variables)
        self.equations = tuple(equations)
        for eq in self.equations:
            loose = free_vars(eq) - set(self.variables)
            if loose:
                raise UnknownSymbolError(
                    "equation uses undeclared variables %s"
                    % ", ".join(sorted(loose)))

    def n_vars(self):
        return len(self.variables)

    def with_equations(self, equations):
        return EquationSystem(self.spec, self.variables, equations)

    def render(self):
        lines = ["algebra %s" % self.spec.describe()]
        if self.variables:
            lines.append("vars %s" % ", ".join(self.variables))
        for eq in self.equations:
            lines.append("eq %s = 0" % render_term(eq, self.spec.field))
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return "EquationSystem(%d equations in %d variables)" % (
            len(self.equations), len(self.variables))


class SystemDocument:
    """A parsed system file: the system plus bindings and polytope blocks."""

    def __init__(self, system, lets, polytope):
        self.system = system
        self.lets = lets
        self.polytope = polytope


def evaluate(term, assignment, window, trunc=None, memo=None):
    """Image of the term under the substitution homomorphism.

    assignment maps variable names to carrier elements; products are
    computed exactly unless a truncation context is supplied.
    """
    if isinstance(term, Zero):
        return window.zero()
    if isinstance(term, Var):
        try:
            return assignment[term.name]
        except KeyError:
            raise UnknownSymbolError("no value for variable %r" % term.name)
    if isinstance(term, Const):
        return window.embed_const(term.value)
    if memo is not None:
        key = (term, tuple(sorted(assignment.items())))
        hit = memo.get(key)
        if hit is not None:
            return hit
    if isinstance(term, Sum):
        out = window.zero()
        for c in term.children:
            out = out.add(evaluate(c, assignment, window, trunc, memo))
    elif isinstance(term, ScalarMul):
        out = evaluate(term.child, assignment, window, trunc, memo)
        out = out.scale(term.coeff)
    elif isinstance(term, Bracket):
        left = evaluate(term.left, assignment, window, trunc, memo)
        right = evaluate(term.right, assignment, window, trunc, memo)
        out = left.bracket(right, trunc)
    else:
        raise UnsupportedAlgebraError("unknown term node %r" % (term,))
    if memo is not None:
        memo[key] = out
    return out


_WINDOW_TRUNC = object()


class Evaluator:
    """Evaluation against one window with a (term, point) memo.

    Products follow the window's multiplication by default: truncated
    for quotient windows, exact for exact windows and table carriers.
    Pass trunc explicitly (None for exact) to override.
    """

    def __init__(self, window, variables, trunc=_WINDOW_TRUNC):
        self.window = window
        self.variables = tuple(variables)
        if trunc is _WINDOW_TRUNC:
            trunc = getattr(window, "trunc", None)
        self.trunc = trunc
        self._memo = {}

    def at(self, term, point):
        """point is a tuple of carrier elements aligned with variables."""
        key = (term, point)
        hit = self._memo.get(key)
        if hit is None:
            assignment = dict(zip(self.variables, point))
            hit = evaluate(term, assignment, self.window, self.trunc)
            self._memo[key] = hit
        return hit

    def vanishes(self, term, point):
        return self.at(term, point).is_zero()


# ---------------------------------------------------------------------------
# Lowering A[X] to a concrete algebra on coefficient-plus-variable generators.


class Lowered:
    """A[X] realized on r + n generators, with a degree window.

    Basis vectors of the window double as terms, so ideals and radicals
    computed as linear algebra can always be read back as equations.
    """

    def __init__(self, system, degree):
        spec = system.spec
        n = len(system.variables)
        names = spec.const_names() + list(system.variables)
        self.system = system
        self.degree = degree
        self.rank = spec.rank
        if spec.kind == "metabelian":
            from .carriers import MetabelianWindow
            self.window = MetabelianWindow(spec.rank + n, spec.field, degree,
                                           names)
        else:
            from .carriers import FreeLieWindow
            self.window = FreeLieWindow(spec.rank + n, spec.field, degree,
                                        names)
        self.algebra = self.window.algebra
        self._terms = [self._basis_term(i)
                       for i in range(len(self.window.basis()))]
        self._index = {self._key(b): i
                       for i, b in enumerate(self.window.basis())}

    def dim(self):
        return len(self._terms)

    def term_basis(self):
        return list(self._terms)

    def gen_term(self, i):
        """Generator i of the lowered algebra as a term."""
        if i < self.rank:
            return self.system.spec.const(i)
        return Var(self.system.variables[i - self.rank])

    def _basis_term(self, idx):
        basis = self.window.basis()
        e = basis[idx]
        if isinstance(e, MetabelianElement):
            if idx < self.algebra.rank:
                return self.gen_term(idx)
            (k, j), exps = self.algebra.fit_basis_pairs(
                max(self.degree - 2, 0))[idx - self.algebra.rank]
            t = Bracket(self.gen_term(k), self.gen_term(j))
            for var, m in enumerate(exps):
                for _ in range(m):
                    t = Bracket(t, self.gen_term(var))
            return t
        word = next(iter(e.coeffs))
        return self._word_term(word)

    def _word_term(self, word):
        if len(word) == 1:
            return self.gen_term(word[0])
        left, right = std_factorization(word)
        return Bracket(self._word_term(left), self._word_term(right))

    def _key(self, basis_element):
        items = basis_element.support_items()
        return items[0][0]

    def to_element(self, term):
        """Normal form of a term as an element of the lowered algebra."""
        if isinstance(term, Zero):
            return self.algebra.zero
        if isinstance(term, Var):
            name = term.name
            if name not in self.system.variables:
                raise UnknownSymbolError("undeclared variable %r" % name)
            return self.algebra.gen(
                self.rank + self.system.variables.index(name))
        if isinstance(term, Const):
            return self.embed_const(term.value)
        if isinstance(term, Sum):
            out = self.algebra.zero
            for c in term.children:
                out = out.add(self.to_element(c))
            return out
        if isinstance(term, ScalarMul):
            return self.to_element(term.child).scale(term.coeff)
        if isinstance(term, Bracket):
            return self.to_element(term.left).bracket(
                self.to_element(term.right))
        raise UnsupportedAlgebraError("unknown term node %r" % (term,))

    def embed_const(self, value):
        """Reinterpret an element of A inside the lowered algebra."""
        alg = self.algebra
        if isinstance(value, MetabelianElement):
            if value.alg.rank == alg.rank:
                return value
            linear = tuple(value.linear) + (
                value.alg.field.zero,) * (alg.rank - value.alg.rank)
            fit = {}
            for pair, q in value.fit.items():
                fit[pair] = _pad_poly(q, alg.ring)
            return MetabelianElement(alg, linear, fit)
        if value.alg.rank == alg.rank:
            return value
        from .freelie import FreeLieElement
        return FreeLieElement(alg, dict(value.coeffs))

    def element_coords(self, element):
        """Coordinates over the window basis; None if outside the window."""
        field = self.algebra.field
        coords = [field.zero] * self.dim()
        for key, c in element.support_items():
            idx = self._index.get(key)
            if idx is None:
                return None
            coords[idx] = c
        return coords

    def coords_to_term(self, coords):
        field = self.algebra.field
        parts = []
        for c, t in zip(coords, self._terms):
            if field.is_zero(c):
                continue
            parts.append(t if c == field.one else ScalarMul(c, t))
        if not parts:
            return ZERO
        if len(parts) == 1:
            return parts[0]
        return Sum(tuple(parts))

    def term_coords(self, term):
        return self.element_coords(self.to_element(term))

    def element_term(self, element):
        """A term evaluating to the element; not limited to the window."""
        field = self.algebra.field
        parts = []
        if isinstance(element, MetabelianElement):
            for i, c in enumerate(element.linear):
                if field.is_zero(c):
                    continue
                parts.append((c, self.gen_term(i)))
            for pair in sorted(element.fit):
                q = element.fit[pair]
                k, j = pair
                for exps in sorted(q.coeffs):
                    c = q.coeffs[exps]
                    if field.is_zero(c):
                        continue
                    t = Bracket(self.gen_term(k), self.gen_term(j))
                    for var, m in enumerate(exps):
                        for _ in range(m):
                            t = Bracket(t, self.gen_term(var))
                    parts.append((c, t))
        else:
            for (_, word), c in element.support_items():
                parts.append((c, self._word_term(word)))
        terms = [t if c == field.one else ScalarMul(c, t) for c, t in parts]
        if not terms:
            return ZERO
        if len(terms) == 1:
            return terms[0]
        return Sum(tuple(terms))


def _pad_poly(poly, big_ring):
    pad = big_ring.nvars - poly.ring.nvars
    return type(poly)(big_ring,
                      {exps + (0,) * pad: c for exps, c in poly.coeffs.items()})


# ---------------------------------------------------------------------------
# Parser.


_ALGEBRA_RE = re.compile(
    r"^algebra\s+(zero|free|metabelian)(?:\s+rank=(\d+))?\s+field=(\S+)\s*$")
_POLYTOPE_RE = re.compile(
    r"^polytope\s+factor(?:\s+basis=([A-Za-z0-9_,]*))?"
    r"(?:\s+shift=([A-Za-z0-9_]+))?\s*$")
_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<num>\d+(?:/\d+)?)|(?P<sym>[\[\],=+*-])")


def _tokenize(text, lineno):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(lineno, pos + 1,
                             "unexpected character %r" % text[pos])
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos + 1))
        pos = m.end()
    return tokens


class _TermParser:
    def __init__(self, tokens, lineno, resolve):
        self.tokens = tokens
        self.lineno = lineno
        self.pos = 0
        self.resolve = resolve

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ParseError(self.lineno, 0, "unexpected end of line")
        self.pos += 1
        return tok

    def expect(self, text):
        tok = self.take()
        if tok[1] != text:
            raise ParseError(self.lineno, tok[2],
                             "expected %r, found %r" % (text, tok[1]))
        return tok

    def parse_term(self):
        parts = [self.parse_summand()]
        while True:
            tok = self.peek()
            if tok is None or tok[1] not in ("+", "-"):
                break
            self.take()
            part = self.parse_summand()
            if tok[1] == "-":
                part = _negate(part, self.resolve.field)
            parts.append(part)
        if len(parts) == 1:
            return parts[0]
        return Sum(tuple(parts))

    def parse_summand(self):
        tok = self.peek()
        if tok is not None and tok[1] == "-":
            self.take()
            return _negate(self.parse_summand(), self.resolve.field)
        return self.parse_factor()

    def parse_factor(self):
        tok = self.peek()
        if tok is not None and tok[0] == "num":
            after = (self.tokens[self.pos + 1]
                     if self.pos + 1 < len(self.tokens) else None)
            if after is not None and after[1] == "*":
                self.take()
                self.take()
                coeff = self.resolve.literal(tok[1], self.lineno, tok[2])
                return ScalarMul(coeff, self.parse_atom())
        return self.parse_atom()

    def parse_atom(self):
        tok = self.take()
        kind, text, col = tok
        if kind == "num":
            if text == "0":
                return ZERO
            raise ParseError(self.lineno, col,
                             "scalar literal %r must multiply a term" % text)
        if kind == "name":
            return self.resolve.name(text, self.lineno, col)
        if text == "[":
            left = self.parse_term()
            self.expect(",")
            right = self.parse_term()
            self.expect("]")
            return Bracket(left, right)
        raise ParseError(self.lineno, col, "unexpected token %r" % text)


def _negate(term, field):
    minus_one = field.neg(field.one)
    if isinstance(term, ScalarMul):
        coeff = field.mul(minus_one, term.coeff)
        return ScalarMul(coeff, term.child)
    return ScalarMul(minus_one, term)


class _Resolver:
    def __init__(self, spec, variables, lets):
        self.spec = spec
        self.field = spec.field
        self.variables = variables
        self.lets = lets

    def literal(self, text, lineno, col):
        if "/" in text:
            num, den = text.split("/")
            return self.field.from_literal(int(num), int(den))
        return self.field.from_literal(int(text))

    def name(self, text, lineno, col):
        if text in self.variables:
            return Var(text)
        m = re.fullmatch(r"a(\d+)", text)
        if m and self.spec.kind != "zero":
            i = int(m.group(1)) - 1
            if 0 <= i < self.spec.rank:
                return self.spec.const(i)
        if text in self.lets:
            return Const(text, self.lets[text])
        raise UnknownSymbolError(
            "line %d, col %d: unknown name %r" % (lineno, col, text))


def parse_document(text):
    """Parse a full system file into a SystemDocument."""
    spec = None
    variables = []
    equations = []
    lets = {}
    polytope = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split(None, 1)[0]
        if head == "algebra":
            m = _ALGEBRA_RE.match(line)
            if m is None:
                raise ParseError(lineno, 1, "malformed algebra statement")
            if spec is not None:
                raise ParseError(lineno, 1, "duplicate algebra statement")
            kind, rank, field_text = m.group(1), m.group(2), m.group(3)
            field = parse_field_spec(field_text)
            spec = AlgebraSpec(kind, int(rank) if rank else 0, field)
            continue
        if spec is None:
            raise ParseError(lineno, 1,
                             "the algebra statement must come first")
        if head == "vars":
            if equations or variables:
                raise ParseError(lineno, 1,
                                 "vars must be declared once, before eq")
            rest = line[len("vars"):].strip()
            for name in [v.strip() for v in rest.split(",") if v.strip()]:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                    raise ParseError(lineno, 1, "bad variable name %r" % name)
                if name in variables or re.fullmatch(r"a\d+", name):
                    raise ParseError(lineno, 1,
                                     "variable %r collides with a constant"
                                     % name)
                variables.append(name)
            continue
        if head == "eq":
            tokens = _tokenize(line[len("eq"):], lineno)
            if len(tokens) < 2 or tokens[-2][1] != "=" or tokens[-1][1] != "0":
                raise ParseError(lineno, len(line), "equation must end in = 0")
            parser = _TermParser(tokens[:-2], lineno,
                                 _Resolver(spec, variables, lets))
            term = parser.parse_term()
            if parser.peek() is not None:
                tok = parser.peek()
                raise ParseError(lineno, tok[2],
                                 "unexpected token %r" % tok[1])
            equations.append(term)
            continue
        if head == "let":
            m = re.match(r"^let\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+)$", line)
            if m is None:
                raise ParseError(lineno, 1, "malformed let statement")
            name, body = m.group(1), m.group(2)
            if name in lets or name in variables or re.fullmatch(r"a\d+", name):
                raise ParseError(lineno, 1, "name %r is already taken" % name)
            tokens = _tokenize(body, lineno)
            parser = _TermParser(tokens, lineno,
                                 _Resolver(spec, variables, lets))
            term = parser.parse_term()
            if parser.peek() is not None or free_vars(term):
                raise ParseError(lineno, 1,
                                 "let binds a constant, closed term")
            lets[name] = _eval_closed(term, spec)
            continue
        if head == "polytope":
            m = _POLYTOPE_RE.match(line)
            if m is None:
                raise ParseError(lineno, 1, "malformed polytope statement")
            basis_text = m.group(1) or ""
            names = [v for v in basis_text.split(",") if v]
            basis = [_closed_value(v, spec, lets, lineno) for v in names]
            shift_name = m.group(2)
            if shift_name is None or shift_name == "0":
                shift = _algebra_zero(spec)
            else:
                shift = _closed_value(shift_name, spec, lets, lineno)
            polytope.append((tuple(basis), shift))
            continue
        raise ParseError(lineno, 1, "unknown statement %r" % head)
    if spec is None:
        raise ParseError(1, 1, "missing algebra statement")
    system = EquationSystem(spec, variables, equations)
    return SystemDocument(system, lets, polytope)


def parse_system(text):
    """Parse a system file, returning just the equation system."""
    return parse_document(text).system


def _algebra_zero(spec):
    alg = spec.algebra()
    if alg is None:
        raise UnsupportedAlgebraError(
            "polytope blocks need a nonzero coefficient algebra")
    return alg.zero


def _closed_value(name, spec, lets, lineno):
    if name in lets:
        return lets[name]
    m = re.fullmatch(r"a(\d+)", name)
    if m and spec.kind != "zero":
        i = int(m.group(1)) - 1
        if 0 <= i < spec.rank:
            return spec.algebra().gen(i)
    raise UnknownSymbolError("line %d: unknown binding %r" % (lineno, name))


def _eval_closed(term, spec):
    alg = spec.algebra()
    if alg is None:
        raise UnsupportedAlgebraError(
            "closed terms need a nonzero coefficient algebra")
    if isinstance(term, Zero):
        return alg.zero
    if isinstance(term, Const):
        return term.value
    if isinstance(term, Sum):
        out = alg.zero
        for c in term.children:
            out = out.add(_eval_closed(c, spec))
        return out
    if isinstance(term, ScalarMul):
        return _eval_closed(term.child, spec).scale(term.coeff)
    if isinstance(term, Bracket):
        return _eval_closed(term.left, spec).bracket(
            _eval_closed(term.right, spec))
    raise UnsupportedAlgebraError("unknown term node %r" % (term,))
