"""Exact ground-field arithmetic: GF(p), Q, and rational function fields.

A field is an object with a uniform protocol (zero/one/add/sub/neg/mul/inv/
div/is_zero/from_int/render/sort_key, plus elements() when finite); values are
plain hashable Python objects, so the algebra layers above never special-case
the ground field.  Multivariate polynomials over any such field live here too,
because rational function fields need them.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    DivisionByZeroError,
    FieldLiteralOutOfRangeError,
    FieldSpecError,
    InfiniteFieldError,
    RingMismatch,
)


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class GFField:
    """Prime field GF(p), values are ints in [0, p)."""

    def __init__(self, p):
        if not isinstance(p, int) or not _is_prime(p):
            raise FieldSpecError("GF modulus must be a prime integer, got %r" % (p,))
        self.p = p
        self.zero = 0
        self.one = 1 % p
        self.finite = True

    def from_int(self, n):
        return n % self.p

    def from_literal(self, num, den=None):
        # literals must name a field element directly: 0 <= num < p, no '/'
        if den is not None:
            raise FieldLiteralOutOfRangeError(
                "fractional literal %d/%d not allowed over GF(%d)" % (num, den, self.p))
        if not 0 <= num < self.p:
            raise FieldLiteralOutOfRangeError(
                "literal %d out of range for GF(%d)" % (num, self.p))
        return num

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise DivisionByZeroError("inverse of 0 in GF(%d)" % self.p)
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a % self.p == 0

    def elements(self):
        return list(range(self.p))

    def nonzero_elements(self):
        return list(range(1, self.p))

    def sort_key(self, a):
        return a

    def render(self, a):
        return str(a)

    def spec(self):
        return "GF(%d)" % self.p

    def __eq__(self, other):
        return isinstance(other, GFField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return "GF(%d)" % self.p


class QField:
    """The rationals, values are fractions.Fraction."""

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)
        self.finite = False

    def from_int(self, n):
        return Fraction(n)

    def from_literal(self, num, den=None):
        if den is not None:
            if den == 0:
                raise FieldLiteralOutOfRangeError("literal with zero denominator")
            return Fraction(num, den)
        return Fraction(num)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise DivisionByZeroError("inverse of 0 in Q")
        return 1 / a

    def div(self, a, b):
        return a / self.one if b == 1 else a * self.inv(b)

    def is_zero(self, a):
        return a == 0

    def elements(self):
        raise InfiniteFieldError("Q is not enumerable")

    def nonzero_elements(self):
        raise InfiniteFieldError("Q is not enumerable")

    def sort_key(self, a):
        return (a.numerator, a.denominator)

    def render(self, a):
        if a.denominator == 1:
            return str(a.numerator)
        return "%d/%d" % (a.numerator, a.denominator)

    def spec(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, QField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


_GF_CACHE = {}


def GF(p):
    """Prime field GF(p), cached so equal specs share one object."""
    if p not in _GF_CACHE:
        _GF_CACHE[p] = GFField(p)
    return _GF_CACHE[p]


Q = QField()


# ---------------------------------------------------------------------------
# Multivariate polynomials.


class PolyRing:
    """Polynomial ring field[names] with the graded-lexicographic order."""

    def __init__(self, field, names):
        self.field = field
        self.names = tuple(names)
        self.nvars = len(self.names)
        self.zero = Poly(self, {})
        self.one = Poly(self, {(0,) * self.nvars: field.one})

    def var(self, i):
        exps = [0] * self.nvars
        exps[i] = 1
        return Poly(self, {tuple(exps): self.field.one})

    def vars(self):
        return [self.var(i) for i in range(self.nvars)]

    def const(self, c):
        if self.field.is_zero(c):
            return self.zero
        return Poly(self, {(0,) * self.nvars: c})

    def monomial(self, exps, c):
        if self.field.is_zero(c):
            return self.zero
        return Poly(self, {tuple(exps): c})

    def from_int(self, n):
        return self.const(self.field.from_int(n))

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and other.field == self.field
                and other.names == self.names)

    def __hash__(self):
        return hash((self.field, self.names))

    def __repr__(self):
        return "%s[%s]" % (self.field.spec(), ",".join(self.names))


def _grlex_key(exps):
    return (sum(exps), exps)


class Poly:
    """Immutable sparse polynomial; coeffs maps exponent tuples to nonzero values."""

    __slots__ = ("ring", "coeffs", "_hash")

    def __init__(self, ring, coeffs):
        self.ring = ring
        self.coeffs = {e: c for e, c in coeffs.items() if not ring.field.is_zero(c)}
        self._hash = None

    def is_zero(self):
        return not self.coeffs

    def total_degree(self):
        # degree of the zero polynomial is -1 by convention
        if not self.coeffs:
            return -1
        return max(sum(e) for e in self.coeffs)

    def leading(self):
        """(exps, coeff) of the graded-lex leading term."""
        e = max(self.coeffs, key=_grlex_key)
        return e, self.coeffs[e]

    def _check(self, other):
        if not isinstance(other, Poly) or other.ring != self.ring:
            raise RingMismatch("polynomials from different rings")

    def __add__(self, other):
        self._check(other)
        field = self.ring.field
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = field.add(out.get(e, field.zero), c)
        return Poly(self.ring, out)

    def __sub__(self, other):
        self._check(other)
        field = self.ring.field
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = field.sub(out.get(e, field.zero), c)
        return Poly(self.ring, out)

    def __neg__(self):
        field = self.ring.field
        return Poly(self.ring, {e: field.neg(c) for e, c in self.coeffs.items()})

    def __mul__(self, other):
        self._check(other)
        field = self.ring.field
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = field.add(out.get(e, field.zero), field.mul(c1, c2))
        return Poly(self.ring, out)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c):
        field = self.ring.field
        if field.is_zero(c):
            return self.ring.zero
        return Poly(self.ring, {e: field.mul(c, v) for e, v in self.coeffs.items()})

    def evaluate(self, values):
        """Value at a point given as a list of field elements."""
        field = self.ring.field
        total = field.zero
        for e, c in self.coeffs.items():
            term = c
            for i, k in enumerate(e):
                for _ in range(k):
                    term = field.mul(term, values[i])
            total = field.add(total, term)
        return total

    def __eq__(self, other):
        return (isinstance(other, Poly) and other.ring == self.ring
                and other.coeffs == self.coeffs)

    def __hash__(self):
        if self._hash is None:
            items = tuple(sorted(
                (e, self.ring.field.sort_key(c)) for e, c in self.coeffs.items()))
            self._hash = hash((self.ring, items))
        return self._hash

    def sort_key(self):
        return tuple(sorted(
            (e, self.ring.field.sort_key(c)) for e, c in self.coeffs.items()))

    def render(self):
        if not self.coeffs:
            return "0"
        field = self.ring.field
        parts = []
        for e in sorted(self.coeffs, key=_grlex_key, reverse=True):
            c = self.coeffs[e]
            factors = []
            for i, k in enumerate(e):
                if k == 1:
                    factors.append(self.ring.names[i])
                elif k > 1:
                    factors.append("%s^%d" % (self.ring.names[i], k))
            if not factors:
                parts.append(field.render(c))
            elif c == field.one:
                parts.append("*".join(factors))
            else:
                parts.append(field.render(c) + "*" + "*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return "Poly(%s)" % self.render()


def poly_divexact(f, g):
    """Quotient f/g when the division is exact; raises ValueError otherwise."""
    if g.is_zero():
        raise DivisionByZeroError("polynomial division by zero")
    ring = f.ring
    field = ring.field
    ge, gc = g.leading()
    quotient = {}
    r = f
    while not r.is_zero():
        re, rc = r.leading()
        diff = tuple(a - b for a, b in zip(re, ge))
        if any(d < 0 for d in diff):
            raise ValueError("division is not exact")
        c = field.div(rc, gc)
        quotient[diff] = c
        r = r - ring.monomial(diff, c) * g
    return Poly(ring, quotient)


def _monic(f):
    if f.is_zero():
        return f
    _, c = f.leading()
    return f.scale(f.ring.field.inv(c))


def _to_univariate(f, rest_ring):
    """View f as univariate in the first variable with Poly coefficients."""
    out = {}
    for e, c in f.coeffs.items():
        d = e[0]
        rest = e[1:]
        coef = out.get(d)
        add = Poly(rest_ring, {rest: c})
        out[d] = add if coef is None else coef + add
    return {d: p for d, p in out.items() if not p.is_zero()}


def _from_univariate(u, ring):
    out = {}
    for d, p in u.items():
        for e, c in p.coeffs.items():
            out[(d,) + e] = c
    return Poly(ring, out)


def _uni_degree(u):
    return max(u) if u else -1


def _uni_scale_poly(u, p):
    out = {}
    for d, c in u.items():
        v = c * p
        if not v.is_zero():
            out[d] = v
    return out


def _uni_sub(u, v):
    out = dict(u)
    for d, c in v.items():
        w = out.get(d)
        w = (-c) if w is None else w - c
        if w.is_zero():
            out.pop(d, None)
        else:
            out[d] = w
    return out


def _uni_shift(u, k):
    return {d + k: c for d, c in u.items()}


def _pseudo_rem(f, g):
    """Pseudo-remainder of univariate-with-Poly-coefficient dicts."""
    df, dg = _uni_degree(f), _uni_degree(g)
    lg = g[dg]
    r = dict(f)
    while r and _uni_degree(r) >= dg:
        dr = _uni_degree(r)
        lr = r[dr]
        r = _uni_sub(_uni_scale_poly(r, lg), _uni_shift(_uni_scale_poly(g, lr), dr - dg))
    return r


def poly_gcd(f, g):
    """GCD in field[x1..xm], normalised monic in the graded-lex leading term."""
    ring = f.ring
    if f.is_zero():
        return _monic(g)
    if g.is_zero():
        return _monic(f)
    if ring.nvars == 0:
        return ring.one
    if ring.nvars == 1:
        # plain Euclid over the coefficient field
        a, b = f, g
        while not b.is_zero():
            a, b = b, _uni_mod(a, b)
        return _monic(a)
    rest_ring = PolyRing(ring.field, ring.names[1:])
    uf = _to_univariate(f, rest_ring)
    ug = _to_univariate(g, rest_ring)
    if not uf or not ug:
        raise AssertionError("zero slipped past the base case")
    content_f = _content(uf, rest_ring)
    content_g = _content(ug, rest_ring)
    uf = {d: poly_divexact(c, content_f) for d, c in uf.items()}
    ug = {d: poly_divexact(c, content_g) for d, c in ug.items()}
    # primitive pseudo-remainder sequence on the primitive parts
    a, b = (uf, ug) if _uni_degree(uf) >= _uni_degree(ug) else (ug, uf)
    while b:
        r = _pseudo_rem(a, b)
        if r:
            cr = _content(r, rest_ring)
            r = {d: poly_divexact(c, cr) for d, c in r.items()}
        a, b = b, r
    cont = poly_gcd(content_f, content_g)
    pp = _from_univariate(_uni_scale_poly(a, cont), ring)
    return _monic(pp)


def _content(u, rest_ring):
    g = rest_ring.zero
    for c in u.values():
        g = poly_gcd(g, c)
        if g == rest_ring.one:
            break
    return g if not g.is_zero() else rest_ring.one


def _uni_mod(a, b):
    """Remainder of single-variable Polys over a field."""
    ring = a.ring
    field = ring.field
    be, bc = b.leading()
    r = a
    while not r.is_zero():
        re, rc = r.leading()
        if re[0] < be[0]:
            break
        diff = (re[0] - be[0],)
        r = r - ring.monomial(diff, field.div(rc, bc)) * b
    return r


class PolyScalars:
    """Adapter exposing a PolyRing through the scalar protocol.

    Lie-algebra arithmetic only ever adds, negates and multiplies its
    scalars, so polynomial coefficients work wherever no inversion happens
    (scalar extension for generic points).
    """

    def __init__(self, ring):
        self.ring = ring
        self.zero = ring.zero
        self.one = ring.one
        self.finite = False

    def from_int(self, n):
        return self.ring.from_int(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a.is_zero()

    def sort_key(self, a):
        return a.sort_key()

    def render(self, a):
        return a.render()

    def spec(self):
        return repr(self.ring)

    def __eq__(self, other):
        return isinstance(other, PolyScalars) and other.ring == self.ring

    def __hash__(self):
        return hash(("polyscalars", self.ring))

    def __repr__(self):
        return "PolyScalars(%r)" % (self.ring,)


# ---------------------------------------------------------------------------
# Rational function fields.


class RationalFunction:
    """Reduced fraction of Polys; denominator monic under graded-lex."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den, reduce=True):
        if den.is_zero():
            raise DivisionByZeroError("rational function with zero denominator")
        if reduce and not num.is_zero():
            g = poly_gcd(num, den)
            if g != num.ring.one:
                num = poly_divexact(num, g)
                den = poly_divexact(den, g)
        if num.is_zero():
            den = den.ring.one
        else:
            _, lc = den.leading()
            if lc != den.ring.field.one:
                inv = den.ring.field.inv(lc)
                num = num.scale(inv)
                den = den.scale(inv)
        self.num = num
        self.den = den
        self._hash = None

    def __eq__(self, other):
        return (isinstance(other, RationalFunction)
                and other.num == self.num and other.den == self.den)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self):
        if self.den == self.den.ring.one:
            return self.num.render()
        return "(%s)/(%s)" % (self.num.render(), self.den.render())


class RationalFunctionField:
    """Field of fractions base(names), e.g. Q(t1,t2) or GF(2)(t1)."""

    def __init__(self, base, names):
        self.base = base
        self.ring = PolyRing(base, names)
        self.names = tuple(names)
        self.zero = RationalFunction(self.ring.zero, self.ring.one, reduce=False)
        self.one = RationalFunction(self.ring.one, self.ring.one, reduce=False)
        self.finite = False

    def from_int(self, n):
        return RationalFunction(self.ring.from_int(n), self.ring.one, reduce=False)

    def from_literal(self, num, den=None):
        if den is not None:
            if den == 0:
                raise FieldLiteralOutOfRangeError("literal with zero denominator")
            return self.div(self.from_int(num), self.from_int(den))
        return self.from_int(num)

    def from_poly(self, p):
        return RationalFunction(p, self.ring.one)

    def var(self, i):
        return RationalFunction(self.ring.var(i), self.ring.one, reduce=False)

    def add(self, a, b):
        return RationalFunction(a.num * b.den + b.num * a.den, a.den * b.den)

    def sub(self, a, b):
        return RationalFunction(a.num * b.den - b.num * a.den, a.den * b.den)

    def neg(self, a):
        return RationalFunction(-a.num, a.den, reduce=False)

    def mul(self, a, b):
        return RationalFunction(a.num * b.num, a.den * b.den)

    def inv(self, a):
        if a.num.is_zero():
            raise DivisionByZeroError("inverse of 0 in %s" % self.spec())
        return RationalFunction(a.den, a.num)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a.num.is_zero()

    def elements(self):
        raise InfiniteFieldError("%s is not enumerable" % self.spec())

    def nonzero_elements(self):
        raise InfiniteFieldError("%s is not enumerable" % self.spec())

    def sort_key(self, a):
        return (a.num.sort_key(), a.den.sort_key())

    def render(self, a):
        num = a.num.render()
        if a.den == self.ring.one:
            return num
        return "(%s)/(%s)" % (num, a.den.render())

    def spec(self):
        return "%s(%s)" % (self.base.spec(), ",".join(self.names))

    def substitute(self, a, values):
        """Specialise the indeterminates to base-field values."""
        den = a.den.evaluate(values)
        if self.base.is_zero(den):
            raise DivisionByZeroError("specialisation hits a pole")
        return self.base.div(a.num.evaluate(values), den)

    def __eq__(self, other):
        return (isinstance(other, RationalFunctionField)
                and other.base == self.base and other.names == self.names)

    def __hash__(self):
        return hash((self.base, self.names, "ratfunc"))

    def __repr__(self):
        return self.spec()


# ---------------------------------------------------------------------------
# Field specs.


def parse_field_spec(text):
    """Parse 'GF(3)', 'Q', 'Q(t1,t2)' or 'GF(2)(t1)' into a field object."""
    s = text.strip()
    if s.startswith("GF("):
        close = s.find(")")
        if close < 0:
            raise FieldSpecError("unterminated GF( in %r" % text)
        body = s[3:close]
        if not body.isdigit():
            raise FieldSpecError("GF modulus must be an integer in %r" % text)
        base = GF(int(body))
        rest = s[close + 1:]
    elif s.startswith("Q"):
        base = Q
        rest = s[1:]
    else:
        raise FieldSpecError("unknown field spec %r" % text)
    if not rest:
        return base
    if not (rest.startswith("(") and rest.endswith(")")):
        raise FieldSpecError("malformed field spec %r" % text)
    names = [n.strip() for n in rest[1:-1].split(",")]
    if not names or any(not n.isidentifier() for n in names):
        raise FieldSpecError("bad indeterminate names in %r" % text)
    if len(set(names)) != len(names):
        raise FieldSpecError("repeated indeterminate names in %r" % text)
    return RationalFunctionField(base, names)
