"""Free Lie algebras on the Lyndon-word basis.

Words are tuples of 0-based generator indices.  The basis element attached to
a Lyndon word is its standard bracketing (bracket the standard factorization
recursively).  Products of basis elements are rewritten into the basis by
anticommutativity and Jacobi against the Lyndon order, with the pair products
memoised per algebra.
"""

from __future__ import annotations

from .errors import AlgebraMismatchError, InternalError
from .linalg import solve


def is_lyndon(word):
    """A nonempty word is Lyndon when it is strictly smaller than all its
    proper suffixes."""
    if not word:
        return False
    return all(word < word[i:] for i in range(1, len(word)))


def lyndon_words(rank, max_len):
    """All Lyndon words over 0..rank-1 of length <= max_len, by Duval's
    algorithm, sorted by (length, word)."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        m = len(w)
        while len(w) < max_len:
            w.append(w[-m])
        while w and w[-1] == rank - 1:
            w.pop()
    return sorted(out, key=lambda u: (len(u), u))


def std_factorization(word):
    """Split a Lyndon word of length >= 2 at its longest proper Lyndon suffix."""
    for i in range(1, len(word)):
        if is_lyndon(word[i:]):
            return word[:i], word[i:]
    raise InternalError("no Lyndon suffix in %r" % (word,))


class Truncation:
    """Degree cap for bracket products; products beyond max_degree are dropped."""

    def __init__(self, max_degree):
        self.max_degree = max_degree

    def __repr__(self):
        return "Truncation(%d)" % self.max_degree


class FreeLie:
    """Free Lie algebra of the given rank over a field (or over a PolyRing
    when scalar extension is needed; only ring operations are used)."""

    _SHARED_MEMOS = {}

    def __init__(self, rank, field):
        self.rank = rank
        self.field = field
        # bracket normal forms depend only on (rank, field), so equal
        # algebras constructed independently share one rewrite cache
        self._memo = self._SHARED_MEMOS.setdefault((rank, field), {})
        self._basis_cache = {}
        self.zero = FreeLieElement(self, {})

    def gen(self, i):
        if not 0 <= i < self.rank:
            raise AlgebraMismatchError("generator index %d out of range" % i)
        return FreeLieElement(self, {(i,): self.field.one})

    def gens(self):
        return [self.gen(i) for i in range(self.rank)]

    def element(self, coeffs):
        return FreeLieElement(self, coeffs)

    def basis_words(self, max_degree):
        if max_degree not in self._basis_cache:
            self._basis_cache[max_degree] = lyndon_words(self.rank, max_degree)
        return self._basis_cache[max_degree]

    def basis_elements(self, max_degree):
        return [FreeLieElement(self, {w: self.field.one})
                for w in self.basis_words(max_degree)]

    def bracket_words(self, u, v):
        """Normal form of [b_u, b_v] as a word->coefficient dict."""
        if u == v:
            return {}
        if v < u:
            return {w: self.field.neg(c) for w, c in self.bracket_words(v, u).items()}
        key = (u, v)
        cached = self._memo.get(key)
        if cached is not None:
            if cached is _IN_PROGRESS:
                raise InternalError("bracket rewriting cycled on %r" % (key,))
            return cached
        self._memo[key] = _IN_PROGRESS
        if len(u) == 1 or std_factorization(u)[1] >= v:
            # here u+v is Lyndon with standard factorization (u, v)
            result = {u + v: self.field.one}
        else:
            u1, u2 = std_factorization(u)
            # [u, v] = [u1, [u2, v]] - [u2, [u1, v]]
            result = {}
            for w, c in self.bracket_words(u2, v).items():
                _accumulate(self, result, self.bracket_words(u1, w), c)
            for w, c in self.bracket_words(u1, v).items():
                _accumulate(self, result, self.bracket_words(u2, w),
                            self.field.neg(c))
            result = {w: c for w, c in result.items() if not self.field.is_zero(c)}
        self._memo[key] = result
        return result

    def __eq__(self, other):
        return (isinstance(other, FreeLie) and other.rank == self.rank
                and other.field == self.field)

    def __hash__(self):
        return hash(("free", self.rank, self.field))

    def __repr__(self):
        return "FreeLie(rank=%d, field=%r)" % (self.rank, self.field)


_IN_PROGRESS = object()


def _accumulate(alg, acc, words, factor):
    field = alg.field
    for w, c in words.items():
        acc[w] = field.add(acc.get(w, field.zero), field.mul(factor, c))


class FreeLieElement:
    """Immutable element: mapping from Lyndon words to nonzero coefficients."""

    __slots__ = ("alg", "coeffs", "_hash")

    def __init__(self, alg, coeffs):
        self.alg = alg
        self.coeffs = {w: c for w, c in coeffs.items() if not alg.field.is_zero(c)}
        self._hash = None

    def _check(self, other):
        if not isinstance(other, FreeLieElement) or other.alg != self.alg:
            raise AlgebraMismatchError("elements of different free Lie algebras")

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        if not self.coeffs:
            return 0
        return max(len(w) for w in self.coeffs)

    def add(self, other):
        self._check(other)
        field = self.alg.field
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = field.add(out.get(w, field.zero), c)
        return FreeLieElement(self.alg, out)

    def sub(self, other):
        return self.add(other.neg())

    def neg(self):
        field = self.alg.field
        return FreeLieElement(self.alg, {w: field.neg(c) for w, c in self.coeffs.items()})

    def scale(self, c):
        field = self.alg.field
        if field.is_zero(c):
            return self.alg.zero
        return FreeLieElement(self.alg, {w: field.mul(c, v) for w, v in self.coeffs.items()})

    def bracket(self, other, trunc=None):
        self._check(other)
        alg = self.alg
        field = alg.field
        cap = trunc.max_degree if trunc is not None else None
        out = {}
        for u, cu in self.coeffs.items():
            for v, cv in other.coeffs.items():
                if cap is not None and len(u) + len(v) > cap:
                    continue
                _accumulate(alg, out, alg.bracket_words(u, v), field.mul(cu, cv))
        return FreeLieElement(alg, out)

    def coefficient(self, word):
        return self.coeffs.get(word, self.alg.field.zero)

    def support_items(self):
        """Sorted (key, coefficient) pairs for generic linear algebra."""
        return sorted(((len(w), w), c) for w, c in self.coeffs.items())

    def __eq__(self, other):
        return (isinstance(other, FreeLieElement) and other.alg == self.alg
                and other.coeffs == self.coeffs)

    def __hash__(self):
        if self._hash is None:
            field = self.alg.field
            items = tuple(sorted(
                ((len(w), w), field.sort_key(c)) for w, c in self.coeffs.items()))
            self._hash = hash((self.alg, items))
        return self._hash

    def sort_key(self):
        field = self.alg.field
        return tuple(sorted(
            ((len(w), w), field.sort_key(c)) for w, c in self.coeffs.items()))

    def render(self, names=None):
        if not self.coeffs:
            return "0"
        field = self.alg.field
        parts = []
        for w in sorted(self.coeffs, key=lambda u: (len(u), u)):
            c = self.coeffs[w]
            body = render_word(w, names)
            if c == field.one:
                parts.append(body)
            else:
                parts.append("%s*%s" % (field.render(c), body))
        return " + ".join(parts)

    def __repr__(self):
        return "FreeLieElement(%s)" % self.render()


def render_word(word, names=None):
    """Standard bracketing of a Lyndon word as nested bracket text."""
    if names is None:
        names = ["a%d" % (i + 1) for i in range(max(word) + 1)]
    if len(word) == 1:
        return names[word[0]]
    left, right = std_factorization(word)
    return "[%s, %s]" % (render_word(left, names), render_word(right, names))


def subspace_membership(element, basis):
    """Coordinates of element in the span of basis elements, or None.

    Exact linear solve over the coefficient field on the union of supports.
    """
    if element.is_zero():
        return [element.alg.field.zero] * len(basis)
    field = element.alg.field
    words = set(element.coeffs)
    for b in basis:
        words.update(b.coeffs)
    words = sorted(words, key=lambda w: (len(w), w))
    matrix = [[b.coefficient(w) for b in basis] for w in words]
    rhs = [element.coefficient(w) for w in words]
    return solve(matrix, rhs, field)


def independent(elements):
    """True when the elements are linearly independent over the field."""
    if not elements:
        return True
    field = elements[0].alg.field
    words = set()
    for e in elements:
        words.update(e.coeffs)
    words = sorted(words, key=lambda w: (len(w), w))
    matrix = [[e.coefficient(w) for w in words] for e in elements]
    from .linalg import rank
    return rank(matrix, field) == len(elements)
