"""Exact linear algebra over the field protocol, plus fraction-free
elimination on polynomial matrices and module presentations.

Matrices are lists of rows; rows are lists of field values.  Nothing here
mutates its arguments.
"""

from __future__ import annotations

from .errors import TorsionDetectedError
from .fields import poly_divexact


def rref(matrix, field):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    rows = [list(r) for r in matrix]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if not field.is_zero(rows[i][c]):
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(inv, v) for v in rows[r]]
        for i in range(len(rows)):
            if i != r and not field.is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [field.sub(v, field.mul(f, w)) for v, w in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(matrix, field):
    return len(rref(matrix, field)[0])


def nullspace(matrix, field):
    """Basis of the right kernel, canonical w.r.t. the rref free columns."""
    if not matrix:
        return []
    ncols = len(matrix[0])
    rows, pivots = rref(matrix, field)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [field.zero] * ncols
        vec[free] = field.one
        for r, p in zip(rows, pivots):
            vec[p] = field.neg(r[free])
        basis.append(vec)
    return basis


def solve(matrix, rhs, field):
    """One solution of matrix * x = rhs, or None if inconsistent."""
    if not matrix:
        return None
    ncols = len(matrix[0])
    aug = [list(r) + [b] for r, b in zip(matrix, rhs)]
    rows, pivots = rref(aug, field)
    for r, p in zip(rows, pivots):
        if p == ncols:
            return None
    x = [field.zero] * ncols
    for r, p in zip(rows, pivots):
        x[p] = r[ncols]
    return x


def row_space_key(matrix, field):
    """Canonical key identifying the row space; equal spans give equal keys."""
    rows, _ = rref(matrix, field)
    return tuple(tuple(field.sort_key(v) for v in row) for row in rows)


def in_span(matrix, vector, field):
    """True when vector lies in the row space of matrix."""
    if all(field.is_zero(v) for v in vector):
        return True
    if not matrix:
        return False
    transpose = [[row[i] for row in matrix] for i in range(len(matrix[0]))]
    return solve(transpose, list(vector), field) is not None


# ---------------------------------------------------------------------------
# Fraction-free elimination on polynomial matrices.


def poly_matrix_rank(matrix, ring):
    """Rank over the fraction field via Bareiss fraction-free elimination."""
    rows = [list(r) for r in matrix]
    if not rows or not rows[0]:
        return 0
    ncols = len(rows[0])
    prev = ring.one
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if not rows[i][c].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        piv = rows[r][c]
        for i in range(r + 1, len(rows)):
            for j in range(c + 1, ncols):
                num = rows[i][j] * piv - rows[i][c] * rows[r][j]
                rows[i][j] = poly_divexact(num, prev) if prev != ring.one else num
            rows[i][c] = ring.zero
        prev = piv
        r += 1
        if r == len(rows):
            break
    return r


class ModulePresentation:
    """Finitely presented module over field[x1..xr]: generators and relation rows."""

    def __init__(self, ring, n_generators, relations=()):
        self.ring = ring
        self.n_generators = n_generators
        rels = []
        for rel in relations:
            rel = list(rel)
            if len(rel) != n_generators:
                raise ValueError("relation length %d does not match %d generators"
                                 % (len(rel), n_generators))
            rels.append(tuple(rel))
        self.relations = tuple(rels)

    def rank(self):
        """Module rank = generators minus relation rank over the fraction field."""
        if not self.relations:
            return self.n_generators
        return self.n_generators - poly_matrix_rank(
            [list(r) for r in self.relations], self.ring)

    def check_torsion_free(self, degree_bound=4):
        """Degree-bounded torsion probe.

        Flags a generator e_i annihilated by a nonconstant monomial q with
        q*e_i inside the relation span reachable with multipliers of total
        degree <= degree_bound, while e_i itself is not.  Beyond the bound the
        presentation is trusted input.
        """
        if not self.relations:
            return
        field = self.ring.field
        reachable = _bounded_relation_span(self, degree_bound)
        monomial_basis = _monomials_up_to(self.ring, degree_bound + 1)
        index = {m: k for k, m in enumerate(monomial_basis)}

        def vec_of(gen, exps):
            width = self.n_generators * len(monomial_basis)
            v = [field.zero] * width
            v[gen * len(monomial_basis) + index[exps]] = field.one
            return v

        span_rows = reachable
        for gen in range(self.n_generators):
            plain = vec_of(gen, (0,) * self.ring.nvars)
            if span_rows and in_span(span_rows, plain, field):
                continue  # generator already dies; quotient is smaller, not torsion
            for exps in monomial_basis:
                if sum(exps) == 0 or sum(exps) > degree_bound:
                    continue
                if span_rows and in_span(span_rows, vec_of(gen, exps), field):
                    raise TorsionDetectedError(
                        "generator %d is annihilated by a degree-%d monomial"
                        % (gen + 1, sum(exps)))


def _monomials_up_to(ring, d):
    out = [(0,) * ring.nvars]
    frontier = list(out)
    for _ in range(d):
        nxt = []
        for e in frontier:
            for i in range(ring.nvars):
                m = list(e)
                m[i] += 1
                m = tuple(m)
                if m not in nxt:
                    nxt.append(m)
        frontier = [m for m in nxt if m not in out]
        out.extend(frontier)
    return sorted(set(out), key=lambda e: (sum(e), e))


def _bounded_relation_span(pres, degree_bound):
    """Rows spanning {monomial * relation} laid out on a monomial basis."""
    ring = pres.ring
    field = ring.field
    monomial_basis = _monomials_up_to(ring, degree_bound + 1)
    index = {m: k for k, m in enumerate(monomial_basis)}
    width = pres.n_generators * len(monomial_basis)
    rows = []
    for rel in pres.relations:
        for mult in _monomials_up_to(ring, degree_bound):
            row = [field.zero] * width
            ok = True
            for gen, entry in enumerate(rel):
                for exps, c in entry.coeffs.items():
                    shifted = tuple(a + b for a, b in zip(exps, mult))
                    k = index.get(shifted)
                    if k is None:
                        ok = False
                        break
                    row[gen * len(monomial_basis) + k] = field.add(
                        row[gen * len(monomial_basis) + k], c)
                if not ok:
                    break
            if ok:
                rows.append(row)
    return rows
