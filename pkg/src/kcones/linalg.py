"""Exact linear algebra over Fraction.

Small dense matrices with explicit shape (zero-dimensional cones make
shapeless tuples ambiguous), plus an exact two-phase simplex used for
cone membership, fiber feasibility, and vertex minimization.  Everything
here is rational arithmetic; no floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import DimensionError, UnboundedError

ZERO = Fraction(0)
ONE = Fraction(1)


def fr(x) -> Fraction:
    """Coerce ints/strings to Fraction; pass Fractions through."""
    return x if isinstance(x, Fraction) else Fraction(x)


def vec(xs):
    return tuple(fr(x) for x in xs)


@dataclass(frozen=True)
class Mat:
    """A rows x cols matrix of Fractions.

    The shape is stored explicitly so maps into or out of a point cone
    (zero rows or zero columns) compose without guesswork.
    """

    rows: int
    cols: int
    data: tuple

    @staticmethod
    def from_rows(rows_data, cols=None) -> "Mat":
        rows_data = tuple(vec(r) for r in rows_data)
        if rows_data:
            ncols = len(rows_data[0])
            if any(len(r) != ncols for r in rows_data):
                raise DimensionError("ragged matrix rows")
            if cols is not None and cols != ncols:
                raise DimensionError("declared column count does not match rows")
            cols = ncols
        elif cols is None:
            raise DimensionError("a matrix with no rows needs an explicit column count")
        return Mat(len(rows_data), cols, rows_data)

    @staticmethod
    def identity(n: int) -> "Mat":
        return Mat(n, n, tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    @staticmethod
    def zero(m: int, n: int) -> "Mat":
        return Mat(m, n, tuple(tuple(ZERO for _ in range(n)) for _ in range(m)))

    def entry(self, i: int, j: int) -> Fraction:
        return self.data[i][j]

    def row(self, i: int):
        return self.data[i]

    def col(self, j: int):
        return tuple(r[j] for r in self.data)

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for r in self.data for x in r)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise DimensionError(f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            ri = self.data[i]
            out.append(tuple(sum((ri[k] * other.data[k][j] for k in range(self.cols)), ZERO)
                             for j in range(other.cols)))
        return Mat(self.rows, other.cols, tuple(out))

    def apply(self, v) -> tuple:
        """Matrix times column vector (len == cols)."""
        if len(v) != self.cols:
            raise DimensionError(f"vector of length {len(v)} against {self.rows}x{self.cols}")
        return tuple(sum((r[j] * v[j] for j in range(self.cols)), ZERO) for r in self.data)

    def left_apply(self, row) -> tuple:
        """Row vector (len == rows) times matrix; pullback of functionals."""
        if len(row) != self.rows:
            raise DimensionError(f"row of length {len(row)} against {self.rows}x{self.cols}")
        return tuple(sum((row[i] * self.data[i][j] for i in range(self.rows)), ZERO)
                     for j in range(self.cols))

    def transpose(self) -> "Mat":
        return Mat(self.cols, self.rows, tuple(self.col(j) for j in range(self.cols)))


def vec_add(u, v):
    if len(u) != len(v):
        raise DimensionError("vector length mismatch")
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    if len(u) != len(v):
        raise DimensionError("vector length mismatch")
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(alpha, v):
    alpha = fr(alpha)
    return tuple(alpha * x for x in v)


def vec_dot(u, v):
    if len(u) != len(v):
        raise DimensionError("vector length mismatch")
    return sum((a * b for a, b in zip(u, v)), ZERO)


def vec_min(u, v):
    if len(u) != len(v):
        raise DimensionError("vector length mismatch")
    return tuple(min(a, b) for a, b in zip(u, v))


def vec_max(u, v):
    if len(u) != len(v):
        raise DimensionError("vector length mismatch")
    return tuple(max(a, b) for a, b in zip(u, v))


def vec_leq(u, v):
    return len(u) == len(v) and all(a <= b for a, b in zip(u, v))


def unit(n, k):
    return tuple(ONE if j == k else ZERO for j in range(n))


# ---------------------------------------------------------------------------
# Exact simplex (two phases, Bland's rule).

def _pivot(tableau, basis, r, c):
    piv_row = tableau[r]
    piv = piv_row[c]
    if piv != 1:
        piv_row = [x / piv for x in piv_row]
        tableau[r] = piv_row
    nonzero = [(j, v) for j, v in enumerate(piv_row) if v]
    for i in range(len(tableau)):
        if i == r:
            continue
        coef = tableau[i][c]
        if coef:
            row = tableau[i]
            for j, v in nonzero:
                row[j] = row[j] - coef * v
    basis[r] = c


def _run_simplex(tableau, basis, nvars):
    """Drive the objective row (last) to optimality. Returns False if unbounded."""
    while True:
        obj = tableau[-1]
        enter = None
        for j in range(nvars):
            if obj[j] < 0:
                enter = j
                break
        if enter is None:
            return True
        leave = None
        best = None
        for i in range(len(tableau) - 1):
            a = tableau[i][enter]
            if a > 0:
                ratio = tableau[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            return False
        _pivot(tableau, basis, leave, enter)


def lp_min(c, rows, b):
    """Minimize c . x over {x >= 0 : A x = b}, all exact.

    ``rows`` is a sequence of constraint rows (each len(c) long), ``b`` the
    right-hand side.  Returns (value, x) at an optimal vertex, or None when
    infeasible.  Raises UnboundedError if the objective is unbounded below;
    the callers in this library only pass objectives that are bounded on
    feasible regions, so that signals corrupt input.
    """
    c = vec(c)
    d = len(c)
    rows = [vec(r) for r in rows]
    b = vec(b)
    if any(len(r) != d for r in rows):
        raise DimensionError("constraint row length mismatch")
    if len(rows) != len(b):
        raise DimensionError("right-hand side length mismatch")
    if d == 0:
        if any(x != 0 for x in b):
            return None
        return ZERO, ()
    m = len(rows)
    if m == 0:
        if all(x >= 0 for x in c):
            return ZERO, tuple(ZERO for _ in range(d))
        raise UnboundedError("no constraints and a negative cost direction")

    # Phase 1: minimize the sum of artificial variables.
    tableau = []
    for i in range(m):
        r, rhs = (rows[i], b[i]) if b[i] >= 0 else (vec_scale(-1, rows[i]), -b[i])
        art = [ZERO] * m
        art[i] = ONE
        tableau.append(list(r) + art + [rhs])
    basis = [d + i for i in range(m)]
    obj = [ZERO] * (d + m) + [ZERO]
    for i in range(m):
        obj = [o - t for o, t in zip(obj, tableau[i])]
    for j in range(d, d + m):
        obj[j] = ZERO
    tableau.append(obj)
    if not _run_simplex(tableau, basis, d + m):
        raise UnboundedError("phase 1 cannot be unbounded")
    if tableau[-1][-1] != 0:
        return None

    # Pivot leftover artificial variables out of the basis (or drop rows).
    for i in range(m - 1, -1, -1):
        if basis[i] >= d:
            piv = next((j for j in range(d) if tableau[i][j] != 0), None)
            if piv is None:
                del tableau[i]
                del basis[i]
            else:
                _pivot(tableau, basis, i, piv)

    # Phase 2 with the real objective, artificial columns frozen.
    ncon = len(basis)
    clean = [t[:d] + [t[-1]] for t in tableau[:ncon]]
    obj = list(c) + [ZERO]
    for i in range(ncon):
        bj = basis[i]
        if obj[bj] != 0:
            coef = obj[bj]
            obj = [o - coef * t for o, t in zip(obj, clean[i])]
    clean.append(obj)
    if not _run_simplex(clean, basis, d):
        raise UnboundedError("objective unbounded below on the feasible cone")
    x = [ZERO] * d
    for i in range(ncon):
        if basis[i] < d:
            x[basis[i]] = clean[i][-1]
    return vec_dot(c, x), tuple(x)


def feasible_point(rows, b, d):
    """Some x >= 0 with A x = b, or None."""
    res = lp_min([ZERO] * d, rows, b)
    return None if res is None else res[1]


def cone_member(target, generators):
    """Is ``target`` a nonnegative combination of ``generators``?

    Returns the coefficient tuple, or None.
    """
    gens = [vec(g) for g in generators]
    target = vec(target)
    if any(len(g) != len(target) for g in gens):
        raise DimensionError("generator length mismatch")
    rows = [[g[i] for g in gens] for i in range(len(target))]
    return feasible_point(rows, target, len(gens))


def fiber_minimum(rows, b, d):
    """The coordinatewise least point of {x >= 0 : A x = b}, or None.

    Computes each coordinate's minimum by an exact LP and checks that the
    combined point is itself feasible; when it is, it is the unique
    minimum of the fiber in the coordinatewise order.  Rows with a single
    nonzero entry in distinct columns (the monomial case covering block
    presentations) short-circuit to direct division.
    """
    direct = _fiber_minimum_monomial(rows, b, d)
    if direct is not None:
        return direct if direct is not _INFEASIBLE else None
    mins = []
    for k in range(d):
        res = lp_min(unit(d, k), rows, b)
        if res is None:
            return None
        mins.append(res[0])
    point = tuple(mins)
    for r, rhs in zip(rows, b):
        if vec_dot(vec(r), point) != fr(rhs):
            return None
    return point


_INFEASIBLE = object()


def _fiber_minimum_monomial(rows, b, d):
    """Fast path: one nonzero per row, no shared columns. None means no fast path."""
    x = [ZERO] * d
    seen = set()
    for r, rhs in zip(rows, b):
        hits = [(j, v) for j, v in enumerate(r) if v != 0]
        if len(hits) != 1:
            return None
        j, v = hits[0]
        if j in seen:
            return None
        seen.add(j)
        value = fr(rhs) / fr(v)
        if value < 0:
            return _INFEASIBLE
        x[j] = value
    return tuple(x)


def enumerate_vertices(rows, b, d):
    """All basic feasible solutions of {x >= 0 : A x = b} (test-scale only)."""
    rows = [vec(r) for r in rows]
    b = vec(b)
    m = len(rows)
    found = set()
    if d == 0:
        return [()] if all(x == 0 for x in b) else []
    for size in range(min(m, d) + 1):
        for cols in combinations(range(d), size):
            sol = _solve_exact([[r[j] for j in cols] for r in rows], b)
            if sol is None:
                continue
            x = [ZERO] * d
            for j, val in zip(cols, sol):
                x[j] = val
            if all(v >= 0 for v in x):
                found.add(tuple(x))
    return sorted(found)


def _solve_exact(rows, b):
    """Unique least-squares-free solve of possibly rectangular A x = b.

    Returns the solution when the system is consistent and the free
    variables can all be pinned to zero unambiguously (full column rank),
    else None.
    """
    m = len(rows)
    d = len(rows[0]) if m else 0
    aug = [list(map(fr, rows[i])) + [fr(b[i])] for i in range(m)]
    pivots = []
    r = 0
    for c in range(d):
        sel = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if sel is None:
            continue
        aug[r], aug[sel] = aug[sel], aug[r]
        piv = aug[r][c]
        aug[r] = [x / piv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                coef = aug[i][c]
                aug[i] = [x - coef * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if aug[i][d] != 0:
            return None
    if len(pivots) < d:
        return None
    x = [ZERO] * d
    for i, c in enumerate(pivots):
        x[c] = aug[i][d]
    return tuple(x)
