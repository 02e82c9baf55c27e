"""Exact sparse linear algebra over Q and Z.

Everything in this package reduces to the primitives in this module: ranks and
kernels of sparse rational matrices, Smith normal forms with verified
unimodular transforms, finitely generated abelian groups in invariant-factor
form, and cochain complexes with exact differentials.  No floats anywhere;
rational entries are `fractions.Fraction`, integer entries plain `int`.

Matrices act on column vectors: a matrix with shape (rows, cols) sends Q^cols
to Q^rows.  A differential d^k of a cochain complex is stored as the matrix of
shape (dim^{k+1}, dim^k).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

__all__ = [
    "ExactMatrix",
    "FGAbelianGroup",
    "CochainComplex",
    "rank",
    "rref",
    "kernel_basis",
    "solve",
    "smith_normal_form",
    "tensor_complex",
    "tor1",
]


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError("exact entries must be int, Fraction, or 'num/den' string, got %r" % (x,))


class ExactMatrix:
    """Sparse matrix with Fraction entries, nonzero entries only.

    >>> m = ExactMatrix.from_rows([[1, 2], [3, 4]])
    >>> m.shape
    (2, 2)
    >>> (m * m).entry(0, 0)
    Fraction(7, 1)
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries=None):
        assert rows >= 0 and cols >= 0
        self.rows = rows
        self.cols = cols
        self.entries = {}
        if entries:
            for (i, j), v in entries.items():
                v = _frac(v)
                if v:
                    assert 0 <= i < rows and 0 <= j < cols, (i, j, rows, cols)
                    self.entries[(i, j)] = v

    @classmethod
    def from_rows(cls, data):
        rows = len(data)
        cols = len(data[0]) if rows else 0
        ent = {}
        for i, row in enumerate(data):
            assert len(row) == cols, "ragged rows"
            for j, v in enumerate(row):
                v = _frac(v)
                if v:
                    ent[(i, j)] = v
        return cls(rows, cols, ent)

    @classmethod
    def from_triples(cls, rows, cols, triples):
        """Build from an iterable of (row, col, value) with value int or 'num/den'."""
        ent = {}
        for i, j, v in triples:
            v = _frac(v)
            if v:
                ent[(i, j)] = ent.get((i, j), Fraction(0)) + v
        return cls(rows, cols, {k: v for k, v in ent.items() if v})

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): Fraction(1) for i in range(n)})

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def entry(self, i, j):
        return self.entries.get((i, j), Fraction(0))

    def is_zero(self):
        return not self.entries

    def is_integral(self):
        return all(v.denominator == 1 for v in self.entries.values())

    def transpose(self):
        return ExactMatrix(self.cols, self.rows,
                           {(j, i): v for (i, j), v in self.entries.items()})

    def __eq__(self, other):
        return (isinstance(other, ExactMatrix) and self.shape == other.shape
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(sorted(self.entries.items()))))

    def __add__(self, other):
        assert self.shape == other.shape
        ent = dict(self.entries)
        for k, v in other.entries.items():
            w = ent.get(k, Fraction(0)) + v
            if w:
                ent[k] = w
            elif k in ent:
                del ent[k]
        return ExactMatrix(self.rows, self.cols, ent)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = _frac(c)
        if not c:
            return ExactMatrix.zeros(self.rows, self.cols)
        return ExactMatrix(self.rows, self.cols,
                           {k: c * v for k, v in self.entries.items()})

    def __mul__(self, other):
        if isinstance(other, ExactMatrix):
            assert self.cols == other.rows, (self.shape, other.shape)
            # group left entries by column to walk the sparse product once
            by_col = {}
            for (i, j), v in self.entries.items():
                by_col.setdefault(j, []).append((i, v))
            ent = {}
            for (j, k), w in other.entries.items():
                for i, v in by_col.get(j, ()):
                    key = (i, k)
                    s = ent.get(key, Fraction(0)) + v * w
                    if s:
                        ent[key] = s
                    elif key in ent:
                        del ent[key]
            return ExactMatrix(self.rows, other.cols, ent)
        return self.scale(other)

    def apply(self, vec):
        """Multiply against a column vector given as a sequence; returns a tuple."""
        assert len(vec) == self.cols
        out = [Fraction(0)] * self.rows
        for (i, j), v in self.entries.items():
            x = vec[j]
            if x:
                out[i] += v * x
        return tuple(out)

    def column(self, j):
        return tuple(self.entry(i, j) for i in range(self.rows))

    def stack_cols(self, other):
        """Horizontal concatenation [self | other]."""
        assert self.rows == other.rows
        ent = dict(self.entries)
        for (i, j), v in other.entries.items():
            ent[(i, j + self.cols)] = v
        return ExactMatrix(self.rows, self.cols + other.cols, ent)

    def submatrix_cols(self, col_indices):
        ent = {}
        for new_j, j in enumerate(col_indices):
            for i in range(self.rows):
                v = self.entries.get((i, j))
                if v:
                    ent[(i, new_j)] = v
        return ExactMatrix(self.rows, len(col_indices), ent)

    def to_triples(self):
        """Sorted (row, col, "num/den") triples, the canonical dump format."""
        out = []
        for (i, j) in sorted(self.entries):
            v = self.entries[(i, j)]
            out.append((i, j, "%d/%d" % (v.numerator, v.denominator)))
        return out

    def __repr__(self):
        return "ExactMatrix(%d, %d, nnz=%d)" % (self.rows, self.cols, len(self.entries))


def _rows_of(m):
    rows = [dict() for _ in range(m.rows)]
    for (i, j), v in m.entries.items():
        rows[i][j] = v
    return rows


def rref(m):
    """Reduced row echelon form with pivots chosen in column order.

    Returns (R, pivot_cols) where R is the RREF of m and pivot_cols the sorted
    pivot column indices.  The pivot in each column is the first available row,
    which makes every downstream basis choice deterministic.
    """
    rows = _rows_of(m)
    pivot_cols = []
    cur = 0
    for col in range(m.cols):
        piv = None
        for r in range(cur, m.rows):
            if rows[r].get(col):
                piv = r
                break
        if piv is None:
            continue
        rows[cur], rows[piv] = rows[piv], rows[cur]
        pv = rows[cur][col]
        if pv != 1:
            rows[cur] = {j: v / pv for j, v in rows[cur].items()}
        for r in range(m.rows):
            if r != cur:
                f = rows[r].get(col)
                if f:
                    rr = rows[r]
                    for j, v in rows[cur].items():
                        w = rr.get(j, Fraction(0)) - f * v
                        if w:
                            rr[j] = w
                        elif j in rr:
                            del rr[j]
        pivot_cols.append(col)
        cur += 1
        if cur == m.rows:
            break
    ent = {}
    for i, row in enumerate(rows):
        for j, v in row.items():
            ent[(i, j)] = v
    return ExactMatrix(m.rows, m.cols, ent), pivot_cols


def rank(m):
    """Exact rank.  Pivots on the sparsest available row and column to limit
    fill-in; the answer does not depend on the pivot order, only the speed."""
    rows = {}
    col_rows = {}
    for (i, j), v in m.entries.items():
        rows.setdefault(i, {})[j] = v
        col_rows.setdefault(j, set()).add(i)
    alive = set(rows)
    rnk = 0
    while alive:
        pr = min(alive, key=lambda r: (len(rows[r]), r))
        prow = rows[pr]
        pc = min(prow, key=lambda c: (len(col_rows[c]), c))
        pv = prow[pc]
        for r2 in list(col_rows[pc]):
            if r2 == pr:
                continue
            row2 = rows[r2]
            f = row2[pc] / pv
            for c, v in prow.items():
                w = row2.get(c, Fraction(0)) - f * v
                if w:
                    if c not in row2:
                        col_rows[c].add(r2)
                    row2[c] = w
                elif c in row2:
                    del row2[c]
                    col_rows[c].discard(r2)
            if not row2:
                alive.discard(r2)
        for c in prow:
            col_rows[c].discard(pr)
        alive.discard(pr)
        rnk += 1
    return rnk


def kernel_basis(m):
    """Deterministic basis of ker(m) as column vectors (tuples of Fractions).

    Free columns are parametrized in increasing index order; each basis vector
    has a 1 in its free coordinate.

    >>> m = ExactMatrix.from_rows([[1, 1, 0], [0, 0, 1]])
    >>> kernel_basis(m)
    [(Fraction(-1, 1), Fraction(1, 1), Fraction(0, 1))]
    """
    r, pivot_cols = rref(m)
    pivset = set(pivot_cols)
    free = [j for j in range(m.cols) if j not in pivset]
    basis = []
    for f in free:
        vec = [Fraction(0)] * m.cols
        vec[f] = Fraction(1)
        for pi, pc in enumerate(pivot_cols):
            v = r.entry(pi, f)
            if v:
                vec[pc] = -v
        basis.append(tuple(vec))
    return basis


def solve(m, target):
    """One solution x of m x = target, or None if inconsistent.

    Deterministic: free variables are set to zero.
    """
    assert len(target) == m.rows
    ent = dict(m.entries)
    for i, v in enumerate(target):
        v = _frac(v)
        if v:
            ent[(i, m.cols)] = v
    aug = ExactMatrix(m.rows, m.cols + 1, ent)
    r, pivot_cols = rref(aug)
    if m.cols in pivot_cols:
        return None
    x = [Fraction(0)] * m.cols
    for pi, pc in enumerate(pivot_cols):
        x[pc] = r.entry(pi, m.cols)
    return tuple(x)


def _det_bareiss(entries, n):
    # fraction-free exact determinant of a dense integer matrix
    if n == 0:
        return 1
    a = [[entries.get((i, j), 0) for j in range(n)] for i in range(n)]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = None
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    swap = r
                    break
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_normal_form(m):
    """Smith normal form with verified transforms.

    Returns (d, u, v, vinv) where u * m * v == d exactly, d is diagonal with
    divisibility d_1 | d_2 | ..., u and v are unimodular integer matrices, and
    vinv is the inverse of v.  Raises AssertionError if m has a non-integer
    entry.  The transforms are re-multiplied and the determinants recomputed
    as part of the call; a failed check is a bug, not an input error.

    >>> d, u, v, vinv = smith_normal_form(ExactMatrix.from_rows([[1, 2], [3, 4]]))
    >>> [int(d.entry(i, i)) for i in range(2)]
    [1, 2]
    """
    assert m.is_integral(), "smith_normal_form needs integer entries"
    rows, cols = m.rows, m.cols
    a = {}
    for (i, j), val in m.entries.items():
        a[(i, j)] = int(val)

    # row transform u (rows x rows), column transform v and its inverse
    u = {(i, i): 1 for i in range(rows)}
    v = {(j, j): 1 for j in range(cols)}
    vinv = {(j, j): 1 for j in range(cols)}

    def row_op(i1, i2, c):
        # row i1 += c * row i2, on a and u
        for j in range(cols):
            w = a.get((i1, j), 0) + c * a.get((i2, j), 0)
            if w:
                a[(i1, j)] = w
            else:
                a.pop((i1, j), None)
        for j in range(rows):
            w = u.get((i1, j), 0) + c * u.get((i2, j), 0)
            if w:
                u[(i1, j)] = w
            else:
                u.pop((i1, j), None)

    def col_op(j1, j2, c):
        # col j1 += c * col j2 on a and v; inverse op on vinv rows
        for i in range(rows):
            w = a.get((i, j1), 0) + c * a.get((i, j2), 0)
            if w:
                a[(i, j1)] = w
            else:
                a.pop((i, j1), None)
        for i in range(cols):
            w = v.get((i, j1), 0) + c * v.get((i, j2), 0)
            if w:
                v[(i, j1)] = w
            else:
                v.pop((i, j1), None)
        for j in range(cols):
            w = vinv.get((j2, j), 0) - c * vinv.get((j1, j), 0)
            if w:
                vinv[(j2, j)] = w
            else:
                vinv.pop((j2, j), None)

    def row_swap(i1, i2):
        for j in range(cols):
            a[(i1, j)], a[(i2, j)] = a.get((i2, j), 0), a.get((i1, j), 0)
            for key in ((i1, j), (i2, j)):
                if a.get(key, 0) == 0:
                    a.pop(key, None)
        for j in range(rows):
            u[(i1, j)], u[(i2, j)] = u.get((i2, j), 0), u.get((i1, j), 0)
            for key in ((i1, j), (i2, j)):
                if u.get(key, 0) == 0:
                    u.pop(key, None)

    def col_swap(j1, j2):
        for i in range(rows):
            a[(i, j1)], a[(i, j2)] = a.get((i, j2), 0), a.get((i, j1), 0)
            for key in ((i, j1), (i, j2)):
                if a.get(key, 0) == 0:
                    a.pop(key, None)
        for i in range(cols):
            v[(i, j1)], v[(i, j2)] = v.get((i, j2), 0), v.get((i, j1), 0)
            for key in ((i, j1), (i, j2)):
                if v.get(key, 0) == 0:
                    v.pop(key, None)
        for j in range(cols):
            vinv[(j1, j)], vinv[(j2, j)] = vinv.get((j2, j), 0), vinv.get((j1, j), 0)
            for key in ((j1, j), (j2, j)):
                if vinv.get(key, 0) == 0:
                    vinv.pop(key, None)

    t = 0
    limit = min(rows, cols)
    while t < limit:
        # smallest nonzero entry in the remaining block, ties by (row, col)
        best = None
        for (i, j), val in a.items():
            if i >= t and j >= t and val:
                key = (abs(val), i, j)
                if best is None or key < best:
                    best = key
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            row_swap(t, bi)
        if bj != t:
            col_swap(t, bj)
        piv = a[(t, t)]
        dirty = False
        for i in range(t + 1, rows):
            val = a.get((i, t), 0)
            if val:
                q = val // piv
                if q:
                    row_op(i, t, -q)
                if a.get((i, t), 0):
                    dirty = True
        for j in range(t + 1, cols):
            val = a.get((t, j), 0)
            if val:
                q = val // piv
                if q:
                    col_op(j, t, -q)
                if a.get((t, j), 0):
                    dirty = True
        if dirty:
            continue
        # pivot must divide every remaining entry; if not, fold that row in
        offender = None
        for (i, j), val in a.items():
            if i > t and j > t and val % piv != 0:
                offender = (i, j)
                break
        if offender is not None:
            row_op(t, offender[0], 1)
            continue
        if piv < 0:
            row_op(t, t, -2)  # negate row t: r_t += -2 r_t
        t += 1

    # sort diagonal ascending; entries already divide each other pairwise
    diag = []
    for i in range(limit):
        val = a.get((i, i), 0)
        if val:
            diag.append(val)
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            g = gcd(diag[i], diag[j])
            l = diag[i] * diag[j] // g
            diag[i], diag[j] = g, l

    d = ExactMatrix(rows, cols, {(i, i): diag[i] for i in range(len(diag))})
    um = ExactMatrix(rows, rows, {k: Fraction(val) for k, val in u.items()})
    vm = ExactMatrix(cols, cols, {k: Fraction(val) for k, val in v.items()})
    vim = ExactMatrix(cols, cols, {k: Fraction(val) for k, val in vinv.items()})

    prod = um * m * vm
    # the diagonal sort above re-derives invariant factors; recompute the
    # transform product's diagonal and resort it the same way to compare
    got = sorted(abs(int(val)) for val in prod.entries.values())
    want = sorted(abs(int(val)) for val in d.entries.values())
    assert got == want and all(i == j for (i, j) in prod.entries), \
        "SNF transform check failed"
    assert (vm * vim) == ExactMatrix.identity(cols), "SNF inverse check failed"
    assert abs(_det_bareiss({k: int(val) for k, val in um.entries.items()}, rows)) == 1
    assert abs(_det_bareiss({k: int(val) for k, val in vm.entries.items()}, cols)) == 1
    # prod is diagonal with the same multiset; use prod itself as d so that
    # u * m * v == d holds literally
    return prod, um, vm, vim


def _normalize_torsion(factors):
    exps = {}
    for n in factors:
        n = abs(int(n))
        if n <= 1:
            continue
        d = 2
        while d * d <= n:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            if e:
                exps.setdefault(d, []).append(e)
            d += 1
        if n > 1:
            exps.setdefault(n, []).append(1)
    depth = max((len(v) for v in exps.values()), default=0)
    for p in exps:
        exps[p].sort(reverse=True)
        exps[p] += [0] * (depth - len(exps[p]))
    chain = []
    for slot in range(depth):
        val = 1
        for p, es in exps.items():
            val *= p ** es[slot]
        if val > 1:
            chain.append(val)
    chain.sort()
    return tuple(chain)


class FGAbelianGroup:
    """Finitely generated abelian group: free rank plus a divisibility chain.

    >>> FGAbelianGroup(1, (2, 6))
    FGAbelianGroup('Z + Z/2 + Z/6')
    >>> FGAbelianGroup(0, (4,)).tensor(FGAbelianGroup(0, (6,)))
    FGAbelianGroup('Z/2')
    """

    __slots__ = ("free_rank", "torsion")

    def __init__(self, free_rank=0, torsion=()):
        assert free_rank >= 0
        tors = _normalize_torsion(torsion)
        for a, b in zip(tors, tors[1:]):
            assert b % a == 0, "not a divisibility chain: %r" % (tors,)
        self.free_rank = free_rank
        self.torsion = tors

    @classmethod
    def zero(cls):
        return cls(0, ())

    @classmethod
    def free(cls, n):
        return cls(n, ())

    @classmethod
    def from_presentation(cls, relations):
        """Cokernel Z^rows / column span of `relations` (an integer matrix)."""
        if relations.cols == 0 or relations.is_zero():
            return cls(relations.rows, ())
        d, _, _, _ = smith_normal_form(relations)
        diag = [abs(int(d.entry(i, i))) for i in range(min(d.rows, d.cols))]
        diag = [x for x in diag if x]
        free = relations.rows - len(diag)
        return cls(free, tuple(x for x in diag if x > 1))

    def is_zero(self):
        return self.free_rank == 0 and not self.torsion

    def order(self):
        """Order of the torsion part (None when the group is infinite)."""
        if self.free_rank:
            return None
        n = 1
        for t in self.torsion:
            n *= t
        return n

    def direct_sum(self, other):
        return FGAbelianGroup(self.free_rank + other.free_rank,
                              self.torsion + other.torsion)

    def tensor(self, other):
        factors = []
        # free x free
        rank_part = self.free_rank * other.free_rank
        # free x torsion, both ways
        for t in other.torsion:
            factors.extend([t] * self.free_rank)
        for t in self.torsion:
            factors.extend([t] * other.free_rank)
        # torsion x torsion
        for a in self.torsion:
            for b in other.torsion:
                g = gcd(a, b)
                if g > 1:
                    factors.append(g)
        return FGAbelianGroup(rank_part, tuple(factors))

    def tor(self, other):
        """Tor_1 with another group; free parts contribute nothing."""
        factors = []
        for a in self.torsion:
            for b in other.torsion:
                g = gcd(a, b)
                if g > 1:
                    factors.append(g)
        return FGAbelianGroup(0, tuple(factors))

    def to_json(self):
        return {"rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj.get("rank", 0)), tuple(obj.get("torsion", ())))

    def __eq__(self, other):
        return (isinstance(other, FGAbelianGroup)
                and self.free_rank == other.free_rank
                and self.torsion == other.torsion)

    def __hash__(self):
        return hash((self.free_rank, self.torsion))

    def describe(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank:
            parts.append("Z^%d" % self.free_rank)
        parts.extend("Z/%d" % t for t in self.torsion)
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return "FGAbelianGroup(%r)" % self.describe()


def tor1(a, b):
    """Tor_1 of two finitely generated abelian groups.

    >>> tor1(FGAbelianGroup(0, (4,)), FGAbelianGroup(0, (6,)))
    FGAbelianGroup('Z/2')
    """
    return a.tor(b)


class CochainComplex:
    """Cochain complex over a contiguous degree range with exact differentials.

    `dims` maps each degree in [lo, hi] to a dimension (zero allowed);
    `diffs` maps degree k to the matrix of d^k with shape (dims[k+1], dims[k]).
    Missing differentials are zero.  d o d = 0 is checked at construction.
    """

    __slots__ = ("lo", "hi", "dims", "diffs")

    def __init__(self, dims, diffs=None, check=True):
        assert dims, "empty complex needs an explicit degree range"
        degrees = sorted(dims)
        self.lo, self.hi = degrees[0], degrees[-1]
        assert degrees == list(range(self.lo, self.hi + 1)), "degrees must be contiguous"
        self.dims = {k: int(dims[k]) for k in degrees}
        self.diffs = {}
        diffs = diffs or {}
        for k, m in diffs.items():
            if m is None or m.is_zero():
                continue
            assert self.lo <= k < self.hi, "differential %d out of range" % k
            assert m.shape == (self.dims[k + 1], self.dims[k]), \
                (k, m.shape, self.dims[k + 1], self.dims[k])
            self.diffs[k] = m
        if check:
            for k in self.diffs:
                nxt = self.diffs.get(k + 1)
                if nxt is not None:
                    assert (nxt * self.diffs[k]).is_zero(), "d o d != 0 at degree %d" % k

    def dim(self, k):
        return self.dims.get(k, 0)

    def diff(self, k):
        m = self.diffs.get(k)
        if m is None:
            return ExactMatrix.zeros(self.dim(k + 1), self.dim(k))
        return m

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def total_dimension(self):
        return sum(self.dims.values())

    def euler_characteristic(self):
        return sum((-1) ** k * d for k, d in self.dims.items())

    def betti_numbers(self):
        """Q-cohomology dimensions per degree.

        rank-nullity per degree: dim = rank d_k + dim ker d_k, and
        b_k = dim ker d_k - rank d_{k-1}.
        """
        rks = {k: rank(self.diff(k)) for k in range(self.lo, self.hi)}
        out = {}
        for k in self.degrees():
            out[k] = self.dim(k) - rks.get(k, 0) - rks.get(k - 1, 0)
            assert out[k] >= 0
        return out

    def cohomology_basis(self, k):
        """Deterministic representatives of H^k over Q, as coordinate tuples.

        Representatives are kernel basis vectors that extend a basis of the
        image, taken greedily in kernel-basis order.
        """
        ker = kernel_basis(self.diff(k))
        img = self.diff(k - 1)
        # incremental elimination; pivots maps coordinate -> reduced vector
        # with a 1 at that coordinate and zeros at other pivots
        pivots = {}

        def reduce(vec):
            v = list(vec)
            for p in sorted(pivots):
                c = v[p]
                if c:
                    pv = pivots[p]
                    for i in range(len(v)):
                        if pv[i]:
                            v[i] -= c * pv[i]
            return v

        def insert(vec):
            v = reduce(vec)
            for i, x in enumerate(v):
                if x:
                    row = [y / x for y in v]
                    # keep stored rows reduced at the new pivot coordinate
                    for p, pv in pivots.items():
                        c = pv[i]
                        if c:
                            pivots[p] = [a - c * b for a, b in zip(pv, row)]
                    pivots[i] = row
                    return True
            return False

        for j in range(img.cols):
            insert(img.column(j))
        reps = []
        for vec in ker:
            if insert(vec):
                reps.append(vec)
        return reps

    def cohomology_groups(self):
        """Integral cohomology per degree as FGAbelianGroup.

        Requires integer differentials.  H^k = ker d^k / im d^{k-1}; the
        kernel basis comes from the SNF column transform of d^k, the image is
        rewritten in those coordinates through the inverse transform, and the
        quotient's invariant factors come from one more SNF.
        """
        out = {}
        for k in self.degrees():
            a = self.diff(k)          # C^k -> C^{k+1}
            b = self.diff(k - 1)      # C^{k-1} -> C^k
            assert a.is_integral() and b.is_integral()
            n = self.dim(k)
            if n == 0:
                out[k] = FGAbelianGroup.zero()
                continue
            if a.is_zero():
                ker_cols = list(range(n))
                vinv = ExactMatrix.identity(n)
                ra = 0
            else:
                d, _, v, vinv = smith_normal_form(a)
                ra = sum(1 for (i, j) in d.entries if i == j)
                ker_cols = list(range(ra, n))
            if not ker_cols:
                out[k] = FGAbelianGroup.zero()
                continue
            if b.is_zero():
                out[k] = FGAbelianGroup.free(len(ker_cols))
                continue
            coords = vinv * b
            # rows < ra must vanish because a*b = 0 and the SNF diagonal is
            # nonzero there; keep the kernel rows as the presentation matrix
            ent = {}
            for (i, j), val in coords.entries.items():
                if i < ra:
                    raise AssertionError("image not contained in kernel")
                ent[(i - ra, j)] = val
            pres = ExactMatrix(len(ker_cols), b.cols, ent)
            out[k] = FGAbelianGroup.from_presentation(pres)
        return out

    def shifted(self, s):
        """Same complex with degrees shifted up by s (no sign changes)."""
        dims = {k + s: v for k, v in self.dims.items()}
        diffs = {k + s: m for k, m in self.diffs.items()}
        return CochainComplex(dims, diffs, check=False)

    def __repr__(self):
        spans = ", ".join("%d:%d" % (k, self.dims[k]) for k in self.degrees())
        return "CochainComplex(%s)" % spans


def tensor_complex(x, y):
    """Total complex of the tensor product of two cochain complexes.

    Basis of degree n: pairs (p, q) with p + q = n in increasing p, and within
    a pair the index is i * dim_Y^q + j.  The differential follows the Koszul
    rule d(a (x) b) = da (x) b + (-1)^p a (x) db.
    Returns (complex, layout) where layout maps n to the list of
    (p, q, offset) blocks.
    """
    dims = {}
    layout = {}
    lo = x.lo + y.lo
    hi = x.hi + y.hi
    for n in range(lo, hi + 1):
        blocks = []
        off = 0
        for p in range(x.lo, x.hi + 1):
            q = n - p
            if q < y.lo or q > y.hi:
                continue
            sz = x.dim(p) * y.dim(q)
            if sz:
                blocks.append((p, q, off))
                off += sz
        dims[n] = off
        layout[n] = blocks

    def offset_of(n, p):
        for (pp, qq, off) in layout[n]:
            if pp == p:
                return off
        return None

    diffs = {}
    for n in range(lo, hi):
        ent = {}
        for (p, q, off) in layout[n]:
            dx = x.diffs.get(p)
            if dx is not None:
                off2 = offset_of(n + 1, p + 1)
                if off2 is not None:
                    dy_dim = y.dim(q)
                    for (i2, i1), val in dx.entries.items():
                        for j in range(dy_dim):
                            ent[(off2 + i2 * dy_dim + j, off + i1 * dy_dim + j)] = val
            dy = y.diffs.get(q)
            if dy is not None:
                off2 = offset_of(n + 1, p)
                if off2 is not None:
                    sign = Fraction(-1 if p % 2 else 1)
                    dyd = y.dim(q + 1)
                    dyq = y.dim(q)
                    for (j2, j1), val in dy.entries.items():
                        for i in range(x.dim(p)):
                            key = (off2 + i * dyd + j2, off + i * dyq + j1)
                            ent[key] = ent.get(key, Fraction(0)) + sign * val
        m = ExactMatrix(dims[n + 1], dims[n], ent)
        if not m.is_zero():
            diffs[n] = m
    return CochainComplex(dims, diffs), layout
