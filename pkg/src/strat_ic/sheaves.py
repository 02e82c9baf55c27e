"""Cellular sheaves of cochain complexes and their cohomology.

A sheaf assigns to every cell a bounded cochain complex (the stalk, really
the complex of sections over the cell's open star) and to every face
relation a degreewise restriction map.  Restrictions must be chain maps and
strictly functorial; both are certified at construction.

Cohomology over the whole complex uses the incidence total complex (one
summand per cell, horizontal differential weighted by incidence signs).
Over a proper open up-set that model computes the compactly supported
answer, so open sets get the flag complex instead: one summand per strict
chain of cells, with the alternating-drop differential.  Pushforwards take
the pointwise homotopy Kan extension: every stalk of the image is a flag
complex over the source cells sitting above the target cell, and every
restriction is a flag projection, which makes functoriality strict instead
of up-to-homotopy.
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import CochainComplex, ExactMatrix, FGAbelianGroup, kernel_basis, solve
from .spaces import FacePoset


class SheafError(Exception):
    pass


class NotOpen(SheafError):
    pass


class NotOpenComplement(SheafError):
    pass


# how large a total complex may get before we stop asserting D compose D = 0
# directly (it holds by the certified sheaf axioms; the assert is belt and
# braces on small instances)
_CHECK_LIMIT = 1500


def solve_columns(basis, target):
    """Matrix Y with basis * Y == target, solved column by column.

    Raises SheafError when some column is not in the span: the caller picked
    a subspace that is not stable under the maps being expressed.
    """
    cols = []
    for j in range(target.cols):
        y = solve(basis, target.column(j))
        if y is None:
            raise SheafError("vector outside the chosen subspace")
        cols.append(y)
    ent = {}
    for j, y in enumerate(cols):
        for i, v in enumerate(y):
            if v:
                ent[(i, j)] = v
    return ExactMatrix(basis.cols, target.cols, ent)


class SheafComplex:
    """Stalk complexes on cells plus restriction maps along face relations.

    `restrictions[(a, b)][q]` is the degree-q matrix of the map stalk(a) ->
    stalk(b) for a covering pair a < b; missing degrees are zero maps.
    Restrictions along longer face relations are composites (functoriality
    makes them path independent; validate() certifies that).
    """

    def __init__(self, space, stalks, restrictions, check=True):
        self.space = space
        self.poset = FacePoset(space.complex)
        self.stalks = {tuple(c): cx for c, cx in stalks.items()}
        assert set(self.stalks) == set(space.complex.cells), \
            "stalks must cover all cells"
        self.restrictions = {}
        for (a, b), mats in restrictions.items():
            a, b = tuple(a), tuple(b)
            self.restrictions[(a, b)] = dict(mats)
        self._composed = {}
        if check:
            self.validate()

    def stalk(self, c):
        return self.stalks[tuple(c)]

    def degrees(self):
        lo = min(cx.lo for cx in self.stalks.values())
        hi = max(cx.hi for cx in self.stalks.values())
        return range(lo, hi + 1)

    def _cover_matrix(self, a, b, q):
        mats = self.restrictions.get((a, b))
        m = None if mats is None else mats.get(q)
        if m is not None:
            return m
        return ExactMatrix(self.stalks[b].dim(q), self.stalks[a].dim(q), {})

    def restriction(self, a, b, q):
        """Degree-q component of the restriction along a <= b."""
        a, b = tuple(a), tuple(b)
        if a == b:
            return ExactMatrix.identity(self.stalks[a].dim(q))
        key = (a, b, q)
        if key not in self._composed:
            if (a, b) in self.restrictions or len(b) == len(a) + 1:
                self._composed[key] = self._cover_matrix(a, b, q)
            else:
                # peel one cover step off the top; any path gives the same map
                mid = None
                for pos in range(len(b)):
                    face = b[:pos] + b[pos + 1:]
                    if set(a) <= set(face) and face in self.stalks:
                        mid = face
                        break
                assert mid is not None, "no face path %r -> %r" % (a, b)
                self._composed[key] = (self._cover_matrix(mid, b, q)
                                       * self.restriction(a, mid, q))
        return self._composed[key]

    def validate(self):
        cells = self.space.complex.cells
        index = self.space.complex.cell_index
        for (a, b) in self.restrictions:
            assert a in index and b in index, "restriction off the complex"
            assert set(a) < set(b) and len(b) == len(a) + 1, \
                "stored restrictions must follow covering pairs"
        # restrictions are chain maps
        for tau in cells:
            for (sig, _sign) in self.poset.covers_down[tau]:
                sx, tx = self.stalks[sig], self.stalks[tau]
                lo = min(sx.lo, tx.lo)
                hi = max(sx.hi, tx.hi)
                for q in range(lo, hi):
                    left = self.restriction(sig, tau, q + 1) * sx.diff(q)
                    right = tx.diff(q) * self.restriction(sig, tau, q)
                    assert left == right, \
                        "restriction %r -> %r not a chain map at degree %d" \
                        % (sig, tau, q)
        # strict functoriality across codimension-2 diamonds
        for rho in cells:
            if len(rho) < 3:
                continue
            for (mid, _s1) in self.poset.covers_down[rho]:
                for (sig, _s2) in self.poset.covers_down[mid]:
                    for q in self.degrees():
                        via = (self.restriction(mid, rho, q)
                               * self.restriction(sig, mid, q))
                        flat = self.restriction(sig, rho, q)
                        assert via == flat, \
                            "restrictions %r -> %r not functorial" % (sig, rho)

    def total_dimension(self):
        return sum(cx.dim(q) for cx in self.stalks.values()
                   for q in cx.degrees())

    def __repr__(self):
        return "SheafComplex(cells=%d, degrees=%s, total=%d)" % (
            len(self.stalks), list(self.degrees()), self.total_dimension())


# -- constructors ----------------------------------------------------------

def resolution_complex(group):
    """Free complex in degrees (-1, 0) with H^0 the given group.

    Torsion generators acquire a relation in degree -1; a free group sits in
    degree 0 alone.
    """
    r, tor = group.free_rank, group.torsion
    if not tor:
        return CochainComplex({0: r}, {})
    t = len(tor)
    ent = {(r + i, i): Fraction(n) for i, n in enumerate(tor)}
    d = ExactMatrix(r + t, t, ent)
    return CochainComplex({-1: t, 0: r + t}, {-1: d})


def constant_sheaf(space, coefficient=1):
    """Same stalk on every cell, identity restrictions.

    `coefficient` is a rank or an FGAbelianGroup; a group with torsion is
    replaced by its two-term free resolution so integral answers carry the
    derived terms.
    """
    if isinstance(coefficient, FGAbelianGroup):
        stalk = resolution_complex(coefficient)
    else:
        stalk = CochainComplex({0: int(coefficient)}, {})
    stalks = {c: stalk for c in space.complex.cells}
    restrictions = {}
    poset = FacePoset(space.complex)
    for tau in space.complex.cells:
        for (sig, _s) in poset.covers_down[tau]:
            restrictions[(sig, tau)] = {
                q: ExactMatrix.identity(stalk.dim(q)) for q in stalk.degrees()}
    return SheafComplex(space, stalks, restrictions, check=False)


def graded_sections_functor(space):
    """Coefficient data of the space as a sheaf of free complexes.

    On a product, the model is the external tensor of the factor models, so
    products of torsion coefficients pick up their derived terms.  Otherwise
    all strata must declare the same group (there is no canonical map
    between resolutions of different groups along a face relation).
    """
    factors = getattr(space, "factors", None)
    if factors is not None:
        fx = graded_sections_functor(factors[0])
        fy = graded_sections_functor(factors[1])
        return external_tensor(fx, fy, space)
    groups = [space.coefficient(p) for p in space.stratum_levels()]
    for g in groups[1:]:
        if g != groups[0]:
            raise SheafError(
                "strata declare different coefficient groups; only products "
                "combine mixed coefficients")
    return constant_sheaf(space, groups[0] if groups else 1)


# -- total complexes -------------------------------------------------------

def incidence_complex(sheaf):
    """Total complex over all cells: degree = cell dimension + stalk degree.

    Horizontal differential: incidence-signed restrictions along covers.
    Vertical: stalk differential twisted by (-1)^dim.  Computes the
    hypercohomology of the whole (compact) complex.

    Returns (complex, layout) where layout[k] is a list of blocks
    (cell, stalk_degree, offset, size).
    """
    cells = sheaf.space.complex.cells
    layout = {}
    for c in cells:
        p = len(c) - 1
        cx = sheaf.stalks[c]
        for q in cx.degrees():
            sz = cx.dim(q)
            if sz:
                layout.setdefault(p + q, []).append([c, q, 0, sz])
    for k in sorted(layout):
        off = 0
        blocks = layout[k]
        blocks.sort(key=lambda blk: (len(blk[0]), blk[0], blk[1]))
        for blk in blocks:
            blk[2] = off
            off += blk[3]
        layout[k] = [tuple(blk) for blk in blocks]
    return _assemble_total(sheaf, layout, _incidence_arrows(sheaf)), layout


def _incidence_arrows(sheaf):
    def arrows(cell_q):
        c, q = cell_q
        p = len(c) - 1
        out = [((c, q + 1), (-1) ** p, sheaf.stalks[c].diff(q))]
        for (tau, sign) in sheaf.poset.covers_up[c]:
            out.append(((tau, q), sign, sheaf.restriction(c, tau, q)))
        return out
    return arrows


def _assemble_total(sheaf, layout, arrows):
    if not layout:
        return CochainComplex({0: 0}, {})
    degrees = sorted(layout)
    dims = {}
    for k in range(degrees[0], degrees[-1] + 1):
        blocks = layout.get(k, [])
        dims[k] = sum(b[3] for b in blocks)
    index = {}
    for k, blocks in layout.items():
        for (key_cell, key_q, off, sz) in blocks:
            index[(key_cell, key_q)] = (k, off, sz)
    diffs = {}
    for k in dims:
        if k + 1 not in dims:
            continue
        ent = {}
        for (c, q, off, sz) in layout.get(k, []):
            for (target, sign, mat) in arrows((c, q)):
                spot = index.get(target)
                if spot is None:
                    continue
                tk, toff, tsz = spot
                assert tk == k + 1, "arrow does not raise total degree by 1"
                assert mat.rows == tsz and mat.cols == sz
                for (i, j), v in mat.entries.items():
                    w = sign * v
                    if w:
                        key = (toff + i, off + j)
                        cur = ent.get(key, 0)
                        cur += w
                        if cur:
                            ent[key] = cur
                        elif key in ent:
                            del ent[key]
        diffs[k] = ExactMatrix(dims[k + 1], dims[k], ent)
    total = sum(dims.values())
    return CochainComplex(dims, diffs, check=total <= _CHECK_LIMIT)


def _flags(cells):
    """Strict chains of cells ordered by face inclusion, longest first used
    nowhere: enumeration is by increasing length, lexicographic within."""
    cells = sorted(set(cells), key=lambda c: (len(c), c))
    cellset = set(cells)
    above = {}
    for c in cells:
        above[c] = [d for d in cells
                    if len(d) > len(c) and set(c) < set(d)]
    out = []

    def extend(flag):
        out.append(tuple(flag))
        for d in above[flag[-1]]:
            flag.append(d)
            extend(flag)
            flag.pop()

    for c in cells:
        extend([c])
    out.sort(key=lambda f: (len(f), f))
    assert all(c in cellset for f in out for c in f)
    return out


def flag_complex(sheaf, cells):
    """Total complex over strict chains in an up-set of cells.

    Block (flag, q) carries the stalk of the flag's largest cell.  The
    differential drops flag entries with alternating signs; dropping the top
    cell composes with the restriction into the new top.  Computes derived
    sections over the open set.

    Returns (complex, layout) like incidence_complex, with flags as keys.
    """
    flags = _flags(cells)
    layout = {}
    for f in flags:
        n = len(f) - 1
        cx = sheaf.stalks[f[-1]]
        for q in cx.degrees():
            sz = cx.dim(q)
            if sz:
                layout.setdefault(n + q, []).append([f, q, 0, sz])
    for k in sorted(layout):
        off = 0
        blocks = layout[k]
        blocks.sort(key=lambda blk: (len(blk[0]), blk[0], blk[1]))
        for blk in blocks:
            blk[2] = off
            off += blk[3]
        layout[k] = [tuple(blk) for blk in blocks]
    flagset = set(flags)
    cand = sorted({c for f in flags for c in f}, key=lambda c: (len(c), c))

    def arrows(flag_q):
        f, q = flag_q
        n = len(f) - 1
        out = [((f, q + 1), (-1) ** n, sheaf.stalks[f[-1]].diff(q))]
        # (delta x)_g sums over drops of g; from the source side that means
        # extending f by one cell at any position, with sign (-1)^position,
        # composing with the restriction when the new cell lands on top
        ident = ExactMatrix.identity(sheaf.stalks[f[-1]].dim(q))
        seen = set(f)
        for c in cand:
            if c in seen:
                continue
            cs = set(c)
            for pos in range(len(f) + 1):
                if pos > 0 and not set(f[pos - 1]) < cs:
                    continue
                if pos < len(f) and not cs < set(f[pos]):
                    continue
                g = f[:pos] + (c,) + f[pos:]
                if g not in flagset:
                    continue
                if pos == len(f):
                    out.append(((g, q), (-1) ** pos,
                                sheaf.restriction(f[-1], c, q)))
                else:
                    out.append(((g, q), (-1) ** pos, ident))
        return out
    return _assemble_total(sheaf, layout, arrows), layout


def sheaf_cohomology(sheaf, open_cells=None, integral=False):
    """Hypercohomology over the whole space or an open up-set.

    Returns a dict degree -> rational betti number, or degree ->
    FGAbelianGroup when integral=True.
    """
    if open_cells is None:
        cx, _ = incidence_complex(sheaf)
    else:
        open_cells = [tuple(c) for c in open_cells]
        for c in open_cells:
            if c not in sheaf.space.complex.cell_index:
                raise NotOpen("cell %r not in the complex" % (c,))
        if not sheaf.poset.is_up_set(open_cells):
            raise NotOpen("cell set is not open (not an up-set)")
        cx, _ = flag_complex(sheaf, open_cells)
    if integral:
        return cx.cohomology_groups()
    return cx.betti_numbers()


# -- sections --------------------------------------------------------------

class SectionSpace:
    """Compatible families of stalk vectors over an open set, degreewise.

    `basis[q]` lists sections; each section maps cell -> coefficient tuple.
    The induced differential acts sectionwise, making Gamma(U, F) itself a
    cochain complex (available as .complex).
    """

    def __init__(self, cells, degrees, basis, complex_):
        self.cells = cells
        self.degrees = degrees
        self.basis = basis
        self.complex = complex_

    def dim(self, q):
        return len(self.basis.get(q, []))

    def __repr__(self):
        dims = {q: self.dim(q) for q in self.degrees}
        return "SectionSpace(%r)" % (dims,)


def global_sections(sheaf, open_cells=None):
    """Sections over an up-set: kernels of the pairwise mismatch maps."""
    if open_cells is None:
        open_cells = list(sheaf.space.complex.cells)
    cells = sorted({tuple(c) for c in open_cells}, key=lambda c: (len(c), c))
    for c in cells:
        if c not in sheaf.space.complex.cell_index:
            raise NotOpen("cell %r not in the complex" % (c,))
    if not sheaf.poset.is_up_set(cells):
        raise NotOpen("cell set is not open (not an up-set)")
    covers = [(a, b) for b in cells for (a, _s) in sheaf.poset.covers_down[b]
              if a in set(cells)]
    covers.sort(key=lambda ab: (len(ab[0]), ab))
    lo = min((sheaf.stalks[c].lo for c in cells), default=0)
    hi = max((sheaf.stalks[c].hi for c in cells), default=0)
    degrees = list(range(lo, hi + 1))
    offs = {}
    basis = {}
    vecs = {}
    for q in degrees:
        off = 0
        offs[q] = {}
        for c in cells:
            offs[q][c] = off
            off += sheaf.stalks[c].dim(q)
        rows = []
        ent = {}
        r = 0
        for (a, b) in covers:
            m = sheaf.restriction(a, b, q)
            nb = sheaf.stalks[b].dim(q)
            for i in range(nb):
                # r(x_a) - x_b = 0
                for (ii, j), v in m.entries.items():
                    if ii == i:
                        ent[(r, offs[q][a] + j)] = v
                ent[(r, offs[q][b] + i)] = Fraction(-1)
                r += 1
        mism = ExactMatrix(r, off, ent)
        ker = kernel_basis(mism)
        vecs[q] = ker
        basis[q] = []
        for vec in ker:
            sec = {}
            for c in cells:
                n = sheaf.stalks[c].dim(q)
                sec[c] = tuple(vec[offs[q][c] + k] for k in range(n))
            basis[q].append(sec)
    # induced differential: d(section) is again a section; express it in
    # the next degree's basis
    dims = {q: len(vecs[q]) for q in degrees}
    diffs = {}
    for q in degrees[:-1]:
        cols = []
        tgt_basis = ExactMatrix.from_rows(
            [list(v) for v in vecs[q + 1]]).transpose() if vecs[q + 1] else \
            ExactMatrix(sum(sheaf.stalks[c].dim(q + 1) for c in cells), 0, {})
        ent = {}
        for j, vec in enumerate(vecs[q]):
            img = []
            for c in cells:
                n = sheaf.stalks[c].dim(q)
                chunk = tuple(vec[offs[q][c] + k] for k in range(n))
                img_c = sheaf.stalks[c].diff(q).apply(chunk)
                img.extend(img_c)
            if vecs[q + 1]:
                target = ExactMatrix.from_rows([[v] for v in img])
                y = solve_columns(tgt_basis, target)
                for (i, _z), v in y.entries.items():
                    ent[(i, j)] = v
            else:
                assert not any(img), "differential leaves the section space"
        diffs[q] = ExactMatrix(dims[q + 1], dims[q], ent)
    return SectionSpace(cells, degrees, basis,
                        CochainComplex(dims, diffs))


# -- pushforward -----------------------------------------------------------

def kan_pushforward(sheaf, cell_map, target_space, check=None):
    """Pointwise homotopy Kan extension along a monotone cell map.

    The stalk at a target cell t is the flag complex over the source cells c
    with cell_map(c) >= t; restrictions are flag projections, so the result
    is strictly functorial by construction.  For the identity map this
    returns the sheaf itself.
    """
    cmap = {tuple(a): tuple(b) for a, b in cell_map.items()}
    src = sheaf.space.complex
    for a, b in cmap.items():
        assert a in src.cell_index, "source cell %r unknown" % (a,)
        assert b in target_space.complex.cell_index, \
            "target cell %r unknown" % (b,)
    if (target_space is sheaf.space
            and all(a == b for a, b in cmap.items())
            and set(cmap) == set(src.cells)):
        return sheaf
    fibers = {}
    for t in target_space.complex.cells:
        ts = set(t)
        fibers[t] = [c for c in sorted(cmap, key=lambda c: (len(c), c))
                     if ts <= set(cmap[c])]
    stalks = {}
    layouts = {}
    for t, cells in fibers.items():
        cx, layout = flag_complex(sheaf, cells)
        stalks[t] = cx
        layouts[t] = layout
    index = {}
    for t, layout in layouts.items():
        index[t] = {}
        for k, blocks in layout.items():
            for (f, q, off, sz) in blocks:
                index[t][(f, q)] = (k, off, sz)
    restrictions = {}
    tposet = FacePoset(target_space.complex)
    for tau in target_space.complex.cells:
        for (sig, _s) in tposet.covers_down[tau]:
            mats = {}
            for k, blocks in layouts[tau].items():
                ent = {}
                for (f, q, toff, sz) in blocks:
                    spot = index[sig].get((f, q))
                    if spot is None:
                        continue
                    sk, soff, ssz = spot
                    assert sk == k and ssz == sz
                    for i in range(sz):
                        ent[(toff + i, soff + i)] = Fraction(1)
                src_dim = stalks[sig].dim(k)
                tgt_dim = stalks[tau].dim(k)
                if ent or (src_dim and tgt_dim):
                    mats[k] = ExactMatrix(tgt_dim, src_dim, ent)
            restrictions[(sig, tau)] = mats
    if check is None:
        check = sum(cx.total_dimension() for cx in stalks.values()) <= _CHECK_LIMIT
    out = SheafComplex(target_space, stalks, restrictions, check=check)
    out.stalk_layouts = layouts
    return out


def derived_pushforward(sheaf, closed_cells):
    """Pushforward along the inclusion of the complement of a closed set.

    `closed_cells` is the subcomplex being removed; its complement must be
    open, else NotOpenComplement.  Stalks on the removed cells become flag
    complexes over the nearby open cells, carrying the cohomology of the
    deleted neighborhood.
    """
    closed = {tuple(c) for c in closed_cells}
    for c in closed:
        if c not in sheaf.space.complex.cell_index:
            raise NotOpenComplement("cell %r not in the complex" % (c,))
    open_cells = [c for c in sheaf.space.complex.cells if c not in closed]
    if not sheaf.poset.is_up_set(open_cells):
        raise NotOpenComplement(
            "complement of the given cells is not open; the set must be "
            "closed under faces")
    cmap = {c: c for c in open_cells}
    return kan_pushforward(sheaf, cmap, sheaf.space)


# -- tensor and truncation -------------------------------------------------

def external_tensor(fx, fy, prod):
    """Sheaf on a product whose stalks are tensors of the factor stalks."""
    from .spaces import product_projections
    ny = prod.n_right
    from .linalg import tensor_complex
    stalks = {}
    layouts = {}
    projs = {}
    for c in prod.complex.cells:
        a, b = product_projections(c, ny)
        projs[c] = (a, b)
        cx, layout = tensor_complex(fx.stalks[a], fy.stalks[b])
        stalks[c] = cx
        layouts[c] = layout
    restrictions = {}
    poset = FacePoset(prod.complex)
    for tau in prod.complex.cells:
        at, bt = projs[tau]
        for (sig, _s) in poset.covers_down[tau]:
            asig, bsig = projs[sig]
            mats = {}
            src_layout, tgt_layout = layouts[sig], layouts[tau]
            for k in stalks[sig].degrees():
                if stalks[tau].dim(k) == 0 or stalks[sig].dim(k) == 0:
                    continue
                ent = {}
                tgt_pos = {(p, q): off for (p, q, off) in tgt_layout.get(k, [])}
                for (p, q, soff) in src_layout.get(k, []):
                    toff = tgt_pos.get((p, q))
                    if toff is None:
                        continue
                    ra = fx.restriction(asig, at, p)
                    rb = fy.restriction(bsig, bt, q)
                    wy = fy.stalks[bsig].dim(q)
                    wyt = fy.stalks[bt].dim(q)
                    for (i1, j1), v1 in ra.entries.items():
                        for (i2, j2), v2 in rb.entries.items():
                            ent[(toff + i1 * wyt + i2,
                                 soff + j1 * wy + j2)] = v1 * v2
                mats[k] = ExactMatrix(stalks[tau].dim(k),
                                      stalks[sig].dim(k), ent)
            restrictions[(sig, tau)] = mats
    total = sum(cx.total_dimension() for cx in stalks.values())
    return SheafComplex(prod, stalks, restrictions,
                        check=total <= _CHECK_LIMIT)


def truncate(sheaf, degree, subspaces=None):
    """Canonical truncation: keep degrees below, the kernel at the cutoff.

    `subspaces` optionally replaces the kernel at specific cells by a
    smaller d-stable subspace (columns of a matrix in stalk coordinates,
    which must contain the image of the previous differential); used for
    refined middle-degree conditions.
    """
    k = int(degree)
    subspaces = {tuple(c): m for c, m in (subspaces or {}).items()}
    bases = {}
    stalks = {}
    for c, cx in sheaf.stalks.items():
        if c in subspaces:
            kb = subspaces[c]
        else:
            vecs = kernel_basis(cx.diff(k))
            kb = ExactMatrix.from_rows(
                [list(v) for v in vecs]).transpose() if vecs else \
                ExactMatrix(cx.dim(k), 0, {})
        bases[c] = kb
        dims = {}
        diffs = {}
        for q in cx.degrees():
            if q < k:
                dims[q] = cx.dim(q)
            elif q == k:
                dims[q] = kb.cols
        for q in sorted(dims):
            if q + 1 not in dims:
                continue
            if q + 1 < k:
                diffs[q] = cx.diff(q)
            else:
                # express d^{k-1} in the subspace basis
                diffs[q] = solve_columns(kb, cx.diff(q))
        if not dims:
            dims = {k: 0}
        stalks[c] = CochainComplex(dims, diffs)
    restrictions = {}
    for (a, b), mats in sheaf.restrictions.items():
        out = {}
        for q, m in mats.items():
            if q < k:
                out[q] = m
            elif q == k:
                full = sheaf.restriction(a, b, k) * bases[a]
                out[q] = solve_columns(bases[b], full)
        restrictions[(a, b)] = out
    total = sum(cx.total_dimension() for cx in stalks.values())
    out = SheafComplex(sheaf.space, stalks, restrictions,
                       check=total <= _CHECK_LIMIT)
    # provenance for pairings: the ambient sheaf and how the cutoff degree
    # embeds back into it (columns per cell; lower degrees embed identically)
    out.untruncated = sheaf
    out.cutoff = k
    out.inclusions = bases
    return out
