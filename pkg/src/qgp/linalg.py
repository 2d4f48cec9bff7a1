"""Exact matrix algebra over the coefficient rings of :mod:`qgp.ring`.

Row convention throughout: vectors are rows and a matrix acts on the right,
so the image of ``x`` under ``A`` is ``x·A`` and the row span of ``A`` is the
submodule generated by its rows.

The workhorse is the Howell form.  Over rings with zero divisors an ordinary
echelon form does not describe its row span (``[2]`` and ``[2, 1]`` style
examples over Z/4), the Howell form does, and it is unique, so membership and
equality of submodules reduce to comparing reduced vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import NoSolution, ParseError, ShapeMismatch


class Matrix:
    """An immutable ``nrows x ncols`` matrix with entries in ``ring``."""

    __slots__ = ("ring", "nrows", "ncols", "rows")

    def __init__(self, ring, rows, ncols=None):
        rows = tuple(tuple(r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ShapeMismatch(f"row of length {len(r)} in a matrix with {ncols} columns")
        self.ring = ring
        self.nrows = len(rows)
        self.ncols = ncols
        self.rows = rows

    # constructors --------------------------------------------------------
    @classmethod
    def zeros(cls, ring, nrows, ncols):
        return cls(ring, [[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, ring, n):
        return cls(ring, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def diag(cls, ring, entries):
        n = len(entries)
        return cls(ring, [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def block_diag(cls, ring, blocks):
        ncols = sum(b.ncols for b in blocks)
        rows = []
        offset = 0
        for b in blocks:
            for r in b.rows:
                rows.append([0] * offset + list(r) + [0] * (ncols - offset - b.ncols))
            offset += b.ncols
        return cls(ring, rows, ncols)

    # basic algebra -------------------------------------------------------
    @property
    def shape(self):
        return self.nrows, self.ncols

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.ring == other.ring
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.ring, self.ncols, self.rows))

    def __repr__(self):
        return f"Matrix({self.ring}, {[list(r) for r in self.rows]}, ncols={self.ncols})"

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def _same(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other):
        self._same(other)
        add = self.ring.add
        return Matrix(self.ring, [[add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other):
        self._same(other)
        sub = self.ring.sub
        return Matrix(self.ring, [[sub(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self):
        neg = self.ring.neg
        return Matrix(self.ring, [[neg(a) for a in r] for r in self.rows], self.ncols)

    def scale(self, c):
        return Matrix(self.ring, [self.ring.scale(c, r) for r in self.rows], self.ncols)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        return Matrix(self.ring, mat_mul(self.ring, self.rows, other.rows, other.ncols), other.ncols)

    def vecmul(self, x):
        """Return ``x·self`` for a row vector ``x``."""
        return vec_mat(self.ring, x, self.rows, self.ncols)

    def transpose(self):
        return Matrix(self.ring, list(zip(*self.rows)) if self.nrows else [], self.nrows)

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise ShapeMismatch("hstack needs equal row counts")
        return Matrix(self.ring, [a + b for a, b in zip(self.rows, other.rows)], self.ncols + other.ncols)

    def vstack(self, other):
        if self.ncols != other.ncols:
            raise ShapeMismatch("vstack needs equal column counts")
        return Matrix(self.ring, self.rows + other.rows, self.ncols)

    def select_rows(self, idx):
        return Matrix(self.ring, [self.rows[i] for i in idx], self.ncols)

    def select_cols(self, idx):
        return Matrix(self.ring, [[r[j] for j in idx] for r in self.rows], len(idx))

    def is_zero(self):
        return not any(any(r) for r in self.rows)

    def to_json(self):
        enc = self.ring.encode
        return [[enc(a) for a in r] for r in self.rows]

    @classmethod
    def from_json(cls, ring, data, ncols=None):
        if not isinstance(data, list) or any(not isinstance(r, list) for r in data):
            raise ParseError(f"a matrix must be a list of rows, got {data!r}")
        rows = [[ring.decode(x) for x in r] for r in data]
        if ncols is None and not rows:
            ncols = 0
        try:
            return cls(ring, rows, ncols)
        except ShapeMismatch as exc:
            raise ParseError(str(exc)) from exc


def vec_mat(ring, x, rows, ncols):
    out = [0] * ncols
    for a, r in zip(x, rows):
        if a:
            out = ring.axpy(a, r, out)
    return out


def mat_mul(ring, a_rows, b_rows, ncols):
    return [vec_mat(ring, r, b_rows, ncols) for r in a_rows]


# ---------------------------------------------------------------------------
# Howell form
# ---------------------------------------------------------------------------


def howell_rows(ring, rows, ncols):
    """Howell normal form of the row span of ``rows``.

    Returns ``(H, pivots)`` where ``H`` is a list of non-zero rows in echelon
    form with canonical pivots, entries above each pivot reduced modulo it,
    and the Howell property: whenever ``ann(pivot)`` kills the pivot of a row,
    the resulting vector is spanned by the rows below.
    """
    active = [list(r) for r in rows if any(r)]
    H = []
    pivots = []
    gcdex, normalizer, ann = ring.gcdex, ring.normalizer, ring.ann
    comb, scale = ring.comb, ring.scale
    for k in range(ncols):
        if not active:
            break
        piv = None
        rest = []
        for row in active:
            if row[k] == 0:
                rest.append(row)
            elif piv is None:
                piv = row
            else:
                _, s, t, u, v = gcdex(piv[k], row[k])
                other = comb(u, piv, v, row)
                piv = comb(s, piv, t, row)
                if any(other):
                    rest.append(other)
        if piv is None:
            continue
        c = normalizer(piv[k])
        if c != 1:
            piv = scale(c, piv)
        a = ann(piv[k])
        if a:
            extra = scale(a, piv)
            if any(extra):
                rest.append(extra)
        H.append(piv)
        pivots.append(k)
        active = rest
    quo, axpy, neg = ring.quo, ring.axpy, ring.neg
    for idx, k in enumerate(pivots):
        d = H[idx][k]
        prow = H[idx]
        for i in range(idx):
            q = quo(H[i][k], d)
            if q:
                H[i] = axpy(neg(q), prow, H[i])
    return H, pivots


def reduce_vector(ring, H, pivots, x):
    """Reduce ``x`` modulo the row span of a Howell form.

    Returns ``(remainder, coefficients)`` with ``x = remainder + Σ c_i H_i``;
    ``x`` lies in the span exactly when the remainder is zero.
    """
    x = list(x)
    coeffs = [0] * len(H)
    quo, axpy, neg = ring.quo, ring.axpy, ring.neg
    for i, k in enumerate(pivots):
        if x[k]:
            q = quo(x[k], H[i][k])
            if q:
                coeffs[i] = q
                x = axpy(neg(q), H[i], x)
    return x, coeffs


@dataclass(frozen=True)
class HowellForm:
    """``H`` spans the same rows as the input and ``H == U @ A``."""

    H: Matrix
    U: Matrix
    pivots: tuple


@lru_cache(maxsize=1024)
def _augmented_howell(ring, rows, ncols):
    """Howell form of ``[A | I]``, shared by the normal form, kernel and solver.

    ``rows`` must be a tuple of tuples; the result is read-only.
    """
    m = len(rows)
    aug = [list(r) + [1 if i == j else 0 for j in range(m)] for i, r in enumerate(rows)]
    H, pivots = howell_rows(ring, aug, ncols + m)
    return tuple(tuple(r) for r in H), tuple(pivots)


def _as_key(rows):
    return tuple(tuple(r) for r in rows)


def howell_form(A):
    ring, m, n = A.ring, A.nrows, A.ncols
    rows, pivots = _augmented_howell(ring, _as_key(A.rows), n)
    # rows pivoting in the identity block are kernel relations, not part of H
    keep = [i for i, k in enumerate(pivots) if k < n]
    H = Matrix(ring, [rows[i][:n] for i in keep], n)
    U = Matrix(ring, [rows[i][n:] for i in keep], m)
    return HowellForm(H, U, tuple(pivots[i] for i in keep))


def span_equal(A, B):
    """Do two matrices with the same column count have the same row span?"""
    if A.ncols != B.ncols:
        raise ShapeMismatch("span comparison needs equal column counts")
    ring = A.ring
    return howell_rows(ring, A.rows, A.ncols) == howell_rows(ring, B.rows, B.ncols)


def in_span(A, x):
    H, piv = howell_rows(A.ring, A.rows, A.ncols)
    rem, _ = reduce_vector(A.ring, H, piv, x)
    return not any(rem)


# ---------------------------------------------------------------------------
# kernels and solving
# ---------------------------------------------------------------------------


def _kernel_rows(ring, rows, ncols):
    H, pivots = _augmented_howell(ring, _as_key(rows), ncols)
    return [list(H[i][ncols:]) for i, k in enumerate(pivots) if k >= ncols]


def kernel_matrix(A):
    """Rows generating ``{x : x·A = 0}`` exactly."""
    return Matrix(A.ring, _kernel_rows(A.ring, A.rows, A.ncols), A.nrows)


@dataclass(frozen=True)
class Solution:
    particular: Matrix
    kernel: Matrix


class _Solver:
    """Reusable factorisation of ``A`` for repeated ``x·A = b`` solves."""

    def __init__(self, ring, rows, ncols):
        self.ring = ring
        self.m = len(rows)
        self.n = ncols
        H, pivots = _augmented_howell(ring, _as_key(rows), ncols)
        self.top = [(list(H[i]), k) for i, k in enumerate(pivots) if k < ncols]
        self.kernel = [list(H[i][ncols:]) for i, k in enumerate(pivots) if k >= ncols]

    def solve(self, b):
        ring = self.ring
        vec = list(b) + [0] * self.m
        quo, axpy, neg = ring.quo, ring.axpy, ring.neg
        for row, k in self.top:
            if vec[k]:
                q = quo(vec[k], row[k])
                if q:
                    vec = axpy(neg(q), row, vec)
        if any(vec[: self.n]):
            return None
        return [neg(a) for a in vec[self.n :]]


def solve_rows(ring, rows, ncols, rhs_rows):
    """Solve ``x·A = b`` for every ``b`` in ``rhs_rows``; ``None`` marks a failure."""
    solver = _Solver(ring, rows, ncols)
    return [solver.solve(b) for b in rhs_rows], solver.kernel


def solve_linear(A, B):
    """Solve ``X·A = B``.

    Returns a :class:`Solution` whose ``particular`` satisfies the system and
    whose ``kernel`` rows generate all solutions of ``x·A = 0``.  Raises
    :class:`NoSolution` when some row of ``B`` is outside the row span of A.
    """
    if A.ncols != B.ncols:
        raise ShapeMismatch(f"X·A = B needs B with {A.ncols} columns, got {B.ncols}")
    xs, kernel = solve_rows(A.ring, A.rows, A.ncols, B.rows)
    for i, x in enumerate(xs):
        if x is None:
            raise NoSolution(f"row {i} of B is not in the row span of A")
    return Solution(Matrix(A.ring, xs, A.nrows), Matrix(A.ring, kernel, A.nrows))


# ---------------------------------------------------------------------------
# Smith form
# ---------------------------------------------------------------------------


def smith_rows(ring, rows, ncols, track=True):
    """Diagonalise ``rows`` by unimodular row and column operations.

    Returns ``(diag, V, Vinv)``: ``diag`` has length ``ncols`` with canonical
    entries forming a divisibility chain (units first, zeros last), and the
    column transform satisfies ``span(rows)·V = span(diag)``.  Hence
    ``coker(rows) ≅ ⊕ R/(diag_i)`` via ``x ↦ x·V``.  With ``track=False``
    the transforms are skipped and returned as ``None``.
    """
    D = [list(r) for r in rows if any(r)]
    m, n = len(D), ncols
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    Vinv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    qsize = ring.quotient_size

    def col_op(c1, c2, s, t, u, v):
        # new c1 = s*c1 + t*c2, new c2 = u*c1 + v*c2 (on D and V)
        for M in (D, V) if track else (D,):
            for r in M:
                a, b = r[c1], r[c2]
                r[c1] = ring.add(ring.mul(s, a), ring.mul(t, b))
                r[c2] = ring.add(ring.mul(u, a), ring.mul(v, b))
        if not track:
            return
        det = ring.sub(ring.mul(s, v), ring.mul(t, u))
        di = ring.inv(det)
        r1, r2 = Vinv[c1], Vinv[c2]
        Vinv[c1] = ring.scale(di, ring.comb(v, r1, ring.neg(u), r2))
        Vinv[c2] = ring.scale(di, ring.comb(ring.neg(t), r1, s, r2))

    def swap_cols(c1, c2):
        if c1 == c2:
            return
        for M in (D, V) if track else (D,):
            for r in M:
                r[c1], r[c2] = r[c2], r[c1]
        Vinv[c1], Vinv[c2] = Vinv[c2], Vinv[c1]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = D[i][j]
                if a and (best is None or qsize(a) < best[0]):
                    best = (qsize(a), i, j)
        if best is None:
            break
        _, i0, j0 = best
        D[t], D[i0] = D[i0], D[t]
        swap_cols(t, j0)
        while True:
            # exact elimination when the pivot divides; gcdex only when the
            # pivot ideal strictly grows, so the loop terminates
            for i in range(t + 1, m):
                if D[i][t]:
                    if ring.divides(D[t][t], D[i][t]):
                        q = ring.div(D[i][t], D[t][t])
                        D[i] = ring.axpy(ring.neg(q), D[t], D[i])
                    else:
                        _, s, tt, u, v = ring.gcdex(D[t][t], D[i][t])
                        D[t], D[i] = ring.comb(s, D[t], tt, D[i]), ring.comb(u, D[t], v, D[i])
            for j in range(t + 1, n):
                if D[t][j]:
                    if ring.divides(D[t][t], D[t][j]):
                        q = ring.div(D[t][j], D[t][t])
                        col_op(t, j, 1, 0, ring.neg(q), 1)
                    else:
                        _, s, tt, u, v = ring.gcdex(D[t][t], D[t][j])
                        col_op(t, j, s, tt, u, v)
            if any(D[i][t] for i in range(t + 1, m)):
                continue
            piv = D[t][t]
            bad = None
            for i in range(t + 1, m):
                if any(D[i][j] and not ring.divides(piv, D[i][j]) for j in range(t + 1, n)):
                    bad = i
                    break
            if bad is None:
                break
            D[t] = ring.comb(1, D[t], 1, D[bad])
        t += 1
    diag = [D[i][i] if i < m else 0 for i in range(n)]
    for i, d in enumerate(diag):
        c = ring.normalizer(d)
        if c != 1:
            diag[i] = ring.mul(c, d)
            if not track:
                continue
            for r in V:
                r[i] = ring.mul(r[i], c)
            Vinv[i] = ring.scale(ring.inv(c), Vinv[i])
    if not track:
        return diag, None, None
    return diag, V, Vinv


def smith_invariants(A):
    """Invariant factors ``d_1 | d_2 | ...`` with ``coker(A) ≅ ⊕ R/(d_i)``.

    One entry per column of ``A`` (units included), so ``coker`` of an empty
    relation matrix on ``g`` generators gives ``g`` zeros.
    """
    diag, _, _ = smith_rows(A.ring, A.rows, A.ncols, track=False)
    return diag


# ---------------------------------------------------------------------------
# linear systems with matrix unknowns
# ---------------------------------------------------------------------------


class LinearSystem:
    """Collects equations ``Σ L·X·R ≡ C (mod row span of Z)`` in matrix unknowns.

    Each congruence modulo ``Z`` introduces slack unknowns ``Y`` with an extra
    term ``-Y·Z``.  The whole system is flattened to ``x·A = b`` and handed to
    the Howell-based solver.
    """

    def __init__(self, ring):
        self.ring = ring
        self.blocks = []  # (nrows, ncols, offset)
        self.nblock = 0
        self.nslack = 0  # slack variable i is stored as -(i + 1) until assembly
        self.columns = []  # each: dict var -> coeff
        self.rhs = []

    def unknown(self, nrows, ncols):
        self.blocks.append((nrows, ncols, self.nblock))
        self.nblock += nrows * ncols
        return len(self.blocks) - 1

    @property
    def nvars(self):
        return self.nblock + self.nslack

    def equation(self, terms, rhs=None, modulo=None, shape=None):
        """Add the block equation ``Σ L·X·R ≡ rhs``.

        ``terms`` is a list of ``(L, block, R)``; ``L``/``R`` may be ``None``
        for the identity.  ``shape`` is required when it cannot be inferred.
        """
        ring = self.ring
        if shape is None:
            if rhs is not None:
                shape = rhs.shape
            else:
                L, b, R = terms[0]
                shape = (L.nrows if L is not None else self.blocks[b][0], R.ncols if R is not None else self.blocks[b][1])
        p, q = shape
        cols = [dict() for _ in range(p * q)]
        for L, b, R in terms:
            br, bc, off = self.blocks[b]
            Lr = L.rows if L is not None else None
            Rr = R.rows if R is not None else None
            for i in range(p):
                for a in range(br):
                    lia = (Lr[i][a] if Lr is not None else (1 if i == a else 0))
                    if not lia:
                        continue
                    for bb in range(bc):
                        var = off + a * bc + bb
                        base = i * q
                        if Rr is not None:
                            rrow = Rr[bb]
                            for j in range(q):
                                if rrow[j]:
                                    c = ring.mul(lia, rrow[j])
                                    col = cols[base + j]
                                    col[var] = ring.add(col.get(var, 0), c)
                        else:
                            col = cols[base + bb]
                            col[var] = ring.add(col.get(var, 0), lia)
        if modulo is not None and modulo.nrows:
            z = modulo.nrows
            off = self.nslack
            self.nslack += p * z
            for i in range(p):
                for mm in range(z):
                    var = -(off + i * z + mm + 1)
                    zr = modulo.rows[mm]
                    for j in range(q):
                        if zr[j]:
                            col = cols[i * q + j]
                            col[var] = ring.add(col.get(var, 0), ring.neg(zr[j]))
        self.columns.extend(cols)
        if rhs is None:
            self.rhs.extend([0] * (p * q))
        else:
            for r in rhs.rows:
                self.rhs.extend(r)

    def _matrix_rows(self):
        ncols = len(self.columns)
        rows = [[0] * ncols for _ in range(self.nvars)]
        nb = self.nblock
        for j, col in enumerate(self.columns):
            for var, c in col.items():
                if c:
                    rows[var if var >= 0 else nb - var - 1][j] = c
        return rows, ncols

    def _split(self, x):
        out = []
        for nr, nc, off in self.blocks:
            out.append(Matrix(self.ring, [x[off + i * nc : off + (i + 1) * nc] for i in range(nr)], nc))
        return out

    def solve(self):
        """Return ``(particular, kernel)``: block lists for one solution and for
        generators of the homogeneous solutions.  Raises NoSolution."""
        rows, ncols = self._matrix_rows()
        solver = _Solver(self.ring, rows, ncols)
        x = solver.solve(self.rhs)
        if x is None:
            raise NoSolution("linear system is inconsistent")
        return self._split(x), [self._split(k) for k in solver.kernel]

    def homogeneous_kernel(self):
        """Flattened block-variable parts of generators of the homogeneous solutions."""
        rows, ncols = self._matrix_rows()
        return [k[: self.nblock] for k in _kernel_rows(self.ring, rows, ncols)]

    def split(self, flat):
        return self._split(list(flat) + [0] * (self.nvars - len(flat)))
