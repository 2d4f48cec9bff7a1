"""Independent brute-force checks used by the self test and the test suite.

Nothing here is used by the library algorithms themselves.
"""

from __future__ import annotations

import itertools

from .linalg import Matrix
from .modules import FPModule, ModuleMap, direct_sum_modules
from .quiver import Path


class VectorTables:
    """Addition and scaling tables for ``R^n`` with vectors encoded as integers."""

    def __init__(self, ring, n):
        self.ring, self.n = ring, n
        self.vectors = list(itertools.product(range(ring.size), repeat=n))
        self.index = {v: i for i, v in enumerate(self.vectors)}
        idx, vecs = self.index, self.vectors
        self.add = [[idx[tuple(ring.add(a, b) for a, b in zip(u, w))] for w in vecs] for u in vecs]
        self.smul = [[idx[tuple(ring.mul(c, a) for a in u)] for u in vecs] for c in range(ring.size)]

    def encode(self, v):
        return self.index[tuple(v)]

    def span(self, rows):
        out = {0}
        for r in rows:
            r = self.encode(r)
            mults = {self.smul[c][r] for c in range(self.ring.size)}
            out = {self.add[s][m] for s in out for m in mults}
        return out


def brute_span(ring, rows, ncols, tables=None):
    t = tables or VectorTables(ring, ncols)
    return t.span(rows)


def brute_kernel(ring, rows, ncols, tables_in, tables_out):
    """All ``x`` with ``x·A = 0`` (encoded in ``tables_in``)."""
    enc = [tables_out.encode(r) for r in rows]
    out = set()
    for i, x in enumerate(tables_in.vectors):
        acc = 0
        for c, r in zip(x, enc):
            if c:
                acc = tables_out.add[acc][tables_out.smul[c][r]]
        if acc == 0:
            out.add(i)
    return out


def module_maps(source, target):
    """Every homomorphism ``source -> target`` (small modules only)."""
    ring = source.ring
    target_elems = target.elements()
    for images in itertools.product(target_elems, repeat=source.ngens):
        f = ModuleMap(source, target, Matrix(ring, [list(x) for x in images], target.ngens), check=False)
        if all(target.is_zero_element(f.matrix.vecmul(r)) for r in source.relations.rows):
            yield f


def splits_by_search(surj):
    """Exhaustive search for a section of a surjection."""
    ident = ModuleMap.identity(surj.target)
    for s in module_maps(surj.target, surj.source):
        if (surj @ s).equals(ident):
            return True
    return False


def projective_by_search(m):
    """A module is projective iff its free cover splits."""
    F = FPModule.free(m.ring, m.ngens)
    return splits_by_search(ModuleMap(F, m, Matrix.identity(m.ring, m.ngens), check=False))


def stable_zero_by_search(f):
    """``f`` factors through ``R^g`` (the free cover of the target), by enumeration."""
    F = FPModule.free(f.ring, f.target.ngens)
    cover = ModuleMap(F, f.target, Matrix.identity(f.ring, f.target.ngens), check=False)
    for h in module_maps(f.source, F):
        if (cover @ h).equals(f):
            return True
    return False


# ---------------------------------------------------------------------------
# latching and matching through the full path categories
# ---------------------------------------------------------------------------


def latching_colimit(m, j):
    """Colimit of ``m`` over all non-identity paths into ``j``.

    Generators: one copy of ``M_start(p)`` per path ``p``.  Relations: those of
    each copy, plus ``x_p = (M_β x)_{p'}`` whenever ``p = β p'`` with ``β``
    and ``p'`` non-identity.  Returns the module and its map to ``M_j``.
    """
    ring = m.ring
    paths = [p for p in m.reedy.paths_into(j) if p.arrows]
    blocks, off = {}, 0
    for p in paths:
        blocks[p.arrows] = off
        off += m.modules[p.start].ngens
    rels = []
    for p in paths:
        base = blocks[p.arrows]
        for r in m.modules[p.start].relations.rows:
            row = [0] * off
            row[base: base + len(r)] = r
            rels.append(row)
    for p in paths:
        for cut in range(1, len(p.arrows)):
            beta, rest = p.arrows[:cut], p.arrows[cut:]
            bpath = Path(p.start, m.quiver.arrow(beta[-1]).tgt, beta)
            mb = m.path_matrix(bpath)
            for x in range(m.modules[p.start].ngens):
                row = [0] * off
                row[blocks[p.arrows] + x] = 1
                b2 = blocks[rest]
                for y, c in enumerate(mb.rows[x]):
                    row[b2 + y] = ring.sub(row[b2 + y], c)
                rels.append(row)
    C = FPModule(ring, off, Matrix(ring, rels, off), check=False)
    rows = []
    for p in paths:
        rows.extend(m.path_matrix(p).rows)
    return C, ModuleMap(C, m.modules[j], Matrix(ring, rows, m.modules[j].ngens), check=False)


def matching_limit(m, j):
    """Limit of ``m`` over all non-identity paths out of ``j``, with the map from ``M_j``.

    The limit is the kernel of ``⊕_p M_end(p) -> ⊕_{(p, β)} M_end(pβ)``,
    ``y ↦ y_{pβ} - M_β y_p``.
    """
    ring = m.ring
    paths = [p for p in m.reedy.paths_from(j) if p.arrows]
    mods = [m.modules[p.end] for p in paths]
    S, inj, prj = direct_sum_modules(mods, ring=ring)
    pos = {p.arrows: k for k, p in enumerate(paths)}
    checks = []
    for p in paths:
        for q in m.reedy.paths_from(p.end):
            if q.arrows:
                checks.append((p, q))
    T, tinj, _ = direct_sum_modules([m.modules[q.end] for _, q in checks], ring=ring)
    mat = Matrix.zeros(ring, S.ngens, T.ngens)
    for k, (p, q) in enumerate(checks):
        whole = prj[pos[p.arrows + q.arrows]].matrix @ tinj[k].matrix
        part = prj[pos[p.arrows]].matrix @ m.path_matrix(q) @ tinj[k].matrix
        mat = mat + whole - part
    d = ModuleMap(S, T, mat, check=False)
    L, incl = d.kernel()
    rows = [[] for _ in range(m.modules[j].ngens)]
    for p in paths:
        for i, r in enumerate(m.path_matrix(p).rows):
            rows[i].extend(r)
    from_mj = ModuleMap(m.modules[j], S, Matrix(ring, rows, S.ngens), check=False)
    return L, incl, from_mj, d


def latching_agrees(m, j):
    """Latching object is isomorphic to the colimit, compatibly with the maps to ``M_j``."""
    from .rep import latching

    L, lmap = latching(m, j)
    C, cmap = latching_colimit(m, j)
    paths = [p for p in m.reedy.paths_into(j) if p.arrows]
    offs, off = {}, 0
    for p in paths:
        offs[p.arrows] = off
        off += m.modules[p.start].ngens
    rows = []
    for a in m.reedy.incoming[j]:
        for x in range(m.modules[a.src].ngens):
            row = [0] * C.ngens
            row[offs[(a.name,)] + x] = 1
            rows.append(row)
    w = ModuleMap(L, C, Matrix(m.ring, rows, C.ngens), check=False)
    if w.matrix.ncols != C.ngens or w.matrix.nrows != L.ngens:
        return False
    return (w.is_iso() and (cmap @ w).equals(lmap)
            and L.nontrivial_invariants == C.nontrivial_invariants)


def matching_agrees(m, j):
    """Matching object is the limit: the projection from the limit onto the
    length-one paths is an isomorphism compatible with the maps from ``M_j``."""
    from .rep import matching

    P, pmap = matching(m, j)
    L, incl, from_mj, d = matching_limit(m, j)
    paths = [p for p in m.reedy.paths_from(j) if p.arrows]
    ring = m.ring
    S = incl.target
    offs, off = {}, 0
    for p in paths:
        offs[p.arrows] = off
        off += m.modules[p.end].ngens
    rows = [[0] * P.ngens for _ in range(S.ngens)]
    col = 0
    for a in m.reedy.outgoing[j]:
        for x in range(m.modules[a.tgt].ngens):
            rows[offs[(a.name,)] + x][col + x] = 1
        col += m.modules[a.tgt].ngens
    restrict = ModuleMap(S, P, Matrix(ring, rows, P.ngens), check=False)
    w = restrict @ incl
    if not (d @ from_mj).is_zero():
        return False
    return w.is_iso() and (restrict @ from_mj).equals(pmap) and L.nontrivial_invariants == P.nontrivial_invariants
