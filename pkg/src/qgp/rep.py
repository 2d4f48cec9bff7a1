"""Representations of a finite acyclic quiver over the coefficient ring.

A representation assigns an FPModule to every vertex and a ModuleMap to every
arrow.  Morphisms are families of module maps that commute with the arrows.
Everything here is computed vertex by vertex; the quiver only enters through
the arrow lists and the path tables of :class:`~qgp.quiver.ReedyData`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import BlockMismatch, NotInjectiveModule, ParseError, ShapeMismatch, ValidationError, Violation
from .linalg import LinearSystem, Matrix, _Solver
from .modules import (
    FPModule,
    ModuleMap,
    direct_sum_modules,
    embed_into_injective,
    factor_through_injection,
    factor_through_surjection,
    hstack_maps,
    is_projective_module,
    present_submodule,
    validate_module_data,
    vstack_maps,
)
from .quiver import Quiver, build_reedy_data


@lru_cache(maxsize=256)
def default_reedy(quiver):
    return build_reedy_data(quiver)


class Rep:
    """Vertex modules and arrow maps.  ``reedy`` fixes the degree function."""

    def __init__(self, quiver, ring, modules, maps, reedy=None, check=True):
        self.quiver = quiver
        self.ring = ring
        self.modules = dict(modules)
        self.maps = dict(maps)
        self.reedy = reedy if reedy is not None else default_reedy(quiver)
        if check:
            v = validate_rep(self)
            if v is not None:
                raise ValidationError(v)

    def __repr__(self):
        mods = ", ".join(f"{v}:{self.modules[v].nontrivial_invariants}" for v in self.quiver.vertices)
        return f"Rep({mods})"

    @classmethod
    def zero(cls, quiver, ring, reedy=None):
        z = FPModule.zero(ring)
        return cls(quiver, ring, {v: z for v in quiver.vertices},
                   {a.name: ModuleMap.zero(z, z) for a in quiver.arrows}, reedy, check=False)

    def with_reedy(self, reedy):
        return Rep(self.quiver, self.ring, self.modules, self.maps, reedy, check=False)

    def arrow_map(self, name):
        return self.maps[name]

    def path_matrix(self, path):
        """Matrix of the composite along ``path`` (identity for a trivial path)."""
        m = Matrix.identity(self.ring, self.modules[path.start].ngens)
        for name in path.arrows:
            m = m @ self.maps[name].matrix
        return m

    def is_zero(self):
        return all(m.is_zero() for m in self.modules.values())

    def order(self):
        out = 1
        for m in self.modules.values():
            out *= m.order
        return out

    def to_json(self):
        return {
            "ring": self.ring.to_spec(),
            "quiver": self.quiver.to_json(),
            "modules": {v: self.modules[v].to_json() for v in self.quiver.vertices},
            "maps": {a.name: self.maps[a.name].matrix.to_json() for a in self.quiver.arrows},
        }

    @classmethod
    def from_json(cls, data, check=True):
        from .ring import ring_from_spec

        if not isinstance(data, dict):
            raise ParseError("representation must be a JSON object")
        for key in ("ring", "quiver", "modules"):
            if key not in data:
                raise ParseError(f"representation is missing {key!r}")
        ring = ring_from_spec(data["ring"])
        quiver = Quiver.from_json(data["quiver"])
        mods_in = data["modules"]
        maps_in = data.get("maps", {})
        if not isinstance(mods_in, dict) or not isinstance(maps_in, dict):
            raise ParseError("modules and maps must be objects keyed by name")
        mods = {}
        for v in quiver.vertices:
            if v not in mods_in:
                raise ParseError(f"no module given for vertex {v}")
            mods[v] = FPModule.from_json(ring, mods_in[v], check=False)
        maps = {}
        for a in quiver.arrows:
            if a.name not in maps_in:
                raise ParseError(f"no map given for arrow {a.name}")
            raw = maps_in[a.name]
            if not isinstance(raw, list) or any(not isinstance(r, list) for r in raw):
                raise ParseError(f"map for arrow {a.name} must be a list of rows")
            rows = [[ring.decode(x) for x in r] for r in raw]
            src, tgt = mods[a.src], mods[a.tgt]
            if len(rows) != src.ngens or any(len(r) != tgt.ngens for r in rows):
                err = Violation("shape", f"map is not {src.ngens}x{tgt.ngens}", a.name)
                if check:
                    raise ValidationError(err)
                rows = [list(r) + [0] * (tgt.ngens - len(r)) for r in rows]
            maps[a.name] = ModuleMap(src, tgt, Matrix(ring, rows, tgt.ngens), check=False)
        return cls(quiver, ring, mods, maps, check=check)


class RepMap:
    """A morphism of representations, one module map per vertex."""

    def __init__(self, source, target, components, check=True):
        self.source = source
        self.target = target
        self.components = dict(components)
        if check:
            v = validate_rep(self)
            if v is not None:
                raise ValidationError(v)

    @property
    def ring(self):
        return self.source.ring

    @property
    def quiver(self):
        return self.source.quiver

    def __repr__(self):
        comps = ", ".join(f"{v}:{[list(r) for r in c.matrix.rows]}" for v, c in self.components.items())
        return f"RepMap({comps})"

    def __getitem__(self, v):
        return self.components[v]

    @classmethod
    def identity(cls, m):
        return cls(m, m, {v: ModuleMap.identity(m.modules[v]) for v in m.quiver.vertices}, check=False)

    @classmethod
    def zero(cls, source, target):
        return cls(source, target, {v: ModuleMap.zero(source.modules[v], target.modules[v])
                                    for v in source.quiver.vertices}, check=False)

    def __matmul__(self, other):
        """Composition ``self ∘ other``."""
        return RepMap(other.source, self.target,
                      {v: self.components[v] @ other.components[v] for v in self.quiver.vertices}, check=False)

    def __add__(self, other):
        return RepMap(self.source, self.target,
                      {v: self.components[v] + other.components[v] for v in self.quiver.vertices}, check=False)

    def __sub__(self, other):
        return RepMap(self.source, self.target,
                      {v: self.components[v] - other.components[v] for v in self.quiver.vertices}, check=False)

    def __neg__(self):
        return RepMap(self.source, self.target, {v: -c for v, c in self.components.items()}, check=False)

    def equals(self, other):
        return all(self.components[v].equals(other.components[v]) for v in self.quiver.vertices)

    def is_zero(self):
        return all(c.is_zero() for c in self.components.values())

    def is_injective(self):
        return all(c.is_injective() for c in self.components.values())

    def is_surjective(self):
        return all(c.is_surjective() for c in self.components.values())

    def is_iso(self):
        return self.is_injective() and self.is_surjective()

    def to_json(self):
        return {"components": {v: self.components[v].matrix.to_json() for v in self.quiver.vertices}}

    @classmethod
    def from_json(cls, source, target, data, check=True):
        if not isinstance(data, dict) or not isinstance(data.get("components"), dict):
            raise ParseError("morphism must be an object with a 'components' table")
        comps = {}
        ring = source.ring
        for v in source.quiver.vertices:
            raw = data["components"].get(v)
            if not isinstance(raw, list) or any(not isinstance(r, list) for r in raw):
                raise ParseError(f"component at {v} must be a list of rows")
            rows = [[ring.decode(x) for x in r] for r in raw]
            S, T = source.modules[v], target.modules[v]
            if len(rows) != S.ngens or any(len(r) != T.ngens for r in rows):
                raise ValidationError(Violation("shape", f"component is not {S.ngens}x{T.ngens}", v))
            comps[v] = ModuleMap(S, T, Matrix(ring, rows, T.ngens), check=False)
        return cls(source, target, comps, check=check)


def validate_rep(x):
    """``None`` when ``x`` satisfies its invariants, else a Violation naming the place."""
    if isinstance(x, Rep):
        q = x.quiver
        for v in q.vertices:
            m = x.modules.get(v)
            if m is None:
                return Violation("missing", "no module", v)
            if m.ring != x.ring:
                return Violation("ring", "vertex module over a different ring", v)
            bad = validate_module_data(m)
            if bad is not None:
                return Violation(bad.kind, bad.detail, v)
        for a in q.arrows:
            f = x.maps.get(a.name)
            if f is None:
                return Violation("missing", "no arrow map", a.name)
            if f.source.ngens != x.modules[a.src].ngens or f.target.ngens != x.modules[a.tgt].ngens:
                return Violation("shape", "arrow map does not match the vertex modules", a.name)
            bad = validate_module_data(ModuleMap(x.modules[a.src], x.modules[a.tgt], f.matrix, check=False))
            if bad is not None:
                return Violation(bad.kind, bad.detail, a.name)
        return None
    if isinstance(x, RepMap):
        for side in (x.source, x.target):
            bad = validate_rep(side)
            if bad is not None:
                return bad
        if x.source.quiver != x.target.quiver or x.source.ring != x.target.ring:
            return Violation("shape", "source and target live over different quivers or rings")
        for v in x.quiver.vertices:
            c = x.components.get(v)
            if c is None:
                return Violation("missing", "no component", v)
            bad = validate_module_data(ModuleMap(x.source.modules[v], x.target.modules[v], c.matrix, check=False))
            if bad is not None:
                return Violation(bad.kind, bad.detail, v)
        for a in x.quiver.arrows:
            lhs = x.source.maps[a.name].matrix @ x.components[a.tgt].matrix
            rhs = x.components[a.src].matrix @ x.target.maps[a.name].matrix
            N = x.target.modules[a.tgt]
            if not all(N.is_zero_element(r) for r in (lhs - rhs).rows):
                return Violation("naturality", "square does not commute", a.name)
        return None
    return Violation("type", f"not a representation or morphism: {type(x).__name__}")


# ---------------------------------------------------------------------------
# latching and matching
# ---------------------------------------------------------------------------


def latching(m, j):
    """``(⊕_{α: i -> j} M_i, the map to M_j)`` over incoming arrows in input order."""
    arrows = m.reedy.incoming[j]
    L, _, _ = direct_sum_modules([m.modules[a.src] for a in arrows], ring=m.ring)
    return L, hstack_maps([m.maps[a.name] for a in arrows], L, m.modules[j])


def matching(m, j):
    """``(∏_{α: j -> k} M_k, the map from M_j)`` over outgoing arrows in input order."""
    arrows = m.reedy.outgoing[j]
    P, _, _ = direct_sum_modules([m.modules[a.tgt] for a in arrows], ring=m.ring)
    return P, vstack_maps([m.maps[a.name] for a in arrows], m.modules[j], P)


def latching_morphism(f, j):
    """``L_j f: L_j M -> L_j N`` (block diagonal over incoming arrows)."""
    arrows = f.source.reedy.incoming[j]
    LM, _ = latching(f.source, j)
    LN, _ = latching(f.target, j)
    blocks = [f.components[a.src].matrix for a in arrows]
    return ModuleMap(LM, LN, Matrix.block_diag(f.ring, blocks) if blocks else Matrix.zeros(f.ring, 0, 0), check=False)


def matching_morphism(f, j):
    arrows = f.source.reedy.outgoing[j]
    MM, _ = matching(f.source, j)
    MN, _ = matching(f.target, j)
    blocks = [f.components[a.tgt].matrix for a in arrows]
    return ModuleMap(MM, MN, Matrix.block_diag(f.ring, blocks) if blocks else Matrix.zeros(f.ring, 0, 0), check=False)


# ---------------------------------------------------------------------------
# abelian structure
# ---------------------------------------------------------------------------


def rep_kernel(f):
    """Vertexwise kernel ``(K, inclusion)``."""
    M = f.source
    mods, incs = {}, {}
    for v in M.quiver.vertices:
        mods[v], incs[v] = f.components[v].kernel()
    maps = {}
    for a in M.quiver.arrows:
        g = M.maps[a.name] @ incs[a.src]
        maps[a.name] = factor_through_injection(incs[a.tgt], g)
    K = Rep(M.quiver, M.ring, mods, maps, M.reedy, check=False)
    return K, RepMap(K, M, incs, check=False)


def rep_cokernel(f):
    """Vertexwise cokernel ``(C, projection)``."""
    N = f.target
    mods, projs = {}, {}
    for v in N.quiver.vertices:
        mods[v], projs[v] = f.components[v].cokernel()
    maps = {}
    for a in N.quiver.arrows:
        g = projs[a.tgt] @ N.maps[a.name]
        maps[a.name] = factor_through_surjection(projs[a.src], g)
    C = Rep(N.quiver, N.ring, mods, maps, N.reedy, check=False)
    return C, RepMap(N, C, projs, check=False)


def rep_image(f):
    """Vertexwise image ``(I, corestriction, inclusion)``."""
    M, N = f.source, f.target
    mods, tos, incs = {}, {}, {}
    for v in M.quiver.vertices:
        mods[v], tos[v], incs[v] = f.components[v].image()
    maps = {}
    for a in M.quiver.arrows:
        maps[a.name] = factor_through_injection(incs[a.tgt], N.maps[a.name] @ incs[a.src])
    I = Rep(M.quiver, M.ring, mods, maps, M.reedy, check=False)
    return I, RepMap(M, I, tos, check=False), RepMap(I, N, incs, check=False)


def pointwise_ops(f, which):
    if which == "kernel":
        return rep_kernel(f)
    if which == "cokernel":
        return rep_cokernel(f)
    raise ValueError(f"unknown pointwise operation {which!r}")


def direct_sum_reps(reps, quiver=None, ring=None, reedy=None):
    """``(⊕ reps, injections, projections)``."""
    if not reps:
        z = Rep.zero(quiver, ring, reedy)
        return z, [], []
    q, ring = reps[0].quiver, reps[0].ring
    if len(reps) == 1:
        r = reps[0]
        return r, [RepMap.identity(r)], [RepMap.identity(r)]
    mods, injs, projs = {}, {}, {}
    for v in q.vertices:
        mods[v], injs[v], projs[v] = direct_sum_modules([r.modules[v] for r in reps])
    maps = {}
    for a in q.arrows:
        maps[a.name] = ModuleMap(mods[a.src], mods[a.tgt],
                                 Matrix.block_diag(ring, [r.maps[a.name].matrix for r in reps]), check=False)
    S = Rep(q, ring, mods, maps, reps[0].reedy, check=False)
    inj = [RepMap(r, S, {v: injs[v][k] for v in q.vertices}, check=False) for k, r in enumerate(reps)]
    proj = [RepMap(S, r, {v: projs[v][k] for v in q.vertices}, check=False) for k, r in enumerate(reps)]
    return S, inj, proj


def direct_sum_repmaps(fs):
    S, _, _ = direct_sum_reps([f.source for f in fs])
    T, _, _ = direct_sum_reps([f.target for f in fs])
    if len(fs) == 1:
        return fs[0]
    comps = {v: ModuleMap(S.modules[v], T.modules[v], Matrix.block_diag(S.ring, [f.components[v].matrix for f in fs]),
                          check=False) for v in S.quiver.vertices}
    return RepMap(S, T, comps, check=False)


def hstack_repmaps(fs, source, target):
    """``(f_1, ..., f_r): ⊕ src -> target``; ``source`` is the direct sum."""
    return RepMap(source, target, {v: hstack_maps([f.components[v] for f in fs], source.modules[v], target.modules[v])
                                   for v in target.quiver.vertices}, check=False)


def vstack_repmaps(fs, source, target):
    return RepMap(source, target, {v: vstack_maps([f.components[v] for f in fs], source.modules[v], target.modules[v])
                                   for v in source.quiver.vertices}, check=False)


@dataclass
class PushoutPullback:
    obj: Rep
    left: RepMap
    right: RepMap


def rep_pushout_pullback(f, g, mode):
    """Pushout of ``B <-f- A -g-> C`` or pullback of ``B -f-> D <-g- C``.

    Returns the object and the structure maps ``B -> obj, C -> obj`` (pushout)
    or ``obj -> B, obj -> C`` (pullback).
    """
    if mode == "pushout":
        if f.source is not g.source and f.source.to_json() != g.source.to_json():
            raise ShapeMismatch("pushout needs maps with a common source")
        S, inj, _ = direct_sum_reps([f.target, g.target])
        h = vstack_repmaps([f, -g], f.source, S)
        D, d = rep_cokernel(h)
        return PushoutPullback(D, d @ inj[0], d @ inj[1])
    if mode == "pullback":
        if f.target is not g.target and f.target.to_json() != g.target.to_json():
            raise ShapeMismatch("pullback needs maps with a common target")
        S, _, proj = direct_sum_reps([f.source, g.source])
        h = hstack_repmaps([f, -g], S, f.target)
        P, k = rep_kernel(h)
        return PushoutPullback(P, proj[0] @ k, proj[1] @ k)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# induced projectives and coinduced injectives
# ---------------------------------------------------------------------------


class InducedProjective:
    """``P_v = ⊕_{paths p: i ~> v} F_i`` for free modules ``F_i``.

    ``layout[v]`` lists ``(path, offset)`` for the summands of ``P_v``.
    A morphism out of ``P`` is determined by where the identity-path
    summands go (:meth:`map_to`).
    """

    def __init__(self, quiver, ring, free_ranks, reedy=None):
        reedy = reedy if reedy is not None else default_reedy(quiver)
        self.ranks = {v: free_ranks.get(v, 0) for v in quiver.vertices}
        self.layout = {}
        mods = {}
        for v in quiver.vertices:
            off, lay = 0, []
            for p in reedy.paths_into(v):
                r = self.ranks[p.start]
                if r:
                    lay.append((p, off))
                    off += r
            self.layout[v] = lay
            mods[v] = FPModule.free(ring, off)
        maps = {}
        for a in quiver.arrows:
            index = {p.arrows: o for p, o in self.layout[a.tgt]}
            n_src, n_tgt = mods[a.src].ngens, mods[a.tgt].ngens
            rows = [[0] * n_tgt for _ in range(n_src)]
            for p, o in self.layout[a.src]:
                o2 = index[p.arrows + (a.name,)]
                for t in range(self.ranks[p.start]):
                    rows[o + t][o2 + t] = 1
            maps[a.name] = ModuleMap(mods[a.src], mods[a.tgt], Matrix(ring, rows, n_tgt), check=False)
        self.rep = Rep(quiver, ring, mods, maps, reedy, check=False)

    def map_to(self, target, images):
        """The morphism sending identity summand ``i`` to the rows ``images[i]``."""
        ring = target.ring
        comps = {}
        for v in target.quiver.vertices:
            rows = []
            for p, _ in self.layout[v]:
                img = images[p.start]
                rows.extend(((img.matrix if isinstance(img, ModuleMap) else img) @ target.path_matrix(p)).rows)
            comps[v] = ModuleMap(self.rep.modules[v], target.modules[v],
                                 Matrix(ring, rows, target.modules[v].ngens), check=False)
        return RepMap(self.rep, target, comps, check=False)

    def hom_generators(self, target):
        """Generators of ``Hom(P, target)``: one per (vertex, slot, generator of target)."""
        ring = target.ring
        out = []
        for i in target.quiver.vertices:
            r, g = self.ranks[i], target.modules[i].ngens
            for t in range(r):
                for s in range(g):
                    images = {}
                    for u in target.quiver.vertices:
                        images[u] = Matrix.zeros(ring, self.ranks[u], target.modules[u].ngens)
                    images[i] = Matrix(ring, [[1 if (row == t and c == s) else 0 for c in range(g)] for row in range(r)], g)
                    out.append(self.map_to(target, images))
        return out


def induced_projective(quiver, ring, free_ranks, reedy=None):
    return InducedProjective(quiver, ring, free_ranks, reedy).rep


def indecomposable_projective(quiver, ring, i, reedy=None):
    return induced_projective(quiver, ring, {i: 1}, reedy)


class CoinducedInjective:
    """``coI(i, E)_u = ⊕_{paths γ: u ~> i} E`` with ``(coI_α y)_γ = y_{αγ}``."""

    def __init__(self, quiver, ring, at, e, reedy=None, check=True):
        if check and not is_projective_module(e):
            raise NotInjectiveModule("the module at the vertex must be injective")
        reedy = reedy if reedy is not None else default_reedy(quiver)
        self.at, self.e = at, e
        g = e.ngens
        self.layout = {}
        mods = {}
        for u in quiver.vertices:
            paths = reedy.paths_between(u, at)
            self.layout[u] = [(p, k * g) for k, p in enumerate(paths)]
            rels = Matrix.block_diag(ring, [e.relations] * len(paths)) if paths else Matrix.zeros(ring, 0, 0)
            mods[u] = FPModule(ring, g * len(paths), rels, check=False)
        maps = {}
        for a in quiver.arrows:
            n_src, n_tgt = mods[a.src].ngens, mods[a.tgt].ngens
            rows = [[0] * n_tgt for _ in range(n_src)]
            index = {p.arrows: o for p, o in self.layout[a.tgt]}
            for p, o in self.layout[a.src]:
                if p.arrows and p.arrows[0] == a.name:
                    o2 = index[p.arrows[1:]]
                    for t in range(g):
                        rows[o + t][o2 + t] = 1
            maps[a.name] = ModuleMap(mods[a.src], mods[a.tgt], Matrix(ring, rows, n_tgt), check=False)
        self.rep = Rep(quiver, ring, mods, maps, reedy, check=False)

    def map_from(self, source, phi):
        """Adjunct of ``phi: source_at -> E``: component ``γ`` at ``u`` is ``phi ∘ source_γ``."""
        ring = source.ring
        comps = {}
        for u in source.quiver.vertices:
            n = self.rep.modules[u].ngens
            cols = [source.path_matrix(p) @ phi.matrix for p, _ in self.layout[u]]
            rows = [sum((list(c.rows[r]) for c in cols), []) for r in range(source.modules[u].ngens)]
            comps[u] = ModuleMap(source.modules[u], self.rep.modules[u], Matrix(ring, rows, n), check=False)
        return RepMap(source, self.rep, comps, check=False)

    def evaluate(self, f):
        """Identity-path component of ``f: K -> coI``, a map ``K_at -> E``."""
        for p, o in self.layout[self.at]:
            if not p.arrows:
                m = f.components[self.at].matrix.select_cols(range(o, o + self.e.ngens))
                return ModuleMap(f.source.modules[self.at], self.e, m, check=False)
        raise AssertionError("identity path missing")


def coinduced_injective(quiver, ring, at, e, reedy=None):
    return CoinducedInjective(quiver, ring, at, e, reedy).rep


# ---------------------------------------------------------------------------
# canonical covers and embeddings
# ---------------------------------------------------------------------------


@dataclass
class Cover:
    """``0 -> kernel -> projective -> rep -> 0`` from the canonical induced cover."""

    induced: InducedProjective
    projective: Rep
    surjection: RepMap
    kernel: Rep
    inclusion: RepMap


def canonical_cover(m):
    ind = InducedProjective(m.quiver, m.ring, {v: m.modules[v].ngens for v in m.quiver.vertices}, m.reedy)
    images = {v: Matrix.identity(m.ring, m.modules[v].ngens) for v in m.quiver.vertices}
    pi = ind.map_to(m, images)
    K, k = rep_kernel(pi)
    return Cover(ind, ind.rep, pi, K, k)


@dataclass
class Embedding:
    """``0 -> rep -> injective -> cokernel -> 0`` from the canonical coinduced embedding."""

    pieces: list
    injective: Rep
    inclusion: RepMap
    cokernel: Rep
    projection: RepMap
    injections: list
    projections: list


def canonical_embedding(m):
    pieces, parts = [], []
    for v in m.quiver.vertices:
        e = embed_into_injective(m.modules[v])
        if e.target.ngens == 0:
            continue
        ci = CoinducedInjective(m.quiver, m.ring, v, e.target, m.reedy, check=False)
        pieces.append((ci, e))
        parts.append(ci.rep)
    I, inj, prj = direct_sum_reps(parts, m.quiver, m.ring, m.reedy)
    if parts:
        iota = inj[0] @ pieces[0][0].map_from(m, pieces[0][1])
        for (ci, e), ik in zip(pieces[1:], inj[1:]):
            iota = iota + ik @ ci.map_from(m, e)
    else:
        iota = RepMap.zero(m, I)
    C, c = rep_cokernel(iota)
    return Embedding(pieces, I, iota, C, c, inj, prj)


def extend_into_embedding(emb, inc, psi):
    """Extend ``psi: S -> I`` along a monomorphism ``inc: S -> K`` where ``I`` is
    ``emb.injective``; works summand by summand through the adjunction."""
    from .modules import extend_map_along_injection

    K = inc.target
    total = None
    for (ci, _), ik, pk in zip(emb.pieces, emb.injections, emb.projections):
        phi = ci.evaluate(pk @ psi)
        ext = extend_map_along_injection(inc.components[ci.at], phi)
        part = ik @ ci.map_from(K, ext)
        total = part if total is None else total + part
    if total is None:
        return RepMap.zero(K, emb.injective)
    return total


# ---------------------------------------------------------------------------
# Hom
# ---------------------------------------------------------------------------


class HomSpace:
    """``Hom(M, N)`` as a submodule of flattened component matrices modulo
    the maps that vanish because of the relations of ``N``."""

    def __init__(self, M, N):
        if M.quiver != N.quiver or M.ring != N.ring:
            raise ShapeMismatch("representations over different quivers or rings")
        ring = M.ring
        self.M, self.N = M, N
        q = M.quiver
        sysm = LinearSystem(ring)
        ids = {v: sysm.unknown(M.modules[v].ngens, N.modules[v].ngens) for v in q.vertices}
        for a in q.arrows:
            mu, mv = M.modules[a.src], M.modules[a.tgt]
            nu, nv = N.modules[a.src], N.modules[a.tgt]
            if mu.ngens and nv.ngens:
                sysm.equation([(M.maps[a.name].matrix, ids[a.tgt], None),
                               (None, ids[a.src], -N.maps[a.name].matrix)],
                              modulo=nv.relations, shape=(mu.ngens, nv.ngens))
        for v in q.vertices:
            mv, nv = M.modules[v], N.modules[v]
            if mv.relations.nrows and nv.ngens:
                sysm.equation([(mv.relations, ids[v], None)], modulo=nv.relations, shape=(mv.relations.nrows, nv.ngens))
        self.system = sysm
        self.offsets = {v: sysm.blocks[ids[v]][2] for v in q.vertices}
        self.dim = sysm.nblock
        self.gens = sysm.homogeneous_kernel()
        zero_rows = []
        for v in q.vertices:
            off, gm, gn = self.offsets[v], M.modules[v].ngens, N.modules[v].ngens
            for i in range(gm):
                for r in N.modules[v].relations.rows:
                    row = [0] * self.dim
                    row[off + i * gn: off + (i + 1) * gn] = r
                    zero_rows.append(row)
        self.zero_rows = zero_rows
        self.module, self.basis = self.quotient([])

    def flatten(self, f):
        out = [0] * self.dim
        for v in self.M.quiver.vertices:
            off, gn = self.offsets[v], self.N.modules[v].ngens
            for i, r in enumerate(f.components[v].matrix.rows):
                out[off + i * gn: off + (i + 1) * gn] = r
        return out

    def unflatten(self, flat):
        ring = self.M.ring
        comps = {}
        for v in self.M.quiver.vertices:
            off, gm, gn = self.offsets[v], self.M.modules[v].ngens, self.N.modules[v].ngens
            comps[v] = ModuleMap(self.M.modules[v], self.N.modules[v],
                                 Matrix(ring, [flat[off + i * gn: off + (i + 1) * gn] for i in range(gm)], gn),
                                 check=False)
        return RepMap(self.M, self.N, comps, check=False)

    def quotient(self, maps):
        """``Hom(M, N) / span(maps)`` in a diagonal presentation with representatives."""
        ring = self.M.ring
        extra = [self.flatten(f) for f in maps]
        Q0 = present_submodule(ring, self.gens, self.zero_rows + extra, self.dim)
        Q, _, frm = Q0.simplified
        reps = []
        for coeffs in frm.matrix.rows:
            flat = [0] * self.dim
            for c, g in zip(coeffs, self.gens):
                if c:
                    flat = ring.axpy(c, g, flat)
            reps.append(self.unflatten(flat))
        return Q, reps


def hom_rep(m, n):
    """``(Hom(m, n) presented, one RepMap per generator)``."""
    h = HomSpace(m, n)
    return h.module, h.basis


def lift_rep_map(p, q):
    """A morphism ``h`` with ``p ∘ h = q`` or ``None`` (``p: X -> Y``, ``q: M -> Y``)."""
    from .errors import NoSolution

    M, X, Y = q.source, p.source, p.target
    ring = M.ring
    sysm = LinearSystem(ring)
    quiv = M.quiver
    ids = {v: sysm.unknown(M.modules[v].ngens, X.modules[v].ngens) for v in quiv.vertices}
    for v in quiv.vertices:
        gm, gx, gy = M.modules[v].ngens, X.modules[v].ngens, Y.modules[v].ngens
        if gm and gy:
            sysm.equation([(None, ids[v], p.components[v].matrix)], rhs=q.components[v].matrix,
                          modulo=Y.modules[v].relations)
        if M.modules[v].relations.nrows and gx:
            sysm.equation([(M.modules[v].relations, ids[v], None)], modulo=X.modules[v].relations,
                          shape=(M.modules[v].relations.nrows, gx))
    for a in quiv.arrows:
        gmu, gxv = M.modules[a.src].ngens, X.modules[a.tgt].ngens
        if gmu and gxv:
            sysm.equation([(M.maps[a.name].matrix, ids[a.tgt], None), (None, ids[a.src], -X.maps[a.name].matrix)],
                          modulo=X.modules[a.tgt].relations, shape=(gmu, gxv))
    try:
        blocks, _ = sysm.solve()
    except NoSolution:
        return None
    comps = {v: ModuleMap(M.modules[v], X.modules[v], blocks[ids[v]], check=False) for v in quiv.vertices}
    return RepMap(M, X, comps, check=False)


# ---------------------------------------------------------------------------
# path-algebra view
# ---------------------------------------------------------------------------


@dataclass
class LambdaView:
    """The representation as one module over the path algebra.

    ``blocks[v]`` is the generator range cut out by the idempotent at ``v``;
    ``actions[a]`` is the arrow acting on the total module (zero off its block).
    """

    quiver: Quiver
    ring: object
    total: FPModule
    blocks: dict
    actions: dict


def lambda_conversion(x, direction):
    if direction == "to":
        return _to_lambda(x)
    if direction == "from":
        return _from_lambda(x)
    raise ValueError(f"unknown direction {direction!r}")


def _to_lambda(m):
    q, ring = m.quiver, m.ring
    total, _, _ = direct_sum_modules([m.modules[v] for v in q.vertices], ring=ring)
    blocks, off = {}, 0
    for v in q.vertices:
        blocks[v] = range(off, off + m.modules[v].ngens)
        off += m.modules[v].ngens
    n = total.ngens
    actions = {}
    for a in q.arrows:
        rows = [[0] * n for _ in range(n)]
        mat = m.maps[a.name].matrix
        for i, si in enumerate(blocks[a.src]):
            for j, tj in enumerate(blocks[a.tgt]):
                rows[si][tj] = mat.rows[i][j]
        actions[a.name] = ModuleMap(total, total, Matrix(ring, rows, n), check=False)
    return LambdaView(q, ring, total, blocks, actions)


def _from_lambda(view):
    q, ring, total = view.quiver, view.ring, view.total
    covered = sorted(i for v in q.vertices for i in view.blocks.get(v, ()))
    if covered != list(range(total.ngens)):
        raise BlockMismatch("idempotent blocks do not partition the generators")
    mods = {}
    for v in q.vertices:
        idx = list(view.blocks[v])
        rels = []
        for r in total.relations.rows:
            if any(r[i] for i in range(total.ngens) if i not in view.blocks[v]):
                if any(r[i] for i in idx):
                    raise BlockMismatch(f"relation mixes the block of {v} with others")
                continue
            if any(r[i] for i in idx):
                rels.append([r[i] for i in idx])
        mods[v] = FPModule(ring, len(idx), Matrix(ring, rels, len(idx)), check=False)
    maps = {}
    for a in q.arrows:
        act = view.actions[a.name].matrix
        src, tgt = list(view.blocks[a.src]), list(view.blocks[a.tgt])
        for i in range(total.ngens):
            for j in range(total.ngens):
                if act.rows[i][j] and not (i in view.blocks[a.src] and j in view.blocks[a.tgt]):
                    raise BlockMismatch(f"arrow {a.name} acts outside its block")
        maps[a.name] = ModuleMap(mods[a.src], mods[a.tgt],
                                 Matrix(ring, [[act.rows[i][j] for j in tgt] for i in src], len(tgt)), check=False)
    return Rep(q, ring, mods, maps)


# ---------------------------------------------------------------------------
# Ext^1 against the indecomposable projectives
# ---------------------------------------------------------------------------


def ext1(m, n, cover=None):
    """``Ext^1(m, n) = coker(Hom(P, n) -> Hom(K, n))`` from the canonical cover."""
    cov = cover if cover is not None else canonical_cover(m)
    hk = HomSpace(cov.kernel, n)
    restricted = [phi @ cov.inclusion for phi in cov.induced.hom_generators(n)]
    mod, _ = hk.quotient(restricted)
    return mod


def ext1_oracle(m):
    """``{i: Ext^1(m, P(i))}`` for the indecomposable projectives ``P(i)``."""
    cov = canonical_cover(m)
    return {i: ext1(m, indecomposable_projective(m.quiver, m.ring, i, m.reedy), cov) for i in m.quiver.vertices}


def ext1_vanishes(m):
    return all(e.is_zero() for e in ext1_oracle(m).values())
