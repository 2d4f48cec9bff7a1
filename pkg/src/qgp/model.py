"""Classification predicates and constructions for the two Reedy model structures.

In the projective structure (RP) fibrations are vertexwise surjections and
cofibrant objects are the Gorenstein-projective representations; in the
injective structure (RI) cofibrations are vertexwise injections.  Weak
equivalences are vertexwise stable equivalences in both.

Every constructive routine checks its own postconditions with the
independent predicates and raises InternalInvariantBroken on failure.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .errors import InternalInvariantBroken, NotCofibrant
from .linalg import Matrix
from .modules import (
    FPModule,
    ModuleMap,
    direct_sum_modules,
    embed_into_injective,
    extend_map_along_injection,
    free_cover,
    hstack_maps,
    is_exact,
    is_projective_module,
    lift_along_surjection,
    stable_equiv,
    vstack_maps,
)
from .rep import (
    Rep,
    RepMap,
    canonical_cover,
    canonical_embedding,
    direct_sum_reps,
    hstack_repmaps,
    latching,
    latching_morphism,
    matching,
    matching_morphism,
    rep_cokernel,
    rep_kernel,
    rep_pushout_pullback,
)


@dataclass(frozen=True)
class ObjectFlags:
    gorenstein_projective: bool
    gorenstein_injective: bool
    projective_object: bool
    injective_object: bool
    trivial: bool

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class MorphismFlags:
    weak_equivalence: bool
    rp_fibration: bool
    rp_cofibration: bool
    ri_fibration: bool
    ri_cofibration: bool
    rp_trivial_fibration: bool
    ri_trivial_cofibration: bool

    def as_dict(self):
        return asdict(self)


# ---------------------------------------------------------------------------
# object predicates
# ---------------------------------------------------------------------------


def is_gorenstein_projective(m):
    """Every latching map ``⊕_{α: i -> j} M_i -> M_j`` is injective."""
    return all(latching(m, j)[1].is_injective() for j in m.quiver.vertices)


def is_gorenstein_injective(m):
    """Every matching map ``M_j -> ∏_{α: j -> k} M_k`` is surjective."""
    return all(matching(m, j)[1].is_surjective() for j in m.quiver.vertices)


def vertexwise_projective(m):
    return all(is_projective_module(x) for x in m.modules.values())


def is_projective_object(m):
    return vertexwise_projective(m) and is_gorenstein_projective(m)


def is_injective_object(m):
    return vertexwise_projective(m) and is_gorenstein_injective(m)


def is_trivial(m, cover=None):
    """Finite projective dimension, i.e. the kernel of the canonical cover is projective."""
    cov = cover if cover is not None else canonical_cover(m)
    return is_projective_object(cov.kernel)


def classify_object(m):
    gp = is_gorenstein_projective(m)
    gi = is_gorenstein_injective(m)
    vp = vertexwise_projective(m)
    flags = ObjectFlags(gp, gi, gp and vp, gi and vp, is_trivial(m))
    if flags.projective_object and not flags.trivial:
        raise InternalInvariantBroken("projective object with infinite projective dimension")
    if gp and flags.trivial and not flags.projective_object:
        raise InternalInvariantBroken("Gorenstein-projective trivial object that is not projective")
    return flags


# ---------------------------------------------------------------------------
# morphism predicates
# ---------------------------------------------------------------------------


def is_weak_equivalence(f):
    return all(stable_equiv(f.components[v]) for v in f.quiver.vertices)


def is_rp_cofibration(f):
    """``L_j N ⊔_{L_j M} M_j -> N_j`` is injective at every vertex.

    Writing the pushout as ``coker(L_j M -> L_j N ⊕ M_j)``, injectivity of the
    comparison is exactness of ``L_j M -> L_j N ⊕ M_j -> N_j``.
    """
    M, N = f.source, f.target
    for j in M.quiver.vertices:
        LM, lm = latching(M, j)
        LN, ln = latching(N, j)
        S, _, _ = direct_sum_modules([LN, M.modules[j]])
        g = vstack_maps([latching_morphism(f, j), -lm], LM, S)
        h = hstack_maps([ln, f.components[j]], S, N.modules[j])
        if not is_exact(g, h):
            return False
    return True


def is_ri_fibration(f):
    """``M_j -> M(j) ×_{N(j)} N_j`` is surjective at every vertex.

    The pullback is ``ker(M(j) ⊕ N_j -> N(j))``, so surjectivity of the
    comparison is exactness of ``M_j -> M(j) ⊕ N_j -> N(j)``.
    """
    M, N = f.source, f.target
    for j in M.quiver.vertices:
        MM, mm = matching(M, j)
        MN, mn = matching(N, j)
        S, _, _ = direct_sum_modules([MM, N.modules[j]])
        g = vstack_maps([mm, f.components[j]], M.modules[j], S)
        h = hstack_maps([matching_morphism(f, j), -mn], S, MN)
        if not is_exact(g, h):
            return False
    return True


def classify_morphism(f):
    weq = is_weak_equivalence(f)
    surj = f.is_surjective()
    inj = f.is_injective()
    rp_cof = is_rp_cofibration(f)
    ri_fib = is_ri_fibration(f)
    trivfib = weq and surj
    if surj:
        K, _ = rep_kernel(f)
        by_kernel = is_trivial(K)
    else:
        by_kernel = False
    if trivfib != by_kernel:
        raise InternalInvariantBroken("trivial fibration tests disagree")
    trivcof = weq and inj
    if inj:
        C, _ = rep_cokernel(f)
        by_cokernel = is_trivial(C)
    else:
        by_cokernel = False
    if trivcof != by_cokernel:
        raise InternalInvariantBroken("trivial cofibration tests disagree")
    return MorphismFlags(weq, surj, rp_cof, ri_fib, inj, trivfib, trivcof)


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------


@dataclass
class CofibrantEmbedding:
    q: Rep
    phi: RepMap
    cokernel: Rep


def embed_cofibrant_into_projective(k):
    """Embed a Gorenstein-projective ``k`` into a projective object.

    Vertices are handled in Reedy order.  At ``j`` the latching map
    ``L_j k -> k_j`` is injective; ``C_j`` is its cokernel and ``C_j -> E_j``
    an embedding into a free module.  Then ``Q_j = L_j Q ⊕ E_j`` and the
    component at ``j`` pairs an extension of ``L_j φ`` along the latching map
    with ``k_j -> C_j -> E_j``.
    """
    if not is_gorenstein_projective(k):
        raise NotCofibrant("representation is not Gorenstein-projective")
    ring, quiv = k.ring, k.quiver
    qmods, qmaps, phis = {}, {}, {}
    for j in k.reedy.topo_order:
        arrows = k.reedy.incoming[j]
        Lk, lk = latching(k, j)
        LQ, inj_q, _ = direct_sum_modules([qmods[a.src] for a in arrows], ring=ring)
        Lphi = ModuleMap(Lk, LQ, Matrix.block_diag(ring, [phis[a.src].matrix for a in arrows])
                         if arrows else Matrix.zeros(ring, 0, 0), check=False)
        C, c = lk.cokernel()
        e = embed_into_injective(C)
        E = e.target
        Qj, (to_l, to_e), _ = direct_sum_modules([LQ, E])
        psi = extend_map_along_injection(lk, Lphi)
        phis[j] = to_l @ psi + to_e @ (e @ c)
        qmods[j] = Qj
        for a, ia in zip(arrows, inj_q):
            qmaps[a.name] = to_l @ ia
    Q = Rep(quiv, ring, qmods, qmaps, k.reedy, check=False)
    phi = RepMap(k, Q, phis, check=False)
    C, _ = rep_cokernel(phi)
    _certify(phi.is_injective(), "embedding is not injective")
    _certify(is_projective_object(Q), "target is not a projective object")
    _certify(is_gorenstein_projective(C), "cokernel is not Gorenstein-projective")
    return CofibrantEmbedding(Q, phi, C)


@dataclass
class CofibrantReplacement:
    gp: Rep
    trivfib: RepMap


def cofibrant_replacement(m):
    """A Gorenstein-projective ``gp`` with an RP-trivial fibration ``gp -> m``.

    With ``0 -> K -> P -> m -> 0`` the canonical cover and ``K -> Q`` the
    embedding above, ``gp`` is the pushout of ``P <- K -> Q`` and the map to
    ``m`` is ``(π, 0)``.  Its kernel is the image of ``Q``.
    """
    if is_gorenstein_projective(m):
        return CofibrantReplacement(m, RepMap.identity(m))
    cov = canonical_cover(m)
    emb = embed_cofibrant_into_projective(cov.kernel)
    po = rep_pushout_pullback(cov.inclusion, emb.phi, "pushout")
    gp = po.obj
    # descend (π, 0) from P ⊕ Q through the pushout projection
    comps = {}
    for v in m.quiver.vertices:
        from .modules import factor_through_surjection

        left = po.left.components[v]
        right = po.right.components[v]
        S, _, _ = direct_sum_modules([left.source, right.source])
        both = hstack_maps([left, right], S, gp.modules[v])
        g = hstack_maps([cov.surjection.components[v], ModuleMap.zero(right.source, m.modules[v])], S, m.modules[v])
        comps[v] = factor_through_surjection(both, g)
    p = RepMap(gp, m, comps, check=False)
    _certify(is_gorenstein_projective(gp), "replacement is not Gorenstein-projective")
    flags = classify_morphism(p)
    _certify(flags.rp_trivial_fibration, "replacement map is not a trivial fibration")
    _certify((p @ po.left).equals(cov.surjection), "replacement map does not restrict to the cover")
    return CofibrantReplacement(gp, p)


def cover_gorenstein_injective(c):
    """Surjection from an injective object onto a Gorenstein-injective ``c``.

    Dual to :func:`embed_cofibrant_into_projective`: in reverse Reedy order
    ``W_j = M_j W ⊕ F_j`` with ``F_j`` a free cover of the kernel of the
    matching map, and the component lifts ``M_j ρ`` along that map.
    """
    ring, quiv = c.ring, c.quiver
    wmods, wmaps, rhos = {}, {}, {}
    for j in reversed(c.reedy.topo_order):
        arrows = c.reedy.outgoing[j]
        Mc, mc = matching(c, j)
        MW, _, prj_w = direct_sum_modules([wmods[a.tgt] for a in arrows], ring=ring)
        Mrho = ModuleMap(MW, Mc, Matrix.block_diag(ring, [rhos[a.tgt].matrix for a in arrows])
                         if arrows else Matrix.zeros(ring, 0, 0), check=False)
        K, kinc = mc.kernel()
        fc = free_cover(K)
        Wj, _, (from_m, from_f) = direct_sum_modules([MW, fc.source])
        lam = lift_along_surjection(mc, Mrho)
        rhos[j] = lam @ from_m + (kinc @ fc) @ from_f
        wmods[j] = Wj
        for a, pa in zip(arrows, prj_w):
            wmaps[a.name] = pa @ from_m
    W = Rep(quiv, ring, wmods, wmaps, c.reedy, check=False)
    rho = RepMap(W, c, rhos, check=False)
    _certify(rho.is_surjective(), "cover is not surjective")
    _certify(is_injective_object(W), "cover source is not an injective object")
    return W, rho


@dataclass
class FibrantReplacement:
    ginj: Rep
    trivcof: RepMap


def fibrant_replacement(m):
    """A Gorenstein-injective ``ginj`` with an RI-trivial cofibration ``m -> ginj``.

    With ``0 -> m -> I -> C -> 0`` the canonical embedding and ``W -> C`` the
    cover above, ``ginj`` is the pullback of ``I -> C <- W``.
    """
    if is_gorenstein_injective(m):
        return FibrantReplacement(m, RepMap.identity(m))
    emb = canonical_embedding(m)
    W, rho = cover_gorenstein_injective(emb.cokernel)
    pb = rep_pushout_pullback(emb.projection, rho, "pullback")
    G = pb.obj
    comps = {}
    from .modules import factor_through_injection

    for v in m.quiver.vertices:
        left, right = pb.left.components[v], pb.right.components[v]
        S, _, _ = direct_sum_modules([left.target, right.target])
        both = vstack_maps([left, right], G.modules[v], S)
        g = vstack_maps([emb.inclusion.components[v], ModuleMap.zero(m.modules[v], right.target)], m.modules[v], S)
        comps[v] = factor_through_injection(both, g)
    j = RepMap(m, G, comps, check=False)
    _certify(is_gorenstein_injective(G), "replacement is not Gorenstein-injective")
    flags = classify_morphism(j)
    _certify(flags.ri_trivial_cofibration, "replacement map is not a trivial cofibration")
    _certify((pb.left @ j).equals(emb.inclusion), "replacement map does not restrict to the embedding")
    return FibrantReplacement(G, j)


@dataclass
class FactorizationResult:
    mid: Rep
    left: RepMap
    right: RepMap
    certified_flags: tuple


def factorize(f, mode):
    """Factor ``f = right ∘ left``.

    ``trivcof_then_fib``: ``M -> M ⊕ P -> N`` with ``P`` the canonical cover of ``N``.

    ``cof_then_trivfib``: built vertex by vertex in Reedy order.  With
    ``A_j = L_j X ⊔_{L_j M} M_j`` and ``A_j -> E_j`` an embedding into a free
    module, ``X_j = N_j ⊕ E_j``; the map to ``N_j`` is the projection, so its
    kernel is free at every vertex.
    """
    if mode == "trivcof_then_fib":
        res = _factor_trivcof_fib(f)
        fl, fr = classify_morphism(res.left), classify_morphism(res.right)
        _certify(fl.rp_cofibration and fl.weak_equivalence, "left map is not a trivial cofibration")
        _certify(fr.rp_fibration, "right map is not a fibration")
    elif mode == "cof_then_trivfib":
        res = _factor_cof_trivfib(f)
        fl, fr = classify_morphism(res.left), classify_morphism(res.right)
        _certify(fl.rp_cofibration, "left map is not a cofibration")
        _certify(fr.rp_trivial_fibration, "right map is not a trivial fibration")
    else:
        raise ValueError(f"unknown factorization mode {mode!r}")
    _certify((res.right @ res.left).equals(f), "factors do not compose to the input")
    res.certified_flags = (fl, fr)
    return res


def _factor_trivcof_fib(f):
    M, N = f.source, f.target
    cov = canonical_cover(N)
    S, inj, _ = direct_sum_reps([M, cov.projective])
    right = hstack_repmaps([f, cov.surjection], S, N)
    return FactorizationResult(S, inj[0], right, ())


def _factor_cof_trivfib(f):
    from .modules import factor_through_surjection

    M, N = f.source, f.target
    ring, quiv = M.ring, M.quiver
    xmods, xmaps, lefts, rights = {}, {}, {}, {}
    for j in M.reedy.topo_order:
        arrows = M.reedy.incoming[j]
        LM, lm = latching(M, j)
        LN, ln = latching(N, j)
        LX, inj_x, _ = direct_sum_modules([xmods[a.src] for a in arrows], ring=ring)
        Lleft = ModuleMap(LM, LX, Matrix.block_diag(ring, [lefts[a.src].matrix for a in arrows])
                          if arrows else Matrix.zeros(ring, 0, 0), check=False)
        Lright = ModuleMap(LX, LN, Matrix.block_diag(ring, [rights[a.src].matrix for a in arrows])
                           if arrows else Matrix.zeros(ring, 0, 0), check=False)
        # A_j = coker(L_j M -> L_j X ⊕ M_j)
        B, (b_l, b_m), _ = direct_sum_modules([LX, M.modules[j]])
        A, a_proj = vstack_maps([Lleft, -lm], LM, B).cokernel()
        to_n = factor_through_surjection(a_proj, hstack_maps([ln @ Lright, f.components[j]], B, N.modules[j]))
        e = embed_into_injective(A)
        Xj, (from_n, from_e), (pr_n, _) = direct_sum_modules([N.modules[j], e.target])
        a_to_x = from_n @ to_n + from_e @ e
        xmods[j] = Xj
        lefts[j] = a_to_x @ a_proj @ b_m
        rights[j] = pr_n
        for a, ia in zip(arrows, inj_x):
            xmaps[a.name] = a_to_x @ a_proj @ b_l @ ia
    X = Rep(quiv, ring, xmods, xmaps, M.reedy, check=False)
    left = RepMap(M, X, lefts, check=False)
    right = RepMap(X, N, rights, check=False)
    return FactorizationResult(X, left, right, ())


@dataclass
class FourTermResolution:
    s: Rep
    t: Rep
    gp: Rep
    maps: list  # s -> t, t -> gp, gp -> m


def four_term_resolution(m):
    """``0 -> S -> T -> G -> m -> 0`` with ``S, T`` projective objects and ``G``
    Gorenstein-projective.  ``T -> W`` is the canonical cover of the kernel
    ``W`` of the replacement map; ``W`` is trivial so its syzygy ``S`` is
    projective."""
    rep = cofibrant_replacement(m)
    W, w = rep_kernel(rep.trivfib)
    cov = canonical_cover(W)
    S, T = cov.kernel, cov.projective
    maps = [cov.inclusion, w @ cov.surjection, rep.trivfib]
    _certify(is_projective_object(S) and is_projective_object(T), "outer terms are not projective objects")
    _certify(is_gorenstein_projective(rep.gp), "middle term is not Gorenstein-projective")
    _certify(resolution_is_exact(maps), "sequence is not exact")
    return FourTermResolution(S, T, rep.gp, maps)


def resolution_is_exact(maps):
    """Exactness of ``0 -> A -> B -> C -> D -> 0`` given the three inner maps."""
    a, b, c = maps
    if not a.is_injective() or not c.is_surjective():
        return False
    for g, h in ((a, b), (b, c)):
        if not (h @ g).is_zero():
            return False
        for v in g.quiver.vertices:
            if not is_exact(g.components[v], h.components[v]):
                return False
    return True


def _certify(ok, what):
    if not ok:
        raise InternalInvariantBroken(what)
