"""Suspension, loops and stable homs in the homotopy category.

Hom in the homotopy category is computed on Gorenstein-projective
replacements: maps ``G a -> G b`` modulo those factoring through a projective
object.  Any such factorisation lifts along the canonical cover of ``G b``,
so it is enough to quotient by maps factoring through that cover.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalInvariantBroken
from .model import cofibrant_replacement, fibrant_replacement, is_weak_equivalence
from .modules import FPModule, factor_through_surjection
from .linalg import _Solver
from .rep import (
    HomSpace,
    RepMap,
    canonical_cover,
    canonical_embedding,
    ext1,
    extend_into_embedding,
    lift_rep_map,
)


@dataclass
class StableHomModule:
    module: FPModule
    representatives: list
    source: object = None
    target: object = None


def suspension(m):
    """Cokernel of the canonical embedding of ``m`` into an injective object."""
    return canonical_embedding(m).cokernel


def loop(m):
    """Kernel of the canonical cover of ``m`` by a projective object."""
    return canonical_cover(m).kernel


def stable_hom(a, b):
    """``Hom(G a, G b)`` modulo maps factoring through projective objects."""
    ga = cofibrant_replacement(a).gp
    gb = cofibrant_replacement(b).gp
    return stable_hom_between(ga, gb)


def stable_hom_between(ga, gb):
    """Stable hom between representations that are already Gorenstein-projective."""
    hs = HomSpace(ga, gb)
    mod, reps = hs.quotient(_through_cover(ga, gb))
    return StableHomModule(mod, reps, ga, gb)


def stable_hom_injective(a, b):
    """The dual route: ``Hom(G_I a, G_I b)`` modulo maps through injective objects."""
    ga = fibrant_replacement(a).ginj
    gb = fibrant_replacement(b).ginj
    hs = HomSpace(ga, gb)
    emb = canonical_embedding(ga)
    through = HomSpace(emb.injective, gb)
    killed = [h @ emb.inclusion for h in through.basis]
    mod, reps = hs.quotient(killed)
    return StableHomModule(mod, reps, ga, gb)


def is_stably_zero(f):
    """Does ``f: M -> N`` factor through a projective object?"""
    cov = canonical_cover(f.target)
    return lift_rep_map(cov.surjection, f) is not None


@dataclass
class SigmaOmegaComparison:
    map: RepMap
    is_weq: bool


def sigma_omega_compare(m):
    """The comparison ``m -> Σ Ω m``.

    With ``0 -> Ω m -> P -> m -> 0`` and ``Ω m -> I`` the canonical embedding,
    the embedding extends to ``P -> I`` and the induced map on cokernels is
    ``m -> Σ Ω m``.
    """
    cov = canonical_cover(m)
    emb = canonical_embedding(cov.kernel)
    ext = extend_into_embedding(emb, cov.inclusion, emb.inclusion)
    if not (ext @ cov.inclusion).equals(emb.inclusion):
        raise InternalInvariantBroken("extension does not restrict to the embedding")
    g = emb.projection @ ext
    comps = {v: factor_through_surjection(cov.surjection.components[v], g.components[v]) for v in m.quiver.vertices}
    f = RepMap(m, emb.cokernel, comps, check=False)
    weq = is_weak_equivalence(f)
    if not weq:
        raise InternalInvariantBroken("comparison with the suspended loop is not a weak equivalence")
    return SigmaOmegaComparison(f, weq)


@dataclass
class AdjunctionCheck:
    lhs: FPModule
    rhs: FPModule
    agree: bool


def hovey_adjunction_check(m, n):
    """Compare the stable hom into ``Σ n`` with ``Ext^1(G m, n)``."""
    lhs = stable_hom(m, suspension(n)).module
    rhs = ext1(cofibrant_replacement(m).gp, n)
    return AdjunctionCheck(lhs, rhs, lhs.is_isomorphic(rhs))


def is_stable_iso(f):
    """Is the class of ``f`` invertible in the homotopy category?

    Computed on replacements: a map ``g`` with ``g ∘ G f ≡ id`` and
    ``G f ∘ g ≡ id`` modulo maps through projective objects.
    """
    ra, rb = cofibrant_replacement(f.source), cofibrant_replacement(f.target)
    # lift f ∘ p_a through p_b (possible: G a is cofibrant, p_b a trivial fibration)
    gf = lift_rep_map(rb.trivfib, f @ ra.trivfib)
    if gf is None:
        raise InternalInvariantBroken("no lift of a map along a trivial fibration")
    return stable_iso_between(gf)


def stable_iso_between(gf):
    """Invertibility in the stable category for a map between GP representations.

    Looks for ``g`` with ``g ∘ gf - id`` and ``gf ∘ g - id`` factoring through
    projective objects; this is one linear system in the coefficients of ``g``.
    """
    ga, gb = gf.source, gf.target
    back, ea, eb = HomSpace(gb, ga), HomSpace(ga, ga), HomSpace(gb, gb)
    null_a = _through_cover(ga, ga)
    null_b = _through_cover(gb, gb)
    rows = []
    for g in back.gens:
        h = back.unflatten(g)
        rows.append(ea.flatten(h @ gf) + eb.flatten(gf @ h))
    pad_a, pad_b = [0] * eb.dim, [0] * ea.dim
    for z in ea.zero_rows + [ea.flatten(x) for x in null_a]:
        rows.append(list(z) + pad_a)
    for z in eb.zero_rows + [eb.flatten(x) for x in null_b]:
        rows.append(pad_b + list(z))
    target = ea.flatten(RepMap.identity(ga)) + eb.flatten(RepMap.identity(gb))
    return _Solver(ga.ring, rows, ea.dim + eb.dim).solve(target) is not None


def _through_cover(src, tgt):
    """Generators of the maps ``src -> tgt`` that factor through the cover of ``tgt``."""
    cov = canonical_cover(tgt)
    return [cov.surjection @ h for h in HomSpace(src, cov.projective).basis]
