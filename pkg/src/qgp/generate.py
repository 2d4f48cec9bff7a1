"""Seeded random modules, representations and morphisms."""

from __future__ import annotations

import random

from .linalg import Matrix
from .modules import FPModule, ModuleMap, hom_modules
from .rep import HomSpace, Rep, RepMap


def _rng(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_element(rng, ring):
    return rng.randrange(ring.size)


def random_module(rng, ring, max_gens):
    g = rng.randint(0, max_gens)
    nrel = rng.randint(0, g)
    rels = [[random_element(rng, ring) for _ in range(g)] for _ in range(nrel)]
    return FPModule(ring, g, Matrix(ring, rels, g), check=False)


def random_module_map(rng, source, target):
    """Uniform over ``Hom(source, target)``: a random combination of generators."""
    ring = source.ring
    _, basis = hom_modules(source, target)
    mat = Matrix.zeros(ring, source.ngens, target.ngens)
    for b in basis:
        c = random_element(rng, ring)
        if c:
            mat = mat + b.matrix.scale(c)
    return ModuleMap(source, target, mat, check=False)


def random_instance(seed, ring, quiver, max_gens, reedy=None):
    """A random representation; equal seeds give equal output."""
    rng = _rng(seed)
    mods = {v: random_module(rng, ring, max_gens) for v in quiver.vertices}
    maps = {a.name: random_module_map(rng, mods[a.src], mods[a.tgt]) for a in quiver.arrows}
    return Rep(quiver, ring, mods, maps, reedy, check=False)


def random_repmap(seed, source, target):
    """Uniform over ``Hom(source, target)``."""
    rng = _rng(seed)
    hs = HomSpace(source, target)
    flat = [0] * hs.dim
    ring = source.ring
    for g in hs.gens:
        c = random_element(rng, ring)
        if c:
            flat = ring.axpy(c, g, flat)
    return hs.unflatten(flat)


def random_surjection(seed, target, max_gens):
    """A random surjection onto ``target``.

    Either ``(id, g): target ⊕ Y -> target`` or ``(π, g): P ⊕ Y -> target``
    with ``π`` the canonical cover, ``Y`` random and ``g`` a random map.
    """
    from .rep import canonical_cover, direct_sum_reps, hstack_repmaps

    rng = _rng(seed)
    Y = random_instance(rng, target.ring, target.quiver, max_gens, target.reedy)
    g = random_repmap(rng, Y, target)
    if rng.random() < 0.5:
        base = RepMap.identity(target)
    else:
        base = canonical_cover(target).surjection
    S, _, _ = direct_sum_reps([base.source, Y])
    return hstack_repmaps([base, g], S, target)
