import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from qgp.errors import NotCofibrant
from qgp.generate import random_instance, random_repmap, random_surjection
from qgp.linalg import Matrix
from qgp.model import (
    classify_morphism,
    classify_object,
    cofibrant_replacement,
    embed_cofibrant_into_projective,
    factorize,
    fibrant_replacement,
    four_term_resolution,
    is_gorenstein_projective,
    is_weak_equivalence,
    resolution_is_exact,
)
from qgp.modules import FPModule, ModuleMap
from qgp.oracles import module_maps
from qgp.quiver import FIXTURE_QUIVERS, Quiver, a_n, kronecker
from qgp.rep import (
    Rep,
    RepMap,
    canonical_cover,
    direct_sum_reps,
    induced_projective,
    lift_rep_map,
    rep_kernel,
    validate_rep,
)
from qgp.ring import TruncPoly, ZMod

from conftest import a2_rep

RINGS = [ZMod(4), ZMod(6), ZMod(8), TruncPoly(2, 2), TruncPoly(3, 2)]
seeds = st.integers(0, 2**32 - 1)
rings = st.sampled_from(RINGS)
quivers = st.sampled_from(sorted(FIXTURE_QUIVERS))


def random_rep(ring, qname, seed, max_gens=2):
    return random_instance(seed, ring, FIXTURE_QUIVERS[qname](), max_gens)


def test_classify_examples(free_id, zero_to_z2, z4):
    R = FPModule.free(z4, 1)
    assert not classify_object(a2_rep(z4, R, R, [[2]])).gorenstein_projective
    fl = classify_object(zero_to_z2)
    assert fl.gorenstein_projective and not fl.projective_object and not fl.trivial
    fl = classify_object(free_id)
    assert fl.gorenstein_projective and fl.projective_object
    q = Quiver(["x", "y"], [])
    for seed in range(10):
        assert classify_object(random_instance(seed, z4, q, 2)).gorenstein_projective


@settings(max_examples=40, deadline=None)
@given(rings, quivers, seeds)
def test_object_flag_implications(ring, qname, seed):
    fl = classify_object(random_rep(ring, qname, seed))
    if fl.projective_object:
        assert fl.gorenstein_projective and fl.trivial
    if fl.injective_object:
        assert fl.gorenstein_injective
    if fl.gorenstein_projective and fl.trivial:
        assert fl.projective_object


def test_classify_morphism_examples(free_id, zero_to_z2, z4):
    fl = classify_morphism(RepMap.identity(zero_to_z2))
    assert all(fl.as_dict().values())
    S, _, prj = direct_sum_reps([zero_to_z2, free_id])
    assert classify_morphism(prj[0]).rp_trivial_fibration
    zero = Rep.zero(zero_to_z2.quiver, z4)
    assert not classify_morphism(RepMap.zero(zero, zero_to_z2)).rp_fibration


@settings(max_examples=40, deadline=None)
@given(rings, quivers, seeds)
def test_trivial_fibration_two_ways(ring, qname, seed):
    target = random_rep(ring, qname, seed)
    f = random_surjection(seed, target, 1)
    fl = classify_morphism(f)
    K, _ = rep_kernel(f)
    assert fl.rp_fibration
    assert fl.rp_trivial_fibration == classify_object(K).trivial


def test_embed_cofibrant_examples(zero_to_z2, free_id, z4):
    emb = embed_cofibrant_into_projective(zero_to_z2)
    assert emb.q.modules["0"].is_zero() and emb.q.modules["1"].nontrivial_invariants == (0,)
    assert emb.phi.components["1"].matrix.rows == ((2,),)
    assert emb.cokernel.modules["1"].nontrivial_invariants == (2,)
    assert emb.phi.is_injective() and classify_object(emb.q).projective_object
    emb = embed_cofibrant_into_projective(Rep.zero(a_n(2), z4))
    assert emb.q.is_zero()
    emb = embed_cofibrant_into_projective(free_id)
    assert emb.phi.is_injective() and classify_object(emb.cokernel).gorenstein_projective
    R = FPModule.free(z4, 1)
    with pytest.raises(NotCofibrant):
        embed_cofibrant_into_projective(a2_rep(z4, R, R, [[2]]))


def test_replacement_examples(zero_to_z2, z4):
    r = cofibrant_replacement(zero_to_z2)
    assert r.gp is zero_to_z2 and r.trivfib.is_iso()
    R = FPModule.free(z4, 1)
    m = a2_rep(z4, R, R, [[0]])
    r = cofibrant_replacement(m)
    assert is_gorenstein_projective(r.gp) and classify_morphism(r.trivfib).rp_trivial_fibration
    zero = Rep.zero(a_n(2), z4)
    assert cofibrant_replacement(zero).gp.is_zero()
    Z2 = FPModule.cyclic(z4, 2)
    m = a2_rep(z4, Z2, FPModule.zero(z4), [[]])
    f = fibrant_replacement(m)
    assert classify_object(f.ginj).gorenstein_injective
    assert classify_morphism(f.trivcof).ri_trivial_cofibration
    assert fibrant_replacement(zero).ginj.is_zero()


def test_fibrant_replacement_of_ginj_is_identity(free_id):
    r = fibrant_replacement(free_id)
    assert r.ginj is free_id


@settings(max_examples=30, deadline=None)
@given(rings, quivers, seeds)
def test_replacements_certified(ring, qname, seed):
    m = random_rep(ring, qname, seed)
    r = cofibrant_replacement(m)
    assert is_gorenstein_projective(r.gp) and classify_morphism(r.trivfib).rp_trivial_fibration
    f = fibrant_replacement(m)
    assert classify_object(f.ginj).gorenstein_injective
    assert classify_morphism(f.trivcof).ri_trivial_cofibration


def test_four_term_examples(zero_to_z2, free_id, z4):
    for m in (zero_to_z2, free_id):
        ft = four_term_resolution(m)
        assert ft.s.is_zero() and ft.t.is_zero() and ft.gp is m
    R = FPModule.free(z4, 1)
    ft = four_term_resolution(a2_rep(z4, R, R, [[0]]))
    assert resolution_is_exact(ft.maps)
    assert classify_object(ft.s).projective_object and classify_object(ft.t).projective_object


@settings(max_examples=25, deadline=None)
@given(rings, quivers, seeds, st.sampled_from(["cof_then_trivfib", "trivcof_then_fib"]))
def test_factorizations(ring, qname, seed, mode):
    q = FIXTURE_QUIVERS[qname]()
    M = random_instance(seed, ring, q, 2)
    N = random_instance(seed + 1, ring, q, 2)
    f = random_repmap(seed, M, N)
    res = factorize(f, mode)
    assert (res.right @ res.left).equals(f)
    fl, fr = res.certified_flags
    if mode == "cof_then_trivfib":
        assert fl.rp_cofibration and fr.rp_trivial_fibration
    else:
        assert fl.rp_cofibration and fl.weak_equivalence and fr.rp_fibration


def test_factorize_examples(zero_to_z2, z4):
    ident = RepMap.identity(zero_to_z2)
    for mode in ("cof_then_trivfib", "trivcof_then_fib"):
        res = factorize(ident, mode)
        assert (res.right @ res.left).equals(ident)
    zero = Rep.zero(a_n(2), z4)
    res = factorize(RepMap.zero(zero, zero_to_z2), "trivcof_then_fib")
    assert res.mid.to_json() == canonical_cover(zero_to_z2).projective.to_json()


@settings(max_examples=30, deadline=None)
@given(rings, quivers, seeds)
def test_lifting_against_trivial_fibrations(ring, qname, seed):
    q = FIXTURE_QUIVERS[qname]()
    M = random_instance(seed, ring, q, 2)
    p = cofibrant_replacement(random_instance(seed + 1, ring, q, 2)).trivfib
    g = random_repmap(seed, M, p.target)
    h = lift_rep_map(p, g)
    if is_gorenstein_projective(M):
        assert h is not None and (p @ h).equals(g)
    if h is not None:
        assert (p @ h).equals(g)


@settings(max_examples=30, deadline=None)
@given(rings, quivers, seeds)
def test_two_out_of_three(ring, qname, seed):
    q = FIXTURE_QUIVERS[qname]()
    A, B, C = (random_instance(seed + k, ring, q, 2) for k in range(3))
    rng = random.Random(seed)
    f = random_repmap(rng, A, B)
    g = random_repmap(rng, B, C)
    flags = [is_weak_equivalence(f), is_weak_equivalence(g), is_weak_equivalence(g @ f)]
    assert sum(flags) != 2


@settings(max_examples=30, deadline=None)
@given(rings, quivers, seeds)
def test_retract_closure(ring, qname, seed):
    q = FIXTURE_QUIVERS[qname]()
    M = random_instance(seed, ring, q, 2)
    N = random_instance(seed + 1, ring, q, 2)
    S, _, _ = direct_sum_reps([M, N])
    big, small = classify_object(S).as_dict(), classify_object(M).as_dict()
    for key, value in big.items():
        if value:
            assert small[key], key
    f = random_repmap(seed, M, M)
    g = random_repmap(seed + 1, N, N)
    from qgp.rep import direct_sum_repmaps
    fg = classify_morphism(direct_sum_repmaps([f, g])).as_dict()
    ff = classify_morphism(f).as_dict()
    for key, value in fg.items():
        if value:
            assert ff[key], key


@settings(max_examples=20, deadline=None)
@given(rings, quivers, seeds)
def test_weq_iff_replacement_weq(ring, qname, seed):
    q = FIXTURE_QUIVERS[qname]()
    M, N = random_instance(seed, ring, q, 2), random_instance(seed + 1, ring, q, 2)
    f = random_repmap(seed, M, N)
    ra, rb = cofibrant_replacement(M), cofibrant_replacement(N)
    gf = lift_rep_map(rb.trivfib, f @ ra.trivfib)
    assert gf is not None
    assert is_weak_equivalence(gf) == is_weak_equivalence(f)


def small_reps(ring, quiver):
    """Every representation with at most one generator per vertex."""
    mods = [FPModule.zero(ring)] + [FPModule.cyclic(ring, d) for d in ring.elements()]
    for choice in itertools.product(mods, repeat=len(quiver.vertices)):
        vm = dict(zip(quiver.vertices, choice))
        options = [list(module_maps(vm[a.src], vm[a.tgt])) for a in quiver.arrows]
        for maps in itertools.product(*options):
            yield Rep(quiver, ring, vm, {a.name: f for a, f in zip(quiver.arrows, maps)}, check=False)


def cover_splits_by_search(m):
    """Exhaustive search for a section of the canonical cover."""
    cov = canonical_cover(m)
    P, q = cov.projective, m.quiver
    choices = [list(module_maps(m.modules[v], P.modules[v])) for v in q.vertices]
    ident = RepMap.identity(m)
    for combo in itertools.product(*choices):
        s = RepMap(m, P, dict(zip(q.vertices, combo)), check=False)
        if validate_rep(s) is None and (cov.surjection @ s).equals(ident):
            return True
    return False


@pytest.mark.parametrize("ring", [ZMod(4), TruncPoly(2, 2)], ids=str)
@pytest.mark.parametrize("quiver", [a_n(2), kronecker()], ids=["A2", "kronecker"])
def test_projective_objects_by_exhaustion(ring, quiver):
    seen = 0
    for m in small_reps(ring, quiver):
        assert classify_object(m).projective_object == cover_splits_by_search(m)
        seen += 1
    assert seen > 20


def test_trivial_fibration_that_does_not_split(z4):
    # the replacement map of a non-GP object has projective kernel but no section
    R = FPModule.free(z4, 1)
    m = a2_rep(z4, R, R, [[2]])
    p = cofibrant_replacement(m).trivfib
    assert classify_morphism(p).rp_trivial_fibration
    K, _ = rep_kernel(p)
    assert classify_object(K).projective_object
    q = m.quiver
    choices = [list(module_maps(m.modules[v], p.source.modules[v])) for v in q.vertices]
    ident = RepMap.identity(m)
    for combo in itertools.product(*choices):
        s = RepMap(m, p.source, dict(zip(q.vertices, combo)), check=False)
        assert validate_rep(s) is not None or not (p @ s).equals(ident)
