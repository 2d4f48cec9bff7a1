import itertools

import pytest
from hypothesis import given, settings, strategies as st

from qgp.errors import BlockMismatch, NotInjectiveModule, ValidationError
from qgp.generate import random_instance, random_repmap
from qgp.linalg import Matrix, howell_rows
from qgp.model import classify_object
from qgp.modules import FPModule, ModuleMap, hom_modules, is_exact
from qgp.oracles import latching_agrees, matching_agrees, module_maps
from qgp.quiver import FIXTURE_QUIVERS, a_n, kronecker, point
from qgp.rep import (
    CoinducedInjective,
    LambdaView,
    Rep,
    RepMap,
    canonical_cover,
    coinduced_injective,
    direct_sum_reps,
    ext1_oracle,
    hom_rep,
    induced_projective,
    lambda_conversion,
    latching,
    latching_morphism,
    matching,
    pointwise_ops,
    rep_pushout_pullback,
    validate_rep,
)
from qgp.ring import TruncPoly, ZMod

from conftest import a2_rep

RINGS = [ZMod(4), ZMod(6), TruncPoly(2, 2), TruncPoly(3, 2)]
seeds = st.integers(0, 2**32 - 1)
rings = st.sampled_from(RINGS)
quivers = st.sampled_from(sorted(FIXTURE_QUIVERS))


def brute_hom_count(M, N):
    """Number of natural transformations, by enumerating vertexwise maps."""
    q = M.quiver
    choices = [list(module_maps(M.modules[v], N.modules[v])) for v in q.vertices]
    count = 0
    for combo in itertools.product(*choices):
        f = RepMap(M, N, dict(zip(q.vertices, combo)), check=False)
        if validate_rep(f) is None:
            count += 1
    return count


def test_validate_examples(free_id, z4):
    assert validate_rep(RepMap.identity(free_id)) is None
    R = FPModule.free(z4, 1)
    bad = RepMap(free_id, free_id, {"0": ModuleMap(R, R, [[1]]), "1": ModuleMap(R, R, [[2]])}, check=False)
    v = validate_rep(bad)
    assert v.kind == "naturality" and v.where == "a0"
    Z2 = FPModule.cyclic(z4, 2)
    rep = Rep(a_n(2), z4, {"0": Z2, "1": R}, {"a0": ModuleMap(Z2, R, [[1]], check=False)}, check=False)
    assert validate_rep(rep).kind == "well-definedness"
    with pytest.raises(ValidationError):
        Rep(a_n(2), z4, {"0": Z2, "1": R}, {"a0": ModuleMap(Z2, R, [[1]], check=False)})


def test_latching_and_matching_shapes(z4):
    R, Z2 = FPModule.free(z4, 1), FPModule.cyclic(z4, 2)
    q = kronecker()
    m = Rep(q, z4, {"0": Z2, "1": R}, {"a": ModuleMap(Z2, R, [[2]]), "b": ModuleMap(Z2, R, [[0]])})
    L, lmap = latching(m, "1")
    assert L.nontrivial_invariants == (2, 2) and lmap.matrix.rows == ((2,), (0,))
    assert latching(m, "0")[0].is_zero()
    P, pmap = matching(m, "0")
    assert P.ngens == 2 and pmap.matrix.rows == ((2, 0),)
    assert matching(m, "1")[0].is_zero()
    m3 = random_instance(3, z4, a_n(3), 2)
    L, lmap = latching(m3, "2")
    assert lmap.matrix == m3.maps["a1"].matrix
    P, pmap = matching(m3, "0")
    assert pmap.matrix == m3.maps["a0"].matrix


@settings(max_examples=30, deadline=None)
@given(rings, quivers, seeds)
def test_latching_is_the_path_colimit(ring, qname, seed):
    m = random_instance(seed, ring, FIXTURE_QUIVERS[qname](), 2)
    for j in m.quiver.vertices:
        assert latching_agrees(m, j) and matching_agrees(m, j)


@settings(max_examples=20, deadline=None)
@given(rings, quivers, seeds)
def test_latching_preserves_short_exact_sequences(ring, qname, seed):
    m = random_instance(seed, ring, FIXTURE_QUIVERS[qname](), 2)
    cov = canonical_cover(m)
    for j in m.quiver.vertices:
        lk = latching_morphism(cov.inclusion, j)
        lp = latching_morphism(cov.surjection, j)
        assert lk.is_injective() and lp.is_surjective()
        assert (lp @ lk).is_zero() and is_exact(lk, lp)


def test_pointwise_examples(free_id, z4):
    K, _ = pointwise_ops(RepMap.identity(free_id), "kernel")
    assert K.is_zero()
    R = free_id.modules["0"]
    two = RepMap(free_id, free_id, {"0": ModuleMap(R, R, [[2]]), "1": ModuleMap(R, R, [[2]])})
    K, inc = pointwise_ops(two, "kernel")
    assert all(K.modules[v].nontrivial_invariants == (2,) for v in "01")
    assert K.maps["a0"].is_iso()
    C, _ = pointwise_ops(two, "cokernel")
    assert C.order() == 4
    S, _, _ = direct_sum_reps([free_id])
    assert S.to_json() == free_id.to_json()


def test_pushout_pullback_examples(free_id, z4):
    Z2, R = FPModule.cyclic(z4, 2), FPModule.free(z4, 1)
    q = point()
    A = Rep(q, z4, {"0": Z2}, {})
    B = Rep(q, z4, {"0": R}, {})
    inc = RepMap(A, B, {"0": ModuleMap(Z2, R, [[2]])})
    po = rep_pushout_pullback(inc, inc, "pushout")
    assert po.obj.order() == 8
    assert (po.left @ inc).equals(po.right @ inc)
    Zr = Rep.zero(free_id.quiver, z4)
    M = random_instance(5, z4, free_id.quiver, 2)
    po = rep_pushout_pullback(RepMap.zero(Zr, M), RepMap.zero(Zr, free_id), "pushout")
    assert po.obj.order() == M.order() * free_id.order()
    ident = RepMap.identity(M)
    pb = rep_pushout_pullback(ident, ident, "pullback")
    assert pb.left.is_iso() and pb.left.equals(pb.right)


def test_induced_projective_examples(z4):
    q = a_n(2)
    P = induced_projective(q, z4, {"0": 1})
    assert P.modules["0"].ngens == 1 and P.modules["1"].ngens == 1
    assert P.maps["a0"].matrix.rows == ((1,),)
    assert induced_projective(q, z4, {}).is_zero()
    assert induced_projective(point(), z4, {"0": 1}).modules["0"].ngens == 1


@settings(max_examples=20, deadline=None)
@given(rings, quivers, st.data())
def test_induced_and_coinduced_classify(ring, qname, data):
    q = FIXTURE_QUIVERS[qname]()
    ranks = {v: data.draw(st.integers(0, 2)) for v in q.vertices}
    assert classify_object(induced_projective(q, ring, ranks)).projective_object
    at = data.draw(st.sampled_from(q.vertices))
    E = FPModule.free(ring, data.draw(st.integers(0, 2)))
    assert classify_object(coinduced_injective(q, ring, at, E)).injective_object


def test_coinduced_examples(z4):
    R = FPModule.free(z4, 1)
    I = coinduced_injective(a_n(2), z4, "1", R)
    assert I.modules["0"].ngens == 1 and I.maps["a0"].matrix.rows == ((1,),)
    assert coinduced_injective(point(), z4, "0", R).modules["0"].ngens == 1
    assert coinduced_injective(a_n(2), z4, "1", FPModule.zero(z4)).is_zero()
    with pytest.raises(NotInjectiveModule):
        coinduced_injective(a_n(2), z4, "1", FPModule.cyclic(z4, 2))


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([ZMod(4), TruncPoly(2, 2)]), st.sampled_from(["A2", "kronecker"]), seeds, st.data())
def test_coinduced_adjunction_cardinality(ring, qname, seed, data):
    q = FIXTURE_QUIVERS[qname]()
    K = random_instance(seed, ring, q, 1)
    at = data.draw(st.sampled_from(q.vertices))
    E = FPModule.free(ring, 1)
    ci = CoinducedInjective(q, ring, at, E)
    H, _ = hom_rep(K, ci.rep)
    Hv, _ = hom_modules(K.modules[at], E)
    assert H.order == Hv.order == brute_hom_count(K, ci.rep)
    for phi in module_maps(K.modules[at], E):
        f = ci.map_from(K, phi)
        assert validate_rep(f) is None and ci.evaluate(f).equals(phi)


def test_hom_examples(free_id, zero_to_z2, z4):
    H, _ = hom_rep(free_id, free_id)
    assert H.nontrivial_invariants == (0,)
    H, _ = hom_rep(Rep.zero(free_id.quiver, z4), free_id)
    assert H.is_zero()
    H, _ = hom_rep(zero_to_z2, zero_to_z2)
    assert H.nontrivial_invariants == (2,)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([ZMod(4), TruncPoly(2, 2), ZMod(6)]), st.sampled_from(["A2", "kronecker"]), seeds)
def test_hom_matches_enumeration(ring, qname, seed):
    q = FIXTURE_QUIVERS[qname]()
    M = random_instance(seed, ring, q, 1)
    N = random_instance(seed + 1, ring, q, 2)
    H, basis = hom_rep(M, N)
    assert H.order == brute_hom_count(M, N)
    assert all(validate_rep(b) is None for b in basis)


def test_lambda_examples(z4):
    m = random_instance(11, z4, a_n(2), 2)
    view = lambda_conversion(m, "to")
    assert list(view.blocks["0"]) == list(range(m.modules["0"].ngens))
    assert lambda_conversion(Rep.zero(a_n(2), z4), "to").total.is_zero()
    broken = LambdaView(view.quiver, view.ring, view.total, {"0": range(0), "1": range(0)}, view.actions)
    if view.total.ngens:
        with pytest.raises(BlockMismatch):
            lambda_conversion(broken, "from")


@settings(max_examples=30, deadline=None)
@given(rings, quivers, seeds)
def test_lambda_round_trip(ring, qname, seed):
    m = random_instance(seed, ring, FIXTURE_QUIVERS[qname](), 2)
    back = lambda_conversion(lambda_conversion(m, "to"), "from")
    for v in m.quiver.vertices:
        a, b = m.modules[v], back.modules[v]
        assert a.ngens == b.ngens
        assert howell_rows(ring, a.relations.rows, a.ngens)[0] == howell_rows(ring, b.relations.rows, b.ngens)[0]
    for name in m.maps:
        assert back.maps[name].matrix.rows == m.maps[name].matrix.rows


def test_ext_examples(free_id, z4):
    assert all(e.is_zero() for e in ext1_oracle(free_id).values())
    assert all(e.is_zero() for e in ext1_oracle(Rep.zero(a_n(2), z4)).values())
    d = TruncPoly(2, 2)
    R = FPModule.free(d, 1)
    t = d([0, 1]).value
    m = a2_rep(d, R, R, [[t]])
    assert any(not e.is_zero() for e in ext1_oracle(m).values())
    _, lmap = latching(m, "1")
    assert not lmap.is_injective()


@settings(max_examples=30, deadline=None)
@given(rings, quivers, seeds)
def test_rep_json_round_trip(ring, qname, seed):
    q = FIXTURE_QUIVERS[qname]()
    m = random_instance(seed, ring, q, 2)
    assert Rep.from_json(m.to_json()).to_json() == m.to_json()
    f = random_repmap(seed, m, m)
    g = RepMap.from_json(m, m, f.to_json())
    assert g.equals(f)
