import itertools

import pytest
from hypothesis import given, settings, strategies as st

from qgp.errors import CyclicError, ParseError, QuiverNameError, ValidationError
from qgp.quiver import Quiver, a_n, build_reedy_data, kronecker, point, square, validate_quiver


def all_paths_brute(q, i, j, max_len=6):
    """Arrow sequences from i to j by enumerating words in the arrows."""
    out = []
    for n in range(max_len + 1):
        for word in itertools.product(q.arrows, repeat=n):
            v, ok = i, True
            for a in word:
                if a.src != v:
                    ok = False
                    break
                v = a.tgt
            if ok and v == j:
                out.append(tuple(a.name for a in word))
    return sorted(out)


def test_validate_examples():
    assert validate_quiver(a_n(3)) is None
    loop = Quiver(["0"], [("a", "0", "0")], check=False)
    err = validate_quiver(loop)
    assert isinstance(err, CyclicError) and err.cycle == ["0", "0"]
    bad = Quiver(["0"], [("a", "0", "1")], check=False)
    assert isinstance(validate_quiver(bad), QuiverNameError)


def test_cycle_witness_is_a_cycle():
    q = Quiver(["x", "y", "z"], [("a", "x", "y"), ("b", "y", "z"), ("c", "z", "y")], check=False)
    err = validate_quiver(q)
    assert isinstance(err, CyclicError)
    cyc = err.cycle
    assert cyc[0] == cyc[-1]
    edges = {(a.src, a.tgt) for a in q.arrows}
    assert all((u, v) in edges for u, v in zip(cyc, cyc[1:]))


def test_degrees_and_incoming():
    assert build_reedy_data(a_n(3)).degree == {"0": 0, "1": 1, "2": 2}
    rd = build_reedy_data(kronecker())
    assert [a.name for a in rd.incoming["1"]] == ["a", "b"]
    rd = build_reedy_data(point())
    assert rd.degree == {"0": 0} and rd.incoming["0"] == [] and rd.outgoing["0"] == []


@pytest.mark.parametrize("q", [a_n(2), a_n(3), kronecker(), square()], ids=repr)
def test_paths_match_enumeration(q):
    rd = build_reedy_data(q)
    for i in q.vertices:
        assert [p.arrows for p in rd.paths_between(i, i)] == [()]
        for j in q.vertices:
            got = sorted(p.arrows for p in rd.paths_between(i, j))
            assert got == all_paths_brute(q, i, j)


@st.composite
def acyclic_quivers(draw):
    n = draw(st.integers(1, 5))
    verts = [f"v{k}" for k in range(n)]
    order = draw(st.permutations(verts))
    pairs = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), max_size=6)) if pairs else []
    return Quiver(verts, [(f"e{k}", s, t) for k, (s, t) in enumerate(chosen)])


@settings(max_examples=60, deadline=None)
@given(acyclic_quivers())
def test_degree_increases_and_topo_order(q):
    rd = build_reedy_data(q)
    pos = {v: k for k, v in enumerate(rd.topo_order)}
    for a in q.arrows:
        assert rd.degree[a.src] < rd.degree[a.tgt]
        assert pos[a.src] < pos[a.tgt]
    for v in q.vertices:
        longest = max((len(p.arrows) for u in q.vertices for p in rd.paths_between(u, v)), default=0)
        assert rd.degree[v] == longest


def test_custom_degree_is_validated():
    q = a_n(2)
    assert build_reedy_data(q, {"0": 3, "1": 7}).degree == {"0": 3, "1": 7}
    with pytest.raises(ValidationError):
        build_reedy_data(q, {"0": 1, "1": 1})


def test_json_round_trip_and_errors():
    q = square()
    assert Quiver.from_json(q.to_json()) == q
    with pytest.raises(ValidationError):
        Quiver.from_json({"vertices": ["0"], "arrows": [{"name": "a", "src": "0", "tgt": "0"}]})
    with pytest.raises(ParseError):
        Quiver.from_json({"arrows": []})
