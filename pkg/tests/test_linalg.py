import functools
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from qgp.errors import NoSolution, ShapeMismatch
from qgp.linalg import (
    LinearSystem,
    Matrix,
    howell_form,
    kernel_matrix,
    smith_invariants,
    smith_rows,
    solve_linear,
)
from qgp.oracles import VectorTables, brute_kernel
from qgp.ring import TruncPoly, ZMod


@functools.lru_cache(maxsize=None)
def tables(ring, n):
    return VectorTables(ring, n)


def span_of(ring, rows, n):
    return tables(ring, n).span(rows)


def test_howell_identity_and_zero():
    r = ZMod(4)
    eye = Matrix.identity(r, 2)
    assert howell_form(eye).H == eye
    assert howell_form(Matrix.zeros(r, 3, 2)).H.nrows == 0


def test_howell_span_example():
    r = ZMod(4)
    A = Matrix(r, [[2, 1], [0, 2]], 2)
    hf = howell_form(A)
    assert span_of(r, hf.H.rows, 2) == span_of(r, A.rows, 2)
    assert hf.U @ A == hf.H


def test_howell_captures_hidden_span():
    # [2, 1] alone: 2·[2,1] = [0,2] must appear although no echelon row shows it
    r = ZMod(4)
    hf = howell_form(Matrix(r, [[2, 1]], 2))
    assert (0, 2) in hf.H.rows


@pytest.mark.parametrize("ring,a,expected", [
    (ZMod(4), 2, {0, 2}),
    (TruncPoly(2, 2), TruncPoly(2, 2)([0, 1]).value, {0, TruncPoly(2, 2)([0, 1]).value}),
])
def test_kernel_of_scalar(ring, a, expected):
    K = kernel_matrix(Matrix(ring, [[a]], 1))
    t = tables(ring, 1)
    assert {t.vectors[i][0] for i in t.span(K.rows)} == expected


def test_kernel_of_identity():
    r = ZMod(4)
    K = kernel_matrix(Matrix.identity(r, 3))
    assert all(not any(row) for row in K.rows)


def test_solve_examples():
    r = ZMod(4)
    sol = solve_linear(Matrix(r, [[2]], 1), Matrix(r, [[2]], 1))
    assert sol.particular.rows[0][0] in (1, 3)
    t = tables(r, 1)
    assert {t.vectors[i][0] for i in t.span(sol.kernel.rows)} == {0, 2}
    with pytest.raises(NoSolution):
        solve_linear(Matrix(r, [[2]], 1), Matrix(r, [[1]], 1))
    B = Matrix(r, [[1, 2], [3, 0]], 2)
    sol = solve_linear(Matrix.identity(r, 2), B)
    assert sol.particular == B
    with pytest.raises(ShapeMismatch):
        solve_linear(Matrix.identity(r, 2), Matrix(r, [[1]], 1))


def test_smith_examples():
    r = ZMod(4)
    assert smith_invariants(Matrix.diag(r, [2, 1])) == [1, 2]
    assert smith_invariants(Matrix.zeros(r, 0, 1)) == [0]
    d = TruncPoly(2, 2)
    t = d([0, 1]).value
    assert smith_invariants(Matrix(d, [[t]], 1)) == [t]


def matrices(ring, max_dim=3):
    return st.integers(1, max_dim).flatmap(lambda m: st.integers(1, max_dim).flatmap(
        lambda n: st.lists(st.lists(st.integers(0, ring.size - 1), min_size=n, max_size=n),
                           min_size=m, max_size=m).map(lambda rows: Matrix(ring, rows, n))))


RINGS = [ZMod(4), ZMod(6), ZMod(8), ZMod(9), TruncPoly(2, 2), TruncPoly(3, 2)]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(RINGS).flatmap(lambda r: matrices(r)))
def test_howell_properties(A):
    ring, n = A.ring, A.ncols
    hf = howell_form(A)
    assert span_of(ring, hf.H.rows, n) == span_of(ring, A.rows, n)
    assert howell_form(hf.H).H == hf.H
    assert hf.U @ A == hf.H


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(RINGS).flatmap(lambda r: matrices(r)))
def test_kernel_matches_enumeration(A):
    ring = A.ring
    tin, tout = tables(ring, A.nrows), tables(ring, A.ncols)
    K = kernel_matrix(A)
    assert tin.span(K.rows) == brute_kernel(ring, A.rows, A.ncols, tin, tout)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(RINGS).flatmap(lambda r: matrices(r)), st.data())
def test_solve_matches_enumeration(A, data):
    ring = A.ring
    b = data.draw(st.lists(st.integers(0, ring.size - 1), min_size=A.ncols, max_size=A.ncols))
    reachable = any(A.vecmul(list(x)) == b for x in itertools.product(ring.elements(), repeat=A.nrows))
    try:
        sol = solve_linear(A, Matrix(ring, [b], A.ncols))
    except NoSolution:
        assert not reachable
        return
    assert reachable
    x = sol.particular.rows[0]
    for k in sol.kernel.rows:
        y = ring.axpy(1, k, list(x))
        assert A.vecmul(y) == b


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(RINGS).flatmap(lambda r: matrices(r)))
def test_smith_chain_and_cardinality(A):
    ring = A.ring
    d = smith_invariants(A)
    assert len(d) == A.ncols
    for a, b in zip(d, d[1:]):
        assert ring.divides(a, b)
    size = 1
    for x in d:
        size *= ring.quotient_size(x)
    assert size * len(span_of(ring, A.rows, A.ncols)) == ring.size ** A.ncols


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(RINGS).flatmap(lambda r: matrices(r)))
def test_smith_transform_maps_span_to_diagonal(A):
    ring, n = A.ring, A.ncols
    diag, V, Vinv = smith_rows(ring, A.rows, n)
    V, Vinv = Matrix(ring, V, n), Matrix(ring, Vinv, n)
    assert V @ Vinv == Matrix.identity(ring, n)
    moved = span_of(ring, (A @ V).rows, n)
    assert moved == span_of(ring, Matrix.diag(ring, diag).rows, n)


def test_linear_system_matrix_unknown():
    # find X (1x1) with 2·X ≡ 2 mod 4 and X·3 ≡ 3 modulo the span of [2]
    r = ZMod(4)
    ls = LinearSystem(r)
    X = ls.unknown(1, 1)
    ls.equation([(Matrix(r, [[2]], 1), X, Matrix.identity(r, 1))], Matrix(r, [[2]], 1))
    ls.equation([(Matrix.identity(r, 1), X, Matrix(r, [[3]], 1))], Matrix(r, [[3]], 1),
                modulo=Matrix(r, [[2]], 1))
    blocks, _ = ls.solve()
    x = blocks[0].rows[0][0]
    assert x % 2 == 1
