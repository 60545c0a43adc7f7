import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import (
    magnetic_laplacian_unsigned,
    magnetic_signed_laplacians,
    random_signed_dense,
    signed_laplacian_undirected,
    sym_and_degree,
)

from msgnn.graph import SignedDiGraph, absolute_degree, symmetrized_adjacency
from msgnn.maglap import (
    HermitianMatrix,
    NoDirectionError,
    dump_csv,
    hermitian_adjacency,
    laplacian_normalized,
    laplacian_unnormalized,
    q_max,
)


@st.composite
def graph_and_q(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    a = random_signed_dense(np.random.default_rng(seed), n, draw(st.floats(0.0, 0.9)))
    return a, draw(st.floats(0.0, 1.0))


def test_q0_examples():
    unit = SignedDiGraph.from_edge_list([(0, 1, 1.0)])
    assert q_max(unit) == 0.5
    assert q_max(SignedDiGraph.from_edge_list([(0, 1, 3.0), (1, 0, -3.0)])) == pytest.approx(1 / 12)
    with pytest.raises(NoDirectionError):
        q_max(SignedDiGraph.from_edge_list([(0, 1, 2.0), (1, 0, 2.0)]))


@pytest.mark.parametrize("sign", [1.0, -1.0])
def test_quarter_charge_one_way_edge(sign):
    h = hermitian_adjacency(SignedDiGraph.from_edge_list([(0, 1, sign)]), 0.25).toarray()
    assert h[0, 1] == pytest.approx(sign * 0.5j, abs=1e-15)
    assert h[1, 0] == pytest.approx(-h[0, 1], abs=1e-15)


@pytest.mark.parametrize("sign", [1.0, -1.0])
def test_quarter_charge_signed_phase(sign):
    # (sign / 2) * exp(i * sign * pi / 2) is i/2 for either sign
    h = hermitian_adjacency(SignedDiGraph.from_edge_list([(0, 1, sign)]), 0.25, phase="signed").toarray()
    assert h[0, 1] == pytest.approx(0.5j, abs=1e-15)
    assert h[1, 0] == pytest.approx(-0.5j, abs=1e-15)


def test_phase_conventions_agree_on_nonnegative(rng):
    a = random_signed_dense(rng, 12, 0.4, signed=False)
    g = SignedDiGraph.from_dense(a)
    assert np.array_equal(laplacian_normalized(g, 0.3).toarray(), laplacian_normalized(g, 0.3, phase="signed").toarray())


def test_unknown_phase():
    with pytest.raises(ValueError):
        hermitian_adjacency(SignedDiGraph.from_edge_list([(0, 1, 1.0)]), 0.25, phase="polar")


def test_zero_charge_is_symmetrized(rng):
    a = random_signed_dense(rng, 9, 0.4)
    g = SignedDiGraph.from_dense(a)
    at, deg = sym_and_degree(a)
    h = hermitian_adjacency(g, 0.0)
    assert h.is_real() and np.array_equal(h.toarray().real, at)
    exact = np.diag(absolute_degree(g)) - symmetrized_adjacency(g).toarray()
    lu = laplacian_unnormalized(g, 0.0)
    assert lu.is_real() and np.array_equal(lu.toarray(), exact)
    assert np.allclose(exact, np.diag(deg) - at, rtol=0, atol=1e-12)


def test_reciprocal_equal_edges_stay_real():
    g = SignedDiGraph.from_edge_list([(0, 1, -2.0), (1, 0, -2.0)])
    for q in (0.1, 0.37, 1.0):
        assert hermitian_adjacency(g, q).toarray()[0, 1] == -2.0


def test_small_laplacians():
    assert np.array_equal(laplacian_unnormalized(SignedDiGraph.from_edge_list([], n=3), 0.3).toarray(), np.zeros((3, 3)))
    und = SignedDiGraph.from_edge_list([(0, 1, 1.0), (1, 0, 1.0)])
    lu = laplacian_unnormalized(und, 0.0).toarray()
    assert np.allclose(lu, [[1, -1], [-1, 1]])
    one = SignedDiGraph.from_edge_list([(0, 1, 1.0)])
    assert np.allclose(laplacian_unnormalized(one, 0.0).toarray(), [[0.5, -0.5], [-0.5, 0.5]])
    assert np.allclose(np.linalg.eigvalsh(laplacian_unnormalized(one, 0.0).toarray()), [0, 1])
    lq = laplacian_unnormalized(one, 0.25).toarray()
    assert np.allclose(lq, [[0.5, -0.5j], [0.5j, 0.5]])
    assert np.allclose(np.linalg.eigvalsh(lq), [0, 1])
    ln = laplacian_normalized(one, 0.0).toarray()
    assert np.allclose(ln, [[1, -1], [-1, 1]])
    assert np.allclose(np.linalg.eigvalsh(ln), [0, 2])


def test_isolated_node_identity_row():
    g = SignedDiGraph.from_edge_list([(0, 1, 1.0)], n=3)
    ln = laplacian_normalized(g, 0.2).toarray()
    assert np.array_equal(ln[2], [0, 0, 1]) and np.array_equal(ln[:, 2], [0, 0, 1])


@pytest.mark.parametrize("phase", ["magnitude", "signed"])
@settings(max_examples=60, deadline=None)
@given(case=graph_and_q())
def test_matches_entrywise_oracle(phase, case):
    a, q = case
    g = SignedDiGraph.from_dense(a)
    h, lu, ln = magnetic_signed_laplacians(a, q, phase)
    assert np.allclose(hermitian_adjacency(g, q, phase).toarray(), h, atol=1e-12)
    assert np.allclose(laplacian_unnormalized(g, q, phase).toarray(), lu, atol=1e-12)
    assert np.allclose(laplacian_normalized(g, q, phase).toarray(), ln, atol=1e-12)


@settings(max_examples=80, deadline=None)
@given(graph_and_q())
def test_exact_hermitian_and_psd(case):
    a, q = case
    g = SignedDiGraph.from_dense(a)
    for m in (hermitian_adjacency(g, q), laplacian_unnormalized(g, q), laplacian_normalized(g, q)):
        d = m.toarray()
        assert np.array_equal(d, d.conj().T)
        assert np.all(np.imag(np.diag(d)) == 0)
    assert np.linalg.eigvalsh(laplacian_unnormalized(g, q).toarray()).min() >= -1e-9
    ev = np.linalg.eigvalsh(laplacian_normalized(g, q).toarray())
    assert ev.min() >= -1e-9 and ev.max() <= 2 + 1e-9


@settings(max_examples=50, deadline=None)
@given(graph_and_q())
def test_reversal_conjugates(case):
    a, q = case
    g = SignedDiGraph.from_dense(a)
    assert np.allclose(hermitian_adjacency(g.reversed(), q).toarray(), hermitian_adjacency(g, q).toarray().conj(), atol=1e-14)


def test_reduces_to_unsigned_magnetic(rng):
    for _ in range(20):
        a = random_signed_dense(rng, 10, 0.35, signed=False)
        q = rng.uniform(0, 1)
        lu, ln = magnetic_laplacian_unsigned(a, q)
        g = SignedDiGraph.from_dense(a)
        assert np.allclose(laplacian_unnormalized(g, q).toarray(), lu, atol=1e-12)
        assert np.allclose(laplacian_normalized(g, q).toarray(), ln, atol=1e-12)


def test_reduces_to_signed_laplacian(rng):
    for _ in range(20):
        a = random_signed_dense(rng, 10, 0.35, directed=False)
        lu, ln = signed_laplacian_undirected(a)
        g = SignedDiGraph.from_dense(a)
        for q in (0.0, 0.3):
            assert np.allclose(laplacian_unnormalized(g, q).toarray(), lu, atol=1e-12)
            assert np.allclose(laplacian_normalized(g, q).toarray(), ln, atol=1e-12)


def test_degree_scaling_identity(rng):
    for _ in range(30):
        a = random_signed_dense(rng, 15, 0.5)
        g = SignedDiGraph.from_dense(a)
        _, deg = sym_and_degree(a)
        live = deg > 0
        s = np.where(live, 1 / np.sqrt(np.where(live, deg, 1)), 0)
        q = rng.uniform(0, 1)
        lhs = s[:, None] * laplacian_unnormalized(g, q).toarray() * s[None, :]
        ln = laplacian_normalized(g, q).toarray()
        assert np.abs((lhs - ln)[np.ix_(live, live)]).max(initial=0) <= 1e-12


def test_large_weights_phase_reduced():
    g = SignedDiGraph.from_edge_list([(0, 1, 1e9 + 0.25)])
    h = hermitian_adjacency(g, 1.0).toarray()
    theta = np.mod(2 * np.pi * (1e9 + 0.25), 2 * np.pi)
    assert h[0, 1] == pytest.approx(0.5 * (1e9 + 0.25) * np.exp(1j * theta), rel=1e-9)


def test_dump_csv(tmp_path):
    g = SignedDiGraph.from_edge_list([(0, 1, 1.0)])
    p = tmp_path / "l.csv"
    dump_csv(laplacian_unnormalized(g, 0.25), p)
    lines = p.read_text().splitlines()
    assert lines[0] == "i,j,re,im" and len(lines) == 5


def test_scaled_operator(rng):
    a = random_signed_dense(rng, 6, 0.5)
    m = laplacian_normalized(SignedDiGraph.from_dense(a), 0.2)
    assert np.allclose(m.scaled(2.0).toarray(), m.toarray() - np.eye(6))
