import numpy as np
import pytest
import scipy.sparse.linalg as sla
from hypothesis import given, settings, strategies as st

from pauligraph import graphs as gr
from pauligraph.numerics import (
    LanczosConvergenceError,
    NotHermitianError,
    eigh,
    expectation,
    extreme_eigs,
    is_psd,
    min_eigenvalue,
    partial_transpose,
    purity,
    random_density,
    random_pure_state,
    swap_operator,
    symmetric_dimension,
    symmetric_isometry,
)
from pauligraph.pauli import PauliSumOperator, parse_pauli, to_matrix
from pauligraph.represent import edge_saur, standard_saur


def random_hermitian(d, rng):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (a + a.conj().T) / 2


def test_eigh_basic():
    vals, _ = eigh(to_matrix(parse_pauli("Z")))
    np.testing.assert_allclose(vals, [-1, 1])
    with pytest.raises(NotHermitianError):
        eigh(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        eigh(np.ones((2, 3)))


def test_eigh_reconstruction(rng):
    m = random_hermitian(16, rng)
    vals, vecs = eigh(m)
    np.testing.assert_allclose(vecs @ np.diag(vals) @ vecs.conj().T, m, atol=1e-9)
    assert vals.sum() == pytest.approx(np.trace(m).real, abs=1e-10)


def test_c7bar_standard_saur_sum_spectrum():
    ops = standard_saur(gr.anticycle(7))
    h = sum(to_matrix(s) for s in ops)
    vals, vecs = eigh(h)
    top = vecs[:, -1]
    assert expectation(h, top) == pytest.approx(vals[-1])
    # Lanczos on the same operator agrees with the dense result
    res = extreme_eigs(h, "both")
    assert res.maximum == pytest.approx(vals[-1], abs=1e-8)
    assert res.minimum == pytest.approx(vals[0], abs=1e-8)


def test_lanczos_fourteen_qubits():
    g = gr.anticycle(7)
    strings = edge_saur(g)
    h = PauliSumOperator([(1.0, s) for s in strings])
    res = extreme_eigs(h, "both")
    assert res.maximum == pytest.approx(1 + 2 * np.sqrt(2), abs=1e-5)
    assert res.minimum == pytest.approx(-(1 + 2 * np.sqrt(2)), abs=1e-5)
    hv = h.matvec(res.max_vector)
    assert np.linalg.norm(hv - res.maximum * res.max_vector) < 1e-6


def test_lanczos_single_string():
    h = PauliSumOperator([(1.0, parse_pauli("ZZZ"))])
    res = extreme_eigs(h)
    assert res.minimum == pytest.approx(-1) and res.maximum == pytest.approx(1)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_lanczos_matches_dense_on_random_sums(seed):
    rng = np.random.default_rng(seed)
    labels = ["".join(rng.choice(list("IXYZ"), 6)) for _ in range(5)]
    coeffs = rng.standard_normal(5)
    h = PauliSumOperator([(a, parse_pauli(s)) for a, s in zip(coeffs, labels)])
    dense = np.linalg.eigvalsh(h.to_matrix())
    res = extreme_eigs(h, "both", seed=seed)
    assert res.maximum == pytest.approx(dense[-1], abs=1e-8)
    assert res.minimum == pytest.approx(dense[0], abs=1e-8)
    # never overshoots the true extremes
    assert res.maximum <= dense[-1] + 1e-8 and res.minimum >= dense[0] - 1e-8


def test_lanczos_against_arpack(rng):
    m = random_hermitian(300, rng)
    ours = extreme_eigs(m, "max", tol=1e-10)
    ref = sla.eigsh(m, k=1, which="LA", return_eigenvectors=False)[0]
    assert ours.maximum == pytest.approx(ref, abs=1e-8)
    assert ours.minimum is None


def test_lanczos_deterministic_and_guards(rng):
    m = random_hermitian(50, rng)
    a, b = extreme_eigs(m, seed=3), extreme_eigs(m, seed=3)
    assert a.maximum == b.maximum and a.iterations == b.iterations
    with pytest.raises(ValueError):
        extreme_eigs(PauliSumOperator([(1.0, parse_pauli("Z" * 25))]))
    with pytest.raises(ValueError):
        extreme_eigs(m, which="top")


def test_lanczos_non_convergence_reports_estimate(rng):
    m = random_hermitian(200, rng)
    with pytest.raises(LanczosConvergenceError) as exc:
        extreme_eigs(m, "max", tol=1e-14, max_iter=3)
    assert exc.value.estimate <= np.linalg.eigvalsh(m)[-1] + 1e-10


def test_partial_transpose_bell_state():
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    rho = np.outer(bell, bell)
    assert min_eigenvalue(partial_transpose(rho, (2, 2))) == pytest.approx(-0.5)
    assert not is_psd(partial_transpose(rho, (2, 2)))
    with pytest.raises(ValueError):
        partial_transpose(rho, (2, 3))


def test_partial_transpose_against_einsum(rng):
    m = random_hermitian(6, rng)
    ref = np.einsum("ajbk->akbj", m.reshape(2, 3, 2, 3)).reshape(6, 6)
    pt = partial_transpose(m, (2, 3))
    np.testing.assert_allclose(pt, ref)
    np.testing.assert_allclose(partial_transpose(pt, (2, 3)), m)
    assert np.trace(pt) == pytest.approx(np.trace(m))
    np.testing.assert_allclose(pt, pt.conj().T)


def test_swap_operator():
    f = swap_operator(2)
    np.testing.assert_array_equal(f @ f, np.eye(4))
    a, b = np.arange(3.0), np.array([1.0, -2.0, 5.0])
    np.testing.assert_allclose(swap_operator(3) @ np.kron(a, b), np.kron(b, a))


@pytest.mark.parametrize("d,k", [(2, 2), (3, 2), (4, 2), (2, 3), (3, 3)])
def test_symmetric_isometry(d, k):
    v = symmetric_isometry(d, k)
    assert v.shape == (d**k, symmetric_dimension(d, k))
    np.testing.assert_allclose(v.T @ v, np.eye(v.shape[1]), atol=1e-12)
    f = swap_operator(d)
    first_pair = np.kron(f, np.eye(d ** (k - 2)))
    np.testing.assert_allclose(first_pair @ v, v, atol=1e-12)


def test_ladder_dual_matrix_is_psd():
    def m(label):
        return to_matrix(parse_pauli(label))

    w = m("IYIY") + m("XXXX") + m("ZZZZ") - m("YYYY")
    dual = np.eye(16) - m("XZXZ") - m("YIYI") - m("ZXZX") - w
    assert is_psd(dual, 1e-9)


def test_random_states():
    assert random_pure_state(1, seed=0).shape == (1,)
    assert abs(random_pure_state(1, seed=0)[0]) == pytest.approx(1)
    np.testing.assert_array_equal(random_pure_state(8, seed=5), random_pure_state(8, seed=5))
    np.testing.assert_array_equal(random_density(4, seed=5), random_density(4, seed=5))
    with pytest.raises(ValueError):
        random_density(3, seed=0, rank=4)


@pytest.mark.parametrize("rank", [1, 2, 4])
def test_random_density_valid(rank):
    for seed in range(20):
        rho = random_density(4, seed=seed, rank=rank)
        assert min_eigenvalue(rho) >= -1e-10
        assert np.trace(rho).real == pytest.approx(1, abs=1e-12)
        assert np.linalg.matrix_rank(rho, tol=1e-10) == rank


def test_wishart_mean_purity():
    # E tr(rho^2) for normalized complex Wishart d x k is (d + k) / (d k + 1)
    samples = [purity(random_density(4, seed=s, rank=4)) for s in range(1000)]
    expected = 8 / 17
    assert np.mean(samples) == pytest.approx(expected, rel=0.1)


def test_expectation_pure_and_mixed():
    z = to_matrix(parse_pauli("Z"))
    assert expectation(z, np.array([1, 0])) == 1
    assert expectation(z, np.eye(2) / 2) == 0
