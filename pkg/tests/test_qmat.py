import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sepcrit.qmat import (
    DensityMatrix,
    InvalidStateError,
    density_violations,
    kron,
    partial_trace,
    partial_transpose,
    permute_systems,
    purity,
    trace_norm,
    unvec,
    validate_density,
    vec,
)
from sepcrit.realign import realign
from sepcrit.states import bell_state, random_density

from conftest import random_complex, random_unitary

X = np.array([[0, 1], [1, 0]])


def test_kron_examples():
    np.testing.assert_array_equal(kron(np.eye(2), X), np.block([[X, np.zeros((2, 2))], [np.zeros((2, 2)), X]]))
    b = np.arange(6).reshape(2, 3)
    np.testing.assert_array_equal(kron([[1]], b), b)
    np.testing.assert_array_equal(kron(np.diag([1, 2]), np.diag([3, 4])), np.diag([3, 4, 6, 8]))


def test_kron_index_formula(rng):
    a, b = random_complex(rng, 2, 3), random_complex(rng, 4, 2)
    k = kron(a, b)
    assert k.shape == (8, 6)
    for i, j, p, q in np.ndindex(2, 3, 4, 2):
        assert k[i * 4 + p, j * 2 + q] == pytest.approx(a[i, j] * b[p, q], abs=1e-14)


def test_vec_examples():
    np.testing.assert_array_equal(vec(np.array([[1, 2], [3, 4]])).ravel(), [1, 3, 2, 4])
    v = np.array([[5], [6], [7]])
    np.testing.assert_array_equal(vec(v), v)
    np.testing.assert_array_equal(vec(np.diag([1, 0])).ravel(), [1, 0, 0, 0])


@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_vec_roundtrip(m, n, seed):
    x = random_complex(np.random.default_rng(seed), m, n)
    v = vec(x)
    assert v.shape == (m * n, 1)
    for i, j in np.ndindex(m, n):
        assert v[j * m + i, 0] == x[i, j]
    np.testing.assert_array_equal(unvec(v, m), x)


def test_trace_norm_examples(rng):
    assert trace_norm(np.diag([1, -2])) == pytest.approx(3, abs=1e-14)
    a, b = random_complex(rng, 3, 3), random_complex(rng, 2, 2)
    expected = np.linalg.norm(vec(a)) * np.linalg.norm(vec(b))
    assert trace_norm(vec(a) @ vec(b).T) == pytest.approx(expected, rel=1e-12)


def test_trace_norm_bell_realignment():
    # oracle: eigenvalues of R R^dag for the 4x4 realignment built by hand from vec of blocks
    rho = bell_state().mat
    blocks = [rho[2 * i:2 * i + 2, 2 * j:2 * j + 2] for j in range(2) for i in range(2)]
    r = np.array([b.T.reshape(-1) for b in blocks])
    oracle = np.sqrt(np.clip(np.linalg.eigvalsh(r @ r.conj().T), 0, None)).sum()
    assert oracle == pytest.approx(2.0, abs=1e-12)
    assert trace_norm(realign(rho, 2, 2)) == pytest.approx(2.0, abs=1e-12)


def test_trace_norm_rejects_nan():
    with pytest.raises(ValueError):
        trace_norm(np.array([[np.nan, 0], [0, 1]]))


def test_trace_norm_unitary_invariance(rng):
    for _ in range(20):
        x = random_complex(rng, 5, 3)
        u, v = random_unitary(rng, 5), random_unitary(rng, 3)
        assert trace_norm(u @ x @ v.conj().T) == pytest.approx(trace_norm(x), abs=1e-9)


def test_trace_norm_psd_equals_trace():
    for seed in range(20):
        rho = random_density(6, seed=seed).mat * 3.7
        assert trace_norm(rho) == pytest.approx(np.trace(rho).real, abs=1e-10)


def test_partial_trace_examples(rng):
    np.testing.assert_allclose(partial_trace(bell_state().mat, [2, 2], "A"), np.eye(2) / 2, atol=1e-15)
    ra, rb = random_density(3, seed=1).mat, random_density(2, seed=2).mat
    np.testing.assert_allclose(partial_trace(kron(ra, rb), [3, 2], "A"), ra, atol=1e-14)
    e00, e01 = np.diag([1, 0]), np.array([[0, 1], [0, 0]])
    np.testing.assert_array_equal(partial_trace(kron(e00, e01), [2, 2], "B"), e01)


def test_partial_trace_formula_and_product_rule(rng):
    a, b = random_complex(rng, 3, 3), random_complex(rng, 4, 4)
    np.testing.assert_allclose(partial_trace(kron(a, b), [3, 4], "A"), a * np.trace(b), atol=1e-12)
    np.testing.assert_allclose(partial_trace(kron(a, b), [3, 4], "B"), b * np.trace(a), atol=1e-12)
    x = random_complex(rng, 6, 6)
    out = partial_trace(x, [2, 3], "B")
    for k, l in np.ndindex(3, 3):
        assert out[k, l] == pytest.approx(sum(x[i * 3 + k, i * 3 + l] for i in range(2)))


def test_partial_trace_dimension_mismatch():
    with pytest.raises(ValueError):
        partial_trace(np.eye(5), [2, 2])


def test_partial_transpose_bell_and_formula(rng):
    pt = partial_transpose(bell_state(), 1)
    expected = 0.5 * np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    np.testing.assert_allclose(pt, expected, atol=1e-15)
    assert np.linalg.eigvalsh(pt)[0] == pytest.approx(-0.5, abs=1e-12)

    rho = random_density(6, seed=3, dims=[2, 3])
    out = partial_transpose(rho, 1)
    for i, j, k, l in np.ndindex(2, 2, 3, 3):
        assert out[i * 3 + k, j * 3 + l] == rho.mat[i * 3 + l, j * 3 + k]
    np.testing.assert_allclose(out, out.conj().T, atol=1e-14)
    assert np.trace(out).real == pytest.approx(1)


def test_partial_transpose_product_state_psd():
    ra, rb = random_density(2, seed=4).mat, random_density(3, seed=5).mat
    pt = partial_transpose(DensityMatrix(kron(ra, rb), (2, 3)), 1)
    np.testing.assert_allclose(pt, kron(ra, rb.T), atol=1e-15)
    assert np.linalg.eigvalsh(pt)[0] > -1e-12


def test_partial_transpose_involution():
    rho = random_density(12, seed=6, dims=[2, 3, 2])
    twice = partial_transpose(DensityMatrix(partial_transpose(rho, [0, 2]), rho.dims), [0, 2])
    np.testing.assert_array_equal(twice, rho.mat)


def test_partial_transpose_bad_index():
    with pytest.raises(ValueError):
        partial_transpose(bell_state(), 2)


def test_permute_systems_swap():
    ra, rb = random_density(2, seed=7).mat, random_density(3, seed=8).mat
    swapped = permute_systems(DensityMatrix(kron(ra, rb), (2, 3)), [1, 0])
    assert swapped.dims == (3, 2)
    np.testing.assert_allclose(swapped.mat, kron(rb, ra), atol=1e-15)


@settings(max_examples=30)
@given(st.permutations([0, 1, 2]), st.integers(0, 2**32 - 1))
def test_permute_inverse_roundtrip(perm, seed):
    rho = random_density(12, seed=seed, dims=[2, 3, 2])
    inv = list(np.argsort(perm))
    back = permute_systems(permute_systems(rho, perm), inv)
    np.testing.assert_array_equal(back.mat, rho.mat)
    np.testing.assert_array_equal(permute_systems(rho, [0, 1, 2]).mat, rho.mat)


def test_permute_rejects_bad_perm():
    with pytest.raises(ValueError):
        permute_systems(random_density(4, seed=0, dims=[2, 2]), [0, 0])


def test_purity_examples():
    assert purity(bell_state()) == pytest.approx(1)
    assert purity(DensityMatrix(np.eye(5) / 5)) == pytest.approx(1 / 5)
    assert purity(DensityMatrix(np.eye(2) / 2)) == pytest.approx(1 / 2)


def test_validate_density():
    rho = validate_density(np.eye(4) / 4, [2, 2])
    assert rho.dims == (2, 2)
    assert [v.invariant for v in density_violations(np.eye(2))] == ["trace"]
    with pytest.raises(InvalidStateError) as err:
        validate_density(np.diag([1.5, -0.5]))
    (v,) = err.value.violations
    assert v.invariant == "psd" and v.magnitude == pytest.approx(0.5)
    bad = density_violations(np.array([[0.5, 1], [0, 0.5]]), [3])
    assert {v.invariant for v in bad} >= {"hermitian", "dims"}


def test_density_matrix_shape_checks():
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(4), (2, 3))
    with pytest.raises(ValueError):
        DensityMatrix(np.ones((2, 3)))
    rho = DensityMatrix(np.eye(8) / 8, (2, 2, 2))
    assert rho.bipartite_dims(2) == (4, 2)
    with pytest.raises(ValueError):
        rho.bipartite_dims(3)
