import numpy as np
import pytest

from meanking.errors import DimensionMismatchError, IncompleteBasisError, NotNormalizedError
from meanking.qudit import (
    Ket,
    Operator,
    apply,
    basis_ket,
    inner,
    measure_first_particle,
    measure_in_basis,
    root_of_unity,
    schmidt_coefficients,
    tensor,
)


def computational(d):
    return [basis_ket(d, n) for n in range(d)]


@pytest.mark.parametrize("k, expected", [(0, 1 + 0j), (3, 1 + 0j), (1, -0.5 + 0.8660254j), (-1, -0.5 - 0.8660254j)])
def test_root_of_unity_d3(k, expected):
    assert abs(root_of_unity(3, k) - expected) < 1e-7


def test_tensor_index_order():
    assert np.argmax(np.abs(tensor(basis_ket(3, 0), basis_ket(3, 0)).amplitudes)) == 0
    assert np.argmax(np.abs(tensor(basis_ket(3, 1), basis_ket(3, 2)).amplitudes)) == 5


def test_inner_products():
    assert inner(basis_ket(3, 0), basis_ket(3, 0)) == 1
    assert inner(basis_ket(3, 0), basis_ket(3, 1)) == 0
    with pytest.raises(DimensionMismatchError):
        inner(basis_ket(3, 0), basis_ket(5, 0))


def test_inner_is_conjugate_linear_in_first_argument():
    a = Ket([1j, 0, 0])
    assert inner(a, basis_ket(3, 0)) == -1j


def test_identity_and_apply():
    psi = Ket(np.array([1, 1j, -1]) / np.sqrt(3))
    assert apply(Operator.identity(3), psi).allclose(psi)


def test_operator_power_and_dagger():
    x = Operator(np.roll(np.eye(5), 1, axis=0))
    assert x.power(5).allclose(Operator.identity(5))
    assert x.power(-1).allclose(x.dagger())
    assert (x @ x.power(-1)).allclose(Operator.identity(5))
    assert x.is_unitary()
    assert not x.is_hermitian()


def test_kets_are_read_only():
    k = basis_ket(3, 0)
    with pytest.raises(ValueError):
        k.amplitudes[0] = 2


def test_measure_cb_state_is_certain():
    outcomes = measure_in_basis(basis_ket(3, 0), computational(3))
    assert [round(o.probability, 12) for o in outcomes] == [1.0, 0.0, 0.0]
    assert outcomes[0].post_state.allclose(basis_ket(3, 0))


def test_measure_uniform_superposition():
    psi = Ket(np.ones(3) / np.sqrt(3))
    for o in measure_in_basis(psi, computational(3)):
        assert o.probability == pytest.approx(1 / 3)


def test_measure_rejects_unnormalized_state():
    with pytest.raises(NotNormalizedError):
        measure_in_basis(Ket([1, 1, 0]), computational(3))


def test_measure_rejects_incomplete_basis():
    with pytest.raises(IncompleteBasisError):
        measure_in_basis(basis_ket(3, 0), computational(3)[:2])
    with pytest.raises(IncompleteBasisError):
        measure_in_basis(basis_ket(3, 0), [basis_ket(3, 0)] * 3)


def test_sampled_measurement_is_reproducible():
    psi = Ket(np.ones(5) / np.sqrt(5))
    first = [measure_in_basis(psi, computational(5), rng_seed=np.random.SeedSequence(9, spawn_key=(t,)))[0].index for t in range(20)]
    second = [measure_in_basis(psi, computational(5), rng_seed=np.random.SeedSequence(9, spawn_key=(t,)))[0].index for t in range(20)]
    assert first == second


def test_sampling_never_picks_zero_probability_outcome():
    psi = Ket(np.array([1, 0, 1]) / np.sqrt(2))
    for seed in range(50):
        assert measure_in_basis(psi, computational(3), rng_seed=seed)[0].index != 1


def test_measure_first_particle_on_product_state():
    state = tensor(basis_ket(3, 2), basis_ket(3, 1))
    outcomes = measure_first_particle(state, computational(3))
    assert outcomes[2].probability == pytest.approx(1.0)
    assert outcomes[2].post_state.allclose(state)


def test_measure_first_particle_on_balance_state():
    d = 3
    balance = Ket(np.eye(d).reshape(-1) / np.sqrt(d))
    for o in measure_first_particle(balance, computational(d)):
        assert o.probability == pytest.approx(1 / d)
        assert o.post_state.allclose(tensor(basis_ket(d, o.index), basis_ket(d, o.index)))


def test_schmidt_coefficients():
    product = tensor(basis_ket(3, 0), basis_ket(3, 1))
    np.testing.assert_allclose(schmidt_coefficients(product, 3), [1, 0, 0], atol=1e-12)
    balance = Ket(np.eye(3).reshape(-1) / np.sqrt(3))
    np.testing.assert_allclose(schmidt_coefficients(balance, 3), [3 ** -0.5] * 3, atol=1e-12)


def random_ket(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return Ket(v / np.linalg.norm(v))


def random_unitary(rng, dim):
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return Operator(q * (np.diag(r) / np.abs(np.diag(r))))


@pytest.mark.parametrize("seed", range(5))
def test_tensor_norm_is_product_of_norms(seed):
    rng = np.random.default_rng(seed)
    a = Ket(rng.normal(size=3) + 1j * rng.normal(size=3))
    b = Ket(rng.normal(size=5) + 1j * rng.normal(size=5))
    assert tensor(a, b).norm() == pytest.approx(a.norm() * b.norm())


@pytest.mark.parametrize("seed", range(5))
def test_inner_factorizes_over_tensor(seed):
    rng = np.random.default_rng(seed)
    a, c = random_ket(rng, 3), random_ket(rng, 3)
    b, e = random_ket(rng, 5), random_ket(rng, 5)
    assert inner(tensor(a, b), tensor(c, e)) == pytest.approx(inner(a, c) * inner(b, e))


@pytest.mark.parametrize("seed", range(5))
def test_apply_unitary_preserves_norm(seed):
    rng = np.random.default_rng(seed)
    u = random_unitary(rng, 7)
    assert u.is_unitary()
    psi = random_ket(rng, 7)
    assert apply(u, psi).norm() == pytest.approx(1.0)


@pytest.mark.parametrize("seed", range(5))
def test_born_probabilities_sum_to_one(seed):
    rng = np.random.default_rng(seed)
    psi = random_ket(rng, 5)
    basis = [Ket(col) for col in random_unitary(rng, 5).entries.T]
    assert sum(o.probability for o in measure_in_basis(psi, basis)) == pytest.approx(1.0)
    assert sum(o.probability for o in measure_in_basis(psi, computational(5))) == pytest.approx(1.0)
    pair = random_ket(rng, 9)
    assert sum(o.probability for o in measure_first_particle(pair, computational(3))) == pytest.approx(1.0)
