import numpy as np
import pytest

from qcube.algebra import Observable, bell_projector, levels, op_norm, pauli_matrix
from qcube.calculus import variance
from qcube.classical import BooleanFn, dictator, majority
from qcube.generators import KINDS, GeneratorSpec, classical_embed, derive_seed, generate


def test_derive_seed_is_stable_and_distinct():
    assert derive_seed(42, 1, 2, 3) == derive_seed(42, 1, 2, 3)
    seeds = {derive_seed(42, law, n, i) for law in range(3) for n in range(1, 5) for i in range(20)}
    assert len(seeds) == 3 * 4 * 20


@pytest.mark.parametrize("kind", KINDS)
def test_generate_is_reproducible(kind):
    spec = GeneratorSpec(kind, 3, 123)
    a, b = generate(spec), generate(GeneratorSpec.from_dict(spec.to_dict()))
    assert np.array_equal(a.matrix, b.matrix)
    assert np.allclose(a.matrix, a.matrix.conj().T)


def test_bell_state():
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert np.allclose(generate(GeneratorSpec("bell", 2)).matrix, np.outer(phi, phi))
    assert generate(GeneratorSpec("bell", 3)).allclose(bell_projector(3))


def test_quantum_boolean_squares_to_identity():
    A = generate(GeneratorSpec("random_quantum_boolean", 3, 7))
    assert op_norm(A @ A - Observable.identity(3)) <= 1e-10


def test_pauli_character():
    A = generate(GeneratorSpec("pauli_character", 3, extras={"chars": (3, 0, 1)}))
    assert A.allclose(pauli_matrix((3, 0, 1)))
    with pytest.raises(ValueError):
        generate(GeneratorSpec("pauli_character", 2, extras={"chars": "XYZ"}))


def test_random_hermitian_unit_norm():
    for n in (1, 2, 4):
        assert op_norm(generate(GeneratorSpec("random_hermitian", n, n))) == pytest.approx(1)


def test_low_degree_respects_degree():
    A = generate(GeneratorSpec("low_degree", 4, 9, {"degree": 2}))
    assert np.all(np.abs(A.coeffs[levels(4) > 2]) < 1e-12)


def test_classical_embedding():
    assert classical_embed(dictator(2, 0)).allclose(pauli_matrix((3, 0)))
    embedded = classical_embed(majority(3))
    assert np.allclose(embedded.matrix, np.diag(np.diag(embedded.matrix)))
    assert variance(embedded) == pytest.approx(1)
    assert classical_embed(BooleanFn.from_table(np.ones(4))).allclose(Observable.identity(2))


def test_spec_validation():
    with pytest.raises(ValueError):
        GeneratorSpec("gaussian", 2)
    assert "n=2" in GeneratorSpec("bell", 2).describe()
