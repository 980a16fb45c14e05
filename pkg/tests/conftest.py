import numpy as np
import pytest

import photonmol as pm


@pytest.fixture(scope="session")
def basis5():
    return pm.build_basis(5)


@pytest.fixture(scope="session")
def pipeline():
    """basis, Liouvillian, steady state for given params."""

    def run(params, n_max=5, cfg=pm.SolverConfig()):
        basis = pm.build_basis(n_max)
        if params.equal_detunings:
            h = pm.hamiltonian_normal(params, basis)
        else:
            h = pm.hamiltonian_local(params, basis)
        liouvillian = pm.build_liouvillian(params, h, basis)
        return basis, liouvillian, pm.steady_state(liouvillian, cfg)

    return run


def random_hermitian(rng, dim):
    x = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = x + x.conj().T
    return h / np.linalg.norm(h)
