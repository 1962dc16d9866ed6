"""Pure-Python (numpy) counterparts of the compiled kernels in ``_kernels.pyx``.

Same call signatures and return values; used when the extension is not built
or when ``EADSIM_PURE=1`` is set.
"""

import numpy as np

LN2 = np.log(2.0)


def jacobi_eigh(a, tol=1e-14, max_sweeps=100):
    # LAPACK stands in for the Jacobi sweeps here; both return ascending
    # eigenvalues with orthonormal eigenvector columns.
    w, v = np.linalg.eigh(np.asarray(a, dtype=np.complex128))
    return w, v


def _product_vectors(x):
    params = np.asarray(x, dtype=np.float64).reshape(-1, 5)
    ta, fa, tb, fb, u = params.T
    ea, eb = np.exp(1j * fa), np.exp(1j * fb)
    zero = np.zeros_like(ta)
    a = np.stack([np.cos(ta / 2), ea * np.sin(ta / 2)], axis=1)
    b = np.stack([np.cos(tb / 2), eb * np.sin(tb / 2)], axis=1)
    da_t = np.stack([-0.5 * np.sin(ta / 2), 0.5 * ea * np.cos(ta / 2)], axis=1)
    da_f = np.stack([zero, 1j * ea * np.sin(ta / 2)], axis=1)
    db_t = np.stack([-0.5 * np.sin(tb / 2), 0.5 * eb * np.cos(tb / 2)], axis=1)
    db_f = np.stack([zero, 1j * eb * np.sin(tb / 2)], axis=1)

    def outer(p, q):
        return (p[:, :, None] * q[:, None, :]).reshape(-1, 4)

    v = outer(a, b)
    dv = np.stack([outer(da_t, b), outer(da_f, b), outer(a, db_t), outer(a, db_f)], axis=1)
    return u, v, dv


def mix_product_states(x, floor):
    u, v, _ = _product_vectors(x)
    p = u * u / np.sum(u * u)
    sigma = np.einsum("k,ki,kj->ij", p, v, v.conj())
    return (1.0 - floor) * sigma + 0.25 * floor * np.eye(4)


def separable_objective(x, rho, entropy_term, floor):
    u, v, dv = _product_vectors(x)
    norm = np.sum(u * u)
    p = u * u / norm
    sigma = (1.0 - floor) * np.einsum("k,ki,kj->ij", p, v, v.conj()) + 0.25 * floor * np.eye(4)
    mu, vecs = np.linalg.eigh(sigma)
    mu = np.maximum(mu, 1e-300)
    lm = np.log(mu)
    t = vecs.conj().T @ np.asarray(rho) @ vecs
    value = (entropy_term - np.real(np.diag(t)) @ lm) / LN2

    dm = mu[:, None] - mu[None, :]
    close = np.abs(dm) <= 1e-12 * (mu[:, None] + mu[None, :])
    gamma = np.where(close, 2.0 / (mu[:, None] + mu[None, :]),
                     (lm[:, None] - lm[None, :]) / np.where(close, 1.0, dm))
    g = (1.0 - floor) * (vecs @ (gamma * t) @ vecs.conj().T)

    gk = np.real(np.einsum("ki,ij,kj->k", v.conj(), g, v))
    grad = np.empty((len(u), 5))
    grad[:, :4] = -2.0 * p[:, None] * np.real(np.einsum("ki,ij,kdj->kd", v.conj(), g, dv)) / LN2
    grad[:, 4] = -2.0 * u / norm * (gk - p @ gk) / LN2
    return float(value), grad.ravel()
