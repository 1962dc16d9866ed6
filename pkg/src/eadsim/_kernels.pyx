# cython: language_level=3
"""Compiled kernels: cyclic Jacobi eigensolver and the separable-ansatz
relative-entropy objective used by the REE minimizer."""

import numpy as np
cimport numpy as cnp
from libc.math cimport atan2, cos, sin, sqrt, log, fabs
from libc.stdlib cimport malloc, free
from libc.float cimport DBL_MIN

cnp.import_array()

cdef extern from "complex.h" nogil:
    double cabs(double complex)
    double complex conj(double complex)
    double creal(double complex)
    double cimag(double complex)
    double complex cexp(double complex)

cdef double LN2 = 0.6931471805599453


cdef int _jacobi(double complex* A, double complex* V, double* w, int n,
                 double tol, int max_sweeps) noexcept nogil:
    """In-place cyclic Jacobi on Hermitian ``A`` (row-major, n x n).

    On return the diagonal of ``A`` holds the eigenvalues (unsorted), ``V``
    the eigenvectors as columns, ``w`` the real diagonal. Returns the number
    of sweeps, or -1 when the sweep cap was hit.
    """
    cdef int i, j, k, p, q, sweep
    cdef double off, fro, r, theta, c, s, app, aqq
    cdef double complex e, akp, akq, apk, aqk
    for i in range(n):
        for j in range(n):
            V[i * n + j] = 1.0 if i == j else 0.0
    for sweep in range(max_sweeps + 1):
        off = 0.0
        fro = 0.0
        for i in range(n):
            for j in range(n):
                r = cabs(A[i * n + j])
                fro += r * r
                if i != j:
                    off += r * r
        if sqrt(off) <= tol * sqrt(fro) or off == 0.0:
            for i in range(n):
                w[i] = creal(A[i * n + i])
            return sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                r = cabs(A[p * n + q])
                if r < DBL_MIN:
                    A[p * n + q] = 0.0
                    A[q * n + p] = 0.0
                    continue
                # component-wise: limited-range complex division would square r
                e = creal(A[p * n + q]) / r + 1j * (cimag(A[p * n + q]) / r)
                app = creal(A[p * n + p])
                aqq = creal(A[q * n + q])
                theta = 0.5 * atan2(2.0 * r, aqq - app)
                c = cos(theta)
                s = sin(theta)
                # columns: A <- A G
                for k in range(n):
                    akp = A[k * n + p]
                    akq = A[k * n + q]
                    A[k * n + p] = c * akp - s * conj(e) * akq
                    A[k * n + q] = s * e * akp + c * akq
                    akp = V[k * n + p]
                    akq = V[k * n + q]
                    V[k * n + p] = c * akp - s * conj(e) * akq
                    V[k * n + q] = s * e * akp + c * akq
                # rows: A <- G^dagger A
                for k in range(n):
                    apk = A[p * n + k]
                    aqk = A[q * n + k]
                    A[p * n + k] = c * apk - s * e * aqk
                    A[q * n + k] = s * conj(e) * apk + c * aqk
                A[p * n + q] = 0.0
                A[q * n + p] = 0.0
                A[p * n + p] = creal(A[p * n + p])
                A[q * n + q] = creal(A[q * n + q])
    for i in range(n):
        w[i] = creal(A[i * n + i])
    return -1


def jacobi_eigh(a, double tol=1e-14, int max_sweeps=100):
    """Eigen-decomposition of a Hermitian matrix; ascending eigenvalues."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] work = np.array(a, dtype=np.complex128, order="C", copy=True)
    cdef int n = work.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] vecs = np.empty((n, n), dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] vals = np.empty(n, dtype=np.float64)
    cdef int sweeps
    with nogil:
        sweeps = _jacobi(&work[0, 0], &vecs[0, 0], &vals[0], n, tol, max_sweeps)
    if sweeps < 0:
        raise ArithmeticError("Jacobi eigensolver did not converge")
    order = np.argsort(vals, kind="stable")
    return vals[order], vecs[:, order]


cdef void _product_vectors(const double* x, int k, double complex* v,
                           double complex* dv, double* u) noexcept nogil:
    # v: k x 4; dv: k x 4 x 4 (d/d thetaA, phiA, thetaB, phiB)
    cdef int c, i, j
    cdef double ta, fa, tb, fb
    cdef double complex a[2]
    cdef double complex b[2]
    cdef double complex dat[2]
    cdef double complex daf[2]
    cdef double complex dbt[2]
    cdef double complex dbf[2]
    cdef double complex ea, eb
    for c in range(k):
        ta = x[5 * c]
        fa = x[5 * c + 1]
        tb = x[5 * c + 2]
        fb = x[5 * c + 3]
        u[c] = x[5 * c + 4]
        ea = cexp(1j * fa)
        eb = cexp(1j * fb)
        a[0] = cos(0.5 * ta)
        a[1] = ea * sin(0.5 * ta)
        b[0] = cos(0.5 * tb)
        b[1] = eb * sin(0.5 * tb)
        dat[0] = -0.5 * sin(0.5 * ta)
        dat[1] = 0.5 * ea * cos(0.5 * ta)
        daf[0] = 0.0
        daf[1] = 1j * ea * sin(0.5 * ta)
        dbt[0] = -0.5 * sin(0.5 * tb)
        dbt[1] = 0.5 * eb * cos(0.5 * tb)
        dbf[0] = 0.0
        dbf[1] = 1j * eb * sin(0.5 * tb)
        for i in range(2):
            for j in range(2):
                v[c * 4 + 2 * i + j] = a[i] * b[j]
                dv[(c * 4 + 0) * 4 + 2 * i + j] = dat[i] * b[j]
                dv[(c * 4 + 1) * 4 + 2 * i + j] = daf[i] * b[j]
                dv[(c * 4 + 2) * 4 + 2 * i + j] = a[i] * dbt[j]
                dv[(c * 4 + 3) * 4 + 2 * i + j] = a[i] * dbf[j]


def mix_product_states(x, double floor):
    """Separable state encoded by the flat parameter vector ``x``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.ascontiguousarray(x, dtype=np.float64)
    cdef int k = xs.shape[0] // 5
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] sigma = np.zeros((4, 4), dtype=np.complex128)
    cdef double complex* v = <double complex*> malloc(4 * k * sizeof(double complex))
    cdef double complex* dv = <double complex*> malloc(16 * k * sizeof(double complex))
    cdef double* u = <double*> malloc(k * sizeof(double))
    cdef int c, i, j
    cdef double norm = 0.0
    try:
        _product_vectors(&xs[0], k, v, dv, u)
        for c in range(k):
            norm += u[c] * u[c]
        for c in range(k):
            for i in range(4):
                for j in range(4):
                    sigma[i, j] = sigma[i, j] + (u[c] * u[c] / norm) * v[c * 4 + i] * conj(v[c * 4 + j])
        for i in range(4):
            for j in range(4):
                sigma[i, j] = (1.0 - floor) * sigma[i, j]
            sigma[i, i] = sigma[i, i] + 0.25 * floor
    finally:
        free(v)
        free(dv)
        free(u)
    return sigma


def separable_objective(x, rho, double entropy_term, double floor):
    """Relative entropy D(rho || sigma(x)) in bits and its gradient in ``x``.

    ``entropy_term`` is Tr(rho ln rho) (nats), precomputed by the caller.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] r = np.ascontiguousarray(rho, dtype=np.complex128)
    cdef int k = xs.shape[0] // 5
    cdef cnp.ndarray[cnp.float64_t, ndim=1] grad = np.empty(5 * k, dtype=np.float64)
    cdef double complex* v = <double complex*> malloc(4 * k * sizeof(double complex))
    cdef double complex* dv = <double complex*> malloc(16 * k * sizeof(double complex))
    cdef double* u = <double*> malloc(k * sizeof(double))
    cdef double* p = <double*> malloc(k * sizeof(double))
    cdef double* gk = <double*> malloc(k * sizeof(double))
    cdef double complex S[16]
    cdef double complex V[16]
    cdef double complex T[16]
    cdef double complex G[16]
    cdef double complex tmp[16]
    cdef double mu[4]
    cdef double lm[4]
    cdef double gam, dm, norm = 0.0, value, mean_g, dot
    cdef double complex acc, z
    cdef int c, i, j, l, d, sweeps
    try:
        with nogil:
            _product_vectors(&xs[0], k, v, dv, u)
            for c in range(k):
                norm += u[c] * u[c]
            for c in range(k):
                p[c] = u[c] * u[c] / norm
            for i in range(16):
                S[i] = 0.0
            for c in range(k):
                for i in range(4):
                    for j in range(4):
                        S[4 * i + j] += p[c] * v[c * 4 + i] * conj(v[c * 4 + j])
            for i in range(4):
                for j in range(4):
                    S[4 * i + j] = (1.0 - floor) * S[4 * i + j]
                S[5 * i] += 0.25 * floor
            sweeps = _jacobi(S, V, mu, 4, 1e-14, 100)
            for i in range(4):
                if mu[i] < 1e-300:
                    mu[i] = 1e-300
                lm[i] = log(mu[i])
            # T = V^dagger rho V
            for i in range(4):
                for j in range(4):
                    acc = 0.0
                    for l in range(4):
                        acc += r[i, l] * V[4 * l + j]
                    tmp[4 * i + j] = acc
            for i in range(4):
                for j in range(4):
                    acc = 0.0
                    for l in range(4):
                        acc += conj(V[4 * l + i]) * tmp[4 * l + j]
                    T[4 * i + j] = acc
            value = entropy_term
            for i in range(4):
                value -= creal(T[5 * i]) * lm[i]
            value /= LN2
            # G = V (Gamma o T) V^dagger, Gamma the divided differences of log
            for i in range(4):
                for j in range(4):
                    dm = mu[i] - mu[j]
                    if fabs(dm) > 1e-12 * (mu[i] + mu[j]):
                        gam = (lm[i] - lm[j]) / dm
                    else:
                        gam = 2.0 / (mu[i] + mu[j])
                    tmp[4 * i + j] = gam * T[4 * i + j]
            for i in range(4):
                for j in range(4):
                    acc = 0.0
                    for l in range(4):
                        acc += V[4 * i + l] * tmp[4 * l + j]
                    T[4 * i + j] = acc
            for i in range(4):
                for j in range(4):
                    acc = 0.0
                    for l in range(4):
                        acc += T[4 * i + l] * conj(V[4 * j + l])
                    G[4 * i + j] = (1.0 - floor) * acc
            mean_g = 0.0
            for c in range(k):
                acc = 0.0
                for i in range(4):
                    z = 0.0
                    for j in range(4):
                        z += G[4 * i + j] * v[c * 4 + j]
                    acc += conj(v[c * 4 + i]) * z
                gk[c] = creal(acc)
                mean_g += p[c] * gk[c]
            for c in range(k):
                for d in range(4):
                    acc = 0.0
                    for i in range(4):
                        z = 0.0
                        for j in range(4):
                            z += G[4 * i + j] * dv[(c * 4 + d) * 4 + j]
                        acc += conj(v[c * 4 + i]) * z
                    grad[5 * c + d] = -2.0 * p[c] * creal(acc) / LN2
                grad[5 * c + 4] = -2.0 * u[c] / norm * (gk[c] - mean_g) / LN2
    finally:
        free(v)
        free(dv)
        free(u)
        free(p)
        free(gk)
    if sweeps < 0:
        raise ArithmeticError("Jacobi eigensolver did not converge")
    return value, grad
