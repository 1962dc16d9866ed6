"""Brute-force reference computations, independent of the eadsim code paths.

Index loops, LAPACK eigensolvers and scipy's matrix exponential only.
"""

import itertools
import math

import numpy as np
import scipy.linalg

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)


def ket(bits):
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v


def trace_out_last(m, keep_dim, drop_dim):
    out = np.zeros((keep_dim, keep_dim), dtype=complex)
    for i, j, k in itertools.product(range(keep_dim), range(keep_dim), range(drop_dim)):
        out[i, j] += m[i * drop_dim + k, j * drop_dim + k]
    return out


def transpose_second_qubit(m):
    out = np.zeros((4, 4), dtype=complex)
    for a, b, a2, b2 in itertools.product(range(2), repeat=4):
        out[2 * a + b, 2 * a2 + b2] = m[2 * a + b2, 2 * a2 + b]
    return out


def abc_state():
    psi = (ket("01") + ket("10")) / math.sqrt(2)
    phi = (ket("00") + ket("11")) / math.sqrt(2)
    plus = (ket("0") + ket("1")) / math.sqrt(2)
    minus = (ket("0") - ket("1")) / math.sqrt(2)
    a = np.kron(psi, plus)
    b = np.kron(phi, minus)
    return 0.5 * np.outer(a, a.conj()) + 0.5 * np.outer(b, b.conj())


def u_ac_full(t):
    """exp(-i t X_A X_C) on (A, B, C) via a SWAP(B,C) conjugation of expm."""
    u = scipy.linalg.expm(-1j * t * np.kron(X, X))
    swap = np.zeros((4, 4))
    for b, c in itertools.product(range(2), repeat=2):
        swap[2 * c + b, 2 * b + c] = 1
    perm = np.kron(np.eye(2), swap)  # (A,B,C) <-> (A,C,B)
    return perm @ np.kron(u, np.eye(2)) @ perm


def ab_state(t):
    u = u_ac_full(t)
    return trace_out_last(u @ abc_state() @ u.conj().T, 4, 2)


def negativity(m):
    return (np.sum(np.abs(np.linalg.eigvalsh(transpose_second_qubit(m)))) - 1) / 2


def concurrence(m):
    """Classic Wootters form: square roots of the eigenvalues of rho * rho~."""
    yy = np.kron(Y, Y)
    ev = np.linalg.eigvals(m @ yy @ m.conj() @ yy)
    lam = np.sort(np.sqrt(np.abs(ev.real)))[::-1]
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def entropy_bits(m):
    w = np.linalg.eigvalsh(m)
    w = w[w > 1e-15]
    return float(-np.sum(w * np.log2(w)))


def binary_entropy(p):
    return -sum(q * math.log2(q) for q in (p, 1 - p) if q > 0)


BELL_INDICES = [(0, 0), (0, 1), (1, 0), (1, 1)]


def bell_vector(a, b):
    v = np.zeros(4, dtype=complex)
    v[b] = 1 / math.sqrt(2)
    v[2 + (1 ^ b)] = (-1) ** a / math.sqrt(2)
    return v


def bell_mixture(lambdas):
    return sum(l * np.outer(bell_vector(a, b), bell_vector(a, b).conj())
               for l, (a, b) in zip(lambdas, BELL_INDICES))


def random_density(rng, dim, rank=None):
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_separable(rng, terms=4):
    weights = rng.dirichlet(np.ones(terms))
    return sum(w * np.kron(random_density(rng, 2), random_density(rng, 2)) for w in weights)


def relative_entropy_bits(rho, sigma):
    return -entropy_bits(rho) - np.trace(rho @ scipy.linalg.logm(sigma)).real / math.log(2)
