"""Reference numpy implementations of the hull-probe inner loops."""

import numpy as np


def monomial_exponents(degree):
    """(a, b) pairs for z^a w^b, a + b <= degree, ordered by total degree."""
    return [(a, d - a) for d in range(degree + 1) for a in range(d, -1, -1)]


def monomial_table(points, degree):
    """Values of every monomial at every point; shape (n, K), complex."""
    pts = np.asarray(points, dtype=np.complex128)
    z, w = pts[:, 0], pts[:, 1]
    zp = np.ones((degree + 1, len(pts)), dtype=np.complex128)
    wp = np.ones((degree + 1, len(pts)), dtype=np.complex128)
    for k in range(1, degree + 1):
        zp[k] = zp[k - 1] * z
        wp[k] = wp[k - 1] * w
    return np.stack([zp[a] * wp[b] for a, b in monomial_exponents(degree)], axis=1)


def polygon_max(values, m):
    """Per value v: max_k Re(exp(-i theta_k) v) over theta_k = 2 pi k / m, and the argmax k."""
    v = np.asarray(values, dtype=np.complex128)
    step = 2.0 * np.pi / m
    k = np.rint(np.angle(v) / step).astype(np.int64) % m
    best = np.real(np.exp(-1j * step * k) * v)
    return best, k


def constraint_rows(psi, sample_idx, angle_idx, m):
    """Rows of G and h for the linearized modulus constraints.

    Variables are (Re c_1..c_K', Im c_1..c_K', t) with p = 1 + sum c_j psi_j,
    and each row encodes Re(exp(-i theta) p(s)) - t <= 0.
    """
    theta = 2.0 * np.pi * np.asarray(angle_idx) / m
    rot = np.exp(-1j * theta)[:, None] * psi[np.asarray(sample_idx)]
    G = np.empty((len(theta), 2 * psi.shape[1] + 1))
    G[:, :psi.shape[1]] = rot.real
    G[:, psi.shape[1]:-1] = -rot.imag
    G[:, -1] = -1.0
    return G, -np.cos(theta)


def eval_poly_max(table, coeffs, m):
    """polygon_max of the polynomial with ``coeffs`` on the monomial ``table``."""
    return polygon_max(table @ coeffs, m)
