"""Dense primal-dual interior-point solver for small inequality-form LPs.

Solves ``min c.x  s.t.  G x <= h`` with x free, using Mehrotra's
predictor-corrector; the normal equations ``G^T diag(z/s) G`` are factored
through a QR decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LpNumericalFailure

__all__ = ["LpResult", "solve_lp"]


@dataclass
class LpResult:
    x: np.ndarray
    z: np.ndarray
    objective: float
    iterations: int
    gap: float


def _step_to_boundary(v, dv):
    neg = dv < 0
    if not np.any(neg):
        return 1.0
    return min(1.0, float(np.min(-v[neg] / dv[neg])))


def solve_lp(c, G, h, x0, z0=None, tol=1e-9, max_iter=100) -> LpResult:
    """Mehrotra predictor-corrector from a strictly feasible primal ``x0``.

    Stops when dual infeasibility and the duality gap are both below ``tol``
    (relative).  Late breakdowns of the normal equations return the best
    iterate if it is within ``1000 * tol``.
    """
    c = np.asarray(c, float)
    G = np.asarray(G, float)
    h = np.asarray(h, float)
    m, n = G.shape
    x = np.array(x0, float)
    s = h - G @ x
    if np.any(s <= 0):
        raise LpNumericalFailure("starting point is not strictly feasible")
    z = np.full(m, 1.0 / m) if z0 is None else np.array(z0, float)
    scale = 1.0 + max(np.abs(h).max(initial=0.0), np.abs(c).max())
    best = None
    reason = f"no convergence in {max_iter} iterations"
    for it in range(1, max_iter + 1):
        rd = G.T @ z + c
        rp = G @ x + s - h
        gap = float(s @ z)
        obj = float(c @ x)
        err = max(np.linalg.norm(rd, np.inf) / scale, np.linalg.norm(rp, np.inf) / scale,
                  gap / (1.0 + abs(obj)))
        if best is None or err < best[0]:
            best = (err, x.copy(), z.copy(), it - 1, gap)
        if err <= tol:
            return LpResult(x, z, obj, it - 1, gap)
        mu = gap / m
        d = z / s
        # R^T R = G^T D G via QR of D^(1/2) G, which avoids squaring the condition number
        W = G * np.sqrt(d)[:, None]
        try:
            R = np.linalg.qr(W, mode="r")
            if not np.all(np.isfinite(R)) or np.min(np.abs(np.diag(R))) <= 1e-300:
                raise np.linalg.LinAlgError("rank deficient")
        except np.linalg.LinAlgError as exc:
            reason = f"normal equations are singular: {exc}"
            break

        def newton(rc):
            # rc: complementarity right-hand side for Z ds + S dz = rc
            rhs = -rd - G.T @ ((rc + z * rp) / s)
            dx = np.linalg.solve(R, np.linalg.solve(R.T, rhs))
            res = rhs - W.T @ (W @ dx)
            dx = dx + np.linalg.solve(R, np.linalg.solve(R.T, res))
            ds = -rp - G @ dx
            dz = (rc - z * ds) / s
            return dx, ds, dz

        dx, ds, dz = newton(-s * z)
        ap = _step_to_boundary(s, ds)
        ad = _step_to_boundary(z, dz)
        mu_aff = float((s + ap * ds) @ (z + ad * dz)) / m
        sigma = (mu_aff / mu) ** 3
        dx, ds, dz = newton(-s * z - ds * dz + sigma * mu)
        eta = max(0.99, 1.0 - mu)
        ap = min(1.0, eta * _step_to_boundary(s, ds))
        ad = min(1.0, eta * _step_to_boundary(z, dz))
        x = x + ap * dx
        s = s + ap * ds
        z = z + ad * dz
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(z)) and np.all(s > 0)):
            reason = "iterates diverged"
            break
    err, bx, bz, bit, bgap = best
    if err <= 1000 * tol:
        return LpResult(bx, bz, float(c @ bx), bit, bgap)
    raise LpNumericalFailure(f"{reason} (residual {err:.3g})")
