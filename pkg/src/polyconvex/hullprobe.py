"""Numerical separation of points from a sampled union of planes.

A point q lies outside the degree-d polynomial hull of a compact K when some
polynomial p of degree <= d has p(q) = 1 and max_K |p| < 1.  We look for such a
p by linear programming on a finite sample of K, with |p| overestimated by an
inscribed m-gon.  A success is re-checked on an independent, denser sample.
A failure is only evidence of hull membership.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import LpNumericalFailure, NumericalFailure, ValidationError
from .lp import solve_lp
from .planes import WeinstockFamily

__all__ = [
    "SampleCloud", "SeparationResult", "Status", "sample_planes", "separate_point", "probe_grid",
    "distance_to_union", "grid_points", "plane_basis", "evaluate_poly",
]

RING = 16


class Status(enum.Enum):
    Separated = "Separated"
    NotSeparated = "NotSeparated"
    Infeasible = "Infeasible"


def plane_basis(A) -> np.ndarray:
    """Real 4x2 basis of M(A) in coordinates (Re z, Im z, Re w, Im w); None means R^2."""
    if A is None:
        return np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    a = A.to_numpy() if hasattr(A, "to_numpy") else np.asarray(A, float)
    return np.array([[a[0, 0], a[0, 1]], [1.0, 0.0], [a[1, 0], a[1, 1]], [0.0, 1.0]])


def _float_mats(f: WeinstockFamily):
    return [None] + [A.to_float() for A in f.matrices]


@dataclass(frozen=True, eq=False)
class SampleCloud:
    points: np.ndarray        # (n, 2) complex
    plane_ids: np.ndarray     # 0 for R^2, j for M(A_j)
    radius: float
    per_plane_counts: tuple
    seed: int
    matrices: tuple = ()      # float copies of A_1..A_N, kept for re-sampling
    _tables: dict = field(default_factory=dict, repr=False)

    def table(self, degree):
        if degree not in self._tables:
            self._tables[degree] = K.monomial_table(self.points, degree)
        return self._tables[degree]

    def __getstate__(self):
        d = dict(self.__dict__)
        d["_tables"] = {}
        return d

    def __setstate__(self, d):
        self.__dict__.update(d)


def _directions(A, phi):
    """Unit vectors of C^2 along (A + iI)(cos phi, sin phi)."""
    c, s = np.cos(phi), np.sin(phi)
    if A is None:
        v = np.stack([c + 0j, s + 0j], axis=1)
    else:
        a = A.to_numpy()
        v = np.stack([a[0, 0] * c + a[0, 1] * s + 1j * c, a[1, 0] * c + a[1, 1] * s + 1j * s], axis=1)
    return v / np.linalg.norm(v, axis=1)[:, None]


def _sample_one(A, radius, n, rng):
    ring = min(RING, max(n - 1, 0))
    rest = n - 1 - ring
    u = np.empty(n)
    phi = np.empty(n)
    u[0], phi[0] = 0.0, 0.0
    u[1:1 + ring] = 1.0
    phi[1:1 + ring] = 2 * np.pi * np.arange(ring) / max(ring, 1)
    if rest > 0:
        r = rng.random((rest, 2))
        u[1 + ring:] = r[:, 0]
        phi[1 + ring:] = 2 * np.pi * r[:, 1]
    return radius * np.sqrt(u)[:, None] * _directions(A, phi)


def sample_planes(f: WeinstockFamily, radius: float = 1.0, n_per_plane: int = 2000,
                  seed: int = 0) -> SampleCloud:
    """Deterministic sample of (R^2 ∪ M(A_1) ∪ ...) ∩ closed ball.

    Each plane gets the origin, a boundary ring, then uniform disc samples from
    its own child generator; a larger ``n_per_plane`` extends the same sequence.
    """
    if radius <= 0 or n_per_plane < 1:
        raise ValidationError("radius must be positive and n_per_plane >= 1")
    mats = _float_mats(f)
    children = np.random.SeedSequence(seed).spawn(len(mats))
    pts, ids = [], []
    for j, (A, ss) in enumerate(zip(mats, children)):
        pts.append(_sample_one(A, radius, n_per_plane, np.random.default_rng(ss)))
        ids.append(np.full(n_per_plane, j))
    return SampleCloud(np.concatenate(pts), np.concatenate(ids), float(radius),
                       tuple([n_per_plane] * len(mats)), int(seed), tuple(mats[1:]))


def evaluate_poly(coeffs, points, degree):
    return K.monomial_table(np.atleast_2d(np.asarray(points, complex)), degree) @ coeffs


def distance_to_union(q, matrices) -> float:
    """Euclidean distance from q in C^2 to the union of R^2 and the planes M(A)."""
    q = np.asarray(q, complex)
    x = np.array([q[0].real, q[0].imag, q[1].real, q[1].imag])
    best = math.inf
    for A in [None, *matrices]:
        B = plane_basis(A)
        coef, *_ = np.linalg.lstsq(B, x, rcond=None)
        best = min(best, float(np.linalg.norm(x - B @ coef)))
    return best


@dataclass
class SeparationResult:
    t_star: float
    coefficients: np.ndarray
    degree: int
    polygon_sides: int
    status: Status
    margin: float
    rounds: int = 0
    recheck_max: float | None = None
    soundness: str | None = None  # "ok" / "SoundnessViolation" for Separated results

    @property
    def exponents(self):
        return K.monomial_exponents(self.degree)

    def to_json(self, with_coefficients=True):
        out = {"tStar": float(self.t_star), "status": self.status.value, "degree": self.degree,
               "polygonSides": self.polygon_sides, "margin": self.margin, "rounds": self.rounds}
        if self.status is Status.NotSeparated:
            out["note"] = "evidence"
        if self.soundness is not None:
            out["soundness"] = self.soundness
            out["recheckMax"] = float(self.recheck_max)
        if with_coefficients:
            out["coefficients"] = [
                {"exponent": [a, b], "value": [float(c.real), float(c.imag)]}
                for (a, b), c in zip(self.exponents, self.coefficients)]
        return out


def _initial_rows(cloud: SampleCloud, per_plane: int):
    idx = []
    start = 0
    for n in cloud.per_plane_counts:
        head = min(n, 1 + RING)
        idx.extend(range(start, start + head))
        if n > head:
            idx.extend(np.linspace(start + head, start + n - 1, min(per_plane, n - head)).astype(int))
        start += n
    return np.unique(np.array(idx, dtype=np.int64))


def separate_point(cloud: SampleCloud, q, degree: int = 4, m: int = 16, margin: float = 0.05,
                   recheck: bool = True, tol: float = 1e-9, max_rounds: int = 60) -> SeparationResult:
    """Minimize max over samples of the m-gon modulus of p subject to p(q) = 1.

    Cutting planes: the LP runs on a working set of (sample, angle) rows, and
    the worst violators on the full cloud are added until none remain.
    """
    if degree < 1:
        raise ValidationError("degree must be >= 1")
    if m < 8 or m % 2:
        raise ValidationError("polygon sides must be even and >= 8")
    q = np.asarray(q, complex).reshape(2)
    if np.linalg.norm(q) > 2 * cloud.radius * (1 + 1e-12):
        raise ValidationError("probe point lies outside twice the sampling radius")
    table = cloud.table(degree)
    phi_q = K.monomial_table(q[None, :], degree)[0]
    psi = table[:, 1:] - phi_q[1:]
    nk = psi.shape[1]
    nvar = 2 * nk + 1
    cvec = np.zeros(nvar)
    cvec[-1] = 1.0
    x0 = np.zeros(nvar)
    x0[-1] = 2.0

    def full_coeffs(x):
        c = x[:nk] + 1j * x[nk:2 * nk]
        return np.concatenate([[1.0 - phi_q[1:] @ c], c])

    samples = _initial_rows(cloud, 48)
    rows_s = np.repeat(samples, m)
    rows_k = np.tile(np.arange(m), len(samples))
    seen = set(zip(rows_s.tolist(), rows_k.tolist()))
    G, h = K.constraint_rows(psi, rows_s, rows_k, m)
    for rnd in range(1, max_rounds + 1):
        res = solve_lp(cvec, G, h, x0)
        coeffs = full_coeffs(res.x)
        vals, karg = K.eval_poly_max(table, coeffs, m)
        worst = float(vals.max())
        t_lp = float(res.x[-1])
        if worst <= t_lp + tol * (1 + abs(t_lp)):
            break
        viol = np.flatnonzero(vals > t_lp + tol * (1 + abs(t_lp)))
        viol = viol[np.argsort(-vals[viol])][:200]
        add_s, add_k = [], []
        for s in viol.tolist():
            for dk in (0, -1, 1):
                k = (int(karg[s]) + dk) % m
                if (s, k) not in seen:
                    seen.add((s, k))
                    add_s.append(s)
                    add_k.append(k)
        if not add_s:
            break
        G2, h2 = K.constraint_rows(psi, np.array(add_s), np.array(add_k), m)
        G = np.vstack([G, G2])
        h = np.concatenate([h, h2])
    else:
        raise LpNumericalFailure(f"cutting planes did not converge in {max_rounds} rounds")
    status = Status.Separated if worst < 1 - margin else Status.NotSeparated
    out = SeparationResult(worst, coeffs, degree, m, status, margin, rnd)
    if recheck and status is Status.Separated:
        out.recheck_max = recheck_witness(cloud, coeffs, degree)
        out.soundness = "ok" if out.recheck_max < 1 - margin / 2 else "SoundnessViolation"
    return out


def recheck_witness(cloud: SampleCloud, coeffs, degree) -> float:
    """Max modulus of the witness on a fresh cloud with four times the samples."""
    from .core import Mat2

    fam = WeinstockFamily([Mat2(*A.entries()) for A in cloud.matrices])
    fresh = sample_planes(fam, cloud.radius, 4 * max(cloud.per_plane_counts),
                          seed=(cloud.seed + 0x9E3779B97F4A7C15) % 2 ** 64)
    return float(np.abs(fresh.table(degree) @ coeffs).max())


# --- grids and reports ----------------------------------------------------------

def _point_of(obj):
    """A probe point from JSON: [[re, im], [re, im]] or four reals."""
    a = np.asarray(obj, float).ravel()
    if a.size != 4:
        raise ValidationError(f"probe point must have four real coordinates: {obj!r}")
    return np.array([a[0] + 1j * a[1], a[2] + 1j * a[3]])


def grid_points(spec, matrices=()):
    """Expand a grid spec into probe points.

    Kinds: ``{"points": [...]}``; ``{"kind": "slice", "center", "e1", "e2",
    "halfWidth", "steps", "minDistance"}`` (a square in a real 2-plane of R^4);
    ``{"kind": "ball", "count", "radius", "minRadius", "minDistance", "seed"}``
    (uniform in a spherical shell, rejecting points near the planes).
    """
    if not isinstance(spec, dict):
        raise ValidationError("grid spec must be an object")
    if "points" in spec:
        return [_point_of(p) for p in spec["points"]]
    kind = spec.get("kind")
    min_d = float(spec.get("minDistance", 0.0))
    if kind == "slice":
        known = {"kind", "center", "e1", "e2", "halfWidth", "steps", "minDistance"}
        if set(spec) - known:
            raise ValidationError(f"unknown grid fields: {sorted(set(spec) - known)}")
        c = np.asarray(spec.get("center", [0, 0, 0, 0]), float)
        e1 = np.asarray(spec["e1"], float)
        e2 = np.asarray(spec["e2"], float)
        hw = float(spec["halfWidth"])
        steps = int(spec["steps"])
        ts = np.linspace(-hw, hw, steps) if steps > 1 else np.zeros(1)
        cand = [c + u * e1 + v * e2 for u in ts for v in ts]
    elif kind == "ball":
        known = {"kind", "count", "radius", "minRadius", "minDistance", "seed"}
        if set(spec) - known:
            raise ValidationError(f"unknown grid fields: {sorted(set(spec) - known)}")
        rng = np.random.default_rng(int(spec.get("seed", 0)))
        count = int(spec["count"])
        r_hi = float(spec.get("radius", 1.0))
        r_lo = float(spec.get("minRadius", 0.0))
        cand = []
        tries = 0
        while len(cand) < count:
            tries += 1
            if tries > 1000 * max(count, 1):
                raise ValidationError("could not place grid points at the requested distance")
            g = rng.normal(size=4)
            rad = (r_lo ** 4 + rng.random() * (r_hi ** 4 - r_lo ** 4)) ** 0.25
            x = rad * g / np.linalg.norm(g)
            if distance_to_union(_point_of(x), matrices) >= min_d:
                cand.append(x)
        return [_point_of(x) for x in cand]
    else:
        raise ValidationError(f"unknown grid kind {kind!r}")
    return [_point_of(x) for x in cand if distance_to_union(_point_of(x), matrices) >= min_d]


def _probe_task(args):
    cloud, q, degree, m, margin = args
    try:
        return separate_point(cloud, q, degree, m, margin), None
    except NumericalFailure as exc:
        return None, f"{type(exc).__name__}: {exc}"


def probe_grid(f: WeinstockFamily, grid_spec, degree: int = 4, m: int = 16, margin: float = 0.05,
               samples: int = 2000, radius: float = 1.0, seed: int = 0, jobs: int = 1,
               with_coefficients: bool = True) -> dict:
    """Run :func:`separate_point` at every grid point and summarize."""
    mats = [A.to_float() for A in f.matrices]
    points = grid_points(grid_spec, mats)
    cloud = sample_planes(f, radius, samples, seed)
    tasks = [(cloud, q, degree, m, margin) for q in points]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            outcomes = list(ex.map(_probe_task, tasks))
    else:
        outcomes = [_probe_task(t) for t in tasks]
    entries = []
    for q, (res, err) in zip(points, outcomes):
        e = {"point": [[float(q[0].real), float(q[0].imag)], [float(q[1].real), float(q[1].imag)]],
             "distance": distance_to_union(q, mats)}
        if err is not None:
            e["error"] = err
        else:
            e.update(res.to_json(with_coefficients))
        entries.append(e)
    ok = [e for e in entries if "error" not in e]
    sep = sum(1 for e in ok if e["status"] == "Separated")
    return {
        "degree": degree, "polygonSides": m, "margin": margin, "samplesPerPlane": samples,
        "radius": radius, "seed": seed, "backend": K.BACKEND,
        "count": len(entries), "failures": len(entries) - len(ok), "separated": sep,
        "separatedFraction": (sep / len(ok)) if ok else None,
        "soundnessViolations": sum(1 for e in ok if e.get("soundness") == "SoundnessViolation"),
        "note": "NotSeparated results are numerical evidence of hull membership, not proof",
        "results": entries,
    }
