"""Command-line interface.

Commands: decide, normalize, probe, thomas, verify.  Every command reads and
writes JSON; numbers are read as exact literals (decimals stay decimal).
Exit codes: 0 success, 2 bad input, 3 certificate rejected, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

from .certify import certificate_from_json, certificate_id, verify_certificate
from .decide import Outcome, classify_omega, decide
from .errors import LpNumericalFailure, NumericalFailure, PolyConvexError, ValidationError
from .normalform import (
    real_jordan_rotation_form, simultaneous_triangularize, three_plane_normal_form,
)
from .core import SpectrumKind, eigen_spectrum
from .planes import family_from_json
from .thomas import thomas_graphs, thomas_matrices, thomas_spectra

__all__ = ["main", "JobConfig", "load_json", "dump_json"]

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_NUMERIC = 0, 2, 3, 4

DEFAULT_GRID = {"kind": "ball", "count": 20, "radius": 1.0, "minDistance": 0.1}


@dataclass
class JobConfig:
    """Everything a single run needs; unknown keys are rejected."""

    command: str
    input: str | None = None
    output: str | None = None
    seed: int = 0
    jobs: int = 1
    cert_dir: str | None = None
    degree: int = 4
    samples: int = 2000
    radius: float = 1.0
    polygon: int = 16
    margin: float = 0.05
    points: str | None = None
    grid: str | None = None
    csv: str | None = None
    eps: str | None = None
    view: str = "matrices"
    normal_form: bool = False
    extra: dict = field(default_factory=dict)

    COMMANDS = ("decide", "normalize", "probe", "thomas", "verify")

    @classmethod
    def from_dict(cls, d: dict) -> "JobConfig":
        names = {f.name for f in fields(cls)} - {"extra"}
        unknown = set(d) - names
        if unknown:
            raise ValidationError(f"unknown config fields: {sorted(unknown)}")
        cfg = cls(**d)
        if cfg.command not in cls.COMMANDS:
            raise ValidationError(f"unknown command {cfg.command!r}")
        return cfg


# --- JSON I/O ---------------------------------------------------------------

def load_json(text: str):
    try:
        return json.loads(text, parse_float=str)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from None


def _read_input(spec: str | None):
    if spec is None or spec == "-":
        return load_json(sys.stdin.read())
    s = spec.lstrip()
    if s.startswith("{") or s.startswith("["):
        return load_json(spec)
    try:
        return load_json(Path(spec).read_text())
    except OSError as exc:
        raise ValidationError(f"cannot read {spec}: {exc}") from None


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _write(cfg: JobConfig, obj):
    text = dump_json(obj)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


# --- commands -----------------------------------------------------------------

def run_decide(cfg: JobConfig) -> int:
    fam = family_from_json(_read_input(cfg.input))
    v = decide(fam)
    out = v.to_json()
    if v.certificate is not None:
        cert = v.certificate.to_json()
        out["certificate"] = cert
        target = None
        if cfg.cert_dir:
            os.makedirs(cfg.cert_dir, exist_ok=True)
            target = Path(cfg.cert_dir) / f"{v.certificate_id}.json"
        elif cfg.output:
            target = Path(cfg.output).with_suffix(".cert.json")
        if target is not None:
            target.write_text(dump_json(cert))
            out["certificateFile"] = str(target)
    _write(cfg, out)
    if v.outcome is Outcome.Undecided:
        print("note: no sufficient condition applies; `polyconvex probe` gives numerical evidence",
              file=sys.stderr)
    return EXIT_OK


def run_verify(cfg: JobConfig) -> int:
    obj = _read_input(cfg.input)
    if isinstance(obj, dict) and "certificate" in obj and "outcome" in obj:
        obj = obj["certificate"]  # a decide report
    cert = certificate_from_json(obj)
    res = verify_certificate(cert)
    _write(cfg, {"ok": bool(res), "certificateId": certificate_id(cert), "reasons": list(res.reasons)})
    if not res:
        for r in res.reasons:
            print(f"rejected: {r}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def run_normalize(cfg: JobConfig) -> int:
    fam = family_from_json(_read_input(cfg.input))
    out = fam.to_json()
    out["labels"] = list(fam.labels)
    if cfg.normal_form:
        ms = fam.matrices
        try:
            if len(ms) == 2:
                out["normalForm"] = three_plane_normal_form(*ms).to_json()
            elif len(ms) == 1 and eigen_spectrum(ms[0]).kind is SpectrumKind.ComplexConjugate:
                out["normalForm"] = real_jordan_rotation_form(ms[0]).to_json()
            else:
                out["normalForm"] = simultaneous_triangularize(ms).to_json()
        except ValidationError as exc:
            out["normalForm"] = {"error": f"{type(exc).__name__}: {exc}"}
    _write(cfg, out)
    return EXIT_OK


def _grid_spec(cfg: JobConfig):
    if cfg.points:
        pts = _read_input(cfg.points)
        return {"points": pts["points"] if isinstance(pts, dict) else pts}
    if cfg.grid:
        spec = _read_input(cfg.grid)
        if not isinstance(spec, dict):
            raise ValidationError("grid spec must be a JSON object")
        return spec
    return dict(DEFAULT_GRID, seed=cfg.seed)


def run_probe(cfg: JobConfig) -> int:
    from .hullprobe import probe_grid

    fam = family_from_json(_read_input(cfg.input))
    for name in ("degree", "samples", "polygon", "jobs"):
        if int(getattr(cfg, name)) < 1:
            raise ValidationError(f"--{name} must be positive")
    report = probe_grid(fam, _grid_spec(cfg), degree=cfg.degree, m=cfg.polygon, margin=cfg.margin,
                        samples=cfg.samples, radius=cfg.radius, seed=cfg.seed, jobs=cfg.jobs)
    report["grid"] = _grid_spec(cfg)
    _write(cfg, report)
    if cfg.csv:
        lines = ["re_z,im_z,re_w,im_w,distance,tStar,status"]
        for e in report["results"]:
            (a, b), (c, d) = e["point"]
            lines.append(f"{a!r},{b!r},{c!r},{d!r},{e['distance']!r},"
                         f"{e.get('tStar', '')!r},{e.get('status', 'error')}")
        Path(cfg.csv).write_text("\n".join(lines) + "\n")
    if report["count"] and report["failures"] == report["count"]:
        return EXIT_NUMERIC
    return EXIT_OK


def run_thomas(cfg: JobConfig) -> int:
    if cfg.eps is None:
        raise ValidationError("--eps is required")
    if cfg.view == "graphs":
        out = {"epsilon": cfg.eps, "planes": [g.to_json() for g in thomas_graphs(cfg.eps)]}
    elif cfg.view == "spectra":
        out = thomas_spectra(cfg.eps).to_json()
    elif cfg.view == "classify":
        pair = thomas_matrices(cfg.eps)
        out = {"epsilon": pair.to_json()["epsilon"], "omega": classify_omega(pair.A1, pair.A2).to_json()}
    else:
        out = thomas_matrices(cfg.eps).to_json()
    _write(cfg, out)
    return EXIT_OK


RUNNERS = {"decide": run_decide, "verify": run_verify, "normalize": run_normalize,
           "probe": run_probe, "thomas": run_thomas}


def run(cfg: JobConfig) -> int:
    try:
        return RUNNERS[cfg.command](cfg)
    except ValidationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except LpNumericalFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except NumericalFailure as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except PolyConvexError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


# --- argument parsing -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", help="JSON file, '-' for stdin (default), or inline JSON")
    common.add_argument("--output", "-o", help="write JSON here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1, help="worker processes for probe points")
    common.add_argument("--config", help="JSON file with job settings (overridden by flags)")

    p = argparse.ArgumentParser(prog="polyconvex", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decide", parents=[common], help="exact convexity verdict for a family")
    d.add_argument("--cert-dir", help="directory for certificate files (named by id)")

    sub.add_parser("verify", parents=[common], help="check a certificate (or a decide report)")

    n = sub.add_parser("normalize", parents=[common], help="rewrite planes with R^2 as the base")
    n.add_argument("--normal-form", action="store_true", help="also emit a canonical conjugation")

    pr = sub.add_parser("probe", parents=[common], help="numerical separation from the sampled union")
    pr.add_argument("--degree", type=int, default=4)
    pr.add_argument("--samples", type=int, default=2000, help="samples per plane")
    pr.add_argument("--radius", type=float, default=1.0)
    pr.add_argument("--polygon", type=int, default=16, help="sides of the modulus polygon")
    pr.add_argument("--margin", type=float, default=0.05)
    g = pr.add_mutually_exclusive_group()
    g.add_argument("--points", help="JSON list of probe points (file or inline)")
    g.add_argument("--grid", help="JSON grid spec (file or inline)")
    pr.add_argument("--csv", help="also write a flat CSV of results")

    t = sub.add_parser("thomas", parents=[common], help="the three-plane family for a given epsilon")
    t.add_argument("--eps", help="rational epsilon, e.g. 3/10 (required)")
    v = t.add_mutually_exclusive_group()
    for name in ("matrices", "graphs", "spectra", "classify"):
        v.add_argument(f"--{name}", dest="view", action="store_const", const=name)
    t.set_defaults(view="matrices")
    return p


def config_from_args(argv=None) -> JobConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    d = {k: v for k, v in vars(ns).items() if v is not None}
    cfg_file = d.pop("config", None)
    if cfg_file:
        base = _read_input(cfg_file)
        if not isinstance(base, dict):
            raise ValidationError("config must be a JSON object")
        explicit = {a.split("=")[0].lstrip("-").replace("-", "_") for a in (argv or sys.argv[1:])
                    if a.startswith("--")}
        merged = dict(base, command=d["command"])
        merged.update({k: v for k, v in d.items() if k in explicit or k not in base})
        d = merged
    return JobConfig.from_dict(d)


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
