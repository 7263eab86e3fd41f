"""Command line interface: ``segcap cap|green|periods|verify``.

Reports are JSON (floats with 17 significant digits) or CSV; ``verify``
prints a pass/fail table unless ``--format`` asks for JSON or CSV.  Failures
print ``{"error": CODE, "module": ..., "message": ...}`` and exit nonzero:
2 for invalid input, 3 for numerical failures, 4 for I/O errors.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .capacity import SegmentProblem
from .errors import SegcapError
from .periods import compute_periods, reduce_mod_lattice
from .quadrature import QuadratureConfig
from .segments import SegmentSystem, new_segment_system, normalize
from .theta import DEFAULT_TOL
from .verify import run_battery

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4
MAX_GRID_POINTS = 10 ** 7
INPUT_MODULES = {"segments", "characteristics", "cli", "oracles"}
INPUT_CODES = {"GENUS_ZERO_NO_PERIODS", "BAD_QUADRATURE_CONFIG", "BAD_TOLERANCE"}


class CliError(SegcapError):
    module = "cli"


@dataclass(frozen=True)
class JobSpec:
    command: str
    endpoints: tuple[float, ...] | None = None
    input_path: str | None = None
    quadrature: QuadratureConfig = QuadratureConfig()
    theta_tol: float = DEFAULT_TOL
    divisor: tuple[int, ...] | None = None
    out: str | None = None
    fmt: str = "json"
    x_range: tuple[float, float] = (-2.0, 2.0)
    y_range: tuple[float, float] = (0.0, 0.0)
    resolution: tuple[int, int] = (101, 1)
    workers: int = 1

    def __post_init__(self):
        if (self.endpoints is None) == (self.input_path is None) and self.command != "verify":
            raise CliError("BAD_ARGUMENTS", "give exactly one of --endpoints or --input")
        if not self.theta_tol > 0:
            raise CliError("BAD_ARGUMENTS", "--theta-tol must be positive")
        if self.fmt not in ("json", "csv") and not (self.fmt == "table" and self.command == "verify"):
            raise CliError("BAD_ARGUMENTS", f"unknown format {self.fmt!r}")


# ----------------------------------------------------------------- output


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise CliError("NON_FINITE_OUTPUT", "cannot serialize a non-finite number")
    text = format(x, ".17g")
    if not any(ch in text for ch in ".en"):
        text += ".0"
    return text


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, (bool, np.bool_)) or obj is None or isinstance(obj, str):
        return json.dumps(bool(obj) if isinstance(obj, np.bool_) else obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent, _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt_float(float(v)) for v in row) + "\n")
    return buf.getvalue()


# ------------------------------------------------------------------ input


def load_endpoints(spec: JobSpec) -> SegmentSystem:
    if spec.endpoints is not None:
        return new_segment_system(spec.endpoints)
    try:
        data = json.loads(Path(spec.input_path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise CliError("IO_ERROR", f"cannot read {spec.input_path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError("BAD_INPUT_FILE", f"{spec.input_path}: {exc}") from None
    if isinstance(data, dict):
        data = data.get("endpoints")
    if not isinstance(data, list):
        raise CliError("BAD_INPUT_FILE", 'expected {"endpoints": [numbers]} or a JSON array')
    return new_segment_system(data)


# --------------------------------------------------------------- commands


def run_cap(spec: JobSpec) -> tuple[int, dict]:
    E = load_endpoints(spec)
    res = SegmentProblem(E, spec.quadrature, spec.divisor, spec.theta_tol).capacity()
    report = {
        "capacity": res.capacity,
        "genus": res.genus,
        "endpoints": list(E.endpoints),
        "divisor_indices": list(res.divisor_indices),
        "characteristic": None if res.char_used is None else {
            "eps": list(res.char_used.eps), "eps_prime": list(res.char_used.eps_prime)},
        "theta_tol": spec.theta_tol,
        "quadrature_nodes": spec.quadrature.nodes_per_interval,
        "diagnostics": dict(res.diagnostics, scale=res.scale),
    }
    return EXIT_OK, report


_WORKER_PROBLEM: SegmentProblem | None = None


def _init_worker(E, cfg, divisor, tol):
    global _WORKER_PROBLEM
    _WORKER_PROBLEM = SegmentProblem(E, cfg, divisor, tol)


def _green_chunk(points):
    return [_WORKER_PROBLEM.green(z) for z in points]


def grid_points(spec: JobSpec) -> list[tuple[float, float]]:
    nx, ny = spec.resolution
    if nx < 1 or ny < 1:
        raise CliError("BAD_ARGUMENTS", "resolution must be positive")
    if nx * ny > MAX_GRID_POINTS:
        raise CliError("GRID_OVERFLOW", f"{nx} x {ny} points exceeds {MAX_GRID_POINTS}")
    xs = np.linspace(*spec.x_range, nx) if nx > 1 else np.array([spec.x_range[0]])
    ys = np.linspace(*spec.y_range, ny) if ny > 1 else np.array([spec.y_range[0]])
    return [(float(x), float(y)) for y in ys for x in xs]


def run_green(spec: JobSpec) -> tuple[int, list[tuple[float, float, float]]]:
    E = load_endpoints(spec)
    pts = grid_points(spec)
    zs = [complex(x, y) for x, y in pts]
    if spec.workers > 1 and len(zs) > 1:
        chunks = [zs[i::spec.workers] for i in range(spec.workers)]
        with ProcessPoolExecutor(spec.workers, initializer=_init_worker,
                                 initargs=(E, spec.quadrature, spec.divisor, spec.theta_tol)) as ex:
            parts = list(ex.map(_green_chunk, chunks))
        vals = [0.0] * len(zs)
        for i, part in enumerate(parts):
            vals[i::spec.workers] = part
    else:
        prob = SegmentProblem(E, spec.quadrature, spec.divisor, spec.theta_tol)
        vals = [prob.green(z) for z in zs]
    return EXIT_OK, [(x, y, g) for (x, y), g in zip(pts, vals)]


def run_periods(spec: JobSpec) -> tuple[int, dict]:
    E = load_endpoints(spec)
    En, amap = normalize(E)
    pd = compute_periods(En, spec.quadrature)
    ured = reduce_mod_lattice(pd.u_infinity, pd).value
    report = {
        "genus": pd.genus,
        "endpoints": list(E.endpoints),
        "normalized_endpoints": list(En.endpoints),
        "affine_map": {"scale": amap.scale, "shift": amap.shift},
        "Pi_real": pd.Pi.real,
        "Pi_imag": pd.Pi.imag,
        "norm_matrix_real": pd.norm_matrix.real,
        "norm_matrix_imag": pd.norm_matrix.imag,
        "u_infinity_real": ured.real,
        "u_infinity_imag": ured.imag,
        "quadrature_nodes": spec.quadrature.nodes_per_interval,
    }
    return EXIT_OK, report


def run_verify(spec: JobSpec) -> tuple[int, dict]:
    checks = run_battery(cfg=spec.quadrature, theta_tol=spec.theta_tol, divisor=spec.divisor)
    ok = all(c.passed for c in checks)
    report = {
        "passed": ok,
        "theta_tol": spec.theta_tol,
        "divisor_override": None if spec.divisor is None else list(spec.divisor),
        "checks": [{"name": c.name, "passed": c.passed, "observed": c.observed,
                    "tolerance": c.tolerance, "detail": c.detail} for c in checks],
    }
    return (EXIT_OK if ok else EXIT_FAIL), report


# ----------------------------------------------------------------- parser


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise CliError("NON_NUMERIC_ENDPOINT", f"cannot parse {text!r} as numbers") from None


def _pair(text: str) -> tuple[float, float]:
    v = _floats(text)
    if len(v) == 1:
        return v[0], v[0]
    if len(v) != 2:
        raise CliError("BAD_ARGUMENTS", f"expected 'lo,hi', got {text!r}")
    return v[0], v[1]


def _resolution(text: str) -> tuple[int, int]:
    try:
        v = [int(t) for t in text.split(",")]
    except ValueError:
        raise CliError("BAD_ARGUMENTS", f"bad resolution {text!r}") from None
    return (v[0], 1) if len(v) == 1 else (v[0], v[1])


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError("BAD_ARGUMENTS", message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="segcap", description="Capacity and Green's function of real segments.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("--endpoints", action="append", metavar="LIST",
                        help="comma separated endpoints; repeatable")
    common.add_argument("--input", metavar="FILE", help='JSON file {"endpoints": [...]}')
    common.add_argument("--nodes", type=int, default=QuadratureConfig.nodes_per_interval)
    common.add_argument("--max-refinements", type=int, default=QuadratureConfig.max_refinements)
    common.add_argument("--quad-tol", type=float, default=QuadratureConfig.target_tol)
    common.add_argument("--theta-tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--divisor", metavar="LIST", help="branch indices of the divisor, e.g. 2,3")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--format", dest="fmt", choices=("json", "csv"))
    for name, helptext in [("cap", "logarithmic capacity"), ("periods", "period matrix dump"),
                           ("verify", "run the oracle battery")]:
        sub.add_parser(name, parents=[common], help=helptext)
    g = sub.add_parser("green", parents=[common], help="Green's function on a grid (CSV)")
    g.add_argument("--x-range", type=_pair, default=(-2.0, 2.0), metavar="LO,HI")
    g.add_argument("--y-range", type=_pair, default=(0.0, 0.0), metavar="LO,HI")
    g.add_argument("--resolution", type=_resolution, default=(101, 1), metavar="NX[,NY]")
    g.add_argument("--workers", type=int, default=1)
    return p


_VALUE_FLAGS = ("--endpoints", "--x-range", "--y-range", "--divisor")


def _glue_negative_values(argv: Sequence[str]) -> list[str]:
    """Turn ``--endpoints -1,0`` into ``--endpoints=-1,0`` so argparse does not read a flag."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            else:
                out.append(f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def spec_from_args(argv: Sequence[str] | None = None) -> JobSpec:
    argv = sys.argv[1:] if argv is None else list(argv)
    a = build_parser().parse_args(_glue_negative_values(argv))
    endpoints = None
    if a.endpoints:
        endpoints = tuple(x for chunk in a.endpoints for x in _floats(chunk))
    try:
        quad = QuadratureConfig(a.nodes, a.max_refinements, a.quad_tol)
    except SegcapError as exc:
        raise CliError("BAD_ARGUMENTS", exc.message) from None
    divisor = None
    if a.divisor is not None:
        divisor = tuple(int(x) for x in _floats(a.divisor))
    fmt = a.fmt or {"green": "csv", "verify": "table"}.get(a.command, "json")
    extra = {}
    if a.command == "green":
        extra = dict(x_range=a.x_range, y_range=a.y_range, resolution=a.resolution, workers=a.workers)
    return JobSpec(command=a.command, endpoints=endpoints, input_path=a.input, quadrature=quad,
                   theta_tol=a.theta_tol, divisor=divisor, out=a.out, fmt=fmt, **extra)


def render(spec: JobSpec, payload) -> str:
    if spec.command == "green":
        if spec.fmt == "csv":
            return _csv(("x", "y", "G"), payload)
        return dumps([{"x": x, "y": y, "G": g} for x, y, g in payload]) + "\n"
    if spec.fmt == "table":
        return _verify_table(payload)
    if spec.fmt == "csv":
        if spec.command == "verify":
            rows = [(c["name"], "PASS" if c["passed"] else "FAIL", _fmt_float(c["observed"]),
                     _fmt_float(c["tolerance"])) for c in payload["checks"]]
            return "name,status,observed,tolerance\n" + "".join(",".join(r) + "\n" for r in rows)
        if spec.command == "cap":
            return _csv(("capacity", "genus"), [(payload["capacity"], payload["genus"])])
        raise CliError("BAD_ARGUMENTS", f"{spec.command} has no CSV form")
    return dumps(payload) + "\n"


def _emit(text: str, out: str | None):
    if out:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise CliError("IO_ERROR", f"cannot write {out}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    spec = None
    try:
        spec = spec_from_args(argv)
        runner = {"cap": run_cap, "green": run_green, "periods": run_periods, "verify": run_verify}
        status, payload = runner[spec.command](spec)
        _emit(render(spec, payload), spec.out)
        return status
    except SegcapError as exc:
        err = {"error": exc.code, "module": exc.module, "message": exc.message}
        sys.stdout.write(dumps(err) + "\n")
        if exc.code == "IO_ERROR":
            return EXIT_IO
        if exc.module in INPUT_MODULES or exc.code in INPUT_CODES:
            return EXIT_INPUT
        return EXIT_NUMERIC


def _verify_table(report: dict) -> str:
    lines = []
    for c in report["checks"]:
        flag = "PASS" if c["passed"] else "FAIL"
        lines.append(f"{flag}  {c['name']:<44s} observed={c['observed']:.3e} tol={c['tolerance']:.1e}")
    lines.append("ALL PASS" if report["passed"] else "SOME CHECKS FAILED")
    return "\n".join(lines) + "\n"


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
