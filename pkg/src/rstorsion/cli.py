"""Config-driven command line front end.

Usage: rstorsion MODE [--input JOB.toml] [--output FILE] [--format json|csv]

Modes
    expand        evaluate the torsion expansion for a geometry over a p range
    cp1           exact vs asymptotic report for the projective line
    orbifold      stratum coefficients and complex-valued corrections
    mellin-check  closed-form transforms of the g suite vs the engine
    selftest      run every oracle pair and report max deviations

The job file is TOML with up to three tables.  [geometry] describes the base
manifold (keys n, rk_e, vol, int_c1tm, int_c1e, log_det_integral).  Each
[[strata]] entry describes a fixed-point stratum (keys n_j, m_j, theta_j,
angles, volume).  [run] sets mode, p, k, format, tol; command line flags
override it.  p accepts an integer, a list of integers, or an inline table
{start, stop, step} (stop inclusive).

Exit codes: 0 success, 2 bad configuration, 3 tolerance failure, 4 domain
error.  Output for a fixed job file is byte-stable across runs.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import tomli

from .errors import ConfigError, DomainError, ToleranceError
from .heatmodel import GFunctionId, GeometricData, g_decay_bound, g_eval, g_mellin_closed, \
    g_mellin_derivative_at_zero, g_small_u_coeffs
from .mellin import mellin_at_zero, mellin_derivative_at_zero
from .orbifold import OrbifoldData, StratumData, gamma_j0, kappa_j0_with_error, \
    orbifold_expansion_eval
from .selftest import run_all
from .torsion import ExpansionTable, build_expansion_table, expansion_eval
from . import cp1

MODES = ("expand", "cp1", "orbifold", "mellin-check", "selftest")
FORMATS = ("json", "csv")

_GEOMETRY_KEYS = {"n", "rk_e", "vol", "int_c1tm", "int_c1e", "log_det_integral"}
_STRATUM_KEYS = {"n_j", "m_j", "theta_j", "angles", "volume"}
_RUN_KEYS = {"mode", "p", "k", "format", "tol"}


@dataclass(frozen=True)
class JobConfig:
    """Fully resolved job: mode plus whatever sections that mode consumes."""

    mode: str
    geometry: GeometricData | None
    strata: tuple[StratumData, ...]
    p_values: tuple[int, ...]
    k: int
    fmt: str
    tol: float


def _check_keys(section: dict, allowed: set[str], where: str) -> None:
    extra = sorted(set(section) - allowed)
    if extra:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(extra)}")


def _get_int(section: dict, key: str, where: str) -> int:
    value = section.get(key)
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError(f"{where}.{key} must be an integer, got {value!r}")
    return value


def _get_float(section: dict, key: str, where: str, default: float | None = None) -> float:
    value = section.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number, got {value!r}")
    return float(value)


def _parse_geometry(section: Any) -> GeometricData:
    if not isinstance(section, dict):
        raise ConfigError("[geometry] must be a table")
    _check_keys(section, _GEOMETRY_KEYS, "[geometry]")
    for key in ("n", "rk_e", "vol", "int_c1tm", "int_c1e"):
        if key not in section:
            raise ConfigError(f"[geometry] is missing required key {key}")
    return GeometricData(
        n=_get_int(section, "n", "geometry"),
        rk_e=_get_int(section, "rk_e", "geometry"),
        vol=_get_float(section, "vol", "geometry"),
        int_c1tm=_get_float(section, "int_c1tm", "geometry"),
        int_c1e=_get_float(section, "int_c1e", "geometry"),
        log_det_integral=_get_float(section, "log_det_integral", "geometry", 0.0),
    )


def _parse_stratum(section: Any, index: int) -> StratumData:
    where = f"strata[{index}]"
    if not isinstance(section, dict):
        raise ConfigError(f"[[{where}]] must be a table")
    _check_keys(section, _STRATUM_KEYS, where)
    for key in _STRATUM_KEYS - {"theta_j"}:
        if key not in section:
            raise ConfigError(f"{where} is missing required key {key}")
    angles = section["angles"]
    if not isinstance(angles, list) or not angles or \
            any(isinstance(a, bool) or not isinstance(a, (int, float)) for a in angles):
        raise ConfigError(f"{where}.angles must be a non-empty list of numbers")
    return StratumData(
        n_j=_get_int(section, "n_j", where),
        m_j=_get_int(section, "m_j", where),
        theta_j=_get_float(section, "theta_j", where, 0.0),
        angles=tuple(float(a) for a in angles),
        volume=_get_float(section, "volume", where),
    )


def _parse_p(value: Any) -> tuple[int, ...]:
    """p as a single power, an explicit list, or {start, stop, step}."""
    if isinstance(value, bool):
        raise ConfigError(f"run.p must be integer-valued, got {value!r}")
    if isinstance(value, int):
        return (value,)
    if isinstance(value, list):
        if not value or any(isinstance(p, bool) or not isinstance(p, int) for p in value):
            raise ConfigError("run.p list entries must be integers")
        return tuple(value)
    if isinstance(value, dict):
        _check_keys(value, {"start", "stop", "step"}, "run.p")
        start = _get_int(value, "start", "run.p")
        stop = _get_int(value, "stop", "run.p")
        step = value.get("step", 1)
        if not isinstance(step, int) or isinstance(step, bool) or step <= 0:
            raise ConfigError(f"run.p.step must be a positive integer, got {step!r}")
        if stop < start:
            raise ConfigError("run.p.stop must be >= run.p.start")
        return tuple(range(start, stop + 1, step))
    raise ConfigError(f"run.p must be an integer, a list, or a start/stop table, got {value!r}")


def load_config(
    path: str | None,
    *,
    mode: str | None = None,
    fmt: str | None = None,
    tol: float | None = None,
) -> JobConfig:
    """Read a TOML job file and merge command line overrides on top."""
    raw: dict[str, Any] = {}
    if path is not None:
        try:
            with open(path, "rb") as handle:
                raw = tomli.load(handle)
        except FileNotFoundError:
            raise ConfigError(f"job file not found: {path}")
        except tomli.TOMLDecodeError as exc:
            raise ConfigError(f"job file {path} is not valid TOML: {exc}")
    _check_keys(raw, {"geometry", "strata", "run"}, "the job file")

    run = raw.get("run", {})
    if not isinstance(run, dict):
        raise ConfigError("[run] must be a table")
    _check_keys(run, _RUN_KEYS, "[run]")

    resolved_mode = mode or run.get("mode")
    if resolved_mode not in MODES:
        raise ConfigError(f"mode must be one of {', '.join(MODES)}, got {resolved_mode!r}")

    resolved_fmt = fmt or run.get("format", "json")
    if resolved_fmt not in FORMATS:
        raise ConfigError(f"format must be one of {', '.join(FORMATS)}, got {resolved_fmt!r}")

    geometry = None
    if "geometry" in raw:
        geometry = _parse_geometry(raw["geometry"])

    strata_raw = raw.get("strata", [])
    if not isinstance(strata_raw, list):
        raise ConfigError("[[strata]] must be an array of tables")
    strata = tuple(_parse_stratum(entry, i) for i, entry in enumerate(strata_raw))

    p_values: tuple[int, ...] = ()
    if "p" in run:
        p_values = _parse_p(run["p"])

    k = run.get("k", 1)
    if not isinstance(k, int) or isinstance(k, bool):
        raise ConfigError(f"run.k must be an integer, got {k!r}")

    resolved_tol = tol if tol is not None else _get_float(run, "tol", "run", 1e-8)

    needs_geometry = resolved_mode in ("expand", "orbifold")
    if needs_geometry and geometry is None:
        raise ConfigError(f"mode {resolved_mode} requires a [geometry] table")
    if resolved_mode == "orbifold" and not strata:
        raise ConfigError("mode orbifold requires at least one [[strata]] entry")
    if resolved_mode in ("expand", "cp1", "orbifold") and not p_values:
        raise ConfigError(f"mode {resolved_mode} requires run.p")

    return JobConfig(
        mode=resolved_mode,
        geometry=geometry,
        strata=strata,
        p_values=p_values,
        k=k,
        fmt=resolved_fmt,
        tol=resolved_tol,
    )


def _table_payload(table: ExpansionTable) -> dict:
    return {
        "n": table.n,
        "terms": [
            {"order": order, "alpha": alpha, "beta": beta}
            for order, alpha, beta in table.terms
        ],
    }


def run_expand(cfg: JobConfig) -> tuple[dict, list[str], list[list]]:
    """Coefficient table plus expansion values over the requested powers."""
    table = build_expansion_table(cfg.geometry, max_order=cfg.k)
    rows = [[p, expansion_eval(table, p, cfg.k)] for p in cfg.p_values]
    payload = {
        "table": _table_payload(table),
        "evaluations": [{"p": p, "value": value} for p, value in rows],
    }
    return payload, ["p", "value"], rows


def run_cp1(cfg: JobConfig) -> tuple[dict, list[str], list[list]]:
    fields = ["p", "two_log_T", "covolume", "asymptotic_prediction", "residual",
              "arithmetic_degree"]
    reports = [cp1.cp1_report(p) for p in cfg.p_values]
    rows = [[getattr(r, name) for name in fields] for r in reports]
    payload = {"reports": [dict(zip(fields, row)) for row in rows]}
    return payload, fields, rows


def run_orbifold(cfg: JobConfig) -> tuple[dict, list[str], list[list]]:
    """Strata coefficients with error estimates, then complex corrections."""
    data = OrbifoldData(geom=cfg.geometry, strata=cfg.strata)
    table = build_expansion_table(cfg.geometry, max_order=cfg.k)
    strata_payload = []
    for stratum in cfg.strata:
        kappa, kappa_err = kappa_j0_with_error(stratum, cfg.geometry.n, cfg.geometry.rk_e)
        strata_payload.append({
            "n_j": stratum.n_j,
            "m_j": stratum.m_j,
            "theta_j": stratum.theta_j,
            "gamma_0": gamma_j0(stratum, cfg.geometry.n, cfg.geometry.rk_e),
            "kappa_0": kappa,
            "kappa_error": kappa_err,
        })
    rows = []
    for p in cfg.p_values:
        value = orbifold_expansion_eval(data, table, p, cfg.k)
        rows.append([p, value.real, value.imag])
    payload = {
        "table": _table_payload(table),
        "strata": strata_payload,
        "evaluations": [{"p": p, "real": re, "imag": im} for p, re, im in rows],
    }
    return payload, ["p", "real", "imag"], rows


def run_mellin_check(cfg: JobConfig) -> tuple[dict, list[str], list[list]]:
    """Engine vs closed form for every g function; gate on cfg.tol."""
    fields = ["g_function", "closed_value", "engine_value", "closed_derivative",
              "engine_derivative", "deviation", "error_estimate"]
    rows = []
    worst = 0.0
    for gid in GFunctionId:
        f = lambda u, gid=gid: g_eval(gid, u)
        sing = g_small_u_coeffs(gid)
        closed_value = g_mellin_closed(gid, 0.0)
        closed_derivative = g_mellin_derivative_at_zero(gid)
        engine_value = mellin_at_zero(f, sing)
        result = mellin_derivative_at_zero(f, sing, g_decay_bound(gid))
        deviation = max(abs(engine_value - closed_value),
                        abs(result.derivative_at_zero - closed_derivative))
        worst = max(worst, deviation)
        rows.append([gid.value, closed_value, engine_value, closed_derivative,
                     result.derivative_at_zero, deviation, result.error_estimate])
    payload = {"rows": [dict(zip(fields, row)) for row in rows], "worst_deviation": worst}
    return payload, fields, rows


def run_selftest(cfg: JobConfig) -> tuple[dict, list[str], list[list]]:
    results = run_all()
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status} {result.name} ({result.elapsed:.2f}s): {result.detail}")
    rows = [[r.name, r.passed, r.detail] for r in results]
    payload = {"checks": [{"name": n, "passed": ok, "detail": d} for n, ok, d in rows]}
    return payload, ["check", "passed", "detail"], rows


_RUNNERS: dict[str, Callable[[JobConfig], tuple[dict, list[str], list[list]]]] = {
    "expand": run_expand,
    "cp1": run_cp1,
    "orbifold": run_orbifold,
    "mellin-check": run_mellin_check,
    "selftest": run_selftest,
}


def _csv_cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render(payload: dict, header: list[str], rows: list[list], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_csv_cell(cell) for cell in row))
    return "\n".join(lines) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rstorsion",
        description="Asymptotic torsion expansions for powers of a positive line bundle.",
    )
    parser.add_argument("mode", nargs="?", choices=MODES,
                        help="job mode; may also come from [run].mode in the job file")
    parser.add_argument("--input", help="TOML job file")
    parser.add_argument("--output", help="write results here instead of stdout")
    parser.add_argument("--format", choices=FORMATS, dest="fmt",
                        help="output format (default json)")
    parser.add_argument("--tol", type=float,
                        help="deviation gate for mellin-check (default 1e-8)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.input, mode=args.mode, fmt=args.fmt, tol=args.tol)
        payload, header, rows = _RUNNERS[cfg.mode](cfg)
        # Selftest already narrates to stdout; write the table only on request.
        if cfg.mode != "selftest" or args.output is not None:
            _emit(render(payload, header, rows, cfg.fmt), args.output)
        if cfg.mode == "mellin-check" and payload["worst_deviation"] > cfg.tol:
            print(
                f"error: worst deviation {payload['worst_deviation']:.3e} exceeds "
                f"tolerance {cfg.tol:.3e}",
                file=sys.stderr,
            )
            return 3
        if cfg.mode == "selftest" and not all(c["passed"] for c in payload["checks"]):
            failed = ", ".join(c["name"] for c in payload["checks"] if not c["passed"])
            print(f"error: selftest failures: {failed}", file=sys.stderr)
            return 3
        return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ToleranceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
