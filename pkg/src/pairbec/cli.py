"""Command line front end with deterministic run records and a result cache.

Every subcommand resolves its parameters to a canonical dictionary, hashes
it, and answers from the cache when an identical run is stored; otherwise it
computes, stores, and prints. Records are JSON with sorted keys and floats
at 17 significant digits, so a given parameter set always produces the same
bytes. Wall-clock metadata lives in a sidecar file next to the record, never
inside it.

Exit codes: 0 success, 2 configuration or validation problems, 3 solver
non-convergence, 4 I/O failures.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import hashlib
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .bec import (
    BoundModel,
    ExplicitModel,
    NoBoundModel,
    condensate_stats,
    critical_density,
)
from .discretize import SigmaProfile, assemble_operator, build_grid, sigma_profile
from .eigensolve import DEFAULT_SEED, lowest_eigenpairs
from .errors import (
    ConfigurationError,
    ConvergenceError,
    DomainError,
    SizeCapError,
    ValidationError,
)
from .geometry import DomainSpec
from .spectral import (
    SAFETY_FACTOR,
    convergence_study,
    count_below,
    find_gamma,
    threshold_dimless,
)
from .units import (
    REFERENCE_PAIR_EXTENT_M,
    d_from_gap,
    energy_unit_joules,
    gap_from_d,
)

_TOOL = "pairbec"
_SCHEMA_VERSION = "1"
_ENV_CACHE = "PAIRBEC_CACHE_DIR"

_EXPLICIT_L_CAP = 16.0


# ---------------------------------------------------------------------------
# deterministic JSON


def _fmt_float(x: float) -> str:
    if not np.isfinite(x):
        raise ValidationError(f"run records cannot carry non-finite numbers, got {x!r}")
    return format(float(x), ".17g")


def _dump_json(obj, pretty: bool) -> str:
    """Serialize with sorted keys and 17-significant-digit floats.

    The standard encoder cannot be told how to print floats, so this walks
    the structure itself; only the types that appear in run records are
    supported.
    """

    def walk(node, depth):
        pad = "  " * depth if pretty else ""
        pad_in = "  " * (depth + 1) if pretty else ""
        nl = "\n" if pretty else ""
        if node is None:
            return "null"
        if isinstance(node, (bool, np.bool_)):
            return "true" if node else "false"
        if isinstance(node, (int, np.integer)):
            return str(int(node))
        if isinstance(node, (float, np.floating)):
            return _fmt_float(node)
        if isinstance(node, str):
            return json.dumps(node)
        if isinstance(node, dict):
            if not node:
                return "{}"
            items = []
            for key in sorted(node):
                if not isinstance(key, str):
                    raise ValidationError(f"record keys must be strings, got {key!r}")
                items.append(f"{pad_in}{json.dumps(key)}:{' ' if pretty else ''}{walk(node[key], depth + 1)}")
            return "{" + nl + ("," + nl).join(items) + nl + pad + "}"
        if isinstance(node, (list, tuple, np.ndarray)):
            seq = list(node)
            if not seq:
                return "[]"
            items = [pad_in + walk(v, depth + 1) for v in seq]
            return "[" + nl + ("," + nl).join(items) + nl + pad + "]"
        raise ValidationError(f"cannot serialize {type(node).__name__} into a run record")

    return walk(obj, 0)


def _digest(command: str, params: dict) -> str:
    payload = _dump_json({"command": command, "params": params}, pretty=False)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _record_bytes(command: str, params: dict, outputs: dict, digest: str) -> bytes:
    record = {
        "schema_version": _SCHEMA_VERSION,
        "tool": _TOOL,
        "tool_version": __version__,
        "command": command,
        "params": params,
        "params_digest": digest,
        "outputs": outputs,
    }
    return (_dump_json(record, pretty=True) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# cache


def _cache_root(args) -> Path | None:
    if args.no_cache:
        return None
    if args.cache_dir:
        return Path(args.cache_dir)
    env = os.environ.get(_ENV_CACHE)
    if env:
        return Path(env)
    return Path.home() / ".cache" / _TOOL


def _write_atomic(path: Path, data: bytes) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    closed = False
    try:
        os.write(fd, data)
        os.close(fd)
        closed = True
        os.replace(tmp, path)
    except BaseException:
        if not closed:
            os.close(fd)
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _cache_read(root: Path, digest: str):
    entry = root / digest
    try:
        record = (entry / "record.json").read_bytes()
    except FileNotFoundError:
        return None, None
    try:
        table = (entry / "table.csv").read_bytes()
    except FileNotFoundError:
        table = None
    return record, table


def _cache_write(root: Path, digest: str, command: str, record: bytes, table: bytes | None) -> None:
    entry = root / digest
    entry.mkdir(parents=True, exist_ok=True)
    _write_atomic(entry / "record.json", record)
    if table is not None:
        _write_atomic(entry / "table.csv", table)
    meta_path = entry / "meta.json"
    if not meta_path.exists():
        meta = {
            "command": command,
            "created_utc": _dt.datetime.now(_dt.timezone.utc).isoformat(),
            "tool_version": __version__,
        }
        _write_atomic(meta_path, (json.dumps(meta, sort_keys=True, indent=2) + "\n").encode())


def _produce(args, command: str, params: dict, execute) -> int:
    """Answer from the cache or compute; print record or table to stdout."""
    digest = _digest(command, params)
    root = _cache_root(args)
    record = table = None
    if root is not None:
        record, table = _cache_read(root, digest)
    if record is None:
        outputs, table_text = execute(params)
        record = _record_bytes(command, params, outputs, digest)
        table = table_text.encode("utf-8") if table_text is not None else None
        if root is not None:
            _cache_write(root, digest, command, record, table)
    fmt = args.format or args.default_format
    if fmt == "csv":
        if table is None:
            raise ConfigurationError(f"the {command} command produces no table")
        sys.stdout.write(table.decode("utf-8"))
    else:
        sys.stdout.write(record.decode("utf-8"))
    return 0


def _load_cached_record(root: Path, digest: str) -> dict | None:
    record, _ = _cache_read(root, digest)
    if record is None:
        return None
    return json.loads(record.decode("utf-8"))


# ---------------------------------------------------------------------------
# parameter parsing helpers


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigurationError(f"{flag} expects comma-separated numbers, got {text!r}") from exc
    if not values:
        raise ConfigurationError(f"{flag} must name at least one value")
    return values


def _parse_int_list(text: str, flag: str) -> list[int]:
    values = _parse_float_list(text, flag)
    out = []
    for v in values:
        if int(v) != v:
            raise ConfigurationError(f"{flag} expects integers, got {v!r}")
        out.append(int(v))
    return out


def _parse_sigma(text: str) -> tuple[SigmaProfile, str]:
    """Parse a contact-profile flag into a profile and its canonical form.

    Accepted forms: "zero", a bare number (uniform strength), "constant:c",
    "step:c,y0", "table:v0,v1,...". A zero strength canonicalizes to "zero".
    """
    t = text.strip()
    if t == "zero":
        return sigma_profile("zero"), "zero"
    if ":" not in t:
        try:
            c = float(t)
        except ValueError as exc:
            raise ConfigurationError(f"cannot read contact profile {text!r}") from exc
        kind, rest = "constant", str(c)
    else:
        kind, _, rest = t.partition(":")
    if kind == "constant":
        try:
            c = float(rest)
        except ValueError as exc:
            raise ConfigurationError(f"cannot read contact strength {rest!r}") from exc
        if c == 0.0:
            return sigma_profile("zero"), "zero"
        return sigma_profile("constant", strength=c), f"constant:{_fmt_float(c)}"
    if kind == "step":
        parts = _parse_float_list(rest, "--sigma step")
        if len(parts) != 2:
            raise ConfigurationError("step profile needs strength,cutoff")
        prof = sigma_profile("step", strength=parts[0], cutoff=parts[1])
        return prof, f"step:{_fmt_float(parts[0])},{_fmt_float(parts[1])}"
    if kind == "table":
        parts = _parse_float_list(rest, "--sigma table")
        prof = sigma_profile("table", samples=parts)
        return prof, "table:" + ",".join(_fmt_float(v) for v in parts)
    raise ConfigurationError(f"unknown contact profile kind {kind!r}")


# ---------------------------------------------------------------------------
# spectrum


def _execute_spectrum(params: dict, profile: SigmaProfile):
    grid = build_grid(DomainSpec(L=params["L"]), params["m"])
    op = assemble_operator(grid, profile)
    result = lowest_eigenpairs(
        op,
        params["k"],
        tol=params["tol"],
        maxiter=params["maxiter"],
        seed=params["seed"],
        method=params["method"],
    )
    thr = threshold_dimless()
    e0 = float(result.eigenvalues[0])
    outputs = {
        "eigenvalues": [float(v) for v in result.eigenvalues],
        "residuals": [float(r) for r in result.residuals],
        "threshold": thr,
        "safety_factor": SAFETY_FACTOR,
        "count_below_safety": count_below(result, SAFETY_FACTOR * thr),
        "ratio_to_threshold": e0 / thr,
        "gap_e0": thr - e0 if 0.0 <= e0 <= thr else None,
        "dof": op.n,
        "method": result.method,
        "iterations": result.iterations,
    }
    if params["d_meters"] is not None:
        d = params["d_meters"]
        unit = energy_unit_joules(d)
        ev = 1.602176634e-19
        outputs["physical"] = {
            "pair_extent_m": d,
            "energy_unit_j": unit,
            "eigenvalues_ev": [float(v) * unit / ev for v in result.eigenvalues],
            "gap_ev": (thr - e0) * unit / ev if 0.0 <= e0 <= thr else None,
        }
    lines = ["index,eigenvalue,residual"]
    for i, (v, r) in enumerate(zip(result.eigenvalues, result.residuals)):
        lines.append(f"{i},{_fmt_float(v)},{_fmt_float(r)}")
    return outputs, "\n".join(lines) + "\n"


def _handle_spectrum(args) -> int:
    profile, canon = _parse_sigma(args.sigma)
    params = {
        "L": float(args.L),
        "m": int(args.m),
        "k": int(args.k),
        "sigma": canon,
        "tol": float(args.tol),
        "maxiter": int(args.maxiter),
        "seed": int(args.seed),
        "method": args.method,
        "d_meters": float(args.d_meters) if args.d_meters is not None else None,
    }
    return _produce(args, "spectrum", params, lambda p: _execute_spectrum(p, profile))


# ---------------------------------------------------------------------------
# converge


def _converge_params(L_list, m_list, sigma_canon, k, tol, maxiter, seed, method) -> dict:
    return {
        "L_list": [float(L) for L in L_list],
        "m_list": [int(m) for m in m_list],
        "sigma": sigma_canon,
        "k": int(k),
        "tol": float(tol),
        "maxiter": int(maxiter),
        "seed": int(seed),
        "method": method,
    }


def _execute_converge(params: dict, profile: SigmaProfile):
    table = convergence_study(
        params["L_list"],
        params["m_list"],
        sigma=profile,
        k=params["k"],
        tol=params["tol"],
        maxiter=params["maxiter"],
        seed=params["seed"],
        method=params["method"],
    )
    rows = []
    for r in table.rows:
        rows.append(
            {
                "L": r.L,
                "m": r.m,
                "E0": r.e0,
                "E1": r.e1,
                "count": r.count,
                "ratio_to_threshold": r.ratio_to_threshold,
                "order_ratio": r.order_ratio,
                "flagged": r.flagged,
            }
        )
    outputs = {
        "rows": rows,
        "threshold": table.threshold,
        "extrapolated_e0": table.extrapolated_e0,
        "extrapolation_error": table.extrapolation_error,
        "extrapolated_ratio": table.extrapolated_e0 / table.threshold,
    }
    return outputs, table.to_csv()


def _converge_via_cache(root: Path | None, params: dict, profile: SigmaProfile) -> dict:
    """Outputs of a convergence run, served from the cache when present.

    Lets other commands that need an extrapolated ground energy share the
    expensive eigensolves with explicit `converge` invocations.
    """
    digest = _digest("converge", params)
    if root is not None:
        cached = _load_cached_record(root, digest)
        if cached is not None:
            return cached["outputs"]
    outputs, table_text = _execute_converge(params, profile)
    if root is not None:
        record = _record_bytes("converge", params, outputs, digest)
        _cache_write(root, digest, "converge", record, table_text.encode("utf-8"))
    return outputs


def _handle_converge(args) -> int:
    profile, canon = _parse_sigma(args.sigma)
    params = _converge_params(
        _parse_float_list(args.L_list, "--L-list"),
        _parse_int_list(args.m_list, "--m-list"),
        canon,
        args.k,
        args.tol,
        args.maxiter,
        args.seed,
        args.method,
    )
    return _produce(args, "converge", params, lambda p: _execute_converge(p, profile))


# ---------------------------------------------------------------------------
# gamma


def _execute_gamma(params: dict):
    search = find_gamma(
        params["L"],
        params["m"],
        tol=params["tol"],
        sigma_cap=params["sigma_cap"],
        solver_tol=params["solver_tol"],
        maxiter=params["maxiter"],
        seed=params["seed"],
        method=params["method"],
    )
    outputs = {
        "sigma_star": search.sigma_star,
        "bracket_low": search.bracket_low,
        "bracket_high": search.bracket_high,
        "e0_at_sigma_star": search.e0_at_sigma_star,
        "target": search.target,
        "evaluations": search.evaluations,
    }
    return outputs, None


def _gamma_disclosure(root: Path | None, digest: str, params: dict) -> None:
    """Tell the user about cached runs of the same search at other resolutions."""
    if root is None or not root.is_dir():
        return
    for entry in sorted(root.iterdir()):
        if entry.name == digest:
            continue
        try:
            rec = _load_cached_record(root, entry.name)
        except (OSError, ValueError):
            continue
        if not rec or rec.get("command") != "gamma":
            continue
        p = rec.get("params", {})
        if p.get("L") == params["L"] and p.get("tol") == params["tol"] and p.get("m") != params["m"]:
            out = rec.get("outputs", {})
            print(
                f"note: cached search at m={p.get('m')} gave "
                f"sigma_star={out.get('sigma_star')!r}",
                file=sys.stderr,
            )


def _handle_gamma(args) -> int:
    params = {
        "L": float(args.L),
        "m": int(args.m),
        "tol": float(args.tol),
        "sigma_cap": float(args.sigma_cap),
        "solver_tol": float(args.solver_tol),
        "maxiter": int(args.maxiter),
        "seed": int(args.seed),
        "method": args.method,
    }
    code = _produce(args, "gamma", params, lambda p: _execute_gamma(p))
    _gamma_disclosure(_cache_root(args), _digest("gamma", params), params)
    return code


# ---------------------------------------------------------------------------
# bec


def _resolve_ground_energy(args, root: Path | None) -> float:
    """Ground energy for the bound-pair gas: the flag when given, otherwise
    the Richardson-extrapolated value from the standard convergence run."""
    if args.E0 is not None:
        return float(args.E0)
    profile, canon = _parse_sigma("zero")
    params = _converge_params(
        [8.0], [64, 128], canon, 3, 1e-9, args.maxiter, args.seed, args.method
    )
    outputs = _converge_via_cache(root, params, profile)
    return float(outputs["extrapolated_e0"])


def _execute_bec(params: dict, models_by_L: dict) -> tuple[dict, str]:
    rows = []
    lines = ["L,mu,n0,n0_per_L,rho_ex"]
    for L in params["L_list"]:
        sol = condensate_stats(
            params["beta"], params["rho_used"], L, models_by_L[L], tol=params["tol"]
        )
        rows.append(
            {
                "L": sol.L,
                "mu": sol.mu,
                "n0": sol.n0,
                "n0_per_L": sol.n0_per_L,
                "rho_ex": sol.rho_ex,
                "tail_bound": sol.tail_bound,
                "residual": sol.residual,
                "model": sol.model,
            }
        )
        lines.append(
            ",".join(
                (
                    _fmt_float(sol.L),
                    _fmt_float(sol.mu),
                    _fmt_float(sol.n0),
                    _fmt_float(sol.n0_per_L),
                    _fmt_float(sol.rho_ex),
                )
            )
        )
    outputs = {
        "model": params["model"],
        "beta": params["beta"],
        "rho": params["rho_used"],
        "rho_crit": params.get("rho_crit"),
        "e0": params.get("e0"),
        "threshold": threshold_dimless(),
        "rows": rows,
    }
    return outputs, "\n".join(lines) + "\n"


def _handle_bec(args) -> int:
    if args.rho is not None and args.rho_mult is not None:
        raise ConfigurationError("--rho and --rho-mult are mutually exclusive")
    root = _cache_root(args)
    L_list = _parse_float_list(args.L_list, "--L-list")
    beta = float(args.beta)

    e0 = None
    rho_crit = None
    if args.model == "bound":
        e0 = _resolve_ground_energy(args, root)
    elif args.E0 is not None:
        raise ConfigurationError("--E0 only applies to the bound model")

    models_by_L: dict[float, object] = {}
    if args.model == "bound":
        model = BoundModel(e0)
        models_by_L = {L: model for L in L_list}
    elif args.model == "nobound":
        model = NoBoundModel()
        models_by_L = {L: model for L in L_list}
    else:
        for L in L_list:
            if L > _EXPLICIT_L_CAP:
                raise ConfigurationError(
                    f"explicit model solves the operator per length; capped at "
                    f"L <= {_EXPLICIT_L_CAP:g}, got {L:g}"
                )
            grid = build_grid(DomainSpec(L=L), int(args.m))
            op = assemble_operator(grid, sigma_profile("zero"))
            result = lowest_eigenpairs(
                op,
                int(args.k),
                tol=1e-9,
                maxiter=int(args.maxiter),
                seed=int(args.seed),
                method=args.method,
            )
            models_by_L[L] = ExplicitModel(result.eigenvalues)

    if args.rho is not None:
        rho_used = float(args.rho)
        rho_mult = None
    else:
        rho_mult = float(args.rho_mult) if args.rho_mult is not None else 2.0
        if args.model != "bound":
            raise ConfigurationError(
                "--rho-mult scales the critical density of the bound model; "
                "give --rho explicitly for this model"
            )
        rho_crit = critical_density(beta, e0)
        rho_used = rho_mult * rho_crit

    params = {
        "model": args.model,
        "beta": beta,
        "rho": float(args.rho) if args.rho is not None else None,
        "rho_mult": rho_mult,
        "e0": e0,
        "rho_crit": rho_crit,
        "rho_used": rho_used,
        "L_list": L_list,
        "tol": float(args.tol),
        "m": int(args.m),
        "k": int(args.k),
        "maxiter": int(args.maxiter),
        "seed": int(args.seed),
        "method": args.method,
    }
    return _produce(args, "bec", params, lambda p: _execute_bec(p, models_by_L))


# ---------------------------------------------------------------------------
# units


def _execute_units(params: dict):
    ratio = params["gap_ratio"]
    if params["d_meters"] is not None:
        extent = params["d_meters"]
        gap_ev = gap_from_d(extent, ratio)
    else:
        gap_ev = params["gap_ev"]
        extent = d_from_gap(gap_ev, ratio)
    note = (
        f"pair extension {format(extent, '.4e')} m; "
        f"reference order of magnitude {format(REFERENCE_PAIR_EXTENT_M, '.0e')} m"
    )
    outputs = {
        "gap_ev": gap_ev,
        "gap_ratio": ratio,
        "pair_extent_m": extent,
        "energy_unit_j": energy_unit_joules(extent),
        "reference_pair_extent_m": REFERENCE_PAIR_EXTENT_M,
        "note": note,
    }
    return outputs, None


def _handle_units(args) -> int:
    chosen = [args.gap_ev is not None, args.d_meters is not None, args.show_constants]
    if sum(chosen) != 1:
        raise ConfigurationError(
            "give exactly one of --gap-ev, --d-meters, --show-constants"
        )
    if args.show_constants:
        from .units import CODATA

        rows = (
            ("hbar", CODATA.hbar_js, "J s"),
            ("electron mass", CODATA.electron_mass_kg, "kg"),
            ("electron volt", CODATA.electron_volt_j, "J"),
        )
        for name, value, unit in rows:
            sys.stdout.write(f"{name:<14} {value!r} {unit}\n")
        return 0
    params = {
        "gap_ev": float(args.gap_ev) if args.gap_ev is not None else None,
        "d_meters": float(args.d_meters) if args.d_meters is not None else None,
        "gap_ratio": float(args.gap_ratio),
    }
    code = _produce(args, "units", params, _execute_units)
    outputs, _ = _execute_units(params)
    print("note: " + outputs["note"], file=sys.stderr)
    return code


# ---------------------------------------------------------------------------
# parser


def _add_common(sp, default_format: str) -> None:
    sp.add_argument("--cache-dir", default=None, help="cache directory (default: $%s or ~/.cache/%s)" % (_ENV_CACHE, _TOOL))
    sp.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")
    sp.add_argument(
        "--format",
        choices=("json", "csv"),
        default=None,
        help=f"stdout format (default: {default_format})",
    )
    sp.set_defaults(default_format=default_format)


def _add_solver(sp, tol_flag: bool = True) -> None:
    if tol_flag:
        sp.add_argument("--tol", type=float, default=1e-9, help="certified residual bound")
    sp.add_argument("--maxiter", type=int, default=5000, help="iteration budget per solver pass")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED, help="starting-block seed")
    sp.add_argument(
        "--method",
        choices=("auto", "dense", "lobpcg"),
        default="auto",
        help="eigensolver route",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=_TOOL,
        description="Bound electron pairs on a quantum wire and their condensation.",
    )
    parser.add_argument("--version", action="version", version=f"{_TOOL} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="lowest eigenvalues of one wire")
    sp.add_argument("--L", type=float, default=8.0, help="wire length in pair units")
    sp.add_argument("--m", type=int, default=64, help="lattice points per pair extension")
    sp.add_argument("--k", type=int, default=3, help="number of eigenpairs")
    sp.add_argument("--sigma", default="0", help="contact profile (zero | c | constant:c | step:c,y0 | table:v0,v1,...)")
    sp.add_argument("--d-meters", type=float, default=None, help="pair extension for physical units")
    _add_solver(sp)
    _add_common(sp, "json")
    sp.set_defaults(handler=_handle_spectrum)

    sp = sub.add_parser("converge", help="resolution study with extrapolation")
    sp.add_argument("--L-list", default="4,8", help="comma-separated wire lengths")
    sp.add_argument("--m-list", default="32,64,128", help="comma-separated resolutions")
    sp.add_argument("--sigma", default="0", help="contact profile")
    sp.add_argument("--k", type=int, default=3, help="eigenpairs per run")
    _add_solver(sp)
    _add_common(sp, "csv")
    sp.set_defaults(handler=_handle_converge)

    sp = sub.add_parser("gamma", help="critical contact strength by bisection")
    sp.add_argument("--L", type=float, default=8.0, help="wire length in pair units")
    sp.add_argument("--m", type=int, default=64, help="lattice points per pair extension")
    sp.add_argument("--tol", type=float, default=0.005, help="relative bracket width")
    sp.add_argument("--sigma-cap", type=float, default=1e6, help="largest strength to try")
    sp.add_argument("--solver-tol", type=float, default=1e-9, help="certified residual bound per eigensolve")
    _add_solver(sp, tol_flag=False)
    _add_common(sp, "json")
    sp.set_defaults(handler=_handle_gamma)

    sp = sub.add_parser("bec", help="condensate fraction across wire lengths")
    sp.add_argument("--model", choices=("bound", "nobound", "explicit"), default="bound")
    sp.add_argument("--beta", type=float, default=1.0, help="inverse temperature")
    sp.add_argument("--rho", type=float, default=None, help="pair density per unit length")
    sp.add_argument("--rho-mult", type=float, default=None, help="density as a multiple of the critical density (bound model)")
    sp.add_argument("--L-list", default="1000,10000,100000", help="comma-separated wire lengths")
    sp.add_argument("--E0", type=float, default=None, help="bound level; computed by extrapolation when omitted")
    sp.add_argument("--tol", type=float, default=1e-9, help="relative density tolerance")
    sp.add_argument("--m", type=int, default=32, help="resolution for the explicit model")
    sp.add_argument("--k", type=int, default=16, help="levels for the explicit model")
    sp.add_argument("--maxiter", type=int, default=5000)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--method", choices=("auto", "dense", "lobpcg"), default="auto")
    _add_common(sp, "csv")
    sp.set_defaults(handler=_handle_bec)

    sp = sub.add_parser("units", help="convert between gap and pair extension")
    sp.add_argument("--gap-ev", type=float, default=None, help="binding gap in eV")
    sp.add_argument("--d-meters", type=float, default=None, help="pair extension in meters")
    sp.add_argument("--gap-ratio", type=float, default=1.0, help="dimensionless gap over threshold")
    sp.add_argument("--show-constants", action="store_true", help="print the constants and exit")
    _add_common(sp, "json")
    sp.set_defaults(handler=_handle_units)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except (ConfigurationError, ValidationError, DomainError, SizeCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
