"""Command-line front end.

Subcommands: analyze, sweep, excited, saturate, perturb, selftest,
list-models.  Reports go to stdout (or --out) as JSON; sweeps as CSV with
one header row and floats at 17 significant digits.  Every run is fully
determined by its arguments plus --seed.  Exit codes: 0 success (an
undefined bound is a reported outcome, not an error), 2 configuration
error, 3 computation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import verify
from .bounds import EntanglementOptions, analyze_excited, analyze_ground
from .errors import FrustraError
from .models import (
    BUILTIN_MODELS,
    SpinModel,
    ising2,
    ising2_exact_bound_asymmetric,
    ising2_exact_bound_symmetric,
    ising2_exact_entanglement,
    load_model,
    make_builtin,
    regroup,
    split,
)
from .saturation import saturation_sweep, schmidt_splitting

CONFIG_ERROR = 2
COMPUTE_ERROR = 3


class ConfigError(Exception):
    pass


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _write_text(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_params(pairs) -> dict:
    params = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise ConfigError(f"--param expects k=v, got {pair!r}")
        key, raw = pair.split("=", 1)
        try:
            params[key.strip()] = float(raw)
        except ValueError:
            raise ConfigError(f"parameter {key!r} must be numeric, got {raw!r}") from None
    return params


def _load_model(args) -> SpinModel:
    name = args.model
    params = _parse_params(getattr(args, "param", None))
    if name in BUILTIN_MODELS:
        try:
            return make_builtin(name, **params)
        except (KeyError, FrustraError) as exc:
            raise ConfigError(str(exc)) from exc
    if name.endswith(".json"):
        if params:
            raise ConfigError("--param applies to built-in models only")
        try:
            return load_model(name)
        except (OSError, ValueError, FrustraError) as exc:
            raise ConfigError(f"cannot load model file {name!r}: {exc}") from exc
    raise ConfigError(f"unknown model {name!r}; see `frustra list-models` or pass a .json path")


def _parse_bipartition(model: SpinModel, spec: str):
    sides = spec.split("|")
    if len(sides) != 2:
        raise ConfigError(f"bipartition must have exactly two sides, got {spec!r}")
    parts = []
    for side in sides:
        labels = [s.strip() for s in side.split(",")] if "," in side else list(side.strip())
        try:
            parts.append(tuple(model.label_index(lab) for lab in labels))
        except FrustraError as exc:
            raise ConfigError(str(exc)) from exc
    return tuple(parts)


def _build_splitting(model: SpinModel, args, grouping=None):
    spec = getattr(args, "split", "default") or "default"
    if grouping is not None:
        model = regroup(model, grouping)
    if spec == "default":
        return split(model)
    if spec.startswith("file:"):
        path = spec[len("file:"):]
        try:
            with open(path, "r", encoding="utf-8") as fh:
                assignment = json.load(fh)
            local = assignment["local"]
        except (OSError, ValueError, KeyError) as exc:
            raise ConfigError(f"cannot read split file {path!r}: {exc}") from exc
        return split(model, local=local)
    if spec.startswith("schmidt:"):
        try:
            gamma = float(spec[len("schmidt:"):])
        except ValueError:
            raise ConfigError(f"bad schmidt gamma in {spec!r}") from None
        return schmidt_splitting(model, gamma).splitting
    raise ConfigError(f"unknown --split value {spec!r}")


def _ent_opts(args) -> EntanglementOptions:
    kwargs = {}
    if getattr(args, "seed", None) is not None:
        kwargs["seed"] = args.seed
    if getattr(args, "tol", None) is not None:
        kwargs["tol"] = args.tol
    return EntanglementOptions(**kwargs)


# ---------------------------------------------------------------------------
# subcommands


def _csv_table(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in columns])
    return buf.getvalue()


ANALYZE_COLUMNS = [
    "model", "E0", "E0_L", "E0_I", "E_f", "delta_e_ent", "entanglement",
    "entanglement_method", "ef_bound", "ef_bound_reason", "ratio_bound",
    "ratio_bound_reason", "E_I_max", "E_I_tot", "local_frustration",
    "interaction_frustration", "degenerate_ground",
]


def cmd_analyze(args) -> int:
    model = _load_model(args)
    grouping = _parse_bipartition(model, args.bipartition) if args.bipartition else None
    splitting = _build_splitting(model, args, grouping)
    report = analyze_ground(splitting, _ent_opts(args))
    if args.format == "csv":
        _write_text(_csv_table([report.to_dict(include_state=False)], ANALYZE_COLUMNS), args.out)
    else:
        _write_text(json.dumps(report.to_dict(), indent=2) + "\n", args.out)
    return 0


def _parse_grid(spec: str):
    try:
        lo, hi, count = spec.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError:
        raise ConfigError(f"--grid expects MIN:MAX:N, got {spec!r}") from None
    if count < 1 or hi < lo:
        raise ConfigError(f"bad grid {spec!r}")
    return np.linspace(lo, hi, count)


SWEEP_COLUMNS = [
    "g", "entanglement", "ef_bound_symmetric", "ef_bound_asymmetric",
    "closed_form_gse", "closed_form_fb", "closed_form_fb2",
    "dev_entanglement", "dev_ef_symmetric", "dev_ef_asymmetric",
]


def ising_sweep_row(g: float) -> dict:
    """One comparison row: numeric analysis against closed forms at field g."""
    model = ising2(g)
    sym = analyze_ground(split(model))
    asym = analyze_ground(split(model, local=[0]))
    gse = ising2_exact_entanglement(g)
    fb = ising2_exact_bound_symmetric(g)
    fb2 = ising2_exact_bound_asymmetric(g)
    return {
        "g": float(g),
        "entanglement": sym.entanglement,
        "ef_bound_symmetric": sym.ef_bound,
        "ef_bound_asymmetric": asym.ef_bound,
        "closed_form_gse": gse,
        "closed_form_fb": fb,
        "closed_form_fb2": fb2,
        "dev_entanglement": abs(sym.entanglement - gse),
        "dev_ef_symmetric": abs(sym.ef_bound - fb) if sym.ef_bound is not None else None,
        "dev_ef_asymmetric": abs(asym.ef_bound - fb2) if asym.ef_bound is not None else None,
    }


def ising_sweep_rows(gs, jobs: int = 1) -> list[dict]:
    gs = [float(g) for g in gs]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(ising_sweep_row, gs))
    return [ising_sweep_row(g) for g in gs]


def cmd_sweep(args) -> int:
    if args.model not in (None, "ising2"):
        raise ConfigError("sweep reproduces the two-spin transverse Ising figures; "
                          "only --model ising2 is supported")
    gs = _parse_grid(args.grid)
    rows = ising_sweep_rows(gs, jobs=args.jobs)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in SWEEP_COLUMNS])
    _write_text(buf.getvalue(), args.out)
    return 0


def _parse_j_list(spec: str, dimension: int):
    out = []
    for chunk in spec.split(","):
        chunk = chunk.strip()
        if ".." in chunk:
            lo, hi = chunk.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(chunk))
    for j in out:
        if j < 0 or j >= dimension:
            raise ConfigError(f"eigenstate index {j} out of range (dimension {dimension})")
    return out


EXCITED_COLUMNS = [
    "j", "E_j", "local_config", "E_L_j", "delta_j_ent", "delta_j_Kperp",
    "h_i_norm", "e_i_max_eigenvalue", "e_i_spectral_radius", "bound_29",
    "bound_30", "bound_exact_gap", "entanglement", "entanglement_method",
    "precondition_met", "pairing_flag",
]


def cmd_excited(args) -> int:
    model = _load_model(args)
    grouping = _parse_bipartition(model, args.bipartition) if args.bipartition else None
    splitting = _build_splitting(model, args, grouping)
    js = _parse_j_list(args.j, splitting.model.dimension)
    opts = _ent_opts(args)
    reports = [analyze_excited(splitting, j, opts).to_dict() for j in js]
    if args.format == "csv":
        for rep in reports:
            rep["local_config"] = ";".join(str(c) for c in rep["local_config"])
        _write_text(_csv_table(reports, EXCITED_COLUMNS), args.out)
    else:
        _write_text(json.dumps(reports, indent=2) + "\n", args.out)
    return 0


SATURATE_COLUMNS = [
    "gamma", "E0", "E0_L", "E0_I", "E_f", "delta_e_ent",
    "ef_bound", "entanglement", "excess", "overshoot_interaction",
]


def cmd_saturate(args) -> int:
    model = _load_model(args)
    grouping = _parse_bipartition(model, args.bipartition) if args.bipartition else None
    try:
        gammas = [float(x) for x in args.gammas.split(",")]
    except ValueError:
        raise ConfigError(f"bad --gammas list {args.gammas!r}") from None
    sweep = saturation_sweep(model, gammas, _ent_opts(args), grouping=grouping)
    if args.format == "json":
        payload = [
            {
                "gamma": r.gamma,
                "excess": r.excess,
                "overshoot_interaction": r.interaction_term,
                "unreliable": r.unreliable,
                "report": r.report.to_dict(include_state=False),
            }
            for r in sweep.records
        ]
        _write_text(json.dumps(payload, indent=2) + "\n", args.out)
        return 0
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(SATURATE_COLUMNS)
    for r in sweep.records:
        rep = r.report
        writer.writerow([_fmt(v) for v in (
            r.gamma, rep.E0, rep.E0_L, rep.E0_I, rep.E_f, rep.delta_e_ent,
            rep.ef_bound, rep.entanglement, r.excess, r.interaction_term,
        )])
    _write_text(buf.getvalue(), args.out)
    return 0


def cmd_perturb(args) -> int:
    dims = tuple(int(d) for d in args.dims.split(","))
    lines = []

    def collect(index, report):
        entry = {"trial": index, **report.to_dict()}
        lines.append(json.dumps(entry))

    result = verify.perturbation_suite(
        trials=args.trials, dims=dims, seed=args.seed if args.seed is not None else 1,
        collect=collect, jobs=args.jobs,
    )
    body = "\n".join(lines) + "\n" if lines else ""
    _write_text(body, args.out)
    print(
        f"perturb: {result.trials} trials, {result.failures} failures, "
        f"worst PSD margin {result.stats['worst_psd_margin']:.3e}, "
        f"sharpness ratio {result.stats['sharpness_ratio']:.6f}"
    )
    return 0 if result.ok else 1


def cmd_selftest(args) -> int:
    scale = args.trials / 500.0 if args.trials else 1.0
    results = verify.run_all(seed=args.seed or 0, scale=scale)
    width = max(len(r.name) for r in results)
    print(f"{'suite':<{width}}  status  trials  failures  notes")
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        extras = ", ".join(f"{k}={v:.3g}" for k, v in sorted(r.stats.items()))
        print(f"{r.name:<{width}}  {status:<6}  {r.trials:>6}  {r.failures:>8}  {extras}")
    return 0 if all(r.ok for r in results) else 1


def cmd_list_models(_args) -> int:
    for name, spec in sorted(BUILTIN_MODELS.items()):
        params = ", ".join(f"{k}={v:g}" for k, v in spec.params.items())
        print(f"{name}({params}): {spec.doc}")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frustra",
        description="Frustration-based entanglement bounds for small spin Hamiltonians",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model=True):
        if model:
            p.add_argument("--model", required=True,
                           help="built-in model name or path to a model .json file")
            p.add_argument("--param", action="append", metavar="K=V",
                           help="model parameter override (repeatable)")
            p.add_argument("--split", default="default",
                           help="default | file:PATH | schmidt:GAMMA")
            p.add_argument("--bipartition", metavar="A|B",
                           help="group sites into two parties by label, e.g. B|AC")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--seed", type=int, help="seed for randomized components")
        p.add_argument("--tol", type=float, help="optimizer tolerance override")

    p = sub.add_parser("analyze", help="frustration report for the ground state")
    common(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="transverse-Ising comparison sweep (CSV)")
    p.add_argument("--model", help="must be ising2 (the default)")
    p.add_argument("--grid", default="0.01:5:200", metavar="MIN:MAX:N",
                   help="field grid, default 0.01:5:200")
    p.add_argument("--jobs", type=int, default=1, help="parallel grid evaluations")
    p.add_argument("--out", help="write the CSV here instead of stdout")
    p.add_argument("--seed", type=int, help="unused; accepted for uniformity")
    p.add_argument("--tol", type=float, help="unused; accepted for uniformity")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("excited", help="bound reports for excited eigenstates")
    common(p)
    p.add_argument("--j", required=True, help="eigenstate indices, e.g. 0..3 or 0,2,5")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_excited)

    p = sub.add_parser("saturate", help="Schmidt-splitting gamma sweep")
    common(p)
    p.add_argument("--gammas", required=True, help="descending list, e.g. 1e-1,1e-2,1e-3")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_saturate)

    p = sub.add_parser("perturb", help="randomized perturbation-theorem suite")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--dims", default="4,8,16")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1, help="parallel trial evaluations")
    p.add_argument("--out", help="write per-trial JSON lines here")
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("selftest", help="run every randomized property suite")
    p.add_argument("--trials", type=int, help="base trial count (default 500)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("list-models", help="list built-in models and parameters")
    p.set_defaults(func=cmd_list_models)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return CONFIG_ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    except FrustraError as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return COMPUTE_ERROR
    except (ValueError, IndexError, ArithmeticError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return COMPUTE_ERROR


def entry_point() -> None:  # console script
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
