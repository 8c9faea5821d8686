"""Command-line interface: ``qfdsim {bounds,guess,solve,spectrum,compare,generate-model}``.

Each subcommand takes a ``--config`` JSON file and/or flags (flags win).
Results go to stdout as JSON; failures exit nonzero with a step-tagged
error document on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .bounds import full_gershgorin
from .models import ModelSpec, generate_model
from .observables import SpectrumLine
from .pauli import DENSE_LIMIT
from .pipeline import (
    PipelineError,
    RunConfig,
    _plain,
    _prepare,
    compare_methods,
    run_pipeline,
    spectrum_curve,
    write_matrices_csv,
    write_spectrum_csv,
)

_MODEL_FLAGS = {
    "n_sites": int,
    "site_energy": float,
    "site_energy_spread": float,
    "coupling_j": float,
    "dipole": float,
    "model_seed": int,
}


def _add_model_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("operator")
    g.add_argument("--config", help="run configuration JSON")
    g.add_argument("--hamiltonian", help="operator JSON file (overrides the model)")
    g.add_argument("--dipoles", nargs="+", help="dipole operator JSON files, one per axis")
    g.add_argument("--n-sites", type=int)
    g.add_argument("--site-energy", type=float)
    g.add_argument("--site-energy-spread", type=float)
    g.add_argument("--coupling-j", type=float)
    g.add_argument("--dipole", type=float)
    g.add_argument("--model-seed", type=int)
    g.add_argument("--overage", type=float, help="spectral overage (default 10%% of the width)")


def _add_solve_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kmax", type=int, dest="k_max")
    p.add_argument("--guesses", type=int, dest="n_guesses", help="number of guess states")
    p.add_argument("--guess-mode", choices=("cis", "configurations"))
    p.add_argument("--guess-file", help="guess-set JSON (list of amplitude arrays)")
    p.add_argument("--allow-nonorthonormal", action="store_true", default=None)
    p.add_argument("--prop", choices=("exact", "trotter"))
    p.add_argument("--steps-per-k", type=int)
    p.add_argument("--path", choices=("direct", "swaptest", "sampled"))
    p.add_argument("--shots", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--independent", action="store_true", default=None,
                   help="independent shots per matrix instead of shared settings")
    p.add_argument("--cutoff", type=float)
    p.add_argument("--nonvariational", action="store_true", default=None)
    p.add_argument("--no-oracle", action="store_true", default=None,
                   help="skip the dense reference diagonalization")


def build_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.from_file(args.config) if getattr(args, "config", None) else RunConfig()
    model = {}
    for name in _MODEL_FLAGS:
        val = getattr(args, name, None)
        if val is not None:
            model["seed" if name == "model_seed" else name] = val
    if model:
        config = replace(config, model=replace(config.model, **model))
    updates = {}
    for name in ("hamiltonian", "dipoles", "overage", "k_max", "n_guesses", "guess_mode",
                 "guess_file", "allow_nonorthonormal", "prop", "steps_per_k", "path",
                 "shots", "seed", "cutoff", "nonvariational"):
        val = getattr(args, name, None)
        if val is not None:
            updates[name] = val
    if getattr(args, "independent", None):
        updates["correlated"] = False
    if getattr(args, "no_oracle", None):
        updates["oracle"] = False
    if getattr(args, "delta", None) is not None:
        updates["broadening"] = args.delta
    if getattr(args, "grid", None) is not None:
        updates["grid"] = tuple(args.grid)
    return replace(config, **updates)


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(_plain(doc), sort_keys=True, indent=2) + "\n")


def cmd_bounds(args) -> None:
    config = build_config(args)
    ctx = _prepare(replace(config, n_guesses=1))
    _emit(ctx.bounds.to_dict())
    if args.disks:
        disks = full_gershgorin(ctx.h, DENSE_LIMIT)
        with open(args.disks, "w", encoding="utf-8") as fh:
            fh.write("center,radius\n")
            for c, r in disks:
                fh.write(f"{c!r},{r!r}\n")


def cmd_guess(args) -> None:
    config = build_config(args)
    ctx = _prepare(config)
    g = ctx.guesses
    if args.out:
        Path(args.out).write_text(g.to_json(), encoding="utf-8")
    _emit({
        "provenance": g.provenance,
        "n_states": len(g),
        "cis_energies": list(g.cis_energies) if g.cis_energies is not None else None,
    })


def cmd_solve(args) -> None:
    report = run_pipeline(build_config(args))
    if args.matrices:
        write_matrices_csv(report.problem, args.matrices)
    if args.report:
        Path(args.report).write_text(report.to_json(), encoding="utf-8")
    sol = report.solution
    _emit({
        "energies": sol.energies.tolist(),
        "s_spectrum": sol.s_spectrum.tolist(),
        "kept": sol.kept,
        "metadata": report.solve["metadata"],
        "flags": report.flags,
    })


def cmd_spectrum(args) -> None:
    config = build_config(args)
    if config.nonvariational:
        raise PipelineError("properties", "spectra need the variational basis")
    report = run_pipeline(config)
    method = report.solve["method"]
    if method not in report.lines:
        raise PipelineError("properties", "no dipole operators available")
    lines = [SpectrumLine(d["delta_e"], d["strength"]) for d in report.lines[method]]
    energy, intensity = spectrum_curve(lines, config.broadening, config.grid)
    if args.csv:
        write_spectrum_csv(energy, intensity, args.csv)
    _emit({"delta": config.broadening, "lines": report.lines[method]})


def cmd_compare(args) -> None:
    report = compare_methods(build_config(args))
    text = report.to_json(timing=args.timing)
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    sys.stdout.write(text + "\n")


def cmd_generate_model(args) -> None:
    spec = ModelSpec(
        n_sites=args.n_sites, site_energy=args.site_energy,
        site_energy_spread=args.site_energy_spread, coupling_j=args.coupling_j,
        dipole=args.dipole, seed=args.model_seed,
    )
    h, mus = generate_model(spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "hamiltonian.json").write_text(h.to_json(), encoding="utf-8")
    names = []
    for axis, mu in zip("xyz", mus):
        name = f"dipole_{axis}.json"
        (out / name).write_text(mu.to_json(), encoding="utf-8")
        names.append(str(out / name))
    _emit({"spec": spec.to_dict(), "hamiltonian": str(out / "hamiltonian.json"),
           "dipoles": names, "n_terms": len(h)})


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qfdsim", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="two-row Gershgorin spectral bounds")
    _add_model_args(p)
    p.add_argument("--disks", help="write all Gershgorin disks to this CSV")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("guess", help="build guess states")
    _add_model_args(p)
    p.add_argument("--guesses", type=int, dest="n_guesses")
    p.add_argument("--guess-mode", choices=("cis", "configurations"))
    p.add_argument("--out", help="write the guess set JSON here")
    p.set_defaults(func=cmd_guess)

    p = sub.add_parser("solve", help="build and solve the subspace problem")
    _add_model_args(p)
    _add_solve_args(p)
    p.add_argument("--matrices", help="write H and S as CSV (matrix, row, col, re, im)")
    p.add_argument("--report", help="write the full report JSON here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("spectrum", help="oscillator strengths and a broadened spectrum")
    _add_model_args(p)
    _add_solve_args(p)
    p.add_argument("--delta", type=float, help="Lorentzian width (default 0.15)")
    p.add_argument("--grid", nargs=3, type=float, metavar=("E_LO", "E_HI", "N"))
    p.add_argument("--csv", help="write (energy, intensity) CSV here")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("compare", help="CIS, QFD-0..k_max and FCI error tables")
    _add_model_args(p)
    _add_solve_args(p)
    p.add_argument("--report", help="write the report JSON here")
    p.add_argument("--timing", action="store_true", help="include timing in the report")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("generate-model", help="write a synthetic exciton model to disk")
    defaults = ModelSpec()
    p.add_argument("--n-sites", type=int, default=defaults.n_sites)
    p.add_argument("--site-energy", type=float, default=defaults.site_energy)
    p.add_argument("--site-energy-spread", type=float, default=defaults.site_energy_spread)
    p.add_argument("--coupling-j", type=float, default=defaults.coupling_j)
    p.add_argument("--dipole", type=float, default=defaults.dipole)
    p.add_argument("--model-seed", type=int, default=defaults.seed)
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_generate_model)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        args.func(args)
    except PipelineError as exc:
        sys.stderr.write(json.dumps(exc.to_dict(), sort_keys=True) + "\n")
        return 2
    except (OSError, ValueError) as exc:
        # Configuration problems surface before step 1 begins.
        doc = {"error": str(exc), "step": 0, "step_name": "config", "type": type(exc).__name__}
        sys.stderr.write(json.dumps(doc, sort_keys=True) + "\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
