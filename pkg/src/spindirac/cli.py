"""Command-line interface for spindirac."""

from __future__ import annotations

import argparse
import logging
from pathlib import Path
import sys
from typing import Any

import yaml

from spindirac.acceptance import verify_all
from spindirac.commands import execute
from spindirac.config import THRESHOLD_CONSTANT, TOOL_NAME
from spindirac.errors import EigenSolverError
from spindirac.output import json_document, with_header, write_artifact
from spindirac.version import __version__

EXIT_OK = 0
EXIT_PROPERTY_FAILURE = 1
EXIT_INPUT_ERROR = 2
EXIT_SOLVER_FAILURE = 3

# argparse dest -> run config key
_CONFIG_KEYS = (
    "model",
    "discrete",
    "length",
    "structure",
    "lattice",
    "spin",
    "l",
    "cutoff",
    "grid",
    "m_max",
    "threshold_constant",
    "topology",
    "n",
    "a_hat",
    "alpha",
    "kernel",
    "trials",
    "amplitude",
    "rho",
    "rhos",
    "t_spin",
    "R_max",
    "r_0",
    "r_1",
    "sphere_radius",
    "core_length",
    "baseline_kernel",
    "mode",
    "eigenpairs",
    "s",
    "fixtures",
    "seed",
)


def _lattice(value: str) -> str | float:
    if value == "2pi-square":
        return value
    try:
        return float(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"lattice must be '2pi-square' or a side length, got {value!r}") from exc


def _float_list(value: str) -> list[float]:
    try:
        return [float(part) for part in value.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {value!r}") from exc


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", default=None, help="JSON or YAML run config; flags given on the command line override it")
    sub.add_argument("--out", default=None, help="Path for the CSV artifact; defaults to stdout")
    sub.add_argument("--json-out", default=None, help="Optional path for the JSON mirror of the artifact")
    sub.add_argument("--seed", type=int, default=None, help="Seed for randomized inputs (default: 0)")


def _add_eigen_dump(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--eigen-dump",
        default=None,
        help="Path for a CSV of every computed eigenpair (mode, mesh, index, eigenvalue, residual)",
    )


def _add_model(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--model", choices=("circle", "torus", "sphere", "surgery"), default=None)
    sub.add_argument("--length", type=float, default=None, help="Circle length (default: 2pi)")
    sub.add_argument("--structure", choices=("bounding", "non_bounding"), default=None)
    sub.add_argument("--lattice", type=_lattice, default=None, help="'2pi-square' or the side of a square lattice")
    sub.add_argument("--spin", default=None, help="Torus spin structure as 0/1 digits, e.g. 00")
    sub.add_argument("--grid", type=int, default=None, help="Finest grid size N")
    sub.add_argument("--m-max", dest="m_max", type=float, default=None, help="Largest |m| of the Fourier modes")


def _add_neck(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--t-spin", dest="t_spin", choices=("bounding", "non_bounding"), default=None)
    sub.add_argument("--R-max", dest="R_max", type=float, default=None)
    sub.add_argument("--r0", dest="r_0", type=float, default=None)
    sub.add_argument("--r1", dest="r_1", type=float, default=None)
    sub.add_argument("--sphere-radius", type=float, default=None)
    sub.add_argument("--core-length", type=float, default=None)


def _add_threshold(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--threshold-constant",
        type=float,
        default=None,
        help=f"Kernel threshold constant C in tau = C h^1.5 (default: {THRESHOLD_CONSTANT})",
    )


def build_parser() -> argparse.ArgumentParser:
    """Build CLI argument parser."""
    parser = argparse.ArgumentParser(prog=TOOL_NAME)
    parser.add_argument("--version", action="store_true", help=f"Print {TOOL_NAME} version and exit")
    parser.add_argument(
        "--log-level",
        choices=("DEBUG", "INFO", "WARNING", "ERROR"),
        default="WARNING",
        help="Logging level on stderr (default: WARNING)",
    )
    subparsers = parser.add_subparsers(dest="command")

    spectrum = subparsers.add_parser("spectrum", help="Exact or discrete spectrum below a cutoff")
    _add_common(spectrum)
    _add_eigen_dump(spectrum)
    _add_model(spectrum)
    _add_neck(spectrum)
    spectrum.add_argument("--discrete", action="store_true", default=None, help="Use the discretized operator")
    spectrum.add_argument("--l", type=int, default=None, help="Sphere dimension for the exact sphere spectrum")
    spectrum.add_argument("--cutoff", type=float, default=None, help="Largest |lambda| reported (default: 3)")
    spectrum.add_argument("--rho", type=float, default=None, help="Neck scale of the surgery model")

    kernel = subparsers.add_parser("kernel", help="Thresholded kernel count and D-minimality verdict")
    _add_common(kernel)
    _add_eigen_dump(kernel)
    _add_model(kernel)
    _add_neck(kernel)
    _add_threshold(kernel)
    kernel.add_argument("--topology", default=None, help="Catalog topology fixture for the lower bound")
    kernel.add_argument("--rho", type=float, default=None, help="Neck scale of the surgery model")
    kernel.add_argument("--fixtures", default=None, help="Fixture catalog path (default: packaged catalog)")

    bound = subparsers.add_parser("bound-check", help="Topological lower bound and D-minimality")
    _add_common(bound)
    bound.add_argument("--n", type=int, default=None, help="Dimension")
    bound.add_argument("--a-hat", dest="a_hat", type=int, default=None, help="A-hat genus (n = 0 mod 4)")
    bound.add_argument("--alpha", type=int, choices=(0, 1), default=None, help="1 when the alpha genus is nonzero")
    bound.add_argument("--kernel", type=int, default=None, help="Kernel dimension to classify")

    conformal = subparsers.add_parser("conformal-test", help="Kernel counts under random conformal factors")
    _add_common(conformal)
    _add_threshold(conformal)
    conformal.add_argument("--structure", choices=("bounding", "non_bounding", "both"), default=None)
    conformal.add_argument("--length", type=float, default=None)
    conformal.add_argument("--trials", type=int, default=None)
    conformal.add_argument("--grid", type=int, default=None)
    conformal.add_argument("--amplitude", type=float, default=None)

    sweep = subparsers.add_parser("neck-sweep", help="Kernel dimension along a shrinking neck")
    _add_common(sweep)
    _add_eigen_dump(sweep)
    _add_neck(sweep)
    _add_threshold(sweep)
    sweep.add_argument("--rhos", type=_float_list, default=None, help="Strictly decreasing comma-separated rho values")
    sweep.add_argument("--grid", type=int, default=None)
    sweep.add_argument("--m-max", dest="m_max", type=float, default=None)
    sweep.add_argument("--baseline-kernel", type=int, default=None)
    sweep.add_argument("--topology", default=None, help="Catalog topology fixture of the manifold before surgery")
    sweep.add_argument("--fixtures", default=None, help="Fixture catalog path (default: packaged catalog)")

    energy = subparsers.add_parser("energy-ratio", help="Weighted neck energy of low eigenspinors")
    _add_common(energy)
    _add_neck(energy)
    _add_threshold(energy)
    energy.add_argument("--rho", type=float, default=None)
    energy.add_argument("--grid", type=int, default=None)
    energy.add_argument("--mode", type=float, default=None, help="Fourier mode m (default: 0.5)")
    energy.add_argument("--eigenpairs", type=int, default=None)
    energy.add_argument("--s", type=float, default=None, help="Annulus scale s (default: r_0/2)")

    fixtures = subparsers.add_parser("list-fixtures", help="Print the fixture catalog with provenance")
    _add_common(fixtures)
    fixtures.add_argument("--fixtures", default=None, help="Fixture catalog path (default: packaged catalog)")

    verify = subparsers.add_parser("verify-all", help="Run the acceptance suite")
    _add_threshold(verify)
    verify.add_argument("--fixtures", default=None, help="Fixture catalog path (default: packaged catalog)")
    verify.add_argument("--artifacts", default=None, help="Directory for acceptance artifacts")
    verify.add_argument("--seed", type=int, default=0)
    return parser


def load_config_file(path: str | Path) -> dict:
    try:
        with Path(path).open("r", encoding="utf-8") as handle:
            data = yaml.safe_load(handle)
    except yaml.YAMLError as exc:
        raise ValueError(f"Config file {path} is not valid YAML/JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError(f"Config file {path} must hold an object")
    return data


def config_from_args(args: argparse.Namespace) -> dict:
    """File config (if any) overlaid with the flags given on the command line."""
    config: dict[str, Any] = load_config_file(args.config) if args.config else {}
    if config.get("command", args.command) != args.command:
        raise ValueError(f"Config file is for '{config['command']}', not '{args.command}'")
    config["command"] = args.command
    for key in _CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            config[key] = value
    if args.out is not None:
        config["output_path"] = args.out
    if args.json_out is not None:
        config["json_output_path"] = args.json_out
    if getattr(args, "eigen_dump", None) is not None:
        config["eigen_dump_path"] = args.eigen_dump
    return config


def run(config: dict) -> int:
    """Run one command and write its artifacts; returns the exit code."""
    try:
        resolved, result = execute(config)
        if resolved.get("eigen_dump_path") and result.eigen_dump is None:
            raise ValueError("An eigenpair dump is only produced by discrete runs")
        csv_text = with_header(resolved, result.csv)
        if resolved.get("output_path"):
            write_artifact(resolved["output_path"], csv_text)
        else:
            sys.stdout.write(csv_text)
        if resolved.get("json_output_path"):
            payload = {**result.payload, "passed": result.passed}
            write_artifact(resolved["json_output_path"], json_document(resolved, payload))
        if resolved.get("eigen_dump_path"):
            write_artifact(resolved["eigen_dump_path"], with_header(resolved, result.eigen_dump))
    except EigenSolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER_FAILURE
    except (ValueError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    if result.solver_failed:
        print(f"solver failure: {result.summary}", file=sys.stderr)
        return EXIT_SOLVER_FAILURE
    if not result.passed:
        print(f"property failure: {result.summary}", file=sys.stderr)
        return EXIT_PROPERTY_FAILURE
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    """Entrypoint for the spindirac CLI."""
    args = build_parser().parse_args(argv)

    if args.version:
        print(__version__)
        return EXIT_OK

    logging.basicConfig(level=args.log_level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")

    if not args.command:
        print("a command is required unless --version is provided", file=sys.stderr)
        return EXIT_INPUT_ERROR

    if args.command == "verify-all":
        threshold = THRESHOLD_CONSTANT if args.threshold_constant is None else args.threshold_constant
        return verify_all(threshold, args.fixtures, args.artifacts, args.seed)

    try:
        config = config_from_args(args)
    except (ValueError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    return run(config)


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
