"""Command handlers behind the CLI: resolve a run config, compute, shape the results."""

from __future__ import annotations

from dataclasses import dataclass
import logging
import math
from typing import Any, Callable

from spindirac.catalog import catalog_rows, fixture_lower_bound, load_catalog, topology_fixture
from spindirac.config import (
    DEFAULT_CIRCLE_GRID,
    DEFAULT_RHOS,
    DEFAULT_SPHERE_MODES,
    DEFAULT_SURFACE_GRID,
    DEFAULT_TORUS_MODES,
    NECK_CORE_LENGTH,
    NECK_GRID,
    NECK_MODES,
    NECK_R0,
    NECK_R1,
    NECK_R_MAX,
    SPHERE_RADIUS,
    THRESHOLD_CONSTANT,
)
from spindirac.discrete.conformal import circle_kernel_estimate, circle_solutions, random_conformal_factor, unit_factor
from spindirac.discrete.eigensolve import eig_smallest
from spindirac.discrete.kernel import KernelEstimate, KernelVerdict, ThresholdPolicy, kernel_dim_estimate
from spindirac.discrete.modes import (
    EIGEN_DUMP_COLUMNS,
    ModeSolution,
    eigen_dump_rows,
    solutions_by_mesh,
    solve_below,
    surface_spectrum,
    values_by_mesh,
)
from spindirac.discrete.operator import assemble_revolution_dirac
from spindirac.discrete.surface import RevolutionSurface, flat_torus_surface, round_sphere_surface
from spindirac.index_bound import Minimality, TopologicalData, as_lower_bound, is_d_minimal
from spindirac.output import render_csv
from spindirac.schemas.validate import validate_run_config, validate_sweep_report
from spindirac.spectra.exact import (
    circle_kernel_dim,
    circle_spectrum,
    flat_torus_spectrum,
    sphere_spectrum,
    torus_kernel_dim,
)
from spindirac.spectra.models import FlatTorus, SpinCircle, SpinStructure
from spindirac.spectra.table import SpectrumTable, format_value
from spindirac.surgery.energy import EnergyVerdict, neck_energy_ratio, normalization_gram, outer_region
from spindirac.surgery.model import SurgeryModel, assemble_surgery_model
from spindirac.surgery.profile import build_neck_profile
from spindirac.surgery.sweep import SweepReport, neck_sweep

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

KERNEL_COLUMNS = (
    "model",
    "kernel_count",
    "exact_kernel",
    "threshold",
    "gap_ratio",
    "verdict",
    "lower_bound",
    "minimality",
)
BOUND_COLUMNS = ("n", "a_hat", "alpha_nonzero", "lower_bound", "kernel", "verdict")
CONFORMAL_COLUMNS = ("structure", "trial", "factor_seed", "kernel_count", "expected", "verdict", "pass")
ENERGY_COLUMNS = ("index", "eigenvalue", "lhs", "rhs", "verdict")
FIXTURE_COLUMNS = ("name", "kind", "lower_bound", "provenance")

_NECK_DEFAULTS: dict[str, Any] = {
    "R_max": NECK_R_MAX,
    "r_0": NECK_R0,
    "r_1": NECK_R1,
    "sphere_radius": SPHERE_RADIUS,
    "core_length": NECK_CORE_LENGTH,
}
_MODEL_DEFAULTS: dict[str, dict[str, Any]] = {
    "circle": {"length": TWO_PI, "structure": "non_bounding"},
    "torus": {"lattice": "2pi-square", "spin": "00"},
    "sphere": {"l": 2},
    "surgery": {"rho": 0.05, "t_spin": "bounding", **_NECK_DEFAULTS},
}
_MODEL_MODES = {"torus": DEFAULT_TORUS_MODES, "sphere": DEFAULT_SPHERE_MODES, "surgery": NECK_MODES}
_DEFAULT_TOPOLOGY = {"sphere": "sphere_S2", "surgery": "sphere_S2"}
_SURGERY_TOPOLOGY = "sphere_S2"


@dataclass(frozen=True)
class CommandResult:
    """CSV body and JSON payload of one command; the run header is added by the writer."""

    command: str
    csv: str
    payload: dict[str, Any]
    passed: bool
    solver_failed: bool = False
    summary: str = ""
    eigen_dump: str | None = None


def _with_defaults(config: dict, defaults: dict[str, Any]) -> dict:
    resolved = dict(defaults)
    resolved.update({key: value for key, value in config.items() if value is not None})
    return resolved


def resolve_config(config: dict) -> dict:
    """Validate a raw config and fill every default the command reads."""
    validate_run_config(config)
    command = config["command"]
    base: dict[str, Any] = {"seed": 0}
    if command == "spectrum":
        model = config["model"]
        base.update(_MODEL_DEFAULTS[model])
        base["cutoff"] = 3.0
        discrete = bool(config.get("discrete", False)) or model == "surgery"
        base["discrete"] = discrete
        if discrete:
            base["grid"] = NECK_GRID if model == "surgery" else DEFAULT_SURFACE_GRID
            base["m_max"] = _MODEL_MODES.get(model, DEFAULT_SPHERE_MODES)
    elif command == "kernel":
        model = config["model"]
        base.update(_MODEL_DEFAULTS[model])
        base["grid"] = DEFAULT_CIRCLE_GRID if model == "circle" else DEFAULT_SURFACE_GRID
        if model != "circle":
            base["m_max"] = _MODEL_MODES[model]
        base["threshold_constant"] = THRESHOLD_CONSTANT
    elif command == "bound-check":
        base.update({"a_hat": 0, "alpha": 0})
    elif command == "conformal-test":
        base.update(
            {
                "structure": "both",
                "length": TWO_PI,
                "trials": 20,
                "grid": DEFAULT_CIRCLE_GRID,
                "amplitude": 0.5,
                "threshold_constant": THRESHOLD_CONSTANT,
            }
        )
    elif command == "neck-sweep":
        base.update(
            {
                "rhos": list(DEFAULT_RHOS),
                "t_spin": "bounding",
                "grid": NECK_GRID,
                "m_max": NECK_MODES,
                "threshold_constant": THRESHOLD_CONSTANT,
                "baseline_kernel": 0,
                "topology": _SURGERY_TOPOLOGY,
                **_NECK_DEFAULTS,
            }
        )
    elif command == "energy-ratio":
        base.update(
            {
                "rho": 0.05,
                "t_spin": "bounding",
                "grid": NECK_GRID,
                "mode": 0.5,
                "eigenpairs": 4,
                "threshold_constant": THRESHOLD_CONSTANT,
                **_NECK_DEFAULTS,
            }
        )
    resolved = _with_defaults(config, base)
    validate_run_config(resolved)
    return resolved


def _policy(config: dict) -> ThresholdPolicy:
    return ThresholdPolicy(constant=float(config["threshold_constant"]))


def _spin_vector(spin: str) -> tuple[int, ...]:
    return tuple(int(ch) for ch in spin)


def _torus(config: dict) -> FlatTorus:
    lattice = config["lattice"]
    side = TWO_PI if lattice == "2pi-square" else float(lattice)
    return FlatTorus.square(side, _spin_vector(config["spin"]))


def _torus_surface(torus: FlatTorus) -> RevolutionSurface:
    if torus.dim != 2:
        raise ValueError(f"Discrete torus computations need a 2-torus, got dimension {torus.dim}")
    side = float(torus.basis[0, 0])
    return flat_torus_surface(
        length=side,
        circumference=side,
        theta_spin=SpinStructure.from_shift(torus.spin[1]),
        t_spin=SpinStructure.from_shift(torus.spin[0]),
    )


def _circle(config: dict) -> SpinCircle:
    if config["structure"] == "both":
        raise ValueError("structure 'both' is only accepted by conformal-test")
    return SpinCircle(length=float(config["length"]), structure=SpinStructure(config["structure"]))


def _surgery_model(config: dict) -> SurgeryModel:
    profile = build_neck_profile(
        float(config["R_max"]),
        float(config["r_0"]),
        float(config["r_1"]),
        float(config["rho"]),
    )
    return assemble_surgery_model(
        profile,
        float(config["sphere_radius"]),
        float(config["core_length"]),
        SpinStructure(config["t_spin"]),
    )


def _table_payload(table: SpectrumTable) -> dict[str, Any]:
    return {
        "description": table.description,
        "cutoff": table.cutoff,
        "symmetric": table.symmetric,
        "entries": [{"eigenvalue": value, "multiplicity": mult} for value, mult in table.entries],
    }


def _dump_csv(solutions: list[ModeSolution]) -> str:
    return render_csv(EIGEN_DUMP_COLUMNS, eigen_dump_rows(solutions))


def _flatten(by_mesh: dict[float, list[ModeSolution]]) -> list[ModeSolution]:
    return [solution for mesh in sorted(by_mesh) for solution in by_mesh[mesh]]


def _discrete_surface(config: dict) -> RevolutionSurface:
    model = config["model"]
    if model == "torus":
        return _torus_surface(_torus(config))
    if model == "sphere":
        l = int(config["l"])
        if l != 2:
            raise ValueError(f"Discrete sphere spectra are built for l = 2 only, got l = {l}")
        return round_sphere_surface()
    return _surgery_model(config).surface


def run_spectrum(config: dict) -> CommandResult:
    model = config["model"]
    cutoff = float(config["cutoff"])
    dump: str | None = None
    if model == "circle" and config["discrete"]:
        raise ValueError("Discrete circle spectra are not offered; use the kernel command")
    if config["discrete"]:
        surface = _discrete_surface(config)
        m_max, grid = float(config["m_max"]), int(config["grid"])
        solutions = solve_below(surface, m_max, grid, cutoff)
        table = surface_spectrum(surface, m_max, grid, cutoff, solutions=solutions)
        dump = _dump_csv(solutions)
    elif model == "circle":
        table = circle_spectrum(_circle(config), cutoff)
    elif model == "torus":
        table = flat_torus_spectrum(_torus(config), cutoff)
    else:
        table = sphere_spectrum(int(config["l"]), cutoff)
    logger.info("spectrum %s: %d values below %s", model, table.count(), format_value(cutoff))
    return CommandResult(
        command="spectrum",
        csv=table.to_csv(),
        payload={"spectrum": _table_payload(table)},
        passed=True,
        summary=f"{table.count()} eigenvalues below {format_value(cutoff)}",
        eigen_dump=dump,
    )


def _default_topology(config: dict) -> str | None:
    model = config["model"]
    if model == "circle":
        return f"circle_{config['structure']}"
    if model == "torus":
        spin = _spin_vector(config["spin"])
        if len(spin) != 2:
            return None
        return "torus_T2_alpha" if not any(spin) else "torus_T2_bounding"
    return _DEFAULT_TOPOLOGY.get(model)


def _kernel_estimate(config: dict) -> tuple[KernelEstimate, int | None, list[ModeSolution]]:
    model = config["model"]
    policy = _policy(config)
    grid = int(config["grid"])
    if model == "circle":
        circle = _circle(config)
        by_mesh = circle_solutions(circle, unit_factor, grid)
        estimate = circle_kernel_estimate(circle, unit_factor, grid, policy, solutions=by_mesh)
        return estimate, circle_kernel_dim(circle), _flatten(by_mesh)
    surface = _discrete_surface(config)
    exact: int | None
    if model == "torus":
        exact = torus_kernel_dim(_torus(config))
    elif model == "sphere":
        exact = 0
    else:
        exact = None
    by_mesh = solutions_by_mesh(surface, float(config["m_max"]), [grid // 2, grid])
    return kernel_dim_estimate(values_by_mesh(by_mesh), policy), exact, _flatten(by_mesh)


def run_kernel(config: dict) -> CommandResult:
    estimate, exact, solutions = _kernel_estimate(config)
    topology_name = config.get("topology") or _default_topology(config)
    bound: int | None = None
    minimality: Minimality | None = None
    if topology_name is not None:
        catalog = load_catalog(config.get("fixtures"))
        bound = fixture_lower_bound(topology_name, catalog)
        minimality = is_d_minimal(estimate.count, topology_fixture(topology_name, catalog))
    passed = (
        estimate.confident
        and minimality is not Minimality.INCONSISTENT
        and (exact is None or estimate.count == exact)
    )
    row = (
        config["model"],
        estimate.count,
        "" if exact is None else exact,
        format_value(estimate.threshold),
        format_value(estimate.gap_ratio),
        estimate.verdict.value,
        "" if bound is None else bound,
        "" if minimality is None else minimality.value,
    )
    payload = {
        "kernel": {
            "count": estimate.count,
            "exact": exact,
            "threshold": estimate.threshold,
            "gap_ratio": None if math.isinf(estimate.gap_ratio) else estimate.gap_ratio,
            "verdict": estimate.verdict.value,
            "meshes": list(estimate.meshes_used),
            "counts_by_mesh": list(estimate.counts_by_mesh),
            "topology": topology_name,
            "lower_bound": bound,
            "minimality": None if minimality is None else minimality.value,
        }
    }
    return CommandResult(
        command="kernel",
        csv=render_csv(KERNEL_COLUMNS, [row]),
        payload=payload,
        passed=passed,
        summary=f"kernel {estimate.count} ({estimate.verdict.value})",
        eigen_dump=_dump_csv(solutions),
    )


def run_bound_check(config: dict) -> CommandResult:
    data = TopologicalData(
        n=int(config["n"]),
        a_hat=int(config["a_hat"]),
        alpha_nonzero=bool(config["alpha"]),
    )
    kernel = int(config["kernel"])
    bound = as_lower_bound(data)
    verdict = is_d_minimal(kernel, data)
    row = (data.n, data.a_hat, "true" if data.alpha_nonzero else "false", bound, kernel, verdict.value)
    return CommandResult(
        command="bound-check",
        csv=render_csv(BOUND_COLUMNS, [row]),
        payload={"bound": {"lower_bound": bound, "kernel": kernel, "verdict": verdict.value}},
        passed=verdict is not Minimality.INCONSISTENT,
        summary=f"verdict {verdict.value}",
    )


def run_conformal_test(config: dict) -> CommandResult:
    structures = (
        [SpinStructure.NON_BOUNDING, SpinStructure.BOUNDING]
        if config["structure"] == "both"
        else [SpinStructure(config["structure"])]
    )
    policy = _policy(config)
    grid = int(config["grid"])
    seed = int(config["seed"])
    rows: list[tuple[Any, ...]] = []
    failures = 0
    for structure in structures:
        circle = SpinCircle(length=float(config["length"]), structure=structure)
        expected = circle_kernel_dim(circle)
        for trial in range(int(config["trials"])):
            factor_seed = seed + trial
            conf = random_conformal_factor(factor_seed, amplitude=float(config["amplitude"]))
            estimate = circle_kernel_estimate(circle, conf, grid, policy)
            ok = estimate.count == expected
            failures += 0 if ok else 1
            rows.append(
                (
                    structure.value,
                    trial,
                    factor_seed,
                    estimate.count,
                    expected,
                    estimate.verdict.value,
                    "true" if ok else "false",
                )
            )
    logger.info("conformal test: %d trials, %d failures", len(rows), failures)
    return CommandResult(
        command="conformal-test",
        csv=render_csv(CONFORMAL_COLUMNS, rows),
        payload={"conformal": {"trials": len(rows), "failures": failures}},
        passed=failures == 0,
        summary=f"{failures} failures in {len(rows)} trials",
    )


def _sweep_summary(report: SweepReport) -> str:
    if report.error:
        return report.error
    verdict = "pass" if report.passed else "kernel left the range [lower bound, baseline]"
    if not report.confident:
        unsure = ", ".join(format_value(row.rho) for row in report.rows if row.verdict is not KernelVerdict.CONFIDENT)
        verdict += f"; unconfident counts at rho={unsure}"
    return verdict


def run_neck_sweep(config: dict) -> CommandResult:
    topology = topology_fixture(config["topology"], load_catalog(config.get("fixtures")))
    report = neck_sweep(
        config["rhos"],
        float(config["m_max"]),
        int(config["grid"]),
        int(config["baseline_kernel"]),
        R_max=float(config["R_max"]),
        r_0=float(config["r_0"]),
        r_1=float(config["r_1"]),
        sphere_radius=float(config["sphere_radius"]),
        core_length=float(config["core_length"]),
        t_spin=SpinStructure(config["t_spin"]),
        policy=_policy(config),
        topology=topology,
    )
    document = report.to_document()
    validate_sweep_report(document)
    return CommandResult(
        command="neck-sweep",
        csv=report.to_csv(),
        payload=document,
        passed=report.passed,
        solver_failed=not report.complete,
        summary=_sweep_summary(report),
        eigen_dump=report.eigen_dump_csv(),
    )


def run_energy_ratio(config: dict) -> CommandResult:
    model = _surgery_model(config)
    mode = float(config["mode"])
    if not model.surface.allowed_mode(mode):
        raise ValueError(f"Mode {mode:g} is not admissible for the bounding theta structure")
    op = assemble_revolution_dirac(model.surface, mode, int(config["grid"]))
    policy = _policy(config)
    s = None if config.get("s") is None else float(config["s"])
    pairs = eig_smallest(op, int(config["eigenpairs"]))
    rows: list[tuple[Any, ...]] = []
    violated = 0
    for idx, pair in enumerate(pairs):
        ratio = neck_energy_ratio(pair.vector, pair.value, model, s, policy, op=op)
        violated += ratio.verdict is EnergyVerdict.VIOLATED
        rows.append(
            (idx, format_value(pair.value), format_value(ratio.lhs), format_value(ratio.rhs), ratio.verdict.value)
        )
    gram = normalization_gram([pair.vector for pair in pairs], outer_region(model, op, s))
    if gram.singular:
        logger.warning("eigenvectors are dependent on the outer region (rank %d of %d)", gram.rank, len(pairs))
    return CommandResult(
        command="energy-ratio",
        csv=render_csv(ENERGY_COLUMNS, rows),
        payload={
            "energy": {
                "rows": len(rows),
                "violated": violated,
                "gram_rank": gram.rank,
                "gram_singular": gram.singular,
            }
        },
        passed=violated == 0 and not gram.singular,
        summary=f"{violated} violations in {len(rows)} eigenpairs, outer Gram rank {gram.rank}",
    )


def run_list_fixtures(config: dict) -> CommandResult:
    catalog = load_catalog(config.get("fixtures"))
    rows = catalog_rows(catalog)
    return CommandResult(
        command="list-fixtures",
        csv=render_csv(FIXTURE_COLUMNS, rows),
        payload={"catalog_version": catalog.version, "fixtures": [dict(zip(FIXTURE_COLUMNS, row)) for row in rows]},
        passed=True,
        summary=f"{len(rows)} catalog entries",
    )


_HANDLERS: dict[str, Callable[[dict], CommandResult]] = {
    "spectrum": run_spectrum,
    "kernel": run_kernel,
    "bound-check": run_bound_check,
    "conformal-test": run_conformal_test,
    "neck-sweep": run_neck_sweep,
    "energy-ratio": run_energy_ratio,
    "list-fixtures": run_list_fixtures,
}


def execute(config: dict) -> tuple[dict, CommandResult]:
    """Resolve the config and run its command; returns (resolved config, result)."""
    resolved = resolve_config(config)
    logger.debug("running %s", resolved["command"])
    return resolved, _HANDLERS[resolved["command"]](resolved)
