"""Acceptance suite: every end-to-end check, run in sequence with a pass/fail table."""

from __future__ import annotations

from dataclasses import dataclass
import filecmp
import logging
import math
from pathlib import Path
import sys
import tempfile
import time
from typing import Callable

import numpy as np

from spindirac.catalog import Catalog, load_catalog
from spindirac.commands import execute
from spindirac.config import (
    DEFAULT_RHOS,
    NECK_GRID,
    NECK_MODES,
    NECK_R0,
    NECK_R1,
    NECK_R_MAX,
    THRESHOLD_CONSTANT,
)
from spindirac.discrete.conformal import (
    circle_kernel_estimate,
    conformal_invariance_check,
    random_conformal_factor,
    unit_factor,
)
from spindirac.discrete.eigensolve import eig_smallest
from spindirac.discrete.kernel import ThresholdPolicy, calibrate_threshold, kernel_dim_estimate
from spindirac.discrete.modes import (
    mesh_convergence,
    spectra_by_mesh,
    spectral_asymmetry,
    surface_eigenvalues,
    surface_spectrum,
)
from spindirac.discrete.operator import assemble_revolution_dirac
from spindirac.discrete.surface import flat_torus_surface, round_sphere_surface
from spindirac.errors import EigenSolverError
from spindirac.geometry import product_form_deviation
from spindirac.index_bound import Minimality, TopologicalData, as_lower_bound, is_d_minimal
from spindirac.output import json_document, render_csv, with_header, write_artifact
from spindirac.spectra.exact import (
    check_product_bound,
    circle_spectrum,
    flat_torus_spectrum,
    point_spectrum,
    product_square_spectrum,
    sphere_spectrum,
    torus_kernel_dim,
)
from spindirac.spectra.models import FlatTorus, SpinCircle, SpinStructure
from spindirac.spectra.table import SpectrumTable, format_value
from spindirac.surgery.energy import (
    EnergyVerdict,
    SampledSpinor,
    energy_integrals,
    neck_energy_ratio,
    normalization_gram,
    outer_region,
)
from spindirac.surgery.model import SurgeryModel, assemble_surgery_model
from spindirac.surgery.profile import build_neck_profile
from spindirac.surgery.sweep import neck_sweep

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
TORUS_MODES = 8.0
TORUS_GRID = 512
SPHERE_GRID = 512
SPHERE_STUDY_GRIDS = (128, 256, 512)
SPHERE_TOL = 1e-3
ASYMMETRY_TOL = 1e-8
MIN_CONVERGENCE_ORDER = 1.8
CONFORMAL_TRIALS = 20
PRODUCT_TRIALS = 20
DECAY_LIMIT = 0.35
ENERGY_REL_TOL = 1e-4
ENERGY_RHO = 0.05
COLLAPSE_FRACTION = 0.5

SUMMARY_COLUMNS = ("criterion", "status", "detail")


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    detail: str
    seconds: float


@dataclass(frozen=True)
class SuiteContext:
    policy: ThresholdPolicy
    catalog: Catalog
    artifacts: Path
    seed: int
    catalog_path: str | None = None

    def write_text(self, name: str, body: str, **header: object) -> None:
        config = {"command": "verify-all", "artifact": name, "seed": self.seed, **header}
        config["threshold_constant"] = self.policy.constant
        write_artifact(self.artifacts / name, with_header(config, body))

    def write(self, name: str, columns: tuple[str, ...], rows: list[tuple], **header: object) -> None:
        self.write_text(name, render_csv(columns, rows), **header)


def _torus_kernel(ctx: SuiteContext) -> tuple[bool, str]:
    fixture = ctx.catalog.model("torus_alpha_flat")
    torus = FlatTorus.square(TWO_PI, (0, 0))
    exact = torus_kernel_dim(torus)
    surface = flat_torus_surface(TWO_PI, TWO_PI, SpinStructure.NON_BOUNDING, SpinStructure.NON_BOUNDING)
    spectra = spectra_by_mesh(surface, TORUS_MODES, [TORUS_GRID // 2, TORUS_GRID])
    estimate = kernel_dim_estimate(spectra, ctx.policy)
    window = calibrate_threshold(spectra, fixture.expected_kernel)
    verdict = is_d_minimal(estimate.count, ctx.catalog.topological[fixture.topology].data)
    ctx.write(
        "torus_kernel.csv",
        (
            "exact_kernel",
            "kernel_count",
            "threshold",
            "gap_ratio",
            "verdict",
            "minimality",
            "window_low",
            "window_high",
        ),
        [
            (
                exact,
                estimate.count,
                format_value(estimate.threshold),
                format_value(estimate.gap_ratio),
                estimate.verdict.value,
                verdict.value,
                format_value(window.lower),
                format_value(window.upper),
            )
        ],
    )
    passed = (
        exact == fixture.expected_kernel
        and estimate.count == fixture.expected_kernel
        and estimate.confident
        and verdict is Minimality.MINIMAL
        and window.contains(ctx.policy.constant)
    )
    return passed, (
        f"exact={exact} discrete={estimate.count} ({estimate.verdict.value}) {verdict.value}, "
        f"C in [{window.lower:.3g}, {window.upper:.3g})"
    )


def _index_oracle(n: int, a_hat: int, alpha: bool) -> int:
    if n % 4 == 0:
        return abs(a_hat)
    return {1: 1, 2: 2}.get(n % 8, 0) if alpha else 0


def _index_table(ctx: SuiteContext) -> tuple[bool, str]:
    rows = []
    mismatches = 0
    for n in range(1, 17):
        for alpha in (False, True):
            for a_hat in range(-3, 4):
                got = as_lower_bound(TopologicalData(n=n, a_hat=a_hat, alpha_nonzero=alpha))
                want = _index_oracle(n, a_hat, alpha)
                mismatches += got != want
                rows.append((n, a_hat, "true" if alpha else "false", got, want))
    ctx.write("index_table.csv", ("n", "a_hat", "alpha_nonzero", "bound", "oracle"), rows)
    return mismatches == 0, f"{len(rows)} cases, {mismatches} mismatches"


def _random_factor(rng: np.random.Generator, cutoff: float) -> SpectrumTable:
    kind = int(rng.integers(0, 4))
    if kind == 0:
        structure = SpinStructure.BOUNDING if rng.integers(0, 2) else SpinStructure.NON_BOUNDING
        return circle_spectrum(SpinCircle(float(rng.uniform(1.0, 10.0)), structure), cutoff)
    if kind == 1:
        spin = (int(rng.integers(0, 2)), int(rng.integers(0, 2)))
        return flat_torus_spectrum(FlatTorus.square(float(rng.uniform(2.0, 8.0)), spin), cutoff)
    if kind == 2:
        return sphere_spectrum(int(rng.integers(1, 4)), cutoff)
    return point_spectrum()


def _product_bound(ctx: SuiteContext) -> tuple[bool, str]:
    bounding = SpinCircle(TWO_PI, SpinStructure.BOUNDING)
    factor_cutoff, cutoff = 4.0, 9.0
    nb_circle = circle_spectrum(SpinCircle(TWO_PI, SpinStructure.NON_BOUNDING), factor_cutoff)
    flat = flat_torus_spectrum(FlatTorus.square(TWO_PI, (0, 0)), factor_cutoff)
    rows = []
    ok = True
    for label, table in (("circle_nb", nb_circle), ("torus_00", flat)):
        product = product_square_spectrum(table, circle_spectrum(bounding, factor_cutoff), cutoff)
        minimum = min(product.values())
        ok &= abs(minimum - 0.25) <= 1e-12
        rows.append((label, 1, format_value(minimum), format_value(check_product_bound(product, 1).margin)))
    rng = np.random.default_rng(ctx.seed)
    for trial in range(PRODUCT_TRIALS):
        l = int(rng.integers(1, 4))
        product = product_square_spectrum(_random_factor(rng, factor_cutoff), sphere_spectrum(l, factor_cutoff), cutoff)
        check = check_product_bound(product, l)
        ok &= check.passed
        rows.append((f"random_{trial}", l, format_value(min(product.values())), format_value(check.margin)))
    ctx.write("product_bound.csv", ("product", "l", "min_square", "margin"), rows)
    return ok, f"{len(rows)} products checked"


def _sphere_oracle(ctx: SuiteContext) -> tuple[bool, str]:
    surface = round_sphere_surface()
    table = surface_spectrum(surface, 2.5, SPHERE_GRID, 2.5)
    ok = True
    worst = 0.0
    for target, mult in ((-2.0, 4), (-1.0, 2), (1.0, 2), (2.0, 4)):
        near = [(value, m) for value, m in table.entries if abs(value - target) <= 0.1]
        found = sum(m for _, m in near)
        worst = max([worst] + [abs(value - target) for value, _ in near])
        ok &= found == mult
    ok &= worst <= SPHERE_TOL and table.count() == 12
    _, union = surface_eigenvalues(surface, 2.5, SPHERE_STUDY_GRIDS[0], k=4)
    asymmetry = spectral_asymmetry(union)
    ok &= asymmetry <= ASYMMETRY_TOL
    exact = [-2.0] * 4 + [-1.0] * 2 + [1.0] * 2 + [2.0] * 4
    study = mesh_convergence(surface, 2.5, SPHERE_STUDY_GRIDS, exact)
    ok &= study.order >= MIN_CONVERGENCE_ORDER
    ctx.write(
        "sphere_oracle.csv",
        ("mesh_h", "max_error"),
        [(format_value(h), format_value(err)) for h, err in zip(study.meshes, study.errors)],
        order=round(study.order, 6),
        asymmetry=format_value(asymmetry),
    )
    return ok, f"max error {worst:.2e} at N={SPHERE_GRID}, order {study.order:.2f}, asymmetry {asymmetry:.1e}"


def _conformal(ctx: SuiteContext) -> tuple[bool, str]:
    rows = []
    failures = 0
    for structure, expected in ((SpinStructure.NON_BOUNDING, 1), (SpinStructure.BOUNDING, 0)):
        circle = SpinCircle(TWO_PI, structure)
        reference = circle_kernel_estimate(circle, unit_factor, 256, ctx.policy)
        failures += reference.count != expected
        for trial in range(CONFORMAL_TRIALS):
            factor_seed = ctx.seed + trial
            invariant = conformal_invariance_check(circle, random_conformal_factor(factor_seed), 256, ctx.policy)
            failures += not invariant
            rows.append((structure.value, trial, factor_seed, "true" if invariant else "false"))
    ctx.write("conformal.csv", ("structure", "trial", "factor_seed", "invariant"), rows)
    return failures == 0, f"{len(rows)} factors, {failures} failures"


def _surgery(ctx: SuiteContext) -> tuple[bool, str]:
    ok = True
    details = []
    for t_spin in (SpinStructure.BOUNDING, SpinStructure.NON_BOUNDING):
        report = neck_sweep(DEFAULT_RHOS, NECK_MODES, NECK_GRID, 0, t_spin=t_spin, policy=ctx.policy)
        ctx.write_text(f"neck_sweep_{t_spin.value}.csv", report.to_csv(), t_spin=t_spin.value)
        rows = report.rows
        flag_ok = (
            report.complete
            and len(rows) == len(DEFAULT_RHOS)
            and all(row.kernel_count == 0 and row.gap_ratio >= ctx.policy.confident_gap_ratio for row in rows)
        )
        if flag_ok:
            flag_ok = rows[-1].min_abs_eig >= COLLAPSE_FRACTION * rows[0].min_abs_eig
        ok &= flag_ok
        details.append(f"{t_spin.value}: {'pass' if flag_ok else report.error or 'fail'}")
    return ok, "; ".join(details)


def _product_decay(ctx: SuiteContext) -> tuple[bool, str]:
    radii = np.geomspace(1e-3, 0.5, 200)
    reports = product_form_deviation(radii)
    ratios = [report.pointwise_norm / r for report, r in zip(reports, radii)]
    worst = max(ratios)
    ctx.write(
        "product_form.csv",
        ("r", "deviation", "gradient"),
        [
            (format_value(r), format_value(rep.pointwise_norm), format_value(rep.gradient_norm))
            for r, rep in zip(radii, reports)
        ],
    )
    return worst <= DECAY_LIMIT, f"max |G|/r = {worst:.4f}"


def _synthetic_spinors(period: float) -> list[tuple[str, Callable, Callable]]:
    w = TWO_PI / period
    return [
        ("constant", lambda t: np.ones_like(t), lambda t: np.ones_like(t)),
        ("first_harmonic", lambda t: np.cos(w * t), lambda t: np.sin(w * t)),
        ("exp_cos", lambda t: np.exp(np.cos(w * t)), lambda t: 1.0 + 0.5 * np.cos(2.0 * w * t)),
    ]


def _energy(ctx: SuiteContext) -> tuple[bool, str]:
    model: SurgeryModel = assemble_surgery_model(
        build_neck_profile(NECK_R_MAX, NECK_R0, NECK_R1, ENERGY_RHO), t_spin=SpinStructure.BOUNDING
    )
    coarse = assemble_revolution_dirac(model.surface, 0.5, NECK_GRID)
    fine = assemble_revolution_dirac(model.surface, 0.5, 2 * NECK_GRID)
    rows = []
    ok = True
    for name, a_fn, b_fn in _synthetic_spinors(model.period):
        got = energy_integrals(SampledSpinor.from_function(coarse, a_fn, b_fn), model)
        oracle = energy_integrals(SampledSpinor.from_function(fine, a_fn, b_fn), model)
        rel = max(abs(g - o) / abs(o) for g, o in zip(got, oracle))
        ok &= rel <= ENERGY_REL_TOL
        rows.append((name, format_value(got[0]), format_value(got[1]), f"{rel:.3e}", ""))
    tau = ctx.policy.threshold(coarse.mesh)
    pairs = eig_smallest(coarse, 4)
    for idx, pair in enumerate(pairs):
        ratio = neck_energy_ratio(pair.vector, pair.value, model, policy=ctx.policy, op=coarse)
        if abs(pair.value) > tau:
            ok &= ratio.verdict is EnergyVerdict.NOT_APPLICABLE
        rows.append((f"eigen_{idx}", format_value(ratio.lhs), format_value(ratio.rhs), "", ratio.verdict.value))
    gram = normalization_gram([pair.vector for pair in pairs], outer_region(model, coarse))
    ok &= not gram.singular
    ctx.write("energy_ratio.csv", ("spinor", "inner", "outer", "rel_diff", "verdict"), rows, gram_rank=gram.rank)
    return ok, f"{len(rows)} spinors, outer Gram rank {gram.rank} of {len(pairs)}"


_DETERMINISM_CONFIGS: tuple[dict, ...] = (
    {"command": "spectrum", "model": "torus", "lattice": "2pi-square", "spin": "00", "cutoff": 3.0},
    {"command": "spectrum", "model": "sphere", "l": 3, "cutoff": 4.0},
    {"command": "spectrum", "model": "torus", "discrete": True, "grid": 64, "m_max": 1, "cutoff": 1.0},
    {"command": "kernel", "model": "circle", "grid": 64},
    {"command": "kernel", "model": "torus", "grid": 128, "m_max": 3},
    {"command": "bound-check", "n": 2, "alpha": 1, "kernel": 2},
    {"command": "conformal-test", "trials": 3},
    {"command": "neck-sweep", "rhos": [0.2], "grid": 64, "m_max": 0.5},
    {"command": "energy-ratio", "rho": 0.1, "grid": 128, "eigenpairs": 2},
    {"command": "list-fixtures"},
)
_CATALOG_COMMANDS = ("kernel", "neck-sweep", "list-fixtures")


def _render_run(config: dict, directory: Path, idx: int) -> list[Path]:
    """Write every artifact the CLI would: CSV, JSON mirror and, for discrete runs, the eigenpair dump."""
    resolved, result = execute(config)
    paths = [
        write_artifact(directory / f"run_{idx}.csv", with_header(resolved, result.csv)),
        write_artifact(
            directory / f"run_{idx}.json",
            json_document(resolved, {**result.payload, "passed": result.passed}),
        ),
    ]
    if result.eigen_dump is not None:
        paths.append(write_artifact(directory / f"run_{idx}_pairs.csv", with_header(resolved, result.eigen_dump)))
    return paths


def _determinism(ctx: SuiteContext) -> tuple[bool, str]:
    mismatched = []
    with tempfile.TemporaryDirectory() as first, tempfile.TemporaryDirectory() as second:
        for idx, base in enumerate(_DETERMINISM_CONFIGS):
            config = {**base, "seed": ctx.seed}
            if config["command"] in _CATALOG_COMMANDS and ctx.catalog_path is not None:
                config["fixtures"] = ctx.catalog_path
            a = _render_run(config, Path(first), idx)
            b = _render_run(config, Path(second), idx)
            if len(a) != len(b) or not all(filecmp.cmp(x, y, shallow=False) for x, y in zip(a, b)):
                mismatched.append(f"{config['command']}#{idx}")
    ctx.write(
        "determinism.csv",
        ("run", "command", "identical"),
        [
            (idx, base["command"], "false" if f"{base['command']}#{idx}" in mismatched else "true")
            for idx, base in enumerate(_DETERMINISM_CONFIGS)
        ],
    )
    return not mismatched, "byte-identical" if not mismatched else f"differs: {', '.join(mismatched)}"


CRITERIA: tuple[tuple[str, Callable[[SuiteContext], tuple[bool, str]]], ...] = (
    ("torus_kernel", _torus_kernel),
    ("index_bound_table", _index_table),
    ("product_bound", _product_bound),
    ("sphere_oracle", _sphere_oracle),
    ("conformal_invariance", _conformal),
    ("surgery_monotonicity", _surgery),
    ("product_form_decay", _product_decay),
    ("energy_ratio", _energy),
    ("determinism", _determinism),
)


def run_criteria(ctx: SuiteContext) -> list[CriterionResult]:
    results: list[CriterionResult] = []
    for name, check in CRITERIA:
        start = time.perf_counter()
        try:
            passed, detail = check(ctx)
        except (EigenSolverError, ValueError, OSError) as exc:
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        seconds = time.perf_counter() - start
        logger.info("criterion %s: %s (%.1fs)", name, "pass" if passed else "FAIL", seconds)
        results.append(CriterionResult(name=name, passed=passed, detail=detail, seconds=seconds))
    return results


def format_table(results: list[CriterionResult]) -> str:
    width = max(len(result.name) for result in results)
    lines = [f"{'criterion':<{width}}  status  seconds  detail"]
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        lines.append(f"{result.name:<{width}}  {status:<6}  {result.seconds:7.1f}  {result.detail}")
    return "\n".join(lines)


def verify_all(
    threshold_constant: float = THRESHOLD_CONSTANT,
    fixtures_path: str | Path | None = None,
    artifacts_dir: str | Path | None = None,
    seed: int = 0,
) -> int:
    """Run every criterion, print the table; 0 iff all pass, 2 when inputs are unusable."""
    try:
        catalog = load_catalog(fixtures_path)
        policy = ThresholdPolicy(constant=threshold_constant)
    except (ValueError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2

    with tempfile.TemporaryDirectory() as scratch:
        artifacts = Path(artifacts_dir) if artifacts_dir is not None else Path(scratch)
        ctx = SuiteContext(
            policy=policy,
            catalog=catalog,
            artifacts=artifacts,
            seed=seed,
            catalog_path=None if fixtures_path is None else str(fixtures_path),
        )
        results = run_criteria(ctx)
        write_artifact(
            artifacts / "summary.csv",
            with_header(
                {"command": "verify-all", "seed": seed, "threshold_constant": threshold_constant},
                render_csv(SUMMARY_COLUMNS, [(r.name, "pass" if r.passed else "fail", r.detail) for r in results]),
            ),
        )
    print(format_table(results))
    return 0 if all(result.passed for result in results) else 1
