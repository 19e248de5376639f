"""Command-line interface.

Subcommands: ``amplitude`` (transition amplitude between two configured
states), ``project`` (detector projection with sector entanglement),
``sweep`` (parameter grids streamed as CSV), ``schmidt`` (mode-splitting
equivalence report) and ``verify`` (randomized verification suites).

Exit codes: 0 success, 1 verification failure, 2 usage or config error.
The environment variable ``IDENTANGLE_TOL`` overrides the default
comparison tolerance.
"""

from __future__ import annotations

import json
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import click

from .config import (
    EnsembleConfig,
    dump_ensemble_config,
    parse_ensemble_config,
    parse_sweep_spec,
)
from .detection import entanglement_of_particles, project_onto_detectors
from .errors import IdentangleError
from .measures import verify_schmidt_equivalence
from .states import Statistics
from .algebra import transition_amplitude
from .tolerances import Tolerances, tolerances_from_env
from .verify import DEFAULT_SEED, SUITES, run_suite


def _fail_usage(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _tolerances() -> Tolerances:
    try:
        return tolerances_from_env()
    except IdentangleError as exc:
        _fail_usage(str(exc))


def _load_config(path: str) -> EnsembleConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        _fail_usage(f"cannot read config {path}: {exc}")
    try:
        return parse_ensemble_config(text)
    except IdentangleError as exc:
        _fail_usage(f"{path}: {exc}")


def _write_output(text: str, output: str):
    if output == "-":
        click.echo(text, nl=not text.endswith("\n"))
        return
    with open(output, "w", encoding="utf-8") as handle:
        handle.write(text if text.endswith("\n") else text + "\n")


def _fmt(value: float) -> str:
    return "%.17g" % value


def _key_json(key) -> List[List[str]]:
    return [[label, spin.value] for label, spin in key]


@click.group()
def main():
    """Identical-particle entanglement toolkit."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(), help="Ket-side ensemble config (JSON).")
@click.option("--bra-config", "bra_path", required=True, type=click.Path(), help="Bra-side ensemble config (JSON).")
@click.option("--method", type=click.Choice(["ryser", "naive"]), default="ryser", show_default=True)
@click.option("--output", default="-", show_default=True)
def amplitude(config_path: str, bra_path: str, method: str, output: str):
    """Transition amplitude between two configured product states."""
    _tolerances()
    ket_config = _load_config(config_path)
    bra_config = _load_config(bra_path)
    if ket_config.n_total != bra_config.n_total:
        _fail_usage(
            f"particle number mismatch: ket has {ket_config.n_total}, "
            f"bra has {bra_config.n_total}"
        )
    if ket_config.statistics is not bra_config.statistics:
        _fail_usage("bra and ket configs disagree on statistics")
    try:
        value = transition_amplitude(
            bra_config.ensemble().kets(),
            ket_config.ensemble().kets(),
            ket_config.statistics,
            method=method,
        )
    except IdentangleError as exc:
        _fail_usage(str(exc))
    record = {
        "amplitude": {"re": value.real, "im": value.imag},
        "method": method if ket_config.statistics is Statistics.BOSON else "determinant",
        "statistics": ket_config.statistics.value,
        "n_particles": ket_config.n_total,
    }
    _write_output(json.dumps(record, indent=2), output)


def _project_record(
    config: EnsembleConfig, method: str, tol: Tolerances
) -> Dict:
    if config.statistics is not Statistics.BOSON:
        raise IdentangleError(
            "detector projection is defined for bosonic ensembles only"
        )
    ensemble = config.ensemble()
    decomposition = project_onto_detectors(ensemble, method=method, tol=tol)
    sectors = []
    for sector in decomposition.sectors:
        amps = [
            {"key": _key_json(key), "re": value.real, "im": value.imag}
            for key, value in sorted(sector.state.items())
        ]
        sectors.append({"q": sector.q, "p": sector.probability, "amplitudes": amps})
    entanglement = {
        measure: entanglement_of_particles(
            ensemble, measure, method=method, tol=tol, decomposition=decomposition
        )
        for measure in ("entropy", "concurrence")
    }
    return {
        "n_particles": config.n_total,
        "n_up": config.n_up,
        "source_order": list(config.source_order),
        "sectors": sectors,
        "leak": decomposition.leak_probability,
        "entanglement": entanglement,
    }


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--method", type=click.Choice(["ryser", "naive"]), default="ryser", show_default=True)
@click.option("--output", default="-", show_default=True)
def project(config_path: str, method: str, output: str):
    """Project the configured ensemble onto the detectors and report the
    sector decomposition plus both entanglement averages."""
    tol = _tolerances()
    config = _load_config(config_path)
    try:
        record = _project_record(config, method, tol)
    except IdentangleError as exc:
        _fail_usage(str(exc))
    _write_output(json.dumps(record, indent=2), output)


def _sweep_point(
    config: EnsembleConfig,
    paths: Sequence[str],
    values: Sequence[float],
    measure: str,
    method: str,
    tol: Tolerances,
) -> Tuple[Tuple[float, ...], Dict[int, float], float, float]:
    point_config = config
    for path, value in zip(paths, values):
        point_config = point_config.with_value(path, value)
    ensemble = point_config.ensemble()
    decomposition = project_onto_detectors(ensemble, method=method, tol=tol)
    entanglement = entanglement_of_particles(
        ensemble, measure, method=method, tol=tol, decomposition=decomposition
    )
    return (
        tuple(values),
        decomposition.probabilities(),
        decomposition.leak_probability,
        entanglement,
    )


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--sweep", "sweep_path", required=True, type=click.Path(), help="Sweep spec (JSON).")
@click.option("--measure", type=click.Choice(["entropy", "concurrence"]), default="concurrence", show_default=True)
@click.option("--method", type=click.Choice(["ryser", "naive"]), default="ryser", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--output", default="-", show_default=True)
def sweep(config_path, sweep_path, measure, method, fmt, threads, output):
    """Evaluate the projection over a parameter grid.

    Rows follow the lexicographic grid order of the sweep axes regardless
    of the thread count.
    """
    tol = _tolerances()
    config = _load_config(config_path)
    if config.statistics is not Statistics.BOSON:
        _fail_usage("detector projection is defined for bosonic ensembles only")
    try:
        with open(sweep_path, "r", encoding="utf-8") as handle:
            spec = parse_sweep_spec(handle.read(), config)
    except OSError as exc:
        _fail_usage(f"cannot read sweep spec {sweep_path}: {exc}")
    except IdentangleError as exc:
        _fail_usage(f"{sweep_path}: {exc}")
    if threads < 1:
        _fail_usage("--threads must be >= 1")

    paths = [axis.path for axis in spec.axes]
    n = config.n_total

    def evaluate(values):
        return _sweep_point(config, paths, values, measure, method, tol)

    try:
        if threads == 1:
            results = [evaluate(v) for v in spec.grid()]
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(evaluate, spec.grid()))
    except IdentangleError as exc:
        _fail_usage(str(exc))

    if fmt == "json":
        records = [
            {
                "parameters": dict(zip(paths, values)),
                "p": {str(q): p for q, p in sorted(probs.items())},
                "leak": leak,
                "entanglement": ent,
            }
            for values, probs, leak, ent in results
        ]
        _write_output(json.dumps(records, indent=2), output)
        return

    header = paths + [f"p_{q}" for q in range(n + 1)] + ["leak", "entanglement"]
    lines = [",".join(header)]
    for values, probs, leak, ent in results:
        row = [_fmt(v) for v in values]
        row += [_fmt(probs.get(q, 0.0)) for q in range(n + 1)]
        row.append(_fmt(leak))
        row.append(_fmt(ent))
        lines.append(",".join(row))
    _write_output("\n".join(lines) + "\n", output)


@main.command()
@click.option("--n-total", type=int, required=True, help="Total particle number.")
@click.option("--n-up", type=int, required=True, help="Spin-up particle count.")
@click.option("--theta", default="0.7853981633974483", show_default=True,
              help="Scalar or comma-separated list of mixing angles.")
@click.option("--omega", default="0.0", show_default=True,
              help="Scalar or comma-separated list of phases.")
@click.option("--split", required=True, help="Local particle numbers, e.g. 2,1.")
@click.option("--output", default="-", show_default=True)
def schmidt(n_total, n_up, theta, omega, split, output):
    """Compare label-group Schmidt coefficients with the mode-split ones."""
    tol = _tolerances()
    try:
        split_pair = tuple(int(s) for s in split.split(","))
        if len(split_pair) != 2:
            raise ValueError
    except ValueError:
        _fail_usage(f"--split must be two comma-separated integers, got {split!r}")
    try:
        report = verify_schmidt_equivalence(
            n_total,
            n_up,
            _parse_angles(theta),
            _parse_angles(omega),
            split_pair,
            tol=tol,
        )
    except IdentangleError as exc:
        _fail_usage(str(exc))
    record = {
        "input_coeffs": list(report.input_coefficients),
        "output_coeffs": list(report.output_coefficients),
        "max_abs_diff": report.max_abs_diff,
        "sector_probability": report.sector_probability,
    }
    _write_output(json.dumps(record, indent=2), output)


def _parse_angles(text: str):
    parts = [p for p in text.split(",") if p.strip()]
    try:
        values = [float(p) for p in parts]
    except ValueError:
        _fail_usage(f"bad angle list {text!r}")
    return values[0] if len(values) == 1 else values


@main.command()
@click.argument("suite", type=click.Choice(sorted(SUITES)))
@click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)
@click.option("--cases", type=int, default=None, help="Override the suite's sample count.")
@click.option("--output", default="-", show_default=True)
def verify(suite: str, seed: int, cases: Optional[int], output: str):
    """Run a named verification suite; exits 1 on any failure."""
    tol = _tolerances()
    try:
        report = run_suite(suite, seed=seed, tol=tol, cases=cases)
    except IdentangleError as exc:
        _fail_usage(str(exc))
    _write_output(json.dumps(report, indent=2), output)
    if report["failures"]:
        sys.exit(1)


@main.command("echo-config")
@click.option("--config", "config_path", required=True, type=click.Path())
@click.option("--output", default="-", show_default=True)
def echo_config(config_path: str, output: str):
    """Parse a config and emit its canonical serialization (round-trip aid)."""
    _tolerances()
    config = _load_config(config_path)
    _write_output(dump_ensemble_config(config), output)


if __name__ == "__main__":
    main()
