import logging
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Dict, Iterator, List, Optional

import typer

from endtangle import __version__, config, themes, ui
from endtangle import report as rep
from endtangle.closure import ClosureVerdict, Route, closure_check, limit_point_witness
from endtangle.config import Budgets
from endtangle.deciders import find_relative_decider, verify_decider
from endtangle.errors import EndTangleError, Inconclusive, InvalidParam
from endtangle.graphs import GraphFamily, ball, make_family, parse_family_spec
from endtangle.invariants import cohesion
from endtangle.oracle import selftest
from endtangle.separations import RestrictionOnZ, restrict

logger = logging.getLogger(__name__)

app = typer.Typer(
    name="endtangle",
    help="End-tangle analysis for lazily generated infinite graphs.",
    add_completion=False,
)


class Emit(str, Enum):
    JSON = "json"
    TEXT = "text"


FamilyOpt = typer.Option(None, "--family", "-f", help="Graph family: ray, ladder, grid, clique_ray, dominated_ray, complete.")
ParamOpt = typer.Option(None, "--param", "-p", help="Family parameter key=val (repeatable).")
FamilyFileOpt = typer.Option(None, "--family-file", help="Read the family from a spec file instead.")
WindowOpt = typer.Option(None, "--window", help="Outer truncation level.")
InnerOpt = typer.Option(None, "--inner-level", help="Separator level bound for verification.")
BudgetOpt = typer.Option(None, "--budget", help="Max expanded vertices per truncation.")
PatienceOpt = typer.Option(None, "--patience", help="Equal values needed to call a scan stable.")
EmitOpt = typer.Option(Emit.JSON, "--emit", help="Output format.")
TimingOpt = typer.Option(True, "--timing/--no-timing", help="Include per-stage durations in JSON.")
VerboseOpt = typer.Option(False, "--verbose", "-v", help="Log analysis stages to stderr.")


def _parse_params(items: Optional[List[str]]) -> Dict[str, int]:
    params: Dict[str, int] = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise InvalidParam(f"--param expects key=val, got {item!r}")
        try:
            params[key.strip()] = int(value)
        except ValueError:
            raise InvalidParam(f"parameter {key.strip()!r} must be an integer, got {value!r}")
    return params


def _family(family: Optional[str], params: Optional[List[str]], family_file: Optional[Path]) -> GraphFamily:
    if family_file is not None:
        if family is not None or params:
            raise InvalidParam("--family-file cannot be combined with --family or --param")
        try:
            text = family_file.read_text(encoding="utf-8")
        except OSError as e:
            raise InvalidParam(f"cannot read {family_file}: {e}")
        return parse_family_spec(text)
    if family is None:
        raise InvalidParam("one of --family or --family-file is required")
    return make_family(family, _parse_params(params))


def _budgets(**overrides) -> Budgets:
    return config.load_budgets(overrides)


@contextmanager
def _guard(verbose: bool) -> Iterator[None]:
    """Map library errors onto exit codes."""
    ui.setup_logging(verbose)
    try:
        yield
    except Inconclusive as e:
        ui.print_error(f"Inconclusive: {e}")
        raise typer.Exit(code=2)
    except EndTangleError as e:
        ui.print_error(str(e))
        raise typer.Exit(code=1)


def _emit(report: rep.AnalysisReport, emit: Emit, timing: bool):
    if emit is Emit.JSON:
        typer.echo(rep.to_json(report, include_timing=timing))
    else:
        ui.render_report(report)


def _base(command: str, g: Optional[GraphFamily], b: Budgets, timer: rep.StageTimer) -> rep.AnalysisReport:
    return rep.AnalysisReport(
        command=command,
        family=rep.family_info(g) if g is not None else None,
        budgets=rep.budgets_info(b),
        timing=timer.stages,
    )


def version_callback(value: bool):
    if value:
        typer.echo(f"endtangle {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    version: bool = typer.Option(False, "--version", callback=version_callback, is_eager=True,
                                 help="Show the version and exit."),
):
    """
    endtangle: cohesion, deciders and limit points of end tangles.
    """


@app.command("cohesion")
def cohesion_cmd(
    family: Optional[str] = FamilyOpt,
    param: Optional[List[str]] = ParamOpt,
    family_file: Optional[Path] = FamilyFileOpt,
    window: Optional[int] = WindowOpt,
    inner_level: Optional[int] = InnerOpt,
    budget: Optional[int] = BudgetOpt,
    patience: Optional[int] = PatienceOpt,
    emit: Emit = EmitOpt,
    timing: bool = TimingOpt,
    verbose: bool = VerboseOpt,
):
    """Degree, domination and cohesion category of the end."""
    with _guard(verbose):
        g = _family(family, param, family_file)
        b = _budgets(window=window, inner_level=inner_level, budget=budget, patience=patience)
        timer = rep.StageTimer()
        with timer.stage("cohesion"):
            result = cohesion(g, b)
        report = _base("cohesion", g, b, timer)
        report.cohesion = rep.cohesion_model(result, g)
        _emit(report, emit, timing)
        if not result.conclusive:
            raise Inconclusive(f"cohesion is only known to be {result.label} at these budgets")


@app.command("closure")
def closure_cmd(
    k: int = typer.Option(..., "--k", min=1, help="Separations of order < k."),
    family: Optional[str] = FamilyOpt,
    param: Optional[List[str]] = ParamOpt,
    family_file: Optional[Path] = FamilyFileOpt,
    window: Optional[int] = WindowOpt,
    inner_level: Optional[int] = InnerOpt,
    budget: Optional[int] = BudgetOpt,
    patience: Optional[int] = PatienceOpt,
    verify: bool = typer.Option(True, "--verify/--no-verify", help="Verify the decider over the inner window."),
    emit: Emit = EmitOpt,
    timing: bool = TimingOpt,
    verbose: bool = VerboseOpt,
):
    """Whether the tangle restricted to order < k is closed, with its witness."""
    with _guard(verbose):
        g = _family(family, param, family_file)
        b = _budgets(window=window, inner_level=inner_level, budget=budget, patience=patience)
        timer = rep.StageTimer()
        with timer.stage("cohesion"):
            result = cohesion(g, b)
        with timer.stage("closure"):
            verdict = closure_check(g, k, b, result, verify=verify)
        report = _base("closure", g, b, timer)
        report.cohesion = rep.cohesion_model(result, g)
        report.per_k = [rep.closure_model(verdict, g)]
        _emit(report, emit, timing)


@app.command("decider")
def decider_cmd(
    k: int = typer.Option(..., "--k", min=1, help="Size of the decider."),
    family: Optional[str] = FamilyOpt,
    param: Optional[List[str]] = ParamOpt,
    family_file: Optional[Path] = FamilyFileOpt,
    window: Optional[int] = WindowOpt,
    inner_level: Optional[int] = InnerOpt,
    budget: Optional[int] = BudgetOpt,
    patience: Optional[int] = PatienceOpt,
    method: str = typer.Option("auto", "--method", help="Verification: auto, exhaustive or flow."),
    emit: Emit = EmitOpt,
    timing: bool = TimingOpt,
    verbose: bool = VerboseOpt,
):
    """Build a relative decider of size k and verify it."""
    with _guard(verbose):
        g = _family(family, param, family_file)
        b = _budgets(window=window, inner_level=inner_level, budget=budget, patience=patience)
        timer = rep.StageTimer()
        with timer.stage("cohesion"):
            result = cohesion(g, b)
        with timer.stage("decider"):
            cert = find_relative_decider(g, k, b, result)
        with timer.stage("verification"):
            L = max(b.inner_level, g.max_level(cert.X)) + b.margin
            verification = verify_decider(g, cert.X, k, b.inner_level, L, method=method,
                                          cap=b.enumeration_cap, max_vertices=b.budget)
        verdict = ClosureVerdict(k, True, True, Route.DECIDER, decider=cert, verification=verification)
        report = _base("decider", g, b, timer)
        report.cohesion = rep.cohesion_model(result, g)
        report.per_k = [rep.closure_model(verdict, g)]
        _emit(report, emit, timing)
        if not verification.ok:
            ui.print_error(f"decider failed verification with {len(verification.violations)} violations")
            raise typer.Exit(code=1)


@app.command("limit-point")
def limit_point_cmd(
    k: int = typer.Option(..., "--k", min=1, help="Separations of order < k."),
    z_level: int = typer.Option(..., "--z-level", min=0, help="Z is the ball of this level."),
    family: Optional[str] = FamilyOpt,
    param: Optional[List[str]] = ParamOpt,
    family_file: Optional[Path] = FamilyFileOpt,
    window: Optional[int] = WindowOpt,
    inner_level: Optional[int] = InnerOpt,
    budget: Optional[int] = BudgetOpt,
    patience: Optional[int] = PatienceOpt,
    emit: Emit = EmitOpt,
    timing: bool = TimingOpt,
    verbose: bool = VerboseOpt,
):
    """A separation of order < k pointing to the end that agrees with (V, D) on Z."""
    with _guard(verbose):
        g = _family(family, param, family_file)
        b = _budgets(window=window, inner_level=inner_level, budget=budget, patience=patience)
        timer = rep.StageTimer()
        with timer.stage("cohesion"):
            result = cohesion(g, b)
        Z = frozenset(ball(g, z_level))
        with timer.stage("limit-point"):
            s = limit_point_witness(g, k, Z, b, result)
        D = frozenset(result.domination.witnesses)
        agrees = restrict(s, Z) == RestrictionOnZ(Z, Z, Z & D) and s.in_tau and s.order < k
        report = _base("limit-point", g, b, timer)
        report.cohesion = rep.cohesion_model(result, g)
        report.limit_point = rep.SampleModel(Z=[g.label(v) for v in g.sort(Z)],
                                             agreeing=rep.separation_model(s), agrees=agrees)
        _emit(report, emit, timing)


@app.command("oracle-selftest")
def oracle_selftest_cmd(
    seed: Optional[int] = typer.Option(None, "--seed", min=0, help="Seed for the random graphs."),
    graphs: int = typer.Option(200, "--graphs", min=1, help="Number of random graphs."),
    emit: Emit = EmitOpt,
    timing: bool = TimingOpt,
    verbose: bool = VerboseOpt,
):
    """Cross-check flow and enumeration against brute force on small graphs."""
    with _guard(verbose):
        b = _budgets(seed=seed)
        timer = rep.StageTimer()
        with timer.stage("oracle"):
            summary = selftest(seed=b.seed, n_graphs=graphs)
        report = _base("oracle-selftest", None, b, timer)
        report.oracle_selftest = rep.selftest_model(summary)
        _emit(report, emit, timing)
        if not summary.ok:
            raise typer.Exit(code=1)


@app.command("sweep")
def sweep_cmd(
    k_max: int = typer.Option(..., "--k-max", min=1, help="Check every k from 1 to k_max."),
    family: Optional[str] = FamilyOpt,
    param: Optional[List[str]] = ParamOpt,
    family_file: Optional[Path] = FamilyFileOpt,
    window: Optional[int] = WindowOpt,
    inner_level: Optional[int] = InnerOpt,
    budget: Optional[int] = BudgetOpt,
    patience: Optional[int] = PatienceOpt,
    verify: bool = typer.Option(True, "--verify/--no-verify", help="Verify each decider over the inner window."),
    emit: Emit = EmitOpt,
    timing: bool = TimingOpt,
    verbose: bool = VerboseOpt,
):
    """Closure verdicts for k = 1 .. k_max."""
    with _guard(verbose):
        g = _family(family, param, family_file)
        b = _budgets(window=window, inner_level=inner_level, budget=budget, patience=patience)
        timer = rep.StageTimer()
        with timer.stage("cohesion"):
            result = cohesion(g, b)
        rows = []
        for k in range(1, k_max + 1):
            with timer.stage(f"k={k}"):
                verdict = closure_check(g, k, b, result, verify=verify)
            logger.info("k=%d: %s via %s", k, "closed" if verdict.closed else "not closed", verdict.route.value)
            rows.append(rep.closure_model(verdict, g))
        report = _base("sweep", g, b, timer)
        report.cohesion = rep.cohesion_model(result, g)
        report.per_k = rows
        _emit(report, emit, timing)


@app.command("config")
def config_cmd(
    theme: Optional[str] = typer.Option(None, "--theme", help="Text report theme: default, dark or light."),
    window: Optional[int] = WindowOpt,
    inner_level: Optional[int] = InnerOpt,
    budget: Optional[int] = BudgetOpt,
    patience: Optional[int] = PatienceOpt,
    verbose: bool = VerboseOpt,
):
    """Store defaults in ~/.endtangle/config.json and show the effective budgets."""
    with _guard(verbose):
        if theme is not None:
            if theme not in themes.THEMES:
                raise InvalidParam(f"unknown theme {theme!r}")
            stored = config._load_config()
            stored["theme"] = theme
            config._save_config(stored)
            ui.reload_ui()
        b = _budgets(window=window, inner_level=inner_level, budget=budget, patience=patience)
        if any(v is not None for v in (window, inner_level, budget, patience)):
            config.save_budgets(b)
            ui.print_success("Budgets saved.")
        for knob in config.KNOBS:
            ui.console.print(f"  [info]{knob}[/info] = {getattr(b, knob)}")


def start():
    """Entry point for the script."""
    app()


if __name__ == "__main__":
    start()
