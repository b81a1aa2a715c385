"""
Terminal rendering for endtangle.
Text reports go to a themed rich console; logs go to stderr through RichHandler
so that JSON on stdout stays clean.
"""

import logging
from typing import List

from rich import box
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table
from rich.theme import Theme

from endtangle import config, themes
from endtangle.report import AnalysisReport, ClosureModel, CohesionModel, SelftestModel


def get_console(stderr: bool = False) -> Console:
    """Get a console instance with the current theme."""
    theme_def = themes.get_theme(config.get_theme())
    return Console(theme=Theme(theme_def), stderr=stderr)


console = get_console()
err_console = get_console(stderr=True)


def reload_ui():
    """Reload console theme."""
    global console, err_console
    console = get_console()
    err_console = get_console(stderr=True)
    logger = logging.getLogger("endtangle")
    if logger.handlers:
        _install_handler(logger.level)


def _install_handler(level: int):
    logger = logging.getLogger("endtangle")
    logger.handlers.clear()
    handler = RichHandler(console=err_console, show_path=False, markup=False)
    handler.setFormatter(logging.Formatter("%(message)s"))
    logger.addHandler(handler)
    logger.setLevel(level)
    logger.propagate = False


def setup_logging(verbose: bool = False):
    """Route the package logger to stderr."""
    _install_handler(logging.INFO if verbose else logging.WARNING)


def print_error(message: str):
    """Print a styled error message."""
    err_console.print(f"  [error]⎿  {message}[/error]")


def print_success(message: str):
    """Print a styled success message."""
    console.print(f"  [success]⎿  {message}[/success]")


def _verdict(closed: bool) -> str:
    return "[closed]closed[/closed]" if closed else "[open]not closed[/open]"


def _vertices(labels: List[str]) -> str:
    return "{" + ", ".join(labels) + "}" if labels else "∅"


def render_cohesion(c: CohesionModel):
    table = Table(box=box.SIMPLE, header_style="header", border_style="border")
    table.add_column("Invariant", style="bold")
    table.add_column("Kind")
    table.add_column("Value", justify="right")
    table.add_column("Detail", style="info")
    dom = c.domination
    table.add_row("domination", dom.kind, str(dom.value), _vertices(dom.witnesses))
    if c.degree is not None:
        series = " ".join(str(v) for v in c.degree.series)
        table.add_row("degree", c.degree.kind, str(c.degree.value), f"s_d: {series}")
    else:
        table.add_row("degree", "skipped", "-", "end is infinitely dominated")
    style = "success" if c.conclusive else "undecided"
    console.print(Panel(table, title=f"[header] cohesion: [{style}]{c.label}[/{style}] [/header]",
                        title_align="left", border_style="border"))


def render_closure(v: ClosureModel):
    lines = [f"k = {v.k}: {_verdict(v.closed)}  [info](route: {v.route})[/info]"]
    if v.decider is not None:
        lines.append(f"decider X = [vertex]{_vertices(v.decider.X)}[/vertex]"
                     f"  D = {_vertices(v.decider.D)}  window {v.decider.window}")
        for path in v.decider.linking_paths:
            lines.append(f"  [info]link[/info] {' - '.join(path)}")
    if v.verification is not None:
        check = "[success]ok[/success]" if v.verification.ok else "[error]FAILED[/error]"
        lines.append(f"verification ({v.verification.method}): {check}, "
                     f"{v.verification.checked} checked, {len(v.verification.violations)} violations")
    if v.limit_point is not None:
        lp = v.limit_point
        lines.append(f"limit point (V, {_vertices(lp.D)})")
        for s in lp.samples:
            mark = "[success]agrees[/success]" if s.agrees else "[error]disagrees[/error]"
            lines.append(f"  Z = {_vertices(s.Z)}: sep {_vertices(s.agreeing.separator)} "
                         f"(order {s.agreeing.order}) {mark}")
    console.print(Panel("\n".join(lines), border_style="border"))


def render_sweep(rows: List[ClosureModel]):
    table = Table(box=box.SIMPLE, header_style="header", border_style="border")
    table.add_column("k", justify="right")
    table.add_column("closed")
    table.add_column("route", style="info")
    table.add_column("witness")
    for v in rows:
        if v.decider is not None:
            ok = "" if v.verification is None else (" ✓" if v.verification.ok else " ✗")
            witness = f"X = {_vertices(v.decider.X)}{ok}"
        elif v.limit_point is not None:
            good = sum(s.agrees for s in v.limit_point.samples)
            witness = f"{good}/{len(v.limit_point.samples)} samples agree"
        else:
            witness = "-"
        table.add_row(str(v.k), _verdict(v.closed), v.route, witness)
    console.print(table)


def render_selftest(s: SelftestModel):
    table = Table(box=box.SIMPLE, header_style="header", border_style="border")
    table.add_column("Check", style="bold")
    table.add_column("Agree", justify="right", style="success")
    table.add_column("Disagree", justify="right", style="error")
    table.add_row("flow vs brute force", str(s.flow_agree), str(s.flow_disagree))
    table.add_row("separator vs direct enumeration", str(s.enumeration_agree), str(s.enumeration_disagree))
    table.add_row("vote counts", str(s.votes_agree), str(s.votes_disagree))
    console.print(table)
    console.print(f"  triangle separations of order < 2: {s.triangle_count}")
    if s.ok:
        print_success(f"oracle self-test passed on {s.graphs} graphs (seed {s.seed})")
    else:
        print_error(f"oracle self-test found disagreements (seed {s.seed})")


def render_report(report: AnalysisReport):
    """Render any report as text."""
    if report.family is not None:
        params = ", ".join(f"{k}={v}" for k, v in report.family.params.items())
        console.print(f"[header]{report.family.name}[/header]({params})")
    if report.cohesion is not None:
        render_cohesion(report.cohesion)
    if report.command == "sweep":
        render_sweep(report.per_k)
    else:
        for v in report.per_k:
            render_closure(v)
    if report.limit_point is not None:
        lp = report.limit_point
        mark = "[success]agrees[/success]" if lp.agrees else "[error]disagrees[/error]"
        console.print(f"Z = {_vertices(lp.Z)}: separator {_vertices(lp.agreeing.separator)}, "
                      f"A-side components {_vertices(lp.agreeing.a_components)} {mark}")
    if report.oracle_selftest is not None:
        render_selftest(report.oracle_selftest)
