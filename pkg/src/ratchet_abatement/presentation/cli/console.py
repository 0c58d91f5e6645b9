"""
Вывод результатов в консоль (rich)
"""

import logging
import math
from typing import Any, Dict, Sequence

import pandas as pd
from rich import box
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from ratchet_abatement.domain.entities.convergence import ConvergenceReport

console = Console()


def configure_logging(level: str) -> None:
    """Корневой логгер с RichHandler (вызывается один раз из CLI)"""
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def _fmt(value: Any, digits: int = 6) -> str:
    if value is None:
        return "—"
    if isinstance(value, float):
        return "—" if math.isnan(value) else f"{value:.{digits}g}"
    return str(value)


def render_config_errors(violations: Sequence[str]) -> None:
    table = Table(title="Ошибки конфигурации", box=box.SIMPLE, show_header=False)
    table.add_column("№", style="dim")
    table.add_column("Нарушение", style="red")
    for number, message in enumerate(violations, start=1):
        table.add_row(str(number), message)
    console.print(table)


def render_solve(summary: Dict[str, Any], violations: Sequence[str]) -> None:
    table = Table(title="Пороговая поверхность", box=box.SIMPLE_HEAVY)
    table.add_column("Показатель")
    table.add_column("Значение", justify="right")
    for key in (
        "n",
        "zero_threshold_region",
        "zero_threshold_levels",
        "positive_threshold_levels",
        "z_star_top",
    ):
        table.add_row(key, _fmt(summary.get(key)))
    table.add_row("inflection_rate", _fmt(summary["diagnostics"].get("inflection_rate")))
    table.add_row("проверки", "[green]пройдены[/]" if not violations else f"[red]{len(violations)}[/]")
    console.print(table)


def render_estimate(record: Dict[str, Any]) -> None:
    value, depletion = record["value"], record["depletion_time"]
    table = Table(title=f"Monte Carlo: {record['strategy']}", box=box.SIMPLE_HEAVY)
    table.add_column("Величина")
    table.add_column("Среднее", justify="right")
    table.add_column("±95%", justify="right")
    table.add_row("ценность", _fmt(value["mean"]), _fmt(value["half_width_95"], 3))
    table.add_row("E[τ]", _fmt(depletion["mean"]), _fmt(depletion["half_width_95"], 3))
    if record.get("analytic_value") is not None:
        table.add_row("аналитически", _fmt(record["analytic_value"]), "")
    console.print(table)


def render_comparison(frame: pd.DataFrame) -> None:
    table = Table(title="Сравнение стратегий", box=box.SIMPLE_HEAVY)
    for column in frame.columns:
        table.add_column(str(column), justify="left" if column == "strategy" else "right")
    for _, row in frame.iterrows():
        table.add_row(*[_fmt(row[column]) for column in frame.columns])
    console.print(table)


def render_convergence(report: ConvergenceReport) -> None:
    table = Table(title="Сходимость по сетке ставок", box=box.SIMPLE_HEAVY)
    table.add_column("n → 2n")
    table.add_column("sup |ΔV|", justify="right")
    table.add_column("min ΔV", justify="right")
    for (coarse, fine), diff, increment in zip(
        zip(report.mesh_sizes, report.mesh_sizes[1:]), report.sup_diffs, report.min_increments
    ):
        table.add_row(f"{coarse} → {fine}", _fmt(diff, 4), _fmt(increment, 4))
    console.print(table)
    console.print(
        f"монотонность: {'да' if report.monotone_ok else 'нет'}, "
        f"убывание sup-разностей: {'да' if report.decreasing else 'нет'}"
    )
