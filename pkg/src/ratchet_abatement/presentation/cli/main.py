"""
Командная строка: ratchet {solve|simulate|compare|converge}

Коды выхода: 0 - успех, 2 - ошибка конфигурации (файлы не создаются),
3 - численный сбой, 4 - проверки оптимальности не пройдены.
"""

import argparse
import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from ratchet_abatement.application.use_cases.compare_strategies import (
    CompareStrategiesUseCase,
    ComparisonReport,
)
from ratchet_abatement.application.use_cases.convergence_study import (
    convergence_frame,
    convergence_study,
)
from ratchet_abatement.application.use_cases.record_run import RecordRunUseCase
from ratchet_abatement.application.use_cases.simulate_strategy import (
    SimulateStrategyUseCase,
    build_strategy,
)
from ratchet_abatement.application.use_cases.solve_surface import (
    SolveSurfaceUseCase,
    evaluation_grid,
)
from ratchet_abatement.domain.errors import ConfigError, RatchetError, VerificationError
from ratchet_abatement.infrastructure.config.run_config import (
    RunConfig,
    load_run_config,
)
from ratchet_abatement.infrastructure.config.settings import Settings
from ratchet_abatement.infrastructure.database.session import get_session
from ratchet_abatement.infrastructure.export.artifacts import ArtifactWriter
from ratchet_abatement.presentation.cli import console

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_VERIFICATION = 4

Handler = Callable[[RunConfig, ArtifactWriter, Settings], Dict[str, Any]]


def cmd_solve(config: RunConfig, writer: ArtifactWriter, settings: Settings) -> Dict[str, Any]:
    """thresholds.csv, value_curve.csv, hjb_report.csv, summary.json"""
    report = SolveSurfaceUseCase(config.model.to_params(), config.solve.tol).execute(
        config.grid_n, config.x_max, config.x_points
    )
    writer.prepare()
    writer.write_csv("thresholds.csv", report.thresholds)
    writer.write_csv("value_curve.csv", report.value_curve)
    writer.write_csv("hjb_report.csv", report.hjb)

    summary = dict(report.summary, verified=report.verified, violations=report.violations)
    writer.write_json("summary.json", summary)
    console.render_solve(report.summary, report.violations)

    if report.violations:
        raise VerificationError(report.violations)
    return summary


def cmd_simulate(
    config: RunConfig, writer: ArtifactWriter, settings: Settings
) -> Dict[str, Any]:
    """estimate.json и, по запросу, path_trace.csv"""
    params = config.model.to_params()
    choice = build_strategy(
        config.simulate.strategy, params, config.x0, config.grid_n, config.simulate.options()
    )
    report = SimulateStrategyUseCase(params, config.mc.to_config(), settings.workers).execute(
        choice, config.x0, config.simulate.trace_path
    )

    writer.prepare()
    record = dict(report.as_record(), seed=config.mc.seed, x0=config.x0)
    writer.write_json("estimate.json", record)
    if report.trace is not None:
        writer.write_csv("path_trace.csv", report.trace)
    console.render_estimate(record)
    return record


def cmd_compare(config: RunConfig, writer: ArtifactWriter, settings: Settings) -> Dict[str, Any]:
    """comparison.csv, threshold_curves.csv, comparison.json"""
    params = config.model.to_params()
    use_case = CompareStrategiesUseCase(
        config.mc.to_config(),
        config.grid_n,
        settings.workers,
        config.compare.strategies,
    )
    sweep = config.compare.sweep
    report: ComparisonReport
    if sweep is None:
        report = use_case.execute(params, config.x0)
    else:
        report = use_case.execute_sweep(params, config.x0, sweep.parameter, sweep.values)

    writer.prepare()
    writer.write_csv("comparison.csv", report.table)
    writer.write_csv("threshold_curves.csv", report.threshold_curves)
    payload = {
        "rows": report.table.to_dict(orient="records"),
        "diagnostics": report.diagnostics,
    }
    writer.write_json("comparison.json", payload)
    console.render_comparison(report.table)
    return {"diagnostics": report.diagnostics}


def cmd_converge(config: RunConfig, writer: ArtifactWriter, settings: Settings) -> Dict[str, Any]:
    """convergence.csv, convergence.json"""
    report = convergence_study(
        config.model.to_params(),
        config.converge.n_list,
        evaluation_grid(config.x_max, config.x_points),
        settings.workers,
    )
    writer.prepare()
    writer.write_csv("convergence.csv", convergence_frame(report))
    summary = {
        "mesh_sizes": list(report.mesh_sizes),
        "sup_diffs": list(report.sup_diffs),
        "min_increments": list(report.min_increments),
        "rates": list(report.rates),
        "monotone_ok": report.monotone_ok,
        "decreasing": report.decreasing,
    }
    writer.write_json("convergence.json", summary)
    console.render_convergence(report)

    if not report.monotone_ok:
        raise VerificationError(["V^{2n} < V^n на вложенных сетках"])
    return summary


COMMAND_HANDLERS: Dict[str, Handler] = {
    "solve": cmd_solve,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "converge": cmd_converge,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON-файл конфигурации запуска")
    common.add_argument("--out", type=Path, help="Каталог артефактов (RATCHET_OUTPUT_DIR)")
    common.add_argument("--seed", type=int, help="Seed Monte Carlo (uint64)")
    common.add_argument("--n", type=int, help="Число интервалов сетки ставок")
    common.add_argument("--paths", type=int, help="Число траекторий Monte Carlo")
    common.add_argument("--dt", type=float, help="Шаг по времени Monte Carlo")

    parser = argparse.ArgumentParser(
        prog="ratchet",
        description="Оптимальное снижение выбросов с ограничением ratcheting-down",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("solve", parents=[common], help="Пороговая поверхность и проверки HJB")
    commands.add_parser("simulate", parents=[common], help="Monte Carlo оценка стратегии")
    commands.add_parser("compare", parents=[common], help="Сравнение стратегий")
    commands.add_parser("converge", parents=[common], help="Сходимость по сетке ставок")
    return parser


def _record_run(
    settings: Settings,
    out: Path,
    writer: ArtifactWriter,
    exit_code: int,
    summary: Dict[str, Any],
) -> None:
    """Запись в реестр; сбой реестра не меняет код выхода"""
    try:
        out.mkdir(parents=True, exist_ok=True)
        with get_session(settings.registry_url(out)) as session:
            RecordRunUseCase(session).execute(
                writer.command, writer.digest, str(writer.run_dir), exit_code, summary
            )
    except Exception as exc:  # pylint: disable=broad-exception-caught
        logger.warning("Реестр запусков недоступен: %s", exc)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Точка входа ratchet"""
    args = build_parser().parse_args(argv)
    settings = Settings()
    console.configure_logging(settings.log_level)

    overrides = {"seed": args.seed, "n": args.n, "paths": args.paths, "dt": args.dt}
    try:
        config = load_run_config(args.config, args.command, overrides)
    except ConfigError as exc:
        for message in exc.violations:
            logger.error("Конфигурация: %s", message)
        console.render_config_errors(exc.violations)
        return EXIT_CONFIG

    out = args.out if args.out is not None else settings.output_dir
    writer = ArtifactWriter(out, args.command, config.resolved())
    logger.info("%s: каталог %s", args.command, writer.run_dir)

    summary: Dict[str, Any] = {}
    try:
        summary = COMMAND_HANDLERS[args.command](config, writer, settings)
        exit_code = EXIT_OK
    except VerificationError as exc:
        violations: List[str] = exc.violations
        logger.error("Проверки не пройдены: %d", len(violations))
        summary = {"violations": violations}
        exit_code = EXIT_VERIFICATION
    except (RatchetError, ArithmeticError) as exc:
        logger.error("Численный сбой: %s", exc)
        summary = {"error": str(exc)}
        exit_code = EXIT_NUMERIC

    _record_run(settings, out, writer, exit_code, summary)
    return exit_code

