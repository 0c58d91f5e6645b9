"""
Конфигурация запуска: один JSON-документ + переопределения флагами CLI

Проверка собирает все нарушения (ошибки полей pydantic и перекрёстные
проверки) и сообщает их одним ConfigError.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ratchet_abatement.domain.entities.model_params import ModelParams
from ratchet_abatement.domain.entities.monte_carlo import McConfig
from ratchet_abatement.domain.errors import ConfigError
from ratchet_abatement.domain.strategies import StrategyFactory

COMMANDS = ("solve", "simulate", "compare", "converge")

SWEEPABLE = ("mu", "lambda", "lam", "sigma", "q", "c_bar")

# Флаг CLI -> путь в документе конфигурации
OVERRIDES = {
    "seed": ("mc", "seed"),
    "n": ("grid_n",),
    "paths": ("mc", "n_paths"),
    "dt": ("mc", "dt"),
}


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True, allow_inf_nan=False)


class ModelSection(_Section):
    """Параметры модели (μ, σ, q, Λ, c̄)"""

    mu: float
    sigma: float = Field(ge=0)
    q: float = Field(gt=0)
    lam: float = Field(ge=0, alias="lambda")
    c_bar: float = Field(gt=0)

    def to_params(self) -> ModelParams:
        return ModelParams(mu=self.mu, sigma=self.sigma, q=self.q, lam=self.lam, c_bar=self.c_bar)


class McSection(_Section):
    dt: float = Field(default=1e-3, gt=0)
    n_paths: int = Field(default=10_000, ge=1)
    seed: int = Field(default=20240917, ge=0, lt=2**64)
    tail_tol: Optional[float] = Field(default=None, gt=0)
    batch_size: int = Field(default=2048, ge=1)
    antithetic: bool = False

    def to_config(self) -> McConfig:
        return McConfig(
            dt=self.dt,
            n_paths=self.n_paths,
            seed=self.seed,
            tail_tol=self.tail_tol,
            batch_size=self.batch_size,
            antithetic=self.antithetic,
        )


class SolveSection(_Section):
    tol: float = Field(default=1e-8, gt=0)


class SimulateSection(_Section):
    strategy: str = "multi_threshold"
    c: Optional[float] = Field(default=None, ge=0)
    slope: Optional[float] = Field(default=None, ge=0)
    b: Optional[float] = Field(default=None, ge=0)
    trace_path: Optional[int] = Field(default=None, ge=0)

    def options(self) -> Dict[str, float]:
        return {
            key: value
            for key, value in (("c", self.c), ("slope", self.slope), ("b", self.b))
            if value is not None
        }


class SweepSection(_Section):
    parameter: str
    values: List[float] = Field(min_length=1)


class CompareSection(_Section):
    strategies: List[str] = Field(
        default_factory=lambda: ["multi_threshold", "barrier", "linear", "constant", "no_emission"]
    )
    sweep: Optional[SweepSection] = None


class ConvergeSection(_Section):
    n_list: List[int] = Field(default_factory=lambda: [25, 50, 100, 200, 400], min_length=1)


class RunConfig(_Section):
    """Полная конфигурация запуска"""

    model: ModelSection
    grid_n: int = Field(default=500, ge=1)
    mc: McSection = Field(default_factory=McSection)
    x0: float = Field(default=5.0, ge=0)
    x_max: float = Field(default=10.0, gt=0)
    x_points: int = Field(default=200, ge=2)
    solve: SolveSection = Field(default_factory=SolveSection)
    simulate: SimulateSection = Field(default_factory=SimulateSection)
    compare: CompareSection = Field(default_factory=CompareSection)
    converge: ConvergeSection = Field(default_factory=ConvergeSection)

    def resolved(self) -> Dict[str, Any]:
        """Документ с вычисленными значениями по умолчанию (tail_tol)"""
        document = self.model_dump(mode="json", by_alias=True)
        document["mc"]["tail_tol"] = self.mc.to_config().resolved_tail_tol(self.model.to_params())
        return document


def _cross_violations(config: RunConfig, command: str) -> List[str]:
    """Проверки, зависящие от нескольких полей или от команды"""
    problems: List[str] = []
    known = StrategyFactory.get_all_strategies()

    if config.model.sigma == 0:
        problems.append(f"model.sigma: команда {command} требует sigma > 0")
    if command == "simulate":
        if config.simulate.strategy not in known:
            problems.append(f"simulate.strategy: неизвестная стратегия {config.simulate.strategy}")
        if config.simulate.strategy == "linear" and config.simulate.slope is None and config.x0 <= 0:
            problems.append("x0: линейное снижение требует x0 > 0")
        if (
            config.simulate.trace_path is not None
            and config.simulate.trace_path >= config.mc.n_paths
        ):
            problems.append("simulate.trace_path: номер траектории >= mc.n_paths")

    if command == "compare":
        if not config.compare.strategies:
            problems.append("compare.strategies: пустой список стратегий")
        for name in config.compare.strategies:
            if name not in known:
                problems.append(f"compare.strategies: неизвестная стратегия {name}")
        if "linear" in config.compare.strategies and config.x0 <= 0:
            problems.append("x0: линейное снижение требует x0 > 0")
        sweep = config.compare.sweep
        if sweep is not None and sweep.parameter not in SWEEPABLE:
            problems.append(f"compare.sweep.parameter: {sweep.parameter} нельзя перебирать")

    if command == "converge":
        meshes = config.converge.n_list
        if any(n < 1 for n in meshes):
            problems.append("converge.n_list: n должны быть >= 1")
        for coarse, fine in zip(meshes, meshes[1:]):
            if coarse >= 1 and (fine <= coarse or fine % coarse):
                problems.append(f"converge.n_list: {fine} не кратно {coarse} (сетки не вложены)")

    if config.mc.antithetic and config.mc.batch_size % 2:
        problems.append("mc.batch_size: при antithetic должен быть чётным")

    return problems


def _apply_overrides(document: Dict[str, Any], overrides: Dict[str, Any]) -> None:
    for flag, value in overrides.items():
        if value is None:
            continue
        *parents, leaf = OVERRIDES[flag]
        node = document
        for key in parents:
            node = node.setdefault(key, {})
        node[leaf] = value


def load_run_config(
    path: Optional[Path], command: str, overrides: Optional[Dict[str, Any]] = None
) -> RunConfig:
    """
    Загружает, дополняет флагами и проверяет конфигурацию

    Raises:
        ConfigError: со списком всех нарушений
    """
    if command not in COMMANDS:
        raise ConfigError([f"Неизвестная команда {command}. Доступны: {list(COMMANDS)}"])

    document: Dict[str, Any] = {}
    if path is not None:
        try:
            document = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError([f"{path}: {exc}"]) from exc
        if not isinstance(document, dict):
            raise ConfigError([f"{path}: ожидался JSON-объект"])

    _apply_overrides(document, overrides or {})

    try:
        config = RunConfig.model_validate(document)
    except ValidationError as exc:
        raise ConfigError(
            [
                f"{'.'.join(str(part) for part in error['loc']) or '<root>'}: {error['msg']}"
                for error in exc.errors()
            ]
        ) from exc

    problems = _cross_violations(config, command)
    if problems:
        raise ConfigError(problems)
    return config
