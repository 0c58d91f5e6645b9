"""
Monte Carlo движок для управляемого бюджета

Схема Эйлера-Маруямы X ← X + (μ - C)dt + σ√dt Z на пакетах траекторий.
Пакет k получает собственный поток Philox, ключ которого выводится из
(seed, k), поэтому результат не зависит от числа процессов и порядка
выполнения пакетов. Выплата за шаг - точный интеграл
(C + Λ)e^{-qt}(1 - e^{-q dt})/q при постоянной на шаге ставке.
Исчерпание фиксируется только в узлах сетки времени.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import numpy.typing as npt

from ratchet_abatement.domain.entities.model_params import ModelParams
from ratchet_abatement.domain.entities.monte_carlo import McConfig, McEstimate
from ratchet_abatement.domain.errors import (
    InadmissibleStrategyError,
    InvalidParameterError,
)
from ratchet_abatement.domain.strategies import EmissionStrategy

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]
BoolArray = npt.NDArray[np.bool_]

# Шагов нормальных приращений на одно обращение к генератору
NOISE_CHUNK = 256

# Допуск проверки невозрастания ставки
RATCHET_TOL = 1e-12


@dataclass(frozen=True)
class BatchResult:
    """Выплаты и моменты исчерпания одного пакета"""

    payoffs: FloatArray
    depletion_times: FloatArray
    censored: BoolArray


@dataclass(frozen=True)
class SimulationResult:
    """Все траектории прогона в порядке индексов"""

    payoffs: FloatArray
    depletion_times: FloatArray  # T для цензурированных траекторий
    censored: BoolArray
    horizon: float


@dataclass(frozen=True)
class PathTrace:
    """Траектория (t, X_t, C_t) одной выборочной траектории"""

    t: FloatArray
    x: FloatArray
    c: FloatArray
    depletion_time: Optional[float]


def _check_inputs(params: ModelParams, x0: float) -> None:
    params.require_diffusion()
    if not (x0 >= 0 and math.isfinite(x0)):
        raise InvalidParameterError(f"Начальный бюджет должен быть >= 0, получено {x0}")


def _batch_rng(cfg: McConfig, batch_index: int) -> np.random.Generator:
    """Поток Philox, однозначно определяемый (seed, номер пакета)"""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([cfg.seed, batch_index])))


def _batch_size(cfg: McConfig, batch_index: int) -> int:
    return min(cfg.batch_size, cfg.n_paths - batch_index * cfg.batch_size)


def _noise(rng: np.random.Generator, steps: int, size: int, antithetic: bool) -> FloatArray:
    if not antithetic:
        return rng.standard_normal((steps, size))
    half = rng.standard_normal((steps, (size + 1) // 2))
    return np.concatenate([half, -half], axis=1)[:, :size]


# pylint: disable=too-many-locals
def _simulate_batch(
    params: ModelParams,
    strategy: EmissionStrategy,
    x0: float,
    cfg: McConfig,
    batch_index: int,
    trace_row: Optional[int] = None,
) -> Tuple[BatchResult, Optional[PathTrace]]:
    size = _batch_size(cfg, batch_index)
    rng = _batch_rng(cfg, batch_index)
    n_steps = cfg.n_steps(params)
    horizon = n_steps * cfg.dt

    dt, q = cfg.dt, params.q
    step_discount = (1.0 - math.exp(-q * dt)) / q
    diffusion = params.sigma * math.sqrt(dt)
    ratcheting = strategy.is_ratcheting()

    payoffs = np.zeros(size)
    depletion = np.full(size, horizon)
    censored = np.zeros(size, dtype=bool)

    ids = np.arange(size)
    x = np.full(size, float(x0))
    current = np.full(size, strategy.initial_rate())
    acc = np.zeros(size)

    trace: Optional[List[Tuple[float, float, float]]] = [] if trace_row is not None else None

    if x0 <= 0:
        depletion[:] = 0.0
        ids = ids[:0]

    step = 0
    while step < n_steps and ids.size:
        block = min(NOISE_CHUNK, n_steps - step)
        noise = _noise(rng, block, size, cfg.antithetic)
        for j in range(block):
            t = (step + j) * dt
            rate = strategy.rate(t, x, current)
            if ratcheting and np.any(rate > current + RATCHET_TOL):
                raise InadmissibleStrategyError(
                    f"{strategy.get_name()}: рост ставки в момент t={t:.6g}"
                )

            if trace is not None and trace_row is not None:
                hit = np.flatnonzero(ids == trace_row)
                if hit.size:
                    trace.append((t, float(x[hit[0]]), float(rate[hit[0]])))

            acc += (rate + params.lam) * (math.exp(-q * t) * step_discount)
            x = x + (params.mu - rate) * dt + diffusion * noise[j, ids]
            current = rate

            dead = x <= 0.0
            if dead.any():
                gone = ids[dead]
                payoffs[gone] = acc[dead]
                depletion[gone] = t + dt
                if trace is not None and trace_row is not None and trace_row in gone:
                    k = int(np.flatnonzero(gone == trace_row)[0])
                    trace.append((t + dt, float(x[dead][k]), float(rate[dead][k])))
                keep = ~dead
                ids, x, current, acc = ids[keep], x[keep], current[keep], acc[keep]
                if not ids.size:
                    break
        step += block

    if ids.size:
        payoffs[ids] = acc
        censored[ids] = True
        if trace is not None and trace_row is not None and trace_row in ids:
            k = int(np.flatnonzero(ids == trace_row)[0])
            trace.append((horizon, float(x[k]), float(current[k])))

    result = BatchResult(payoffs=payoffs, depletion_times=depletion, censored=censored)
    if trace is None or trace_row is None:
        return result, None

    rows = np.asarray(trace, dtype=np.float64).reshape(-1, 3)
    path = PathTrace(
        t=rows[:, 0],
        x=rows[:, 1],
        c=rows[:, 2],
        depletion_time=None if censored[trace_row] else float(depletion[trace_row]),
    )
    return result, path


def _run_batch(
    args: Tuple[ModelParams, EmissionStrategy, float, McConfig, int]
) -> BatchResult:
    params, strategy, x0, cfg, batch_index = args
    return _simulate_batch(params, strategy, x0, cfg, batch_index)[0]


def run_simulation(
    params: ModelParams,
    strategy: EmissionStrategy,
    x0: float,
    cfg: McConfig,
    workers: int = 1,
) -> SimulationResult:
    """
    Симулирует все cfg.n_paths траекторий

    Пакеты при workers > 1 считаются в ProcessPoolExecutor; результаты
    собираются по номеру пакета, поэтому совпадают побитово с workers = 1.

    Raises:
        DegenerateVolatilityError: при sigma = 0
        InadmissibleStrategyError: если ratcheting-стратегия повысила ставку
    """
    _check_inputs(params, x0)
    tasks = [(params, strategy, x0, cfg, k) for k in range(cfg.n_batches)]

    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(_run_batch, tasks))
    else:
        batches = [_run_batch(task) for task in tasks]

    result = SimulationResult(
        payoffs=np.concatenate([b.payoffs for b in batches]),
        depletion_times=np.concatenate([b.depletion_times for b in batches]),
        censored=np.concatenate([b.censored for b in batches]),
        horizon=cfg.horizon(params),
    )
    logger.debug(
        "%s: %d траекторий, %d пакетов, цензурировано %d",
        strategy.get_name(),
        cfg.n_paths,
        cfg.n_batches,
        int(result.censored.sum()),
    )
    return result


def simulate_path(
    params: ModelParams,
    strategy: EmissionStrategy,
    x0: float,
    cfg: McConfig,
    path_index: int,
) -> Tuple[float, Optional[float]]:
    """
    Выплата и момент исчерпания траектории path_index

    Returns:
        (дисконтированная выплата, τ или None при цензурировании)
    """
    _check_inputs(params, x0)
    if not 0 <= path_index < cfg.n_paths:
        raise InvalidParameterError(f"path_index вне диапазона 0..{cfg.n_paths - 1}")
    batch_index, row = divmod(path_index, cfg.batch_size)
    batch = _simulate_batch(params, strategy, x0, cfg, batch_index)[0]
    tau = None if batch.censored[row] else float(batch.depletion_times[row])
    return float(batch.payoffs[row]), tau


def trace_path(
    params: ModelParams,
    strategy: EmissionStrategy,
    x0: float,
    cfg: McConfig,
    path_index: int,
) -> PathTrace:
    """Траектория (t, X_t, C_t) до исчерпания или горизонта"""
    _check_inputs(params, x0)
    if not 0 <= path_index < cfg.n_paths:
        raise InvalidParameterError(f"path_index вне диапазона 0..{cfg.n_paths - 1}")
    batch_index, row = divmod(path_index, cfg.batch_size)
    _, path = _simulate_batch(params, strategy, x0, cfg, batch_index, trace_row=row)
    if path is None or path.t.size == 0:
        return PathTrace(
            t=np.zeros(1),
            x=np.array([float(x0)]),
            c=np.array([strategy.initial_rate()]),
            depletion_time=0.0,
        )
    return path


def summarize_payoffs(result: SimulationResult) -> McEstimate:
    """Среднее и 95% полуширина дисконтированной выплаты"""
    samples = result.payoffs
    variance = float(np.var(samples, ddof=1)) if samples.size > 1 else 0.0
    return McEstimate.from_samples(float(np.mean(samples)), variance, int(samples.size))


def summarize_depletion(result: SimulationResult) -> McEstimate:
    """Среднее время исчерпания; цензурированные траектории дают T"""
    samples = result.depletion_times
    variance = float(np.var(samples, ddof=1)) if samples.size > 1 else 0.0
    fraction = float(np.mean(result.censored)) if samples.size else 0.0
    if fraction > 0:
        logger.warning(
            "Время исчерпания: %.2f%% траекторий цензурированы на T=%.4g",
            100.0 * fraction,
            result.horizon,
        )
    return McEstimate.from_samples(
        float(np.mean(samples)), variance, int(samples.size), censored=fraction
    )


def estimate_value(
    params: ModelParams,
    strategy: EmissionStrategy,
    x0: float,
    cfg: McConfig,
    workers: int = 1,
) -> McEstimate:
    """Оценка ценности стратегии по cfg.n_paths независимым траекториям"""
    return summarize_payoffs(run_simulation(params, strategy, x0, cfg, workers))


def depletion_stats(
    params: ModelParams,
    strategy: EmissionStrategy,
    x0: float,
    cfg: McConfig,
    workers: int = 1,
) -> McEstimate:
    """Оценка E[τ] с долей цензурированных траекторий"""
    return summarize_depletion(run_simulation(params, strategy, x0, cfg, workers))


def linear_schedule(c_bar: float, x0: float) -> Tuple[float, float]:
    """
    Линейное снижение, исчерпывающее бюджет x0 при sigma = 0

    Returns:
        (m, t*) с m = c̄²/(2x0), t* = 2x0/c̄

    Raises:
        InvalidParameterError: при x0 <= 0 или c_bar <= 0
    """
    if not x0 > 0:
        raise InvalidParameterError(f"Начальный бюджет должен быть > 0, получено {x0}")
    if not c_bar > 0:
        raise InvalidParameterError(f"c_bar должна быть > 0, получено {c_bar}")
    return c_bar**2 / (2.0 * x0), 2.0 * x0 / c_bar
