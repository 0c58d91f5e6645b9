"""
Use Case: Исследование сходимости при измельчении сетки ставок

Для вложенных сеток S^{n_1} ⊂ S^{n_2} ⊂ ... сравниваются V^{n_k}(x, c̄) на
фиксированной сетке x. На вложенных сетках V^{n_{k+1}} >= V^{n_k} поточечно.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import List, Sequence, Tuple

import numpy as np
import numpy.typing as npt
import pandas as pd

from ratchet_abatement.domain.entities.convergence import ConvergenceReport
from ratchet_abatement.domain.entities.model_params import ModelParams
from ratchet_abatement.domain.errors import InvalidParameterError
from ratchet_abatement.domain.threshold.solver import (
    build_grid,
    solve_surface,
    surface_value_at_rate,
)

logger = logging.getLogger(__name__)

# Допуск поточечной монотонности V^{2n} >= V^n
MONOTONE_TOL = 1e-10

FloatArray = npt.NDArray[np.float64]


def _top_curve(args: Tuple[ModelParams, int, FloatArray]) -> FloatArray:
    params, n, xs = args
    surface = solve_surface(params, build_grid(params.c_bar, n))
    return surface_value_at_rate(surface, xs, params.c_bar)


class ConvergenceStudyUseCase:
    """Use Case: sup-нормы разностей решений на вложенных сетках"""

    def __init__(self, params: ModelParams, workers: int = 1):
        self.params = params
        self.workers = workers

    def execute(self, n_list: Sequence[int], x_grid: Sequence[float]) -> ConvergenceReport:
        """
        Решает поверхность для каждого n и сравнивает соседние решения

        Raises:
            InvalidParameterError: если n_list не возрастает или сетки не вложены
        """
        meshes = [int(n) for n in n_list]
        if not meshes or any(n < 1 for n in meshes):
            raise InvalidParameterError("n_list должен содержать положительные n")
        c_bar = self.params.c_bar
        for coarse, fine in zip(meshes, meshes[1:]):
            nested = build_grid(c_bar, coarse).is_refined_by(build_grid(c_bar, fine))
            if fine <= coarse or not nested:
                raise InvalidParameterError(
                    f"Сетки не вложены: S^{coarse} не содержится в S^{fine}"
                )

        xs = np.asarray(x_grid, dtype=np.float64)
        tasks = [(self.params, n, xs) for n in meshes]
        if self.workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=self.workers) as pool:
                curves: List[FloatArray] = list(pool.map(_top_curve, tasks))
        else:
            curves = [_top_curve(task) for task in tasks]

        sup_diffs = [float(np.max(np.abs(b - a))) for a, b in zip(curves, curves[1:])]
        min_increments = [float(np.min(b - a)) for a, b in zip(curves, curves[1:])]
        rates = [
            math.log2(a / b) if a > 0 and b > 0 else math.nan
            for a, b in zip(sup_diffs, sup_diffs[1:])
        ]
        monotone_ok = all(m >= -MONOTONE_TOL for m in min_increments)
        if not monotone_ok:
            logger.warning("V^{2n} < V^n на вложенных сетках: min приращение %g", min(min_increments))

        report = ConvergenceReport(
            mesh_sizes=tuple(meshes),
            sup_diffs=tuple(sup_diffs),
            monotone_ok=monotone_ok,
            min_increments=tuple(min_increments),
            rates=tuple(rates),
        )
        logger.info("Сходимость: n=%s, sup-разности %s", meshes, sup_diffs)
        return report


def convergence_study(
    params: ModelParams,
    n_list: Sequence[int],
    x_grid: Sequence[float],
    workers: int = 1,
) -> ConvergenceReport:
    return ConvergenceStudyUseCase(params, workers).execute(n_list, x_grid)


def convergence_frame(report: ConvergenceReport) -> pd.DataFrame:
    """Таблица пар (n_coarse, n_fine, sup_diff, min_increment, rate)"""
    pairs = list(zip(report.mesh_sizes, report.mesh_sizes[1:]))
    rates = [math.nan, *report.rates] if pairs else []
    return pd.DataFrame(
        {
            "n_coarse": [a for a, _ in pairs],
            "n_fine": [b for _, b in pairs],
            "sup_diff": list(report.sup_diffs),
            "min_increment": list(report.min_increments),
            "rate": rates,
        }
    )
