"""
Доменная сущность: Отчёт об измельчении сетки ставок
"""

from dataclasses import dataclass
from typing import Tuple


@dataclass(frozen=True)
class ConvergenceReport:
    """Разности V^{n_{k+1}} - V^{n_k} в sup-норме на фиксированной сетке x"""

    mesh_sizes: Tuple[int, ...]
    sup_diffs: Tuple[float, ...]
    monotone_ok: bool
    min_increments: Tuple[float, ...] = ()  # min_x (V^{2n} - V^n) для каждой пары
    rates: Tuple[float, ...] = ()  # log2 отношения соседних sup_diffs

    @property
    def decreasing(self) -> bool:
        """sup_diffs строго убывают?"""
        return all(b < a for a, b in zip(self.sup_diffs, self.sup_diffs[1:]))
