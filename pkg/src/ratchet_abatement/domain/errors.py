"""
Иерархия исключений доменного слоя

Все ошибки пакета наследуются от RatchetError. Ошибки валидации входных
данных дополнительно наследуются от ValueError, чтобы вызывающий код,
привыкший к ValueError, продолжал работать.
"""

from typing import Sequence


class RatchetError(Exception):
    """Базовое исключение пакета"""


class InvalidParameterError(RatchetError, ValueError):
    """Нарушен инвариант доменной сущности"""


class DegenerateVolatilityError(RatchetError, ValueError):
    """Операция не определена для данного значения волатильности"""


class LevelOrderError(RatchetError):
    """Обращение к уровню сетки ставок, который ещё не решён или не существует"""


class BracketError(RatchetError):
    """Не удалось найти конечный интервал, содержащий минимум G_i"""


class SolverError(RatchetError):
    """Сбой рекурсивного решателя на конкретном уровне"""

    def __init__(self, level: int, cause: Exception):
        self.level = level
        self.cause = cause
        super().__init__(f"Уровень {level}: {cause}")


class NotApplicableError(RatchetError):
    """Проверка не применима (например, FOC при нулевом пороге)"""


class OptimizationError(RatchetError):
    """Оптимизация барьера не нашла внутренний максимум"""


class InadmissibleStrategyError(RatchetError):
    """Стратегия с ограничением ratcheting-down запросила рост ставки"""


class ConfigError(RatchetError, ValueError):
    """Конфигурация запуска не прошла валидацию

    Хранит полный список нарушений, а не только первое.
    """

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        joined = "; ".join(self.violations)
        super().__init__(f"Некорректная конфигурация ({len(self.violations)}): {joined}")


class VerificationError(RatchetError):
    """Проверки HJB / FOC / диапазона коэффициентов выявили нарушения"""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__(f"Нарушений проверки: {len(self.violations)}")
