"""
Ratchet Abatement - оптимальные графики сокращения избыточных выбросов
при броуновском углеродном бюджете
"""

__version__ = "1.0.0"
