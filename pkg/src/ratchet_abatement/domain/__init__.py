"""
Domain layer - Численное ядро без ввода-вывода
"""
