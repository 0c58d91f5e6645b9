"""
Infrastructure layer - Конфигурация, артефакты, реестр запусков
"""
