"""
Application layer - Сценарии использования
"""
