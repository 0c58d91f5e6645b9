"""
Presentation layer - Командная строка
"""
