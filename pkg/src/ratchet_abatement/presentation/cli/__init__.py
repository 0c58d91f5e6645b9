"""
CLI - командная строка ratchet (точка входа: main.main)
"""
