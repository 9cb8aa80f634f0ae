"""
Тесты WingScout

Быстрые проверки запускаются по умолчанию, долгие численные помечены
маркером slow (pytest -m "not slow" пропускает их).
"""
