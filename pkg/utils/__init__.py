"""
Вспомогательные утилиты

Содержит:
- helpers.py - разбор чисел, единицы измерения
- errors.py - иерархия исключений
- console.py - вывод прогресса
"""
