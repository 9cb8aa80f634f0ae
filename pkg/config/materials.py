"""
Таблица материалов для изготовления крыла

Для каждого компонента крыла указан материал и его спецификация.
Эти строки попадают в ведомость материалов производственного документа.
"""

from typing import Dict, List


# Список материалов: материал, компонент, спецификация
MATERIALS_TABLE: List[Dict[str, str]] = [
    {
        "material": "Carbon Rod",
        "component": "spar / rib stiffeners",
        "specification": "0.8mm and 0.4mm diameter",
    },
    {
        "material": "Stainless steel wire",
        "component": "rib spring",
        "specification": "0.1mm, 0.13mm, 0.17mm",
    },
    {
        "material": "Aluminised Mylar",
        "component": "skin",
        "specification": "5um",
    },
    {
        "material": "ABS plastic",
        "component": "wing root mount",
        "specification": "3D printed design",
    },
]


def get_material(component: str) -> Dict[str, str]:
    """
    Найти строку таблицы материалов по компоненту.

    Args:
        component: Подстрока названия компонента ("skin", "rib spring" и т.д.)

    Returns:
        Dict[str, str]: Строка таблицы

    Raises:
        KeyError: Если компонент не найден
    """
    for row in MATERIALS_TABLE:
        if component in row["component"]:
            return row
    raise KeyError(f"компонент '{component}' отсутствует в таблице материалов")
