"""
Производственный документ крыла

По допустимому фенотипу строит документ для изготовления:
для каждого нервюра - станция по размаху, хорда, диаметры проволоки
на кручение и изгиб (запрошенная и реальная жёсткость), плюс размах,
оценка массы и ведомость материалов.

Документ сохраняется в JSON (с format_version) и в виде текстовой таблицы.
"""

from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from config.materials import MATERIALS_TABLE, get_material
from utils.errors import InfeasibleDesignError
from wing.feasibility import FeasibleBounds, nearest_wire_gauge, validate_phenotype, wire_stiffness
from wing.geometry import total_mass
from wing.models import MaterialConfig, WingPhenotype

MANUFACTURE_FORMAT_VERSION = 1


class WireChoice(BaseModel):
    """Выбранная проволока: запрошенная и реальная жёсткость"""
    model_config = ConfigDict(frozen=True)

    gauge_mm: float
    requested: float
    realized: float


class RibSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int
    station_mm: float
    chord_mm: float
    twist: WireChoice
    bend: WireChoice


class MaterialLine(BaseModel):
    model_config = ConfigDict(frozen=True)

    material: str
    component: str
    specification: str
    quantity: str


class ManufactureDocument(BaseModel):
    """Производственный документ (версия схемы - format_version)"""
    model_config = ConfigDict(frozen=True)

    format_version: int = MANUFACTURE_FORMAT_VERSION
    label: str
    total_span_mm: float
    estimated_mass_g: float
    ribs: Tuple[RibSpec, ...]
    materials: Tuple[MaterialLine, ...]


def _wire(k_required: float, material: MaterialConfig, mode: str) -> WireChoice:
    gauge = nearest_wire_gauge(k_required, material, mode)
    return WireChoice(gauge_mm=gauge, requested=k_required,
                      realized=wire_stiffness(gauge, material, mode))


def _bill_of_materials(wing: WingPhenotype, ribs: List[RibSpec]) -> Tuple[MaterialLine, ...]:
    """Ведомость материалов со ссылкой на таблицу материалов"""
    gauges = sorted({rib.twist.gauge_mm for rib in ribs} | {rib.bend.gauge_mm for rib in ribs})
    skin_area_cm2 = sum(b.chord * b.span_offset for b in wing.blades) / 100.0
    quantities = {
        "spar / rib stiffeners": f"spar {wing.span:.0f} mm; stiffeners {sum(r.chord_mm for r in ribs):.0f} mm",
        "rib spring": f"{2 * len(ribs)} springs; gauges " + ", ".join(f"{g:g}mm" for g in gauges),
        "skin": f"{skin_area_cm2:.1f} cm2",
        "wing root mount": "1",
    }
    lines = []
    for row in MATERIALS_TABLE:
        lines.append(MaterialLine(quantity=quantities.get(row["component"], ""), **row))
    return tuple(lines)


def export_manufacture_spec(wing: WingPhenotype, material: MaterialConfig,
                            bounds: Optional[FeasibleBounds] = None) -> ManufactureDocument:
    """
    Построить производственный документ для крыла.

    Args:
        wing: Фенотип крыла (должен быть допустимым)
        material: Материалы
        bounds: Допустимые диапазоны (по умолчанию из материалов)

    Returns:
        ManufactureDocument: Документ

    Raises:
        InfeasibleDesignError: Если крыло нельзя изготовить
    """
    bounds = bounds or FeasibleBounds.from_material(material)
    report = validate_phenotype(wing, bounds)
    if not report.feasible:
        raise InfeasibleDesignError(report)

    ribs = []
    for index, (blade, station) in enumerate(zip(wing.blades, wing.stations)):
        ribs.append(RibSpec(
            index=index,
            station_mm=station,
            chord_mm=blade.chord,
            twist=_wire(blade.k_twist, material, "twist"),
            bend=_wire(blade.k_bend, material, "bend"),
        ))

    return ManufactureDocument(
        label=wing.label,
        total_span_mm=wing.span,
        estimated_mass_g=total_mass(wing, material) * 1000.0,
        ribs=tuple(ribs),
        materials=_bill_of_materials(wing, ribs),
    )


def render_text(document: ManufactureDocument) -> str:
    """Текстовая таблица для мастерской"""
    spring = get_material("rib spring")
    lines = [
        f"Wing: {document.label or '-'}",
        f"Total span: {document.total_span_mm:.1f} mm   Estimated mass: {document.estimated_mass_g:.3f} g",
        "",
        f"{'rib':>3} {'station_mm':>10} {'chord_mm':>8} {'twist_mm':>8} {'k_twist req/real':>22} "
        f"{'bend_mm':>7} {'k_bend req/real':>22}",
    ]
    for rib in document.ribs:
        lines.append(
            f"{rib.index:>3} {rib.station_mm:>10.1f} {rib.chord_mm:>8.1f} {rib.twist.gauge_mm:>8g} "
            f"{rib.twist.requested:>10.3e}/{rib.twist.realized:<10.3e} {rib.bend.gauge_mm:>7g} "
            f"{rib.bend.requested:>10.3e}/{rib.bend.realized:<10.3e}"
        )
    lines += ["", f"Springs: {spring['material']} ({spring['specification']})", "", "Materials:"]
    for line in document.materials:
        lines.append(f"  - {line.material} [{line.component}] {line.specification}: {line.quantity}")
    return "\n".join(lines) + "\n"


def write_manufacture_spec(document: ManufactureDocument, path: Path) -> Tuple[Path, Path]:
    """
    Сохранить документ: JSON по пути path и текст рядом (.txt).

    Returns:
        Tuple[Path, Path]: Пути к JSON и текстовому файлу
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    json_path = path if path.suffix == ".json" else path.with_suffix(".json")
    text_path = json_path.with_suffix(".txt")
    json_path.write_text(document.model_dump_json(indent=2), encoding="utf-8")
    text_path.write_text(render_text(document), encoding="utf-8")
    return json_path, text_path
