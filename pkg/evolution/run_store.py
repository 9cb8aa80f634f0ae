"""
Хранение результатов эволюционного запуска

Каталог запуска:
- config.json - снимок конфигурации
- generations.csv - сводка по поколениям
- population_gen{N}.jsonl - популяция каждые snapshot_every поколений
- ndf.json / ndf.csv - финальный недоминируемый фронт

Файлы не содержат времени запуска: одинаковый seed даёт байт-в-байт одинаковые файлы.
"""

import json
import math
from pathlib import Path
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Sequence

import pandas as pd
from pydantic import BaseModel

from genotype.genome import GenotypeDocument
from wing.geometry import compute_cms
from wing.models import PhenotypeDocument

if TYPE_CHECKING:
    from evolution.engine import EvolutionConfig, Individual

GENERATION_COLUMNS = ["gen", "best_lift", "median_lift", "front0_size", "feasible_count", "best_feasible_raw_lift"]
NDF_COLUMNS = ["label", "B", "S_mm", "lift_mN", "power_mW", "torque_mNm", "C_MS"]


class GenerationSummary(BaseModel):
    """Сводка одного поколения (подъёмная сила в Н)"""
    gen: int
    best_lift: float
    median_lift: float
    front0_size: int
    feasible_count: int
    best_feasible_raw_lift: float


def _member_record(member: "Individual") -> Dict[str, Any]:
    genotype = member.genotype
    return {
        "genotype": json.loads(GenotypeDocument(cppn=genotype.cppn, entries=genotype.entries,
                                                age=genotype.age, lineage=genotype.lineage).model_dump_json()),
        "phenotype": json.loads(PhenotypeDocument(blades=member.phenotype.blades,
                                                  label=member.phenotype.label).model_dump_json()),
        "objectives": member.objectives.model_dump(),
        "raw_lift": member.evaluation.raw_lift,
        "power": member.evaluation.power,
        "torque": member.evaluation.torque,
        "sentinel": member.evaluation.sentinel,
        "rank": member.rank,
    }


class RunStore:
    """
    Запись файлов одного запуска.

    Args:
        root: Каталог запуска (создаётся при необходимости)
    """

    def __init__(self, root: Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._summaries: List[GenerationSummary] = []

    def write_config(self, config: "EvolutionConfig") -> Path:
        path = self.root / "config.json"
        path.write_text(config.model_dump_json(indent=2), encoding="utf-8")
        return path

    def append_generation(self, summary: GenerationSummary) -> Path:
        """Добавить строку в generations.csv (файл переписывается целиком)"""
        self._summaries.append(summary)
        path = self.root / "generations.csv"
        frame = pd.DataFrame([s.model_dump() for s in self._summaries], columns=GENERATION_COLUMNS)
        frame.to_csv(path, index=False)
        return path

    def write_population(self, generation: int, population: Sequence["Individual"]) -> Path:
        path = self.root / f"population_gen{generation}.jsonl"
        with open(path, "w", encoding="utf-8") as f:
            for member in population:
                f.write(json.dumps(_member_record(member), sort_keys=True) + "\n")
        return path

    def write_ndf(self, ndf: Sequence["Individual"], trend: Optional[float]) -> Path:
        """
        Записать финальный фронт в ndf.json и ndf.csv.

        C_MS считается с максимумами B и S по самому фронту.
        """
        blade_max = max((m.phenotype.blade_count for m in ndf), default=0)
        span_max = max((m.phenotype.span for m in ndf), default=0.0)

        members = []
        rows = []
        for index, member in enumerate(ndf):
            label = f"NDF-{index:02d}"
            cms = compute_cms(member.phenotype.blade_count, member.phenotype.span, blade_max, span_max)
            record = _member_record(member)
            record.update({"label": label, "cms": cms})
            members.append(record)
            rows.append({
                "label": label,
                "B": member.phenotype.blade_count,
                "S_mm": member.phenotype.span,
                "lift_mN": member.evaluation.raw_lift * 1000.0,
                "power_mW": member.evaluation.power * 1000.0,
                "torque_mNm": member.evaluation.torque * 1000.0,
                "C_MS": cms,
            })

        document = {
            "B_max": blade_max,
            "S_max": span_max,
            "spearman_cms_lift": None if trend is None or math.isnan(trend) else trend,
            "members": members,
        }
        path = self.root / "ndf.json"
        path.write_text(json.dumps(document, indent=2, sort_keys=True), encoding="utf-8")
        pd.DataFrame(rows, columns=NDF_COLUMNS).to_csv(self.root / "ndf.csv", index=False)
        return path
