"""
Данные переносов из симуляции в реальность

Каждая запись - одно крыло: число лопастей B, размах S, подъёмная сила
в симуляции L_S и измеренная L_R (среднее и разброс по 5 циклам), в граммах-силы.

Метрики:
- STR = (L_R - L_S) / L_max - расхождение симуляции и реальности
- C_MS = ½(B/B_max + S/S_max) - сложность морфологии

CSV: label, B, S_mm, L_S_g, L_R_g, L_R_std_g. Строки '#' - комментарии.
Строки с меткой '@L_max', '@B_max', '@S_max' задают максимумы (значение в колонке B).
"""

from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from utils.errors import DomainError, FormatError, format_error_from_validation
from utils.helpers import data_line_numbers, parse_float, parse_int
from wing.geometry import compute_cms

COLUMNS = ["label", "B", "S_mm", "L_S_g", "L_R_g", "L_R_std_g"]
OVERRIDES = {"@L_max": "lift_max", "@B_max": "blade_max", "@S_max": "span_max"}


class TransferRecord(BaseModel):
    """
    Один перенос крыла в реальность

    Подъёмная сила в граммах-силы. Измеренная L_R может быть отрицательной
    (крыло тянет вниз), остальные величины неотрицательны.
    """
    model_config = ConfigDict(frozen=True)

    label: str
    blade_count: int = Field(ge=1)
    span: float = Field(gt=0)
    lift_sim: float = Field(ge=0)
    lift_real_mean: float
    lift_real_std: float = Field(ge=0)
    str_value: Optional[float] = None
    cms: Optional[float] = None


class TransferDataset(BaseModel):
    """
    Набор переносов и нормирующие максимумы

    lift_max / blade_max / span_max - явные значения; если не заданы,
    берутся максимумы по записям.
    """
    model_config = ConfigDict(frozen=True)

    records: Tuple[TransferRecord, ...] = Field(min_length=1)
    lift_max: Optional[float] = None
    blade_max: Optional[int] = None
    span_max: Optional[float] = None

    @model_validator(mode="after")
    def _maxima_cover_records(self) -> "TransferDataset":
        if self.blade_max is not None and self.blade_max < max(r.blade_count for r in self.records):
            raise ValueError(f"B_max={self.blade_max} меньше наибольшего B в данных")
        if self.span_max is not None and self.span_max < max(r.span for r in self.records):
            raise ValueError(f"S_max={self.span_max} меньше наибольшего S в данных")
        return self

    @property
    def resolved_lift_max(self) -> float:
        return self.lift_max if self.lift_max is not None else max(r.lift_sim for r in self.records)

    @property
    def resolved_blade_max(self) -> int:
        return self.blade_max if self.blade_max is not None else max(r.blade_count for r in self.records)

    @property
    def resolved_span_max(self) -> float:
        return self.span_max if self.span_max is not None else max(r.span for r in self.records)

    def with_maxima(self, lift_max: Optional[float] = None, blade_max: Optional[int] = None,
                    span_max: Optional[float] = None) -> "TransferDataset":
        """
        Новый набор с переопределёнными максимумами (None - оставить как есть).

        Raises:
            DomainError: Максимум меньше значения в данных
        """
        try:
            return TransferDataset(
                records=self.records,
                lift_max=self.lift_max if lift_max is None else lift_max,
                blade_max=self.blade_max if blade_max is None else blade_max,
                span_max=self.span_max if span_max is None else span_max,
            )
        except ValidationError as e:
            raise DomainError("; ".join(err["msg"] for err in e.errors())) from None


def compute_str(lift_real: float, lift_sim: float, lift_max: float) -> float:
    """
    Расхождение симуляции и реальности STR.

    Args:
        lift_real: L_R
        lift_sim: L_S
        lift_max: L_max (в тех же единицах)

    Returns:
        float: (L_R - L_S) / L_max; положительное - реальность лучше симуляции

    Raises:
        DomainError: Если L_max ≤ 0
    """
    if not lift_max > 0:
        raise DomainError(f"L_max должен быть положительным, получено {lift_max}")
    return (lift_real - lift_sim) / lift_max


def annotate(dataset: TransferDataset) -> TransferDataset:
    """
    Заполнить STR и C_MS для каждой записи.

    Raises:
        DomainError: L_max ≤ 0 или B/S вне нормирующих максимумов
    """
    lift_max = dataset.resolved_lift_max
    blade_max = dataset.resolved_blade_max
    span_max = dataset.resolved_span_max
    records = tuple(
        record.model_copy(update={
            "str_value": compute_str(record.lift_real_mean, record.lift_sim, lift_max),
            "cms": compute_cms(record.blade_count, record.span, blade_max, span_max),
        })
        for record in dataset.records
    )
    return TransferDataset(records=records, lift_max=dataset.lift_max,
                           blade_max=dataset.blade_max, span_max=dataset.span_max)


def ingest_transfers(path: Union[str, Path]) -> TransferDataset:
    """
    Прочитать CSV переносов.

    Args:
        path: Путь к CSV

    Returns:
        TransferDataset: Записи и максимумы из строк '@'

    Raises:
        FormatError: Нет колонок, битая строка (с номером строки), нет записей
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = data_line_numbers(text.splitlines())
    if len(lines) < 2:
        raise FormatError(f"{path}: нет записей")

    try:
        frame = pd.read_csv(path, comment="#", dtype=str, keep_default_na=False, skip_blank_lines=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise FormatError(f"{path}: {e}") from None
    missing = [column for column in COLUMNS if column not in frame.columns]
    if missing:
        raise FormatError(f"{path}:{lines[0]}: нет колонок {missing}")

    records: List[TransferRecord] = []
    maxima: Dict[str, Union[int, float]] = {}
    for index, row in enumerate(frame.itertuples(index=False)):
        line = lines[index + 1]
        values = row._asdict()
        label = str(values["label"]).strip()
        try:
            if label.startswith("@"):
                if label not in OVERRIDES:
                    raise ValueError(f"неизвестная строка максимума '{label}'")
                if label == "@B_max":
                    maxima[OVERRIDES[label]] = parse_int(values["B"], "B")
                else:
                    maxima[OVERRIDES[label]] = parse_float(values["B"], "B")
                continue
            records.append(TransferRecord(
                label=label,
                blade_count=parse_int(values["B"], "B"),
                span=parse_float(values["S_mm"], "S_mm"),
                lift_sim=parse_float(values["L_S_g"], "L_S_g"),
                lift_real_mean=parse_float(values["L_R_g"], "L_R_g"),
                lift_real_std=parse_float(values["L_R_std_g"], "L_R_std_g"),
            ))
        except ValidationError as e:
            raise format_error_from_validation(e, f"{path}:{line}") from None
        except ValueError as e:
            raise FormatError(f"{path}:{line}: {e}") from None

    if not records:
        raise FormatError(f"{path}: нет записей")
    try:
        return TransferDataset(records=tuple(records), **maxima)
    except ValidationError as e:
        raise FormatError(f"{path}: {e.errors()[0]['msg']}") from None


def export_transfers(dataset: TransferDataset, path: Union[str, Path]) -> Path:
    """Записать набор в CSV того же формата, что читает ingest_transfers"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = []
    for label, attribute in OVERRIDES.items():
        value = getattr(dataset, attribute)
        if value is not None:
            rows.append({"label": label, "B": repr(value)})
    for record in dataset.records:
        rows.append({
            "label": record.label,
            "B": repr(record.blade_count),
            "S_mm": repr(record.span),
            "L_S_g": repr(record.lift_sim),
            "L_R_g": repr(record.lift_real_mean),
            "L_R_std_g": repr(record.lift_real_std),
        })
    pd.DataFrame(rows, columns=COLUMNS).fillna("").to_csv(path, index=False)
    return path


def transfers_table(dataset: TransferDataset) -> pd.DataFrame:
    """Таблица записей с метриками (для печати и отчётов)"""
    return pd.DataFrame([{
        "label": r.label, "B": r.blade_count, "S_mm": r.span, "L_S_g": r.lift_sim,
        "L_R_g": r.lift_real_mean, "L_R_std_g": r.lift_real_std, "C_MS": r.cms, "STR": r.str_value,
    } for r in dataset.records])
