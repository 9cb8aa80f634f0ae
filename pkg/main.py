"""
Главный файл WingScout

Точка входа в приложение. Подкоманды:
- evolve - эволюционный дизайн крыльев (NSGA-II + AFPO)
- express - генотип -> фенотип
- simulate - симуляция одного крыла
- analyze - анализ переносов из симуляции в реальность
- manufacture - производственный документ крыла

Коды выхода: 0 - успех, 1 - внутренняя ошибка, 2 - конфигурация/формат/недопустимое
крыло, 3 - ввод-вывод.
"""

import argparse
import json
import logging
import math
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd

from analyzers import (
    annotate,
    export_gap_plot,
    gap_envelope,
    ingest_transfers,
    polyfit_str,
    threshold_estimate,
    transfers_table,
)
from analyzers.gap_shape import MAX_DEGREE, decay_line
from config import get_settings
from config.experiment import load_experiment
from evolution.engine import EvolutionConfig, run_evolution
from genotype.genome import Genotype, deserialize, express
from simulator.coefficients import load_coefficients
from simulator.runner import export_blade_forces, export_timeseries, simulate
from simulator.settings import FlapProfile, SimConfig
from utils.console import Console, configure_logging
from utils.errors import FormatError, InfeasibleDesignError, SimulationAbort, WingScoutError
from utils.helpers import GRAM_FORCE_MN
from wing.geometry import compute_cms
from wing.manufacture import export_manufacture_spec, render_text, write_manufacture_spec
from wing.models import WingPhenotype, dump_phenotype, load_phenotype

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_IO = 3


def load_design(path: Path, config: EvolutionConfig) -> Tuple[WingPhenotype, Optional[Genotype]]:
    """
    Прочитать файл крыла: генотип (ключ "cppn") или фенотип (ключ "blades").

    Returns:
        Tuple: Фенотип и генотип (None, если файл был фенотипом)

    Raises:
        FormatError: Не JSON или непонятный документ
    """
    text = path.read_text(encoding="utf-8")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: некорректный JSON (строка {e.lineno}, столбец {e.colno}): {e.msg}") from None
    if isinstance(document, dict) and "cppn" in document:
        genotype = deserialize(text, source=str(path))
        return express(genotype, config.ranges, label=path.stem), genotype
    if isinstance(document, dict) and "blades" in document:
        return load_phenotype(text, source=str(path)), None
    raise FormatError(f"{path}: ожидался генотип (ключ 'cppn') или фенотип (ключ 'blades')")


class ExplicitFlag(argparse.Action):
    """Сохраняет значение и запоминает, что флаг задан в командной строке"""

    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        namespace.explicit = set(getattr(namespace, "explicit", ())) | {self.dest}


class DefaultsFormatter(argparse.ArgumentDefaultsHelpFormatter):
    """Показывает значения по умолчанию, кроме None (их поясняет текст справки)"""

    def _get_help_string(self, action):
        if action.default is None:
            return action.help
        return super()._get_help_string(action)


def model_default(model: type, field: str):
    """Значение поля pydantic-модели по умолчанию"""
    return model.model_fields[field].get_default(call_default_factory=True)


# флаг -> ключ конфигурации; остальные значения берутся из --config / --set
EVOLVE_FLAGS = {"pop": "population", "gens": "generations", "seed": "seed", "workers": "workers"}
SIMULATE_FLAGS = {"amplitude": "flap.amplitude", "frequency": "flap.frequency",
                  "duration": "sim.duration", "dt": "sim.dt"}


def explicit_overrides(args: argparse.Namespace, flags: Dict[str, str]) -> List[str]:
    """Переопределения только для флагов, явно заданных в командной строке"""
    given = getattr(args, "explicit", ())
    result = []
    for dest, key in flags.items():
        if dest not in given:
            continue
        value = getattr(args, dest)
        if dest == "amplitude":
            value = math.radians(value)
        result.append(f"{key}={value!r}")
    return result


def _experiment(args: argparse.Namespace, extra: Sequence[str] = ()) -> EvolutionConfig:
    """Конфигурация из --config, --set и частных флагов команды"""
    overrides = list(args.overrides or []) + list(extra)
    config = load_experiment(args.config, overrides)
    settings = get_settings()
    if config.coeff_table is None and settings.coeff_table:
        config = config.model_copy(update={"coeff_table": settings.coeff_table})
    return config


def _blade_table(wing: WingPhenotype) -> pd.DataFrame:
    return pd.DataFrame([{
        "blade": index,
        "span_offset_mm": blade.span_offset,
        "station_mm": station,
        "chord_mm": blade.chord,
        "k_twist": blade.k_twist,
        "k_bend": blade.k_bend,
    } for index, (blade, station) in enumerate(zip(wing.blades, wing.stations))])


def cmd_evolve(args: argparse.Namespace, console: Console) -> int:
    """Эволюционный запуск и печать финального фронта"""
    config = _experiment(args, explicit_overrides(args, EVOLVE_FLAGS))

    out_dir = Path(args.out) if args.out else Path(get_settings().output_root) / f"evolve_seed{config.seed}"
    record = run_evolution(config, out_dir, verbose=console.verbose)

    console.section("🏆 Финальный недоминируемый фронт:", rule="=")
    if not record.ndf:
        console.say("   ⚠️  Фронт пуст: в популяции нет технологичных крыльев")
    else:
        table = pd.DataFrame([{
            "label": f"NDF-{i + 1:02d}",
            "B": m.phenotype.blade_count,
            "S_mm": round(m.phenotype.span, 1),
            "lift_mN": round(m.evaluation.raw_lift * 1000, 2),
            "power_mW": round(m.evaluation.power * 1000, 3),
            "torque_mNm": round(m.evaluation.torque * 1000, 3),
        } for i, m in enumerate(record.ndf)])
        console.say(table.to_string(index=False))
        if record.trend is not None:
            console.say(f"\n   Корреляция Спирмена C_MS / подъёмная сила: {record.trend:+.3f}")
    console.say(f"\n📁 Результаты: {record.out_dir}")
    return EXIT_OK


def cmd_express(args: argparse.Namespace, console: Console) -> int:
    """Экспрессия генотипа в фенотип"""
    config = _experiment(args)
    path = Path(args.genotype)
    genotype = deserialize(path.read_text(encoding="utf-8"), source=str(path))
    wing = express(genotype, config.ranges, label=args.label or path.stem)

    out = Path(args.out) if args.out else path.with_name(f"{path.stem}_phenotype.json")
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(dump_phenotype(wing) + "\n", encoding="utf-8")

    console.section(f"🧬 Фенотип {wing.label}:")
    console.say(f"   B = {wing.blade_count}")
    console.say(f"   S = {wing.span:.2f} мм")
    if args.bmax is not None and args.smax is not None:
        console.say(f"   C_MS = {compute_cms(wing.blade_count, wing.span, args.bmax, args.smax):.3f}")
    console.say(_blade_table(wing).to_string(index=False))
    console.say(f"\n💾 Фенотип сохранён: {out}")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace, console: Console) -> int:
    """Симуляция одного крыла"""
    config = _experiment(args, explicit_overrides(args, SIMULATE_FLAGS))

    wing, _ = load_design(Path(args.design), config)
    table = load_coefficients(config.coeff_table) if config.coeff_table else None
    record = bool(args.export or args.blade_forces)
    result = simulate(wing, config.material, config.flap, config.sim, table=table, record=record)

    console.section(f"🪽 Симуляция {wing.label or args.design}: B={wing.blade_count}, S={wing.span:.1f} мм")
    lift_mn = result.lift_mean * 1000
    console.say(f"   Подъёмная сила: {lift_mn:.2f} мН ({lift_mn / GRAM_FORCE_MN:.1f} г)")
    console.say(f"   Средняя мощность привода: {result.drive_power_mean * 1000:.3f} мВт")
    console.say(f"   RMS момента привода: {result.drive_torque_rms * 1000:.3f} мН·м")
    cycles = ", ".join(f"{lift * 1000:.2f}" for lift in result.cycle_lifts)
    console.say(f"   По циклам (мН): {cycles}")
    if result.diagnostics.hard_stop_hits:
        console.say(f"   ⚠️  Упоры шарниров срабатывали {result.diagnostics.hard_stop_hits} раз")

    if args.export:
        console.say(f"💾 Ряд реакций: {export_timeseries(result, args.export)}")
    if args.blade_forces:
        console.say(f"💾 Силы на лопастях: {export_blade_forces(result, args.blade_forces)}")
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace, console: Console) -> int:
    """Анализ разрыва симуляции и реальности"""
    dataset = ingest_transfers(args.transfers)
    dataset = annotate(dataset.with_maxima(lift_max=args.lmax, blade_max=args.bmax, span_max=args.smax))
    fit = polyfit_str(dataset, max_degree=args.max_degree)
    envelope = gap_envelope(dataset)
    threshold = threshold_estimate(fit)

    console.section(f"📊 Переносы: {len(dataset.records)} крыльев", rule="=")
    console.say(f"   L_max = {dataset.resolved_lift_max:g} г, B_max = {dataset.resolved_blade_max}, "
                f"S_max = {dataset.resolved_span_max:g} мм")
    console.say(transfers_table(dataset).round(3).to_string(index=False))

    console.section("📈 Полином разрыва:")
    console.say(f"   Степень: {fit.degree}")
    console.say("   Коэффициенты (по возрастанию степени): "
                + ", ".join(f"{c:+.5f}" for c in fit.coefficients))
    console.say("   AICc: " + ", ".join(f"{d}: {s:.3f}" for d, s in sorted(fit.scores.items())))
    if threshold is None:
        console.say("   Порог C_MS: нет (полином не выходит из полосы ±0.2 на [0, 1])")
    else:
        console.say(f"   Порог C_MS: {threshold:.3f}")

    out_dir = Path(args.out) if args.out else Path(get_settings().output_root) / "analysis"
    paths = export_gap_plot(dataset, fit, envelope, out_dir, decay=decay_line(dataset), html=not args.no_html)
    console.say(f"\n💾 Файлы графика ({len(paths)}): {out_dir}")
    return EXIT_OK


def cmd_manufacture(args: argparse.Namespace, console: Console) -> int:
    """Производственный документ"""
    config = _experiment(args)
    path = Path(args.design)
    wing, _ = load_design(path, config)
    try:
        document = export_manufacture_spec(wing, config.material, config.feasible_bounds())
    except InfeasibleDesignError as e:
        console.say("❌ Крыло нельзя изготовить:")
        for violation in e.report.violations:
            console.say(f"   - {violation.parameter} = {violation.actual:.6g} "
                        f"(ближайшее допустимое {violation.nearest:.6g})")
        raise

    out = Path(args.out) if args.out else path.with_name(f"{path.stem}_manufacture.json")
    json_path, text_path = write_manufacture_spec(document, out)
    console.say(render_text(document))
    console.say(f"💾 Документ: {json_path}, {text_path}")
    return EXIT_OK


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="JSON-файл конфигурации эксперимента")
    parser.add_argument("--set", dest="overrides", action="append", default=None, metavar="KEY=VALUE",
                        help="переопределение с точечным ключом, например sim.dt=5e-4 (можно несколько)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wingscout",
        description="Автоматический дизайн машущих крыльев: симуляция, эволюция, анализ переноса",
        formatter_class=DefaultsFormatter,
    )
    parser.add_argument("-q", "--quiet", action="store_true", help="не печатать прогресс")
    commands = parser.add_subparsers(dest="command", required=True)
    formatter = DefaultsFormatter

    evolve = commands.add_parser("evolve", help="эволюционный дизайн", formatter_class=formatter)
    _add_config_flags(evolve)
    evolve.add_argument("--pop", type=int, action=ExplicitFlag,
                        default=model_default(EvolutionConfig, "population"), help="размер популяции μ")
    evolve.add_argument("--gens", type=int, action=ExplicitFlag,
                        default=model_default(EvolutionConfig, "generations"), help="число поколений")
    evolve.add_argument("--seed", type=int, action=ExplicitFlag,
                        default=model_default(EvolutionConfig, "seed"), help="seed")
    evolve.add_argument("--workers", type=int, action=ExplicitFlag, default=get_settings().workers,
                        help="процессов для симуляций (WINGSCOUT_WORKERS)")
    evolve.add_argument("--out", default=None, help="каталог запуска (по умолчанию <output_root>/evolve_seed<seed>)")
    evolve.set_defaults(handler=cmd_evolve)

    express_cmd = commands.add_parser("express", help="генотип -> фенотип", formatter_class=formatter)
    express_cmd.add_argument("genotype", help="JSON генотипа")
    _add_config_flags(express_cmd)
    express_cmd.add_argument("--out", default=None, help="куда записать фенотип (по умолчанию <имя>_phenotype.json)")
    express_cmd.add_argument("--label", default=None, help="метка крыла (по умолчанию имя файла)")
    express_cmd.add_argument("--bmax", type=int, default=None, help="B_max для C_MS (без него C_MS не печатается)")
    express_cmd.add_argument("--smax", type=float, default=None, help="S_max (мм) для C_MS")
    express_cmd.set_defaults(handler=cmd_express)

    simulate_cmd = commands.add_parser("simulate", help="симуляция крыла", formatter_class=formatter)
    simulate_cmd.add_argument("design", help="JSON генотипа или фенотипа")
    _add_config_flags(simulate_cmd)
    simulate_cmd.add_argument("--amplitude", type=float, action=ExplicitFlag,
                              default=round(math.degrees(model_default(FlapProfile, "amplitude")), 6),
                              help="амплитуда взмаха, градусы")
    simulate_cmd.add_argument("--frequency", type=float, action=ExplicitFlag,
                              default=model_default(FlapProfile, "frequency"), help="частота, Гц")
    simulate_cmd.add_argument("--duration", type=float, action=ExplicitFlag,
                              default=model_default(SimConfig, "duration"), help="длительность, с")
    simulate_cmd.add_argument("--dt", type=float, action=ExplicitFlag,
                              default=model_default(SimConfig, "dt"), help="шаг интегрирования, с")
    simulate_cmd.add_argument("--export", default=None, help="CSV ряда реакций основания (по умолчанию не пишется)")
    simulate_cmd.add_argument("--blade-forces", default=None, help="CSV сил на лопастях (по умолчанию не пишется)")
    simulate_cmd.set_defaults(handler=cmd_simulate)

    analyze = commands.add_parser("analyze", help="анализ переносов", formatter_class=formatter)
    analyze.add_argument("transfers", help="CSV переносов")
    analyze.add_argument("--lmax", type=float, default=None, help="L_max, г (по умолчанию из файла)")
    analyze.add_argument("--bmax", type=int, default=None, help="B_max (по умолчанию из файла)")
    analyze.add_argument("--smax", type=float, default=None, help="S_max, мм (по умолчанию из файла)")
    analyze.add_argument("--max-degree", type=int, default=MAX_DEGREE, help="наибольшая степень полинома")
    analyze.add_argument("--out", default=None, help="каталог файлов графика (по умолчанию <output_root>/analysis)")
    analyze.add_argument("--no-html", action="store_true", help="не писать интерактивный HTML")
    analyze.set_defaults(handler=cmd_analyze)

    manufacture = commands.add_parser("manufacture", help="производственный документ", formatter_class=formatter)
    manufacture.add_argument("design", help="JSON фенотипа или генотипа")
    _add_config_flags(manufacture)
    manufacture.add_argument("--out", default=None, help="путь JSON документа, рядом пишется .txt (по умолчанию <имя>_manufacture.json)")
    manufacture.set_defaults(handler=cmd_manufacture)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Главная функция - точка входа в приложение.

    Returns:
        int: Код выхода
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = get_settings()
    configure_logging("DEBUG" if settings.debug else settings.log_level)
    console = Console(verbose=not args.quiet)

    try:
        return args.handler(args, console)
    except SimulationAbort as e:
        print(f"\n❌ Симуляция прервана: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except WingScoutError as e:
        print(f"\n❌ Ошибка: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"\n❌ Ошибка ввода-вывода: {e}", file=sys.stderr)
        return EXIT_IO
    except Exception as e:
        logger.exception("Внутренняя ошибка")
        print(f"\n❌ Внутренняя ошибка: {e}", file=sys.stderr)
        print("\n💡 Подсказки:", file=sys.stderr)
        print("   1. Убедитесь, что все зависимости установлены: pip install -r requirements.txt", file=sys.stderr)
        print("   2. Запустите с DEBUG=true для подробного лога", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
