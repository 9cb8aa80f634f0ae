"""
Тесты командной строки: подкоманды, файлы результатов, коды выхода
"""

import json
import math
import re

import pandas as pd
import pytest

from evolution.engine import EvolutionConfig
from main import (EVOLVE_FLAGS, EXIT_IO, EXIT_OK, EXIT_USAGE, SIMULATE_FLAGS, _experiment, build_parser,
                  explicit_overrides, main)

FAST = ["--set", "sim.dt=0.001", "--set", "sim.duration=0.6",
        "--set", "sim.settle_cycles=1", "--set", "sim.average_cycles=2"]


def _phenotype(path, chord):
    path.write_text(json.dumps({
        "format_version": 1,
        "label": "P",
        "blades": [{"span_offset": 50.0, "chord": chord, "k_twist": 1.5e-4, "k_bend": 1.95e-4}],
    }), encoding="utf-8")
    return path


class TestAnalyze:

    def test_table_analysis(self, table1_path, tmp_path, capsys):
        code = main(["analyze", str(table1_path), "--out", str(tmp_path), "--no-html"])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "Степень: 2" in out
        assert "Порог C_MS: 0.69" in out
        assert (tmp_path / "gap_plot.svg").exists()
        assert not (tmp_path / "gap_plot.html").exists()
        assert len(pd.read_csv(tmp_path / "gap_points.csv")) == 16

    def test_span_max_override(self, table1_path, tmp_path, capsys):
        code = main(["-q", "analyze", str(table1_path), "--smax", "700", "--out", str(tmp_path), "--no-html"])
        assert code == EXIT_OK
        points = pd.read_csv(tmp_path / "gap_points.csv").set_index("label")
        assert points.loc["MIN", "cms"] == pytest.approx(0.5 * (1 / 5 + 50 / 700))

    def test_bad_file_is_usage_error(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("label,B\nA,1\n", encoding="utf-8")
        assert main(["-q", "analyze", str(path), "--out", str(tmp_path)]) == EXIT_USAGE

    def test_missing_file_is_io_error(self, tmp_path):
        assert main(["-q", "analyze", str(tmp_path / "absent.csv")]) == EXIT_IO

    def test_help_shows_defaults(self, capsys, monkeypatch):
        monkeypatch.setenv("COLUMNS", "200")
        with pytest.raises(SystemExit) as caught:
            build_parser().parse_args(["analyze", "--help"])
        assert caught.value.code == 0
        assert "default: 4" in capsys.readouterr().out


class TestDesignCommands:

    def test_express(self, designs_dir, tmp_path, capsys):
        out = tmp_path / "min_phenotype.json"
        code = main(["express", str(designs_dir / "min_genotype.json"), "--out", str(out),
                     "--bmax", "5", "--smax", "626"])
        assert code == EXIT_OK
        document = json.loads(out.read_text(encoding="utf-8"))
        assert len(document["blades"]) == 1
        assert document["blades"][0]["span_offset"] == 50.0
        assert "C_MS = 0.140" in capsys.readouterr().out

    def test_manufacture(self, designs_dir, tmp_path):
        out = tmp_path / "min_manufacture.json"
        assert main(["-q", "manufacture", str(designs_dir / "min_wing.json"), "--out", str(out)]) == EXIT_OK
        assert json.loads(out.read_text(encoding="utf-8"))["ribs"][0]["twist"]["gauge_mm"] == 0.13
        assert out.with_suffix(".txt").exists()

    def test_manufacture_infeasible(self, tmp_path, capsys):
        design = _phenotype(tmp_path / "wide.json", chord=300.0)
        assert main(["manufacture", str(design)]) == EXIT_USAGE
        assert "blade[0].chord" in capsys.readouterr().out
        assert not (tmp_path / "wide_manufacture.json").exists()

    def test_simulate_with_export(self, designs_dir, tmp_path, capsys):
        series = tmp_path / "series.csv"
        code = main(["simulate", str(designs_dir / "min_wing.json"), *FAST, "--export", str(series)])
        assert code == EXIT_OK
        assert len(pd.read_csv(series)) == 600
        assert "Подъёмная сила" in capsys.readouterr().out

    def test_zero_amplitude_gives_zero_lift(self, designs_dir, capsys):
        code = main(["simulate", str(designs_dir / "min_wing.json"), *FAST, "--amplitude", "0"])
        assert code == EXIT_OK
        assert "Подъёмная сила: 0.00 мН (0.0 г)" in capsys.readouterr().out

    def test_minimal_wing_lift_rounds_to_zero_grams(self, designs_dir, capsys):
        assert main(["simulate", str(designs_dir / "min_wing.json")]) == EXIT_OK
        grams = re.search(r"Подъёмная сила: .* мН \((-?\d+\.\d) г\)", capsys.readouterr().out)
        assert grams is not None
        assert float(grams.group(1)) == 0.0

    def test_simulate_rejects_coarse_step(self, designs_dir):
        assert main(["-q", "simulate", str(designs_dir / "min_wing.json"), "--dt", "0.01"]) == EXIT_USAGE

    def test_unknown_document(self, tmp_path):
        path = tmp_path / "odd.json"
        path.write_text('{"wings": []}', encoding="utf-8")
        assert main(["-q", "simulate", str(path)]) == EXIT_USAGE

    def test_missing_config(self, designs_dir, tmp_path):
        code = main(["-q", "manufacture", str(designs_dir / "min_wing.json"),
                     "--config", str(tmp_path / "absent.json")])
        assert code == EXIT_USAGE

    def test_unknown_override_key(self, designs_dir):
        code = main(["-q", "manufacture", str(designs_dir / "min_wing.json"), "--set", "sim.dtt=1"])
        assert code == EXIT_USAGE


class TestEvolve:

    def test_small_run(self, tmp_path, capsys):
        out = tmp_path / "run"
        code = main(["evolve", "--pop", "4", "--gens", "1", "--seed", "3", "--out", str(out), *FAST,
                     "--set", "init.max_entries=2"])
        assert code == EXIT_OK
        assert (out / "generations.csv").exists()
        assert (out / "ndf.json").exists()
        assert json.loads((out / "config.json").read_text(encoding="utf-8"))["population"] == 4
        assert "Финальный недоминируемый фронт" in capsys.readouterr().out

    def test_output_root_from_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv("WINGSCOUT_OUTPUT_ROOT", str(tmp_path))
        code = main(["-q", "evolve", "--pop", "4", "--gens", "1", "--seed", "5", *FAST,
                     "--set", "init.max_entries=1"])
        assert code == EXIT_OK
        assert (tmp_path / "evolve_seed5" / "generations.csv").exists()


class TestFlagDefaults:

    def test_parsed_defaults_match_config(self):
        config = EvolutionConfig()
        args = build_parser().parse_args(["evolve"])
        assert (args.pop, args.gens, args.seed) == (config.population, config.generations, config.seed)
        args = build_parser().parse_args(["simulate", "wing.json"])
        assert args.amplitude == pytest.approx(math.degrees(config.flap.amplitude))
        assert (args.frequency, args.duration, args.dt) == (config.flap.frequency, config.sim.duration,
                                                            config.sim.dt)

    @pytest.mark.parametrize("command,expected", [
        ("evolve", ["(default: 100)", "(default: 200)", "(default: 0)"]),
        ("simulate", ["(default: 40.0)", "(default: 5.0)", "(default: 2.0)", "(default: 0.0001)"]),
    ])
    def test_help_shows_real_defaults(self, command, expected, capsys, monkeypatch):
        monkeypatch.setenv("COLUMNS", "200")
        with pytest.raises(SystemExit):
            build_parser().parse_args([command, "--help"])
        out = capsys.readouterr().out
        for text in expected:
            assert text in out
        assert "default: None" not in out

    def test_config_file_kept_without_flag(self, tmp_path):
        path = tmp_path / "exp.json"
        path.write_text(json.dumps({"population": 6, "sim": {"dt": 5e-4}}), encoding="utf-8")
        args = build_parser().parse_args(["evolve", "--config", str(path)])
        assert _experiment(args, explicit_overrides(args, EVOLVE_FLAGS)).population == 6

        args = build_parser().parse_args(["evolve", "--config", str(path), "--pop", "8"])
        assert _experiment(args, explicit_overrides(args, EVOLVE_FLAGS)).population == 8

        args = build_parser().parse_args(["simulate", "wing.json", "--config", str(path), "--amplitude", "30"])
        config = _experiment(args, explicit_overrides(args, SIMULATE_FLAGS))
        assert config.sim.dt == 5e-4
        assert config.flap.amplitude == pytest.approx(math.radians(30.0))
