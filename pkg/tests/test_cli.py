import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from blstab.cli import main


def run(argv):
    return main(argv)


class TestUsageErrors:
    def test_missing_time_is_a_usage_error(self, capsys):
        with pytest.raises(SystemExit) as err:
            run(["profile"])
        assert err.value.code == 2

    def test_negative_spacing_is_a_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as err:
            run(["profile", "--t", "1.0", "--h", "-0.01",
                 "--out", str(tmp_path)])
        assert err.value.code == 2

    def test_unknown_config_key_is_a_usage_error(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"t": 1.0, "wavenumber": 2.0}))
        with pytest.raises(SystemExit) as err:
            run(["profile", "--config", str(cfg), "--out", str(tmp_path)])
        assert err.value.code == 2
        assert "wavenumber" in capsys.readouterr().err

    def test_bad_seed_literal(self, tmp_path, capsys):
        code = run(["shoot", "--t", "7.65", "--seed", "notacomplex",
                    "--out", str(tmp_path)])
        assert code == 2


class TestProfileCommand:
    def test_writes_csv_with_full_header(self, tmp_path, capsys):
        code = run(["profile", "--t", "0.1", "--out", str(tmp_path)])
        assert code == 0
        lines = (tmp_path / "profile.csv").read_text().splitlines()
        for key in ("t=0.1", "h=0.01", "Y0=30", "alpha=1",
                    "convention=wall-anchored"):
            assert key in lines[0]
        data = np.loadtxt(tmp_path / "profile.csv", delimiter=",", skiprows=2)
        assert data[0, 1] == 0.0  # wall anchoring
        out = capsys.readouterr().out
        assert "far-field V" in out

    def test_deterministic_output(self, tmp_path):
        run(["profile", "--t", "0.1", "--out", str(tmp_path / "a")])
        run(["profile", "--t", "0.1", "--out", str(tmp_path / "b")])
        assert ((tmp_path / "a" / "profile.csv").read_bytes()
                == (tmp_path / "b" / "profile.csv").read_bytes())


class TestSpectrumCommand:
    def test_unstable_configuration(self, tmp_path, capsys):
        code = run(["spectrum", "--t", "7.65", "--out", str(tmp_path)])
        assert code == 0
        out = capsys.readouterr().out
        assert "UNSTABLE c = 0.15178174829014" in out
        assert (tmp_path / "spectrum.csv").exists()

    def test_stable_configuration(self, tmp_path, capsys):
        code = run(["spectrum", "--t", "1.0", "--out", str(tmp_path)])
        assert code == 3
        assert "STABLE" in capsys.readouterr().out
        # the verdict is about the spectrum, not about the run: the CSV
        # is still written
        assert (tmp_path / "spectrum.csv").exists()


class TestShootCommand:
    def test_explicit_seed(self, tmp_path, capsys):
        code = run(["shoot", "--t", "7.65", "--seed", "0.15+0.15j",
                    "--out", str(tmp_path)])
        assert code == 0
        payload = json.loads((tmp_path / "c.json").read_text())
        c = payload["c"][0] + 1j * payload["c"][1]
        assert_allclose(c, 0.1517753417830526 + 0.14642082753281199j,
                        rtol=1e-8)
        assert payload["seed"] == [0.15, 0.15]
        assert (tmp_path / "eigenpair.csv").exists()

    def test_pole_seed_is_a_numerical_failure(self, tmp_path, capsys):
        code = run(["shoot", "--t", "7.65", "--seed", "0.0+0.0j",
                    "--out", str(tmp_path)])
        assert code == 4
        assert "PoleProximityError" in capsys.readouterr().err

    def test_matrix_seed_on_stable_profile(self, tmp_path, capsys):
        code = run(["shoot", "--t", "1.0", "--out", str(tmp_path)])
        assert code == 3
        assert "STABLE" in capsys.readouterr().out


class TestSweepCommand:
    def test_short_sweep(self, tmp_path, capsys):
        code = run(["sweep", "--t-min", "7.5", "--t-max", "7.7",
                    "--t-step", "0.1", "--out", str(tmp_path)])
        assert code == 0
        data = np.loadtxt(tmp_path / "sweep.csv", delimiter=",", skiprows=2)
        assert data.shape == (3, 2)
        assert_allclose(data[:, 0], [7.5, 7.6, 7.7], rtol=1e-12)
        assert "max Im c" in capsys.readouterr().out

    def test_rejects_inverted_range(self, tmp_path):
        with pytest.raises(SystemExit) as err:
            run(["sweep", "--t-min", "8.0", "--t-max", "7.0",
                 "--out", str(tmp_path)])
        assert err.value.code == 2


class TestConfigMerge:
    def test_config_supplies_defaults_and_flags_win(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"t": 7.65, "h": 0.02,
                                   "out": str(tmp_path / "from_cfg")}))
        code = run(["spectrum", "--config", str(cfg)])
        assert code == 0
        assert (tmp_path / "from_cfg" / "spectrum.csv").exists()
        # an explicit --t beats the config value: t = 1.0 is stable
        code = run(["spectrum", "--config", str(cfg), "--t", "1.0",
                    "--out", str(tmp_path / "flag_wins")])
        assert code == 3


class TestOsCommand:
    def test_two_point_study(self, tmp_path, capsys):
        code = run(["os", "--t", "7.65", "--nu-hat", "1e-3", "2.5e-4",
                    "--out", str(tmp_path)])
        assert code == 0
        payload = json.loads((tmp_path / "expansion.json").read_text())
        assert payload["nu_hat"] == [1e-3, 2.5e-4]
        gaps = [abs(complex(*c) - complex(*payload["c_ray"]))
                for c in payload["c_os"]]
        assert gaps[1] < gaps[0]
        out = capsys.readouterr().out
        assert "fitted exponent" in out

    def test_single_point_rejected(self, tmp_path):
        with pytest.raises(SystemExit) as err:
            run(["os", "--t", "7.65", "--nu-hat", "1e-3",
                 "--out", str(tmp_path)])
        assert err.value.code == 2
