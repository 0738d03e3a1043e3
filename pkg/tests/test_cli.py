import json
import subprocess
import sys

import numpy as np
import pytest

from lmgquench.cli import main


def run(tmp_path, *args):
    return main([*map(str, args), "--outdir", str(tmp_path)])


class TestExitCodes:
    def test_unknown_command(self, tmp_path, capsys):
        assert main(["frobnicate"]) == 2

    def test_malformed_number(self):
        assert main(["tdf", "--N", "forty", "--hi", "1.5", "--hf", "0.6"]) == 2

    def test_precondition_violation(self, tmp_path, capsys):
        code = run(tmp_path, "tdf", "--N", "40", "--gamma", "1.2",
                   "--hi", "1.5", "--hf", "0.6")
        assert code == 2
        assert "gamma" in capsys.readouterr().err

    def test_threshold_never_reached(self, tmp_path, capsys):
        code = run(tmp_path, "h0-scaling", "--N", "20,30,40", "--hi", "1.5",
                   "--scan-start", "1.4", "--scan-end", "1.3", "--tmax", "4")
        assert code == 3
        assert "threshold" in capsys.readouterr().err

    def test_version_subprocess(self):
        out = subprocess.run([sys.executable, "-m", "lmgquench", "--version"],
                             capture_output=True, text=True)
        assert out.returncode == 0
        assert "lmg" in out.stdout

    @pytest.mark.parametrize("argv", [
        "gap --N 10 --h-min 1 --h-max 0.5",
        "gap --N 10 --levels 20",
        "curvature --N 10 --h-min 1 --h-max 0.5",
        "tdf --N 10 --hi 1.5 --hf 0.6 --tmax 0",
        "tdf --N 10 --hi 1.5 --hf 0.6 --tpoints 1",
        "spectral --N 10 --hi 1.5 --hf 0.6 --omega-points 1",
        "spectral --N 10 --hi 1.5 --hf 0.6 --eta 0",
    ])
    def test_validation_errors(self, tmp_path, capsys, argv):
        assert run(tmp_path, *argv.split()) == 2
        assert "error" in capsys.readouterr().err


class TestOutputDirectory:
    def test_env_var_default(self, tmp_path, monkeypatch):
        target = tmp_path / "from_env"
        monkeypatch.setenv("LMG_OUTDIR", str(target))
        assert main("tdf --N 20 --hi 1.5 --hf 0.6 --tpoints 11".split()) == 0
        assert (target / "tdf.csv").exists()

    def test_flag_beats_env_var(self, tmp_path, monkeypatch):
        monkeypatch.setenv("LMG_OUTDIR", str(tmp_path / "ignored"))
        chosen = tmp_path / "chosen"
        assert run(chosen, "tdf", "--N", "20", "--hi", "1.5", "--hf", "0.6",
                   "--tpoints", "11") == 0
        assert (chosen / "tdf.csv").exists()
        assert not (tmp_path / "ignored").exists()

    def test_tag_renames_outputs(self, tmp_path):
        assert run(tmp_path, "tdf", "--N", "20", "--hi", "1.5", "--hf", "0.6",
                   "--tpoints", "11", "--tag", "myrun") == 0
        assert (tmp_path / "myrun.csv").exists()
        assert (tmp_path / "myrun.meta.json").exists()


class TestTdf:
    def test_no_quench_constant_series(self, tmp_path):
        assert run(tmp_path, "tdf", "--N", "40", "--hi", "1.5", "--hf", "1.5",
                   "--tmax", "10", "--tpoints", "101") == 0
        rows = np.genfromtxt(tmp_path / "tdf.csv", delimiter=",", names=True)
        values = rows[rows.dtype.names[1]]
        assert np.all(np.abs(values - 1.0) <= 1e-10)

    def test_multi_curve_columns(self, tmp_path):
        run(tmp_path, "tdf", "--N", "30", "--hi", "1.5", "--hf", "1.4,0.6",
            "--tpoints", "11")
        header = (tmp_path / "tdf.csv").read_text().splitlines()[0]
        assert header == "t,L(hf=1.4),L(hf=0.6)"

    def test_metadata_echo_materializes_defaults(self, tmp_path):
        run(tmp_path, "tdf", "--N", "30", "--hi", "1.5", "--hf", "0.6")
        meta = json.loads((tmp_path / "tdf.meta.json").read_text())
        config = meta["config"]
        assert config["tpoints"] == 2001
        assert config["tmin"] == 0.0
        assert config["tmax"] == 10.0
        assert config["deterministic"] is True
        assert meta["outputs"] == ["tdf.csv"]

    def test_rerun_is_byte_identical(self, tmp_path):
        a = tmp_path / "a"
        b = tmp_path / "b"
        for out in (a, b):
            main("tdf --N 60 --hi 0.5 --hf 1.3 --tpoints 301".split() +
                 ["--outdir", str(out)])
        assert (a / "tdf.csv").read_bytes() == (b / "tdf.csv").read_bytes()

    def test_echoed_config_reproduces_bytes(self, tmp_path):
        first = tmp_path / "first"
        main("tdf --N 50 --gamma 0.5 --hi 1.2 --hf 0.7,1.0".split() +
             ["--outdir", str(first)])
        config = json.loads((first / "tdf.meta.json").read_text())["config"]
        replay = tmp_path / "replay"
        argv = ["tdf",
                "--N", str(config["N"]),
                "--gamma", str(config["gamma"]),
                "--hi", str(config["hi"]),
                "--hf", ",".join(str(v) for v in config["hf"]),
                "--tmin", str(config["tmin"]),
                "--tmax", str(config["tmax"]),
                "--tpoints", str(config["tpoints"]),
                "--outdir", str(replay)]
        assert main(argv) == 0
        assert (first / "tdf.csv").read_bytes() == (replay / "tdf.csv").read_bytes()


class TestScans:
    def test_lmin_scan_workers_do_not_change_bytes(self, tmp_path):
        base = "lmin-scan --N 40 --hi 1.5 --hf-start 1.2 --hf-end 1.0 --hf-step 0.02 --tmax 4".split()
        serial = tmp_path / "serial"
        pooled = tmp_path / "pooled"
        assert main(base + ["--workers", "1", "--outdir", str(serial)]) == 0
        assert main(base + ["--workers", "3", "--outdir", str(pooled)]) == 0
        assert (serial / "lmin-scan.csv").read_bytes() == (pooled / "lmin-scan.csv").read_bytes()

    def test_h0_scaling_outputs(self, tmp_path):
        code = run(tmp_path, "h0-scaling", "--N", "20,30,40", "--hi", "1.5",
                   "--scan-start", "1.2", "--scan-end", "0.5", "--tmax", "6",
                   "--workers", "2")
        assert code == 0
        rows = (tmp_path / "h0-scaling.csv").read_text().splitlines()
        assert rows[0] == "N,h0"
        assert len(rows) == 4
        fit = json.loads((tmp_path / "h0-scaling.fit.json").read_text())
        assert set(fit["fit"]) == {"a", "b", "c", "variable"}
        assert fit["sensitivity"]["threshold_alt"] == pytest.approx(1e-4)
        assert fit["sensitivity"]["max_shift"] is not None

    def test_h0_scaling_needs_three_sizes(self, tmp_path, capsys):
        assert run(tmp_path, "h0-scaling", "--N", "20,30", "--hi", "1.5") == 2

    def test_gap_columns(self, tmp_path):
        run(tmp_path, "gap", "--N", "20", "--h-min", "0", "--h-max", "1",
            "--h-step", "0.5", "--levels", "3")
        lines = (tmp_path / "gap.csv").read_text().splitlines()
        assert lines[0] == "h,gap_1,gap_2,gap_3"
        assert len(lines) == 4

    def test_curvature_interior_only(self, tmp_path):
        run(tmp_path, "curvature", "--N", "20", "--h-min", "0.5", "--h-max", "0.6",
            "--h-step", "0.02")
        lines = (tmp_path / "curvature.csv").read_text().splitlines()
        assert lines[0] == "h,d2e"
        assert len(lines) == 1 + 6 - 2


class TestWorkSweep:
    def test_columns_and_endpoint_padding(self, tmp_path):
        run(tmp_path, "work-sweep", "--N", "30", "--hi", "1.5",
            "--hf-min", "0.5", "--hf-max", "0.7", "--hf-step", "0.05")
        lines = (tmp_path / "work-sweep.csv").read_text().splitlines()
        assert lines[0] == "h_f,W,dF,W_irr,dW/dh,ddF/dh,dWirr/dh"
        first = lines[1].split(",")
        assert first[4] == first[5] == first[6] == ""
        middle = lines[2].split(",")
        assert all(cell != "" for cell in middle)
        assert lines[-1].split(",")[4] == ""


class TestSpectrum:
    def test_spectrum_and_matrix_dump(self, tmp_path):
        run(tmp_path, "spectrum", "--N", "6", "--h", "0.5", "--dump-matrix")
        lines = (tmp_path / "spectrum.csv").read_text().splitlines()
        assert lines[0] == "k,E_k,parity"
        assert len(lines) == 8
        dump = (tmp_path / "spectrum.hamiltonian.csv").read_text().splitlines()
        assert len(dump) == 8  # header + 7 rows
        # round-trip at 17 significant digits is lossless
        from lmgquench import ModelParams, build_hamiltonian
        H = build_hamiltonian(ModelParams(6, 0.5, 0.0)).entries
        parsed = np.genfromtxt(tmp_path / "spectrum.hamiltonian.csv",
                               delimiter=",", skip_header=1)
        assert np.array_equal(parsed, H)


class TestSpectral:
    def test_spectral_outputs(self, tmp_path):
        run(tmp_path, "spectral", "--N", "20", "--hi", "1.5", "--hf", "1.5,0.8",
            "--omega-points", "101")
        lines = (tmp_path / "spectral.csv").read_text().splitlines()
        assert lines[0] == "omega,A(hf=1.5),A(hf=0.8)"
        assert len(lines) == 102
        levels = json.loads((tmp_path / "spectral.levels.json").read_text())
        assert set(levels["levels"]) == {"1.5", "0.8"}
        assert len(levels["levels"]["1.5"]) == 21
        entry = levels["levels"]["1.5"][0]
        assert set(entry) == {"E", "p", "parity"}


class TestPlots:
    @pytest.mark.parametrize("args", [
        ["tdf", "--N", "20", "--hi", "1.5", "--hf", "0.6", "--tpoints", "51"],
        ["work-sweep", "--N", "20", "--hi", "1.5", "--hf-min", "0.5",
         "--hf-max", "0.7", "--hf-step", "0.05"],
        ["h0-scaling", "--N", "20,30,40", "--hi", "1.5", "--scan-start", "1.2",
         "--scan-end", "0.5", "--tmax", "6"],
        ["spectral", "--N", "12", "--hi", "1.5", "--hf", "0.8",
         "--omega-points", "101"],
    ])
    def test_svg_emission(self, tmp_path, args):
        pytest.importorskip("matplotlib")
        assert run(tmp_path, *args, "--plot") == 0
        svg = tmp_path / f"{args[0]}.svg"
        assert svg.exists()
        assert b"<svg" in svg.read_bytes()[:500]

    def test_style_column_mismatch_rejected(self, tmp_path):
        pytest.importorskip("matplotlib")
        from lmgquench.output import ResultBundle
        from lmgquench.plotting import emit_figure
        bundle = ResultBundle("tdf", ["t", "L(hf=0.6)"], [(0.0, 1.0)])
        with pytest.raises(ValueError):
            emit_figure(bundle, tmp_path / "x.svg", style="work-sweep")
        with pytest.raises(ValueError):
            emit_figure(bundle, tmp_path / "x.svg", style="nonsense")
