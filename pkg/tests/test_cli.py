import json
import subprocess
import sys


def run_cli(*args, cwd):
    return subprocess.run(
        [sys.executable, "-m", "sdkernel", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
        check=True,
    )


class TestCli:
    def test_fbm_kernel_sigkernel_pipeline(self, tmp_path):
        run_cli(
            "fbm", "--hurst", "0.6", "--dims", "2", "--log2-fine", "5",
            "--seed", "1", "--out", "path.csv", cwd=tmp_path,
        )
        out = run_cli(
            "kernel", "--input", "path.csv", "--kappa", "2",
            "--log2-coarse", "4", "--dump-table", "table.bin", cwd=tmp_path,
        )
        float(out.stdout.strip())
        assert (tmp_path / "table.bin").exists()
        out = run_cli(
            "sigkernel", "--input", "path.csv", "--kappa", "1",
            "--log2-coarse", "3", "--substeps", "4", cwd=tmp_path,
        )
        float(out.stdout.strip())

    def test_table_with_config_and_flag_override(self, tmp_path):
        cfg = {
            "methods": ["SDK1", "SDK2"],
            "hursts": [0.7],
            "n_paths": 4,
            "log2_fine": 6,
            "log2_coarse": 4,
            "dims": 1,
            "seed": 3,
        }
        (tmp_path / "spec.json").write_text(json.dumps(cfg))
        run_cli(
            "table", "--config", "spec.json", "--paths", "2",
            "--out", "pairwise.csv", cwd=tmp_path,
        )
        lines = (tmp_path / "pairwise.csv").read_text().splitlines()
        header = json.loads(lines[0][len("# spec: ") :])
        assert header["n_paths"] == 2  # flag overrode the config file
        assert len(lines) == 2 + 3  # comment, columns, 3 pairs of 2 methods

    def test_bitwise_reproducible_given_seed(self, tmp_path):
        args = (
            "table", "--methods", "SDK1", "SDK2", "--hurst", "0.5", "--paths", "2",
            "--log2-fine", "5", "--log2-coarse", "3", "--dims", "1",
            "--seed", "11", "--out",
        )
        run_cli(*args, "a.csv", cwd=tmp_path)
        run_cli(*args, "b.csv", cwd=tmp_path)
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

        run_cli("fbm", "--hurst", "0.3", "--log2-fine", "6", "--seed", "4",
                "--out", "f1.csv", cwd=tmp_path)
        run_cli("fbm", "--hurst", "0.3", "--log2-fine", "6", "--seed", "4",
                "--out", "f2.csv", cwd=tmp_path)
        assert (tmp_path / "f1.csv").read_bytes() == (tmp_path / "f2.csv").read_bytes()

    def test_scaling_csv_schema(self, tmp_path):
        run_cli(
            "scaling", "--axis", "grid", "--values", "3", "4", "--kappa", "2",
            "--dims", "1", "--log2-fine", "5", "--hurst", "0.5",
            "--seed", "2", "--out", "scaling.csv", cwd=tmp_path,
        )
        lines = (tmp_path / "scaling.csv").read_text().splitlines()
        assert lines[1] == "axis,value,runtime_seconds,memory_bytes,d,kappa,zeta,seed"
        assert len(lines) == 4
