import numpy as np
import pytest

from sdkernel.noise import FbmConfig, PathCsvError, read_path_csv, sample_fbm, write_path_csv
from sdkernel.roughpath import PathSamples


class TestFbm:
    def test_config_validation(self):
        with pytest.raises(ValueError):
            FbmConfig(hurst=1.2)
        with pytest.raises(ValueError):
            FbmConfig(hurst=0.5, n_increments=100)

    def test_brownian_increment_variance(self):
        n = 64
        incs = []
        for seed in range(150):
            path = sample_fbm(FbmConfig(0.5, 1, n, 1.0, seed))
            incs.append(np.diff(path.values[:, 0]))
        incs = np.concatenate(incs)  # ~10^4 draws
        assert abs(incs.var() / (1.0 / n) - 1.0) < 0.05
        # independence: lag-1 autocorrelation is noise
        rho = np.corrcoef(incs[:-1], incs[1:])[0, 1]
        assert abs(rho) < 3.0 / np.sqrt(len(incs))

    @pytest.mark.parametrize("hurst", [0.255, 0.85])
    def test_path_covariance(self, hurst):
        n, n_paths = 128, 600
        paths = np.stack(
            [sample_fbm(FbmConfig(hurst, 1, n, 1.0, 500 + s)).values[:, 0] for s in range(n_paths)]
        )
        for i, j in ((32, 64), (64, 127), (16, 100)):
            s, t = i / n, j / n
            prods = paths[:, i] * paths[:, j]
            se = np.std(prods, ddof=1) / np.sqrt(n_paths)
            theo = 0.5 * (s ** (2 * hurst) + t ** (2 * hurst) - abs(t - s) ** (2 * hurst))
            assert abs(prods.mean() - theo) < 3 * se

    def test_components_independent(self):
        paths = np.stack(
            [sample_fbm(FbmConfig(0.7, 2, 64, 1.0, s)).values[-1] for s in range(400)]
        )
        prods = paths[:, 0] * paths[:, 1]
        se = np.std(prods, ddof=1) / np.sqrt(len(prods))
        assert abs(prods.mean()) < 3 * se

    def test_bitwise_deterministic(self):
        a = sample_fbm(FbmConfig(0.3, 3, 256, 2.0, 99))
        b = sample_fbm(FbmConfig(0.3, 3, 256, 2.0, 99))
        assert np.array_equal(a.values, b.values)
        assert np.array_equal(a.times, b.times)

    def test_self_similarity_witness(self):
        # time scaled by c and values by c^H: increment moments agree at 3 sigma
        hurst, c = 0.4, 4.0
        base = [sample_fbm(FbmConfig(hurst, 1, 64, 1.0, 2000 + s)) for s in range(300)]
        long = [sample_fbm(FbmConfig(hurst, 1, 64, c, 3000 + s)) for s in range(300)]
        inc_base = np.concatenate([np.diff(p.values[:, 0]) for p in base]) * c**hurst
        inc_long = np.concatenate([np.diff(p.values[:, 0]) for p in long])
        for moment in (2, 4):
            a = np.abs(inc_base) ** moment
            b = np.abs(inc_long) ** moment
            se = np.sqrt(a.var(ddof=1) / len(a) + b.var(ddof=1) / len(b))
            assert abs(a.mean() - b.mean()) < 3 * se


class TestCsv:
    def test_round_trip_bitwise(self, tmp_path):
        rng = np.random.default_rng(0)
        path = PathSamples(np.sort(rng.random(33)) + np.arange(33), rng.standard_normal((33, 3)))
        out = tmp_path / "p.csv"
        write_path_csv(path, out)
        back = read_path_csv(out)
        assert np.array_equal(back.times, path.times)
        assert np.array_equal(back.values, path.values)

    def test_dimension_inferred(self, tmp_path):
        out = tmp_path / "p.csv"
        out.write_text("time,x1,x2\n0,1,2\n1,3,4\n")
        assert read_path_csv(out).dim == 2

    def test_empty_data_is_error(self, tmp_path):
        out = tmp_path / "p.csv"
        out.write_text("time,x1\n")
        with pytest.raises(PathCsvError):
            read_path_csv(out)

    def test_malformed_row_reports_line(self, tmp_path):
        out = tmp_path / "p.csv"
        out.write_text("time,x1\n0,1\n1,oops\n")
        with pytest.raises(PathCsvError, match="line 3"):
            read_path_csv(out)

    def test_non_monotone_times_rejected(self, tmp_path):
        out = tmp_path / "p.csv"
        out.write_text("time,x1\n0,1\n2,2\n1,3\n")
        with pytest.raises(PathCsvError, match="times"):
            read_path_csv(out)

    def test_missing_header(self, tmp_path):
        out = tmp_path / "p.csv"
        out.write_text("t,x1\n0,1\n")
        with pytest.raises(PathCsvError, match="line 1"):
            read_path_csv(out)


class TestCholeskyFallback:
    def test_fallback_used_when_embedding_fails(self, monkeypatch, caplog):
        import logging

        from sdkernel import noise

        monkeypatch.setattr(noise, "_fgn_circulant", lambda n, hurst, rng: None)
        with caplog.at_level(logging.WARNING, logger="sdkernel.noise"):
            path = sample_fbm(FbmConfig(0.7, 1, 64, 1.0, 5))
        assert any("Cholesky" in rec.message for rec in caplog.records)
        assert path.n_increments == 64
        assert np.isfinite(path.values).all()

    def test_fallback_statistics(self):
        from sdkernel.noise import _fgn_cholesky

        rng = np.random.default_rng(0)
        draws = np.stack([_fgn_cholesky(32, 0.3, rng) for _ in range(400)])
        # unit-spacing fGN has unit variance at every coordinate
        assert abs(draws.var() - 1.0) < 0.1
