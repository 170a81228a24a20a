import json

import numpy as np
import pytest

from approxmono import SampledFn, is_phi_monotone, make_grid
from approxmono.cli import ErrorSpec, run
from approxmono.csvio import (
    error_from_csv,
    error_to_csv,
    samples_from_csv,
    samples_to_csv,
)
from helpers import dyadic, rand_fn


def write_samples(path, values, origin=0.0, step=1.0):
    fn = SampledFn(make_grid(origin, step, len(values)), values)
    path.write_text(samples_to_csv(fn))
    return fn


@pytest.fixture()
def holder_csv(tmp_path):
    # 0.5-Hölder profile: square root distances from an interior point
    t = np.arange(8) * 1.0
    v = np.sqrt(np.abs(t - 3.0))
    path = tmp_path / "f.csv"
    write_samples(path, v)
    return path


class TestErrorSpec:
    def test_power(self):
        spec = ErrorSpec.parse("power:1,0.5")
        assert spec.kind == "power" and spec.epsilon == 1.0 and spec.p == 0.5

    def test_const(self):
        assert ErrorSpec.parse("const:2").constant == 2.0

    def test_file(self):
        assert ErrorSpec.parse("file:phi.csv").path == "phi.csv"

    @pytest.mark.parametrize(
        "text", ["power:1", "power:-1,2", "const:-3", "file:", "nope:1", "raw"]
    )
    def test_invalid(self, text):
        with pytest.raises(ValueError):
            ErrorSpec.parse(text)


class TestCsvRoundTrip:
    def test_samples_round_trip_exact(self):
        rng = np.random.default_rng(221)
        fn = SampledFn(make_grid(-1.25, 0.3, 40), rng.normal(size=40))
        back = samples_from_csv(samples_to_csv(fn))
        assert np.array_equal(back.values, fn.values)
        assert back.grid.count == fn.grid.count
        assert abs(back.grid.step - fn.grid.step) <= 1e-9 * fn.grid.step

    def test_error_round_trip_exact(self):
        rng = np.random.default_rng(223)
        from approxmono import ErrorFn

        phi = ErrorFn(0.75, np.abs(rng.normal(size=12)))
        back = error_from_csv(error_to_csv(phi))
        assert np.array_equal(back.values, phi.values)

    def test_bad_header(self):
        from approxmono import IngestionError

        with pytest.raises(IngestionError, match="header"):
            samples_from_csv("x,y\n0,1\n")

    def test_bad_row_names_line(self):
        from approxmono import IngestionError

        with pytest.raises(IngestionError, match="line 3"):
            samples_from_csv("t,value\n0,1\n1,abc\n")


class TestRunCheck:
    def test_holder_check_passes(self, holder_csv, capsys):
        status, report = run(
            ["check", "--input", str(holder_csv), "--error", "power:1,0.5"]
        )
        assert status == 0
        assert report.witnesses == []
        doc = json.loads(capsys.readouterr().out)
        assert doc["data"]["check"]["ok"] is True

    def test_monotone_check_fails_with_witness(self, holder_csv, capsys):
        status, report = run(
            [
                "check",
                "--input",
                str(holder_csv),
                "--error",
                "power:0.1,1",
                "--mode",
                "monotone",
            ]
        )
        assert status == 2
        assert len(report.witnesses) == 1
        doc = json.loads(capsys.readouterr().out)
        assert doc["report"]["witnesses"][0]["kind"] == "monotone-violation"

    def test_tolerance_flag_can_absorb_violation(self, holder_csv):
        status, _ = run(
            [
                "check",
                "--input",
                str(holder_csv),
                "--error",
                "const:0",
                "--mode",
                "monotone",
                "--tolerance",
                "10",
            ]
        )
        assert status == 0

    def test_env_var_overrides_default(self, holder_csv, monkeypatch):
        monkeypatch.setenv("APPROXMONO_TOL", "10")
        status, report = run(
            ["check", "--input", str(holder_csv), "--error", "const:0", "--mode", "monotone"]
        )
        assert status == 0
        assert report.parameters["tolerance"] == 10.0


class TestRunEnvelopeError:
    def test_quadratic_collapses_to_linear(self, tmp_path, capsys):
        path = tmp_path / "f.csv"
        write_samples(path, np.zeros(6), step=0.5)
        status, _ = run(["envelope-error", "--input", str(path), "--error", "power:1,2"])
        assert status == 0
        out = capsys.readouterr().out
        phi = error_from_csv(out)
        assert np.array_equal(phi.values, 0.25 * np.arange(6))

    def test_alpha_kind_records_radius(self, tmp_path, capsys):
        path = tmp_path / "f.csv"
        write_samples(path, np.zeros(5))
        status, report = run(
            [
                "envelope-error",
                "--input",
                str(path),
                "--error",
                "const:1",
                "--kind",
                "alpha",
                "--format",
                "json",
            ]
        )
        assert status == 0
        assert report.parameters["mass_radius"] == 16
        doc = json.loads(capsys.readouterr().out)
        assert doc["data"]["envelope"]["phi"] == [1.0, 1.0, 1.0, 1.0, 1.0]

    def test_mass_radius_too_small(self, tmp_path, capsys):
        path = tmp_path / "f.csv"
        write_samples(path, np.zeros(5))
        status, _ = run(
            [
                "envelope-error",
                "--input",
                str(path),
                "--error",
                "const:1",
                "--kind",
                "alpha",
                "--mass-radius",
                "2",
            ]
        )
        assert status == 1


class TestRunEnvelopeAndSandwich:
    def test_envelope_outputs_member(self, tmp_path, capsys):
        path = tmp_path / "f.csv"
        rng = np.random.default_rng(227)
        fn = write_samples(path, dyadic(rng, -1, 1, 9))
        status, _ = run(
            ["envelope", "--input", str(path), "--error", "power:0.5,1", "--side", "lower"]
        )
        assert status == 0
        out = samples_from_csv(capsys.readouterr().out)
        assert np.all(out.values <= fn.values)

    def test_sandwich_feasible(self, tmp_path, capsys):
        rng = np.random.default_rng(229)
        g_path = tmp_path / "g.csv"
        h_path = tmp_path / "h.csv"
        hv = dyadic(rng, -1, 1, 7)
        write_samples(h_path, hv)
        write_samples(g_path, hv - 3.0)
        status, report = run(
            [
                "sandwich",
                "--input",
                str(g_path),
                "--input2",
                str(h_path),
                "--error",
                "power:1,1",
            ]
        )
        assert status == 0
        out = samples_from_csv(capsys.readouterr().out)
        assert np.all(out.values <= hv)
        assert len(report.inputs) == 2

    def test_sandwich_infeasible_exit_2(self, tmp_path, capsys):
        g_path = tmp_path / "g.csv"
        h_path = tmp_path / "h.csv"
        write_samples(g_path, [5.0, 0.0])
        write_samples(h_path, [0.0, 0.0])
        status, report = run(
            [
                "sandwich",
                "--input",
                str(g_path),
                "--input2",
                str(h_path),
                "--error",
                "const:0",
            ]
        )
        assert status == 2
        assert report.witnesses[0].kind.value == "sandwich-violation"
        doc = json.loads(capsys.readouterr().out)
        assert doc["data"]["sandwich"]["feasible"] is False


class TestRunBracketVariationJordan:
    def test_bracket_writes_three_holder_files(self, tmp_path):
        rng = np.random.default_rng(233)
        path = tmp_path / "f.csv"
        # gentle dyadic profile stays Hölder for the linear table
        vals = np.cumsum(dyadic(rng, -0.25, 0.25, 8))
        write_samples(path, vals)
        out = tmp_path / "br.csv"
        status, report = run(
            [
                "bracket",
                "--input",
                str(path),
                "--error",
                "power:1,1",
                "--error2",
                "power:1,1",
                "--mode",
                "holder",
                "--output",
                str(out),
            ]
        )
        assert status == 0
        lower = samples_from_csv((tmp_path / "br.lower.csv").read_text())
        upper = samples_from_csv((tmp_path / "br.upper.csv").read_text())
        gap = samples_from_csv((tmp_path / "br.gap.csv").read_text())
        assert np.all(lower.values <= vals) and np.all(vals <= upper.values)
        assert np.all(upper.values - lower.values <= gap.values + 1e-12)
        sidecar = json.loads((tmp_path / "br.csv.report.json").read_text())
        assert sidecar["command"] == "bracket"

    def test_bracket_precondition_exit_2(self, tmp_path):
        path = tmp_path / "f.csv"
        write_samples(path, [0.0, 5.0, 0.0])
        status, report = run(
            ["bracket", "--input", str(path), "--error", "const:0", "--mode", "holder"]
        )
        assert status == 2
        assert report.witnesses

    def test_variation_values(self, tmp_path, capsys):
        path = tmp_path / "f.csv"
        write_samples(path, [0.0, 1.0, 0.0])
        status, _ = run(["variation", "--input", str(path), "--error", "const:0"])
        assert status == 0
        out = samples_from_csv(capsys.readouterr().out)
        assert list(out.values) == [0.0, 1.0, 2.0]

    def test_jordan_round_trip(self, tmp_path):
        rng = np.random.default_rng(239)
        path = tmp_path / "f.csv"
        fn = write_samples(path, dyadic(rng, -1, 1, 9))
        out = tmp_path / "jord.csv"
        status, report = run(
            [
                "jordan",
                "--input",
                str(path),
                "--error",
                "const:0",
                "--output",
                str(out),
            ]
        )
        assert status == 0
        g = samples_from_csv((tmp_path / "jord.g.csv").read_text())
        h = samples_from_csv((tmp_path / "jord.h.csv").read_text())
        assert np.array_equal(g.values - h.values, fn.values)
        zero = __import__("approxmono").ErrorFn(1.0, np.zeros(9))
        assert is_phi_monotone(g, zero, 0.0)[0]
        assert is_phi_monotone(h, zero, 0.0)[0]
        assert str(tmp_path / "jord.g.csv") in report.outputs

    def test_individual_alpha(self, tmp_path, capsys):
        path = tmp_path / "f.csv"
        write_samples(path, [0.0, -3.0, 1.0])
        status, _ = run(["individual", "--input", str(path), "--kind", "alpha"])
        assert status == 0
        phi = error_from_csv(capsys.readouterr().out)
        assert list(phi.values) == [0.0, 4.0, 1.0]


class TestOperationalErrors:
    def test_unknown_flag(self, capsys):
        status, report = run(["check", "--nope", "x"])
        assert status == 1 and report is None

    def test_unknown_command(self):
        status, _ = run(["frobnicate"])
        assert status == 1

    def test_missing_file(self, tmp_path):
        status, _ = run(
            ["check", "--input", str(tmp_path / "absent.csv"), "--error", "const:0"]
        )
        assert status == 1

    def test_malformed_csv(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("t,value\n0,1\noops\n")
        status, _ = run(["check", "--input", str(path), "--error", "const:0"])
        assert status == 1
        assert "line 3" in capsys.readouterr().err

    def test_nonuniform_csv(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("t,value\n0,1\n1,2\n3,4\n")
        status, _ = run(["check", "--input", str(path), "--error", "const:0"])
        assert status == 1

    def test_bad_error_spec(self, holder_csv):
        status, _ = run(["check", "--input", str(holder_csv), "--error", "power:a,b"])
        assert status == 1

    def test_help_exits_zero(self):
        status, _ = run(["--help"])
        assert status == 0


class TestDeterminism:
    def test_stdout_bytes_identical(self, holder_csv, capsys):
        argv = ["check", "--input", str(holder_csv), "--error", "power:1,0.5"]
        run(argv)
        first = capsys.readouterr().out
        run(argv)
        second = capsys.readouterr().out
        assert first == second

    def test_file_bytes_identical(self, tmp_path):
        rng = np.random.default_rng(241)
        path = tmp_path / "f.csv"
        write_samples(path, rng.normal(size=11))
        outs = []
        for name in ("a.csv", "b.csv"):
            out = tmp_path / name
            status, _ = run(
                [
                    "envelope",
                    "--input",
                    str(path),
                    "--error",
                    "power:1,0.5",
                    "--output",
                    str(out),
                ]
            )
            assert status == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_file_error_spec_round_trips(self, tmp_path, capsys):
        # an envelope written to disk feeds back as a file: spec
        path = tmp_path / "f.csv"
        write_samples(path, np.zeros(6))
        phi_path = tmp_path / "phi.csv"
        status, _ = run(
            [
                "envelope-error",
                "--input",
                str(path),
                "--error",
                "power:1,2",
                "--output",
                str(phi_path),
            ]
        )
        assert status == 0
        status, _ = run(
            ["check", "--input", str(path), "--error", f"file:{phi_path}"]
        )
        assert status == 0
