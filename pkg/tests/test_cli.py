import json

import pytest
from click.testing import CliRunner

from gravcorr import __version__
from gravcorr.analysis import series as series_module
from gravcorr.errors import EXIT_CAPABILITY, EXIT_NUMERICAL, EXIT_USAGE, NumericalDegeneracyError
from gravcorr.gaussian.correlations import NATS_TO_BITS
from gravcorr.main import cli
from gravcorr.utils.csv_output import read_columns

SHORT_RUN = ["--tau-max", "50", "--n-samples", "20", "--spacing", "linear"]


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, args):
    return runner.invoke(cli, args, catch_exceptions=False)


def test_version(runner):
    result = invoke(runner, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.output


def test_evolve_is_byte_deterministic(runner, tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert invoke(runner, ["evolve", *SHORT_RUN, "-o", str(first)]).exit_code == 0
    assert invoke(runner, ["evolve", *SHORT_RUN, "-o", str(second)]).exit_code == 0
    assert first.read_bytes() == second.read_bytes()
    lines = first.read_text().splitlines()
    assert lines[0] == "tau,mutual_information,discord,ppt_nu_minus,entangled,trace"
    assert len(lines) == 21


def test_evolve_two_samples(runner, tmp_path):
    out = tmp_path / "two.csv"
    result = invoke(runner, ["evolve", "--tau-max", "10", "--n-samples", "2", "--spacing", "linear", "-o", str(out)])
    assert result.exit_code == 0
    _, columns = read_columns(out)
    assert columns["tau"] == [0.0, 10.0]
    assert columns["mutual_information"][0] == pytest.approx(0.0, abs=1e-12)


def test_omega_only_rescales_reported_time(runner, tmp_path):
    slow, fast = tmp_path / "w1.csv", tmp_path / "w2.csv"
    assert invoke(runner, ["evolve", *SHORT_RUN, "--omega", "1", "-o", str(slow)]).exit_code == 0
    result = invoke(runner, ["evolve", *SHORT_RUN, "--omega", "2", "-o", str(fast)])
    assert result.exit_code == 0
    assert slow.read_bytes() == fast.read_bytes()
    assert "(t=" in result.stderr


def test_evolve_failure_names_sample_time(runner, tmp_path, monkeypatch):
    def degenerate(sigma, measured, branch):
        raise NumericalDegeneracyError("Symplectic spectrum is degenerate", {"gap": 0.0})

    monkeypatch.setattr(series_module, "correlation_record", degenerate)
    result = invoke(runner, ["evolve", "--tau-max", "10", "--n-samples", "2", "--spacing", "linear",
                             "-o", str(tmp_path / "x.csv")])
    assert result.exit_code == EXIT_NUMERICAL
    assert "NUMERICAL_DEGENERACY" in result.stderr
    assert "at tau=0" in result.stderr
    assert not (tmp_path / "x.csv").exists()


def test_report_bits_scales_entropies(runner, tmp_path):
    nats, bits = tmp_path / "nats.csv", tmp_path / "bits.csv"
    invoke(runner, ["evolve", *SHORT_RUN, "--initial-state", "squeezed(0.5)", "-o", str(nats)])
    invoke(runner, ["evolve", *SHORT_RUN, "--initial-state", "squeezed(0.5)", "--report-bits", "-o", str(bits)])
    _, in_nats = read_columns(nats)
    _, in_bits = read_columns(bits)
    assert in_bits["mutual_information"] == pytest.approx([v * NATS_TO_BITS for v in in_nats["mutual_information"]])
    assert in_bits["ppt_nu_minus"] == in_nats["ppt_nu_minus"]


def test_config_file_and_flags(runner, tmp_path):
    config_path = tmp_path / "run.json"
    config_path.write_text(json.dumps({"model": "unitary", "tau_max": 5, "n_samples": 3, "spacing": "linear"}))
    out = tmp_path / "out.csv"
    result = invoke(runner, ["evolve", "--config", str(config_path), "--n-samples", "4", "-o", str(out)])
    assert result.exit_code == 0
    _, columns = read_columns(out)
    assert columns["tau"][-1] == 5.0
    assert len(columns["tau"]) == 4


@pytest.mark.parametrize("args", [
    ["evolve", "--eta", "1.5"],
    ["evolve", "--initial-state", "cat"],
    ["evolve", "--n-samples", "1"],
])
def test_invalid_settings_exit_with_usage_code(runner, tmp_path, args):
    result = invoke(runner, [*args, "-o", str(tmp_path / "x.csv")])
    assert result.exit_code == EXIT_USAGE
    assert not (tmp_path / "x.csv").exists()


def test_unknown_config_key(runner, tmp_path):
    config_path = tmp_path / "run.json"
    config_path.write_text(json.dumps({"modle": "ktm"}))
    result = invoke(runner, ["evolve", "--config", str(config_path)])
    assert result.exit_code == EXIT_USAGE
    assert "modle" in result.stderr


@pytest.mark.parametrize("args", [
    ["steady", "--model", "ktm"],
    ["steady", "--model", "unitary"],
    ["steady", "--model", "dktm", "--alpha-tilde", "0"],
])
def test_steady_needs_damping(runner, tmp_path, args):
    result = invoke(runner, [*args, "-o", str(tmp_path / "s.csv")])
    assert result.exit_code == EXIT_CAPABILITY
    assert "MODEL_CAPABILITY" in result.stderr


def test_steady_dktm(runner, tmp_path):
    out = tmp_path / "steady.csv"
    result = invoke(runner, ["steady", "--model", "dktm", "--alpha-tilde", "0.1", "-o", str(out)])
    assert result.exit_code == 0
    rows = dict(line.split(",") for line in out.read_text().splitlines()[1:])
    assert len(rows) == 19
    largest = max(abs(float(rows[f"sigma_{i}{j}"])) for i in range(1, 5) for j in range(1, 5))
    assert float(rows["lyapunov_residual"]) < 1e-10 * max(1.0, largest)
    assert float(rows["sigma_12"]) == float(rows["sigma_21"])
    assert float(rows["discord"]) <= float(rows["mutual_information"])


def test_sweep_single_value(runner, tmp_path):
    out = tmp_path / "sweep.csv"
    result = invoke(runner, ["sweep", "--axis", "squeezing", "--values", "0.5", *SHORT_RUN, "-o", str(out)])
    assert result.exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("value,peak_discord,peak_tau")
    assert len(lines) == 2
    assert lines[1].startswith("0.5,")


def test_sweep_is_byte_deterministic(runner, tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sweep", "--axis", "squeezing", "--values", "0,0.5,1", *SHORT_RUN]
    assert invoke(runner, [*args, "-o", str(first)]).exit_code == 0
    assert invoke(runner, [*args, "-o", str(second)]).exit_code == 0
    assert first.read_bytes() == second.read_bytes()
    assert len(first.read_text().splitlines()) == 4


def test_squeezing_sweep_honours_dktm_convention(runner, tmp_path):
    derived, printed = tmp_path / "derived.csv", tmp_path / "printed.csv"
    args = ["sweep", "--axis", "squeezing", "--values", "0.5", "--model", "dktm", "--alpha-tilde", "0.1", *SHORT_RUN]
    assert invoke(runner, [*args, "-o", str(derived)]).exit_code == 0
    assert invoke(runner, [*args, "--dktm-d11", "paper", "-o", str(printed)]).exit_code == 0
    _, derived_columns = read_columns(derived)
    _, printed_columns = read_columns(printed)
    assert derived_columns["asymptotic_discord"] != printed_columns["asymptotic_discord"]


@pytest.mark.parametrize("args", [
    ["--axis", "alpha", "--values", "0.1", "--model", "ktm"],
    ["--axis", "eta", "--values", "0.01", "--model", "dktm"],
    ["--axis", "squeezing", "--values", "1,0.5"],
    ["--axis", "alpha", "--values", "0,0.1", "--model", "dktm"],
    ["--axis", "squeezing", "--values", "a,b"],
])
def test_sweep_usage_errors(runner, tmp_path, args):
    result = invoke(runner, ["sweep", *args, "-o", str(tmp_path / "s.csv")])
    assert result.exit_code == EXIT_USAGE


def test_asymptote_domain(runner, tmp_path):
    result = invoke(runner, ["asymptote", "--eta", "0.1", "--tau-min", "10", "--tau-max", "100",
                             "-o", str(tmp_path / "a.csv")])
    assert result.exit_code == EXIT_USAGE
    assert "tau_min" in result.stderr


def test_asymptote_single_point(runner, tmp_path):
    out = tmp_path / "a.csv"
    result = invoke(runner, ["asymptote", "--eta", "0.1", "--tau-min", "100", "--tau-max", "100",
                             "--n", "1", "-o", str(out)])
    assert result.exit_code == 0
    header, columns = read_columns(out)
    assert header == ["tau", "formula_discord", "numeric_discord", "relative_gap"]
    assert columns["tau"] == [100.0]
    assert columns["formula_discord"][0] > 0.0


def test_plot_from_evolve_output(runner, tmp_path):
    csv_path = tmp_path / "evolve.csv"
    invoke(runner, ["evolve", *SHORT_RUN, "-o", str(csv_path)])

    result = invoke(runner, ["plot", str(csv_path), "-c", "discord,mutual_information"])
    assert result.exit_code == 0
    svg = (tmp_path / "evolve.svg").read_text()
    assert svg.count("<polyline") == 2

    again = tmp_path / "again.svg"
    invoke(runner, ["plot", str(csv_path), "-c", "discord,mutual_information", "-o", str(again)])
    assert again.read_bytes() == (tmp_path / "evolve.svg").read_bytes()


def test_plot_missing_column_lists_available(runner, tmp_path):
    csv_path = tmp_path / "evolve.csv"
    invoke(runner, ["evolve", *SHORT_RUN, "-o", str(csv_path)])
    result = invoke(runner, ["plot", str(csv_path), "-c", "negativity"])
    assert result.exit_code == EXIT_USAGE
    assert "tau, mutual_information, discord" in result.stderr
    assert not (tmp_path / "evolve.svg").exists()


def test_plot_missing_file(runner, tmp_path):
    result = invoke(runner, ["plot", str(tmp_path / "none.csv"), "-c", "discord"])
    assert result.exit_code == EXIT_USAGE


def test_physical_prints_coupling(runner):
    result = invoke(runner, ["physical", "--G", "0.25", "--m1", "1", "--m2", "1", "--d", "1", "--omega", "1"])
    assert result.exit_code == 0
    assert result.stdout.splitlines() == ["K = 0.5", "eta = 0.5"]


def test_physical_then_evolve(runner, tmp_path):
    out = tmp_path / "phys.csv"
    result = invoke(runner, ["physical", "--G", "0.01", "--m1", "1", "--m2", "1", "--d", "1", "--omega", "1",
                             "--then-evolve", "--tau-max", "5", "--n-samples", "3", "-o", str(out)])
    assert result.exit_code == 0
    assert "eta = 0.02" in result.stdout
    assert len(out.read_text().splitlines()) == 4


def test_physical_rejects_bad_mass(runner):
    result = invoke(runner, ["physical", "--m1", "-1", "--m2", "1", "--d", "1", "--omega", "1"])
    assert result.exit_code == EXIT_USAGE


def test_verbose_reports_memory(runner, tmp_path):
    result = invoke(runner, ["-v", "evolve", "--tau-max", "1", "--n-samples", "2", "-o", str(tmp_path / "v.csv")])
    assert result.exit_code == 0
    assert "Process memory" in result.stderr


@pytest.mark.slow
def test_steady_matches_long_evolution(runner, tmp_path):
    # Relaxation rate is alpha_tilde * eta, so 25 / (alpha_tilde * eta) leaves ~e^-25 of the start
    dktm = ["--model", "dktm", "--alpha-tilde", "0.1", "--eta", "0.01"]
    steady_csv, evolve_csv = tmp_path / "steady.csv", tmp_path / "evolve.csv"
    assert invoke(runner, ["steady", *dktm, "-o", str(steady_csv)]).exit_code == 0
    assert invoke(runner, ["evolve", *dktm, "--tau-max", "25000", "--n-samples", "2", "--spacing", "linear",
                           "-o", str(evolve_csv)]).exit_code == 0
    stationary = dict(line.split(",") for line in steady_csv.read_text().splitlines()[1:])
    _, evolved = read_columns(evolve_csv)
    assert evolved["discord"][-1] == pytest.approx(float(stationary["discord"]), abs=1e-6)
    assert evolved["mutual_information"][-1] == pytest.approx(float(stationary["mutual_information"]), abs=1e-6)
