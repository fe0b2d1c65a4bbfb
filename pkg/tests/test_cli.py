import json

from click.testing import CliRunner

from znbases.cli import main
from znbases.spectrum import ConjectureReport, SpectrumReport


def run(*args):
    return CliRunner().invoke(main, args, catch_exceptions=False)


def test_order_table():
    res = run("order", "--n", "9", "--set", "0,1,3")
    assert res.exit_code == 0
    assert res.output.strip() == "4"


def test_order_infinite_csv():
    res = run("order", "--n", "6", "--set", "0,2", "--format", "csv")
    assert res.exit_code == 0
    assert res.output.splitlines() == ["n,set,order", "6,0;2,inf"]


def test_order_trajectory_json():
    res = run("order", "--n", "9", "--set", "0,1,3", "--trajectory", "--format", "json")
    payload = json.loads(res.output)
    assert payload["sizes"] == [3, 6, 8, 9]
    assert payload["order"] == 4


def test_usage_errors_exit_2():
    assert run("order", "--n", "5", "--set", "0,7").exit_code == 2
    assert run("order", "--n", "5", "--set", "").exit_code == 2
    assert run("kl-bound", "--n", "10", "--rho", "1").exit_code == 2
    assert run("spectrum", "--n", "40").exit_code == 2  # over the exhaustive limit
    assert run("conjecture", "--k", "2").exit_code == 2  # neither --n nor --n-range


def test_spectrum_csv_matches_spec_example():
    res = run("spectrum", "--n", "7", "--exhaustive", "--format", "csv")
    assert res.exit_code == 0
    lines = res.output.splitlines()
    assert lines[0] == "n,order,witness"
    orders = [line.split(",")[1] for line in lines[1 : 1 + 4]]
    assert orders == ["1", "2", "3", "6"]
    gap_at = lines.index("n,gap_start,gap_end")
    assert lines[gap_at + 1] == "7,4,5"


def test_spectrum_json_round_trip():
    res = run("spectrum", "--n", "9", "--format", "json")
    report = SpectrumReport.from_dict(json.loads(res.output))
    assert report.n == 9
    assert json.loads(res.output) == report.to_dict()


def test_spectrum_shard_determinism():
    one = run("spectrum", "--n", "13", "--shards", "1", "--format", "csv").output
    eight = run("spectrum", "--n", "13", "--shards", "8", "--format", "csv").output
    assert one == eight


def test_conjecture_single_json_round_trip():
    res = run("conjecture", "--k", "2", "--n", "12", "--format", "json")
    report = ConjectureReport.from_dict(json.loads(res.output))
    assert report.to_dict() == json.loads(res.output)
    assert report.n == 12 and report.k == 2


def test_conjecture_range_csv():
    res = run(
        "conjecture", "--k", "3", "--n-range", "20..24",
        "--max-card", "6", "--format", "csv",
    )
    lines = res.output.splitlines()
    assert lines[0] == "n,k,max_min_gap,running_max,argmax_witness,caveat"
    assert len(lines) == 6
    assert all(line.endswith("true") for line in lines[1:])  # capped => caveat


def test_kl_bound_output():
    res = run("kl-bound", "--n", "12", "--rho", "5", "--format", "csv")
    lines = res.output.splitlines()
    assert "12,5,6,4" in lines and "12,5,12,3" in lines
    assert lines[-1] == "12,5,4"


def test_kl_bound_check_verifies_enumerated_bases():
    res = run("kl-bound", "--n", "12", "--rho", "5", "--check", "--format", "csv")
    assert res.exit_code == 0
    assert res.output.splitlines()[-1].endswith(",0")  # zero violations


def test_fl_check_pass_and_fail_exit_codes():
    assert run("fl-check", "--set", "0,1,3", "--h-max", "5").exit_code == 0
    # hypothesis fails: nothing asserted, exit 0
    assert run("fl-check", "--set", "0,2,3,7", "--h-max", "3").exit_code == 0


def test_sandwich_exit_codes():
    assert run("sandwich", "--n", "9", "--a", "3", "--b", "1").exit_code == 0
    res = run("sandwich", "--n", "20", "--a", "2", "--b", "19")
    assert res.exit_code == 1  # measured order under the claimed lower bound
    assert run("sandwich", "--n", "9", "--a", "2", "--b", "1").exit_code == 2


def test_pigeonhole_output():
    res = run("pigeonhole", "--n", "100", "--k", "4", "--t", "34", "--format", "csv")
    assert res.exit_code == 0
    row = res.output.splitlines()[1].split(",")
    assert row[:6] == ["100", "4", "34", "3", "2", "2"]
    assert row[9:12] == ["1", "2", "true"]


def test_df_analyze_json():
    res = run(
        "df-analyze", "--n", "20", "--set", "0,4,8,12,16,1", "--format", "json"
    )
    payload = json.loads(res.output)
    assert payload["double_size"] == 11
    assert payload["best"]["m"] == 5


def test_pipeline_json():
    res = run(
        "pipeline", "--n", "20", "--set", "0,4,8,12,16,1", "--k", "3",
        "--format", "json",
    )
    payload = json.loads(res.output)
    assert payload["j"] == 0 and payload["m"] == 5 and payload["branch"] == "generic"


def test_family_csv_schema():
    res = run("family", "--k", "3", "--n-range", "17..29", "--format", "csv")
    lines = res.output.splitlines()
    assert lines[0] == "k,n,rho,nearest_l,min_gap"
    assert lines[1] == "3,17,6,3,1/3"
    assert lines[2] == "3,20,7,3,1/3"


def test_repeated_runs_are_byte_identical():
    for args in (
        ("spectrum", "--n", "11", "--format", "json"),
        ("conjecture", "--k", "3", "--n", "30", "--max-card", "5", "--format", "csv"),
        ("family", "--k", "4", "--n-range", "20..60", "--format", "csv"),
    ):
        assert run(*args).output == run(*args).output


def test_version_mentions_schema():
    res = run("--version")
    assert res.exit_code == 0
    assert "schema" in res.output
