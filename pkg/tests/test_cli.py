import csv
import io
import json

import pytest

from meanking.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main


def lines(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def test_verify_all_d3(capsys):
    assert main(["verify", "--dim", "3", "--suite", "all"]) == EXIT_OK
    out = lines(capsys.readouterr().out)
    assert out[-1]["summary"]["passed"] is True
    assert all(r["passed"] for r in out[:-1])


def test_verify_all_d7():
    assert main(["verify", "--dim", "7", "--suite", "all", "--format", "text", "--out", "/dev/null"]) == EXIT_OK


@pytest.mark.parametrize("dim", ["2", "9"])
def test_verify_rejects_bad_dimension(dim, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--dim", dim])
    assert exc.value.code == EXIT_USAGE
    assert "confined to d=p != 2" in capsys.readouterr().err


def test_verify_rejects_unknown_suite():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "nope"])
    assert exc.value.code == EXIT_USAGE


def test_verify_csv(capsys):
    assert main(["verify", "--dim", "5", "--suite", "geometry", "--format", "csv"]) == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert rows and all(r["passed"] == "True" and r["suite"] == "geometry" for r in rows)


def test_geometry_csv_d3(tmp_path):
    out = tmp_path / "incidence.csv"
    audit = tmp_path / "audit.json"
    assert main(["geometry", "--dim", "3", "--out", str(out), "--audit-out", str(audit)]) == EXIT_OK
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["line_mddot", "line_m0", "point_b", "point_m"]
    assert len(rows) == 1 + 36
    assert json.loads(audit.read_text())["passed"] is True


def test_geometry_json(capsys):
    assert main(["geometry", "--dim", "5", "--format", "json"]) == EXIT_OK
    out = lines(capsys.readouterr().out)
    assert len(out) == 25 * 6 + 1
    assert out[-1]["audit"]["passed"] is True


def test_mkp_exhaustive_d5(capsys):
    assert main(["mkp", "--dim", "5", "--king-basis", "3", "--exhaustive"]) == EXIT_OK
    out = lines(capsys.readouterr().out)
    summary = out[-1]["summary"]
    assert summary["accuracy"] == 1.0
    assert summary["branches"] == 25
    assert all(t["king_basis"] == 3 for t in out[:-1])


def test_mkp_sampled_is_byte_reproducible(capsys):
    argv = ["mkp", "--dim", "3", "--king-basis", "dd0", "--seed", "42", "--trials", "100"]
    assert main(argv) == EXIT_OK
    first = capsys.readouterr().out
    assert main(argv) == EXIT_OK
    second = capsys.readouterr().out
    assert first == second
    out = lines(first)
    assert len(out) == 101
    summary = out[-1]["summary"]
    assert summary["accuracy"] == 1.0
    for freq in summary["outcome_frequencies"].values():
        assert freq == pytest.approx(1 / 3, abs=0.2)


def test_mkp_sweeps_every_basis_when_none_given(capsys):
    assert main(["mkp", "--dim", "3"]) == EXIT_OK
    out = lines(capsys.readouterr().out)
    assert [t["king_basis"] for t in out[:-1]][::9] == ["dd0", 0, 1, 2]


def test_mkp_rejects_bad_basis():
    with pytest.raises(SystemExit) as exc:
        main(["mkp", "--dim", "3", "--king-basis", "7"])
    assert exc.value.code == EXIT_USAGE


def test_track_exhaustive_d5(capsys):
    assert main(["track", "--dim", "5", "--line", "1,2", "--king-basis", "3", "--exhaustive"]) == EXIT_OK
    summary = lines(capsys.readouterr().out)[-1]["summary"]
    assert summary["decode_accuracy"] == 1.0
    assert summary["erasure_fraction"] == pytest.approx(0.2)


def test_track_cb_keeps_mddot(capsys):
    assert main(["track", "--dim", "3", "--line", "0,0", "--king-basis", "dd0", "--exhaustive"]) == EXIT_OK
    out = lines(capsys.readouterr().out)
    assert all(t["control"]["mddot_prime"] == 0 for t in out[:-1])


def test_track_seeded_output_is_reproducible(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    argv = ["track", "--dim", "5", "--line", "1,2", "--king-basis", "3", "--seed", "7", "--trials", "1000"]
    assert main(argv + ["--out", str(a)]) == EXIT_OK
    assert main(argv + ["--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 1001


@pytest.mark.parametrize("line", ["1", "1,2,3", "a,b", "5,0", "-1,0"])
def test_track_rejects_bad_line(line):
    with pytest.raises(SystemExit) as exc:
        main(["track", "--dim", "5", "--line", line])
    assert exc.value.code == EXIT_USAGE


def test_track_text_format(capsys):
    assert main(["track", "--dim", "3", "--line", "0,1", "--king-basis", "1", "--format", "text"]) == EXIT_OK
    text = capsys.readouterr().out
    assert text.splitlines()[-1].startswith("summary: ")
    assert "undetermined" in text


def test_channel_message(capsys):
    assert main(["channel", "--dim", "3", "--message", "dd0,dd0,dd0,dd0", "--seed", "3"]) == EXIT_OK
    out = lines(capsys.readouterr().out)
    summary = out[-1]["summary"]
    assert summary["rounds"] == 4
    assert summary["message"] == ["dd0"] * 4
    for t in out[:-1]:
        assert t["inference"]["kind"] in ("basis", "undetermined")
        if t["inference"]["kind"] == "basis":
            assert t["inference"]["value"] == "dd0"


def test_channel_random_rounds(capsys):
    assert main(["channel", "--dim", "5", "--rounds", "200", "--seed", "11"]) == EXIT_OK
    summary = lines(capsys.readouterr().out)[-1]["summary"]
    assert summary["rounds"] == 200
    assert summary["decode_accuracy"] == 1.0
    assert 0.05 < summary["erasure_rate"] < 0.4


def test_channel_requires_message_or_rounds():
    with pytest.raises(SystemExit) as exc:
        main(["channel", "--dim", "3"])
    assert exc.value.code == EXIT_USAGE


def test_exit_codes_are_distinct():
    assert len({EXIT_OK, EXIT_FAILURE, EXIT_USAGE}) == 3
