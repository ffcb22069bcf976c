import json

import h5py
import numpy as np
import pytest

from bioblend.cli import main

SMALL = ["--n-labels", "5", "--n-samples-per-label", "8", "--n-true-features", "3",
         "--n-fake-features", "4", "--n-features-out", "60", "--seed", "11"]


def test_generate_writes_hdf5_and_nothing_to_stdout(tmp_path, capsys):
    out = tmp_path / "d.h5"
    assert main(["generate", *SMALL, "--store-hidden", "--output", str(out)]) == 0
    assert capsys.readouterr().out == ""
    with h5py.File(out, "r") as f:
        assert f["features"].shape == (40, 60)
        assert "hidden/features" in f
        assert f.attrs["seed"] == 11


def test_generate_is_reproducible(tmp_path):
    # the output path is recorded in the file, so rerun into the same path
    out = tmp_path / "d.h5"
    main(["generate", *SMALL, "--output", str(out)])
    first = out.read_bytes()
    out.unlink()
    main(["generate", *SMALL, "--output", str(out)])
    assert out.read_bytes() == first


def test_seed_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("BIOBLEND_SEED", "77")
    out = tmp_path / "d.h5"
    args = [a for a in SMALL if a not in ("--seed", "11")]
    assert main(["generate", *args, "--output", str(out)]) == 0
    with h5py.File(out, "r") as f:
        assert f.attrs["seed"] == 77


def test_config_errors_exit_2(tmp_path, capsys):
    code = main(["generate", "--n-labels", "0", "--average-shared-locations", "5",
                 "--output", str(tmp_path / "x.h5")])
    assert code == 2
    err = capsys.readouterr().err
    assert "n-labels must be >= 2" in err
    assert "average-shared-locations" in err
    assert not (tmp_path / "x.h5").exists()


def test_output_required(capsys):
    assert main(["generate", *SMALL]) == 2


def test_argparse_rejects_bad_choice():
    with pytest.raises(SystemExit) as exc:
        main(["generate", "--blending-mode", "cubic"])
    assert exc.value.code == 2


def test_io_error_exit_3(tmp_path):
    assert main(["generate", *SMALL, "--output", str(tmp_path / "no" / "d.h5")]) == 3
    assert main(["validate", "--input", str(tmp_path / "missing.h5")]) == 3


def test_dry_run(capsys):
    assert main(["generate", "--dry-run", "--n-labels", "20"]) == 0
    shown = json.loads(capsys.readouterr().out)
    assert shown["config"]["n_labels"] == 20
    assert shown["derived"]["n_hidden"] == 200
    assert shown["derived"]["n_transitional"] == 20300


def test_key_value_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# small run\nn-labels = 3\nn-samples-per-label=4\nn-true-features=2\n"
                   "n-fake-features=1\nn-features-out=7\nseed=5\n")
    out = tmp_path / "d.h5"
    assert main(["generate", "--config", str(cfg), "--n-features-out", "9", "--output", str(out)]) == 0
    with h5py.File(out, "r") as f:
        assert f["features"].shape == (12, 9)


def test_csv_export_flag(tmp_path):
    assert main(["generate", *SMALL, "--output", str(tmp_path / "d.h5"), "--csv", str(tmp_path / "csv")]) == 0
    assert (tmp_path / "csv" / "features.csv").exists()
    assert (tmp_path / "csv" / "labels.csv").exists()


@pytest.mark.filterwarnings("ignore:k=")
def test_validate_writes_report_csv_and_figures(tmp_path, capsys):
    data = tmp_path / "d.h5"
    main(["generate", *SMALL, "--store-hidden", "--output", str(data)])
    capsys.readouterr()
    report = tmp_path / "out" / "rep.json"
    assert main(["validate", "--input", str(data), "--k-list", "5,10,100", "--folds", "4",
                 "--neighbors", "1,3", "--report", str(report)]) == 0
    printed = capsys.readouterr().out
    assert "1-NN" in printed and "3-NN" in printed and "true hidden" in printed
    body = json.loads(report.read_text())
    assert body["k_list"] == [5, 10, 60]
    assert set(body["screened"]["1"]) == {"5", "10", "60"}
    rows = (tmp_path / "out" / "rep_curve.csv").read_text().splitlines()
    assert rows[0] == "neighbors,k,accuracy"
    assert len(rows) == 1 + 2 * (1 + 3 + 1)
    for name in ("screening_curve", "f_scores", "usefulness"):
        png = tmp_path / "out" / f"rep_{name}.png"
        assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_validate_without_hidden_skips_usefulness_figure(tmp_path):
    data = tmp_path / "d.h5"
    main(["generate", *SMALL, "--output", str(data)])
    report = tmp_path / "rep.json"
    assert main(["validate", "--input", str(data), "--k-list", "5", "--report", str(report)]) == 0
    assert (tmp_path / "rep_screening_curve.png").exists()
    assert not (tmp_path / "rep_usefulness.png").exists()
    assert json.loads(report.read_text())["true_features"] is None


@pytest.mark.filterwarnings("ignore:k=")
def test_validate_bad_list(tmp_path):
    data = tmp_path / "d.h5"
    main(["generate", *SMALL, "--output", str(data)])
    assert main(["validate", "--input", str(data), "--k-list", "a,b"]) == 2
    assert main(["validate", "--input", str(data), "--neighbors", "0"]) == 2
    assert main(["validate", "--input", str(data), "--folds", "9"]) == 2


def test_help_lists_defaults(capsys):
    with pytest.raises(SystemExit):
        main(["generate", "--help"])
    text = capsys.readouterr().out
    assert "--average-consecutive-locations" in text
    assert "(default: 100)" in text
    assert "[extension]" in text
