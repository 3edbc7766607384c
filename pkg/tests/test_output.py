"""
Tests for secretary_cutoffs.output
"""

import json
from pathlib import Path

import numpy as np
import pytest

from secretary_cutoffs import __version__
from secretary_cutoffs.models import CutoffMethod, PowerLawFit, RunManifest, SweepRecord
from secretary_cutoffs.output import FileManager, ManifestBuilder, ResultRenderer, SweepCsvWriter, format_float
from secretary_cutoffs.output.renderers import to_plain

MANIFEST = RunManifest(command="eval", parameters={"n": 3}, seed=None, tool_version="0.1.0", timestamp="2023-11-14T22:13:20+00:00")
COLUMNS = ["c", "expected_utility", "delta"]
ROWS = [{"c": 1, "expected_utility": -0.5, "delta": None}, {"c": 2, "expected_utility": -5 / 12, "delta": 1 / 12}]


class TestFormatting:
    """Tests for number formatting"""

    @pytest.mark.parametrize("value, expected", [(-5 / 12, "-0.416666666667"), (0.1, "0.1"), (1e-13, "1e-13"), (100.0, "100"), (None, "")])
    def test_format_float(self, value, expected):
        """Test 12 significant digits"""
        assert format_float(value) == expected

    def test_to_plain(self):
        """Test numpy scalars, enums and tuples become JSON types"""
        plain = to_plain({"a": np.int64(3), "b": np.float64(1 / 3), "c": CutoffMethod.FULL_SCAN, "d": (1, 2), "e": Path("x.csv"), "f": True})

        assert plain == {"a": 3, "b": 0.333333333333, "c": "full-scan", "d": [1, 2], "e": "x.csv", "f": True}
        assert type(plain["a"]) is int


class TestResultRenderer:
    """Tests for ResultRenderer"""

    def test_text(self):
        """Test aligned columns with '-' for missing values"""
        text = ResultRenderer("text").render(COLUMNS, ROWS, MANIFEST, {"note": "ok"})
        lines = text.splitlines()

        assert lines[0].split() == COLUMNS
        assert lines[1].split() == ["1", "-0.5", "-"]
        assert lines[-1] == "# note: ok"

    def test_csv(self):
        """Test CSV with empty cells for missing values"""
        text = ResultRenderer("csv").render(COLUMNS, ROWS, MANIFEST)
        assert text == "c,expected_utility,delta\n1,-0.5,\n2,-0.416666666667,0.0833333333333\n"

    def test_json(self):
        """Test JSON document with manifest, results and summary"""
        text = ResultRenderer("json").render(COLUMNS, ROWS, MANIFEST, {"methods_agree": True})
        document = json.loads(text)

        assert document["manifest"]["command"] == "eval"
        assert document["results"][1] == {"c": 2, "delta": 0.0833333333333, "expected_utility": -0.416666666667}
        assert document["summary"] == {"methods_agree": True}
        assert text.endswith("}\n")

    def test_json_round_trip(self):
        """Test parse then render reproduces the bytes"""
        text = ResultRenderer("json").render(COLUMNS, ROWS, MANIFEST)
        assert ResultRenderer.render_json(json.loads(text)) == text

    def test_unknown_format(self):
        """Test unsupported formats are rejected"""
        with pytest.raises(ValueError):
            ResultRenderer("xml")


class TestSweepCsvWriter:
    """Tests for SweepCsvWriter"""

    RECORDS = [SweepRecord("topk:1", 200, 74, 0.369), SweepRecord("topk:1", 400, 148, 0.368), SweepRecord("topk:1", 800, 295, 0.368)]

    def test_fit_footer(self):
        """Test rows and fit footer"""
        fit = PowerLawFit(exponent=0.99, log_intercept=-0.95, r_squared=0.999, points=3)
        lines = SweepCsvWriter.render(self.RECORDS, [None, None, 0.99], fit).splitlines()

        assert lines[0] == "objective,n,c_opt,value,bound,exponent_running"
        assert lines[1] == "topk:1,200,74,0.369,,"
        assert lines[3] == "topk:1,800,295,0.368,,0.99"
        assert lines[4] == "# fit exponent=0.99 log_intercept=-0.95 r_squared=0.999 points=3"

    def test_fit_unavailable(self):
        """Test footer without a fit"""
        text = SweepCsvWriter.render(self.RECORDS, [None] * 3, None, "constant series")
        assert text.endswith("# fit unavailable: constant series\n")


class TestManifestBuilder:
    """Tests for ManifestBuilder"""

    def test_source_date_epoch(self, monkeypatch):
        """Test timestamps honour SOURCE_DATE_EPOCH"""
        monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
        manifest = ManifestBuilder().build("sim", {"seed": 1, "n": 3}, seed=1)

        assert manifest.timestamp == "2023-11-14T22:13:20+00:00"
        assert list(manifest.parameters) == ["n", "seed"]
        assert manifest.tool_version == __version__

    def test_invalid_epoch_uses_now(self, monkeypatch):
        """Test a malformed epoch falls back to the clock"""
        monkeypatch.setenv("SOURCE_DATE_EPOCH", "yesterday")
        assert ManifestBuilder.timestamp().endswith("+00:00")


class TestFileManager:
    """Tests for FileManager class"""

    def test_write_atomic(self, tmp_path):
        """Test content lands in place and the temp file is gone"""
        target = tmp_path / "deep" / "out.csv"
        FileManager().write_atomic(target, "a,b\n1,2\n")

        assert target.read_text() == "a,b\n1,2\n"
        assert not (target.parent / ".tmp_out.csv").exists()

    def test_write_atomic_failure_cleans_up(self, tmp_path, mocker):
        """Test a failed rename leaves no temp file behind"""
        target = tmp_path / "out.csv"
        mocker.patch("secretary_cutoffs.output.file_manager.os.replace", side_effect=OSError("disk full"))

        with pytest.raises(OSError):
            FileManager().write_atomic(target, "x")

        assert not target.exists()
        assert not (tmp_path / ".tmp_out.csv").exists()

    def test_read_text_missing(self, tmp_path):
        """Test missing files read as None"""
        assert FileManager().read_text(tmp_path / "missing.json") is None
