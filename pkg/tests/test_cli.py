import json
import subprocess
import sys

import pytest

PY = [sys.executable, "-m", "detecon.cli"]


def run_cli(*args, check=True):
    result = subprocess.run(
        PY + list(args), capture_output=True, text=True, check=False
    )
    if check and result.returncode != 0:
        raise AssertionError(f"cli failed ({result.returncode}): {result.stderr}")
    return result


class TestBreakeven:
    def test_reference_numbers(self):
        result = run_cli(
            "breakeven", "--upfront", "11616", "--api-price", "0.00025",
            "--sup-cost", "0.00004",
        )
        payload = json.loads(result.stdout)
        assert round(payload["volume"]) == 55_314_286
        assert round(payload["daily_for_one_year"]) == 151_546
        # structured output stays clean of log text
        assert "break-even" not in result.stdout
        assert "break-even" in result.stderr

    def test_zero_margin_exits_one(self):
        result = run_cli(
            "breakeven", "--upfront", "100", "--api-price", "0.001",
            "--sup-cost", "0.001", check=False,
        )
        assert result.returncode == 1
        assert "no finite break-even" in result.stderr

    def test_scale_and_profile_lookup(self):
        result = run_cli("breakeven", "--scale", "large", "--profile", "gemini-flash-2.5")
        assert round(json.loads(result.stdout)["volume"]) == 55_314_286


class TestExitCodes:
    def test_help_exits_zero(self):
        assert run_cli("tco", "--help", check=False).returncode == 0

    def test_unknown_subcommand_exits_one(self):
        result = run_cli("frobnicate", check=False)
        assert result.returncode == 1

    def test_no_subcommand_prints_usage(self):
        result = run_cli(check=False)
        assert result.returncode == 1
        assert "usage" in result.stderr.lower()

    def test_missing_file_exits_two(self):
        result = run_cli(
            "sample", "--dataset", "/nonexistent/nowhere.json", check=False
        )
        assert result.returncode == 2


class TestCurve:
    def test_csv_golden_columns(self):
        result = run_cli("ccd-curve", "--format", "csv")
        lines = result.stdout.strip().split("\n")
        assert lines[0] == "volume,model,tco_usd,ccd_usd"
        gemini_tco = [
            float(line.split(",")[2]) for line in lines[1:]
            if line.split(",")[1] == "gemini-flash-2.5"
        ]
        assert gemini_tco == pytest.approx(
            [0.25, 2.5, 25.0, 250.0, 2500.0, 12500.0, 25000.0, 37500.0, 50000.0]
        )

    def test_custom_volumes(self):
        result = run_cli("ccd-curve", "--format", "csv", "--volumes", "1000,2000")
        rows = result.stdout.strip().split("\n")[1:]
        assert len(rows) == 6  # 2 volumes x 3 default models


class TestTco:
    def test_json_rows(self):
        result = run_cli(
            "tco", "--scale", "large", "--profile", "gemini-flash-2.5",
            "--volumes", "0,50000000",
        )
        rows = json.loads(result.stdout)
        assert rows[0]["supervised"] == pytest.approx(11_616.0)
        assert rows[1]["supervised"] == pytest.approx(13_616.0)
        assert rows[1]["gemini-flash-2.5"] == pytest.approx(12_500.0)


class TestDecideAndScenario:
    def test_decide_preset(self):
        result = run_cli("decide", "--preset", "startup-ecommerce")
        doc = json.loads(result.stdout)
        assert doc["choice"] == "api"
        assert doc["chosen_profile"] == "gemini-flash-2.5"

    def test_decide_unknown_preset(self):
        result = run_cli("decide", "--preset", "nope", check=False)
        assert result.returncode == 1

    def test_decide_markdown_brief(self):
        result = run_cli("decide", "--preset", "medical-imaging", "--format", "md")
        assert result.stdout.startswith("## medical-imaging")
        assert "Recommendation: hybrid" in result.stdout
        assert "R7-hybrid" in result.stdout

    def test_scenario_out_dir(self, tmp_path):
        out = tmp_path / "reports"
        run_cli("scenario", "--preset", "all", "--out-dir", str(out))
        assert (out / "report.md").exists()
        assert (out / "report.csv").exists()
        assert (out / "discrepancies.json").exists()

    def test_decide_scenario_file(self, tmp_path):
        scenario = {
            "name": "adhoc",
            "daily_volume": 200_000,
            "n_categories": 100,
            "budget_upfront": 100_000,
            "accuracy_floor": 0.9,
            "latency_budget_ms": 30,
            "deployment_lifetime_days": 365,
        }
        path = tmp_path / "scenario.json"
        path.write_text(json.dumps({"scenarios": [scenario]}), "utf-8")
        result = run_cli("decide", "--scenario", str(path))
        assert json.loads(result.stdout)["choice"] == "supervised"


class TestSample:
    def test_cli_sampling_deterministic(self, tmp_path):
        images = []
        for i in range(60):
            side = (10, 10) if i < 20 else ((50, 100) if i < 40 else (200, 100))
            images.append({"id": i, "width": 640, "height": 480,
                           "objects": [{"category": "x", "bbox": [0, 0, side[0], side[1]]}]})
        dataset = tmp_path / "gt.json"
        dataset.write_text(json.dumps({"images": images}), "utf-8")
        out1, out2 = tmp_path / "a.txt", tmp_path / "b.txt"
        args = ["sample", "--dataset", str(dataset), "--small", "5",
                "--medium", "5", "--large", "5"]
        run_cli(*args, "--output", str(out1))
        run_cli(*args, "--output", str(out2))
        assert out1.read_bytes() == out2.read_bytes()
        assert len(out1.read_text().splitlines()) == 15


class TestStats:
    def test_paired_csv(self, tmp_path):
        csv_path = tmp_path / "outcomes.csv"
        csv_path.write_text("model_a,model_b\n1,0\n1,1\n0,0\n1,0\n1,1\n0,1\n", "utf-8")
        result = run_cli("stats", "--csv", str(csv_path), "--iterations", "200")
        doc = json.loads(result.stdout)
        assert doc["labels"] == ["model_a", "model_b"]
        assert "paired_t" in doc and doc["n"] == 6


class TestEvaluate:
    def test_end_to_end(self, tmp_path):
        gt = {
            "images": [
                {"id": 1, "width": 640, "height": 480,
                 "objects": [{"category": "cat", "bbox": [0, 0, 100, 100]}]},
                {"id": 2, "width": 640, "height": 480,
                 "objects": [{"category": "cat", "bbox": [0, 0, 100, 100]}]},
            ]
        }
        preds = [
            {"image_id": 1, "category": "cat", "detected": True, "confidence": 0.9,
             "bounding_box": {"x_min": 0, "y_min": 0, "x_max": 100, "y_max": 90}},
            {"image_id": 2, "category": "cat", "detected": False, "confidence": 0.0},
        ]
        gt_path = tmp_path / "gt.json"
        gt_path.write_text(json.dumps(gt), "utf-8")
        pred_path = tmp_path / "preds.json"
        pred_path.write_text(json.dumps(preds), "utf-8")
        result = run_cli("evaluate", "--gt", str(gt_path), "--pred", f"m1={pred_path}")
        doc = json.loads(result.stdout)
        assert doc["m1"]["accuracy_at"]["0.5"] == 0.5
        assert doc["m1"]["mean_iou"] == pytest.approx(0.45)
        md = run_cli("evaluate", "--gt", str(gt_path), "--pred", f"m1={pred_path}",
                     "--format", "md").stdout
        assert md.startswith("| Metric | m1 |")


class TestParseVlm:
    def test_batch_conversion(self, tmp_path):
        lines = [
            json.dumps({"text": '{"detected": false, "confidence": 0.0}',
                        "image_width": 640, "image_height": 480,
                        "category_queried": "cat", "image_id": 1}),
            json.dumps({"text": "not json at all", "image_width": 640,
                        "image_height": 480, "category_queried": "cat", "image_id": 2}),
        ]
        responses = tmp_path / "responses.jsonl"
        responses.write_text("\n".join(lines) + "\n", "utf-8")
        out = tmp_path / "preds.json"
        errors = tmp_path / "errors.json"
        run_cli("parse-vlm", "--responses", str(responses),
                "--output", str(out), "--errors", str(errors))
        preds = json.loads(out.read_text("utf-8"))
        assert len(preds) == 2 and all(not p["detected"] for p in preds)
        summary = json.loads(errors.read_text("utf-8"))
        assert summary["by_class"]["ParseError"] == 1


class TestReproduceTables:
    def test_out_dir_files(self, tmp_path):
        out = tmp_path / "tables"
        result = run_cli("reproduce-tables", "--out-dir", str(out))
        assert (out / "cost_structure.csv").exists()
        assert (out / "efficiency.csv").exists()
        report = json.loads((out / "discrepancies.json").read_text("utf-8"))
        assert report["n_mismatching"] > 0
        assert "[PASS]" in result.stderr and "[FAIL]" in result.stderr

    def test_stdout_json(self):
        result = run_cli("reproduce-tables")
        report = json.loads(result.stdout)
        assert report["n_cells"] == report["n_matching"] + report["n_mismatching"]


class TestDeterminism:
    def test_identical_args_identical_bytes(self):
        a = run_cli("ccd-curve", "--format", "csv").stdout
        b = run_cli("ccd-curve", "--format", "csv").stdout
        assert a == b
