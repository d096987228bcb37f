import json
import math
from io import StringIO

import pandas as pd
import pytest
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import override_settings

from outpost.django.grover.operators import SIX_STAGE_ALPHAS

SIX_STAGE = ",".join(repr(a) for a in SIX_STAGE_ALPHAS)


def grover(*args) -> str:
    out = StringIO()
    call_command("grover", *args, stdout=out)
    return out.getvalue()


def failing(*args) -> CommandError:
    with pytest.raises(CommandError) as excinfo:
        grover(*args)
    return excinfo.value


class TestProfile:
    def test_six_stage(self, tmp_path):
        path = tmp_path / "profile.csv"
        grover("profile", "--alphas", SIX_STAGE, "--grid", "0.001:1:1000", "--out", str(path))
        frame = pd.read_csv(path)
        assert list(frame.columns) == ["lambda", "P1", "P2", "P3", "P4", "P5", "P6"]
        assert len(frame) == 1000
        assert frame.loc[frame["lambda"] >= 0.1, "P6"].min() >= 0.9975

    def test_schedule_file(self, tmp_path):
        path = tmp_path / "schedule.json"
        path.write_text(json.dumps({"alphas": list(SIX_STAGE_ALPHAS)}))
        from_file = grover("profile", "--schedule", str(path), "--grid", "0.1:1:10")
        from_list = grover("profile", "--alphas", SIX_STAGE, "--grid", "0.1:1:10")
        assert from_file == from_list

    def test_explicit_betas(self):
        text = grover(
            "profile", "--alphas", "3.141592653589793", "--betas=3.141592653589793",
            "--grid", "0.25:1:4",
        )
        frame = pd.read_csv(StringIO(text))
        assert frame["P1"][0] == pytest.approx(1)

    def test_repeated(self):
        text = grover("profile", "--alphas", repr(math.pi), "--k", "3", "--grid", "0:1:5")
        assert pd.read_csv(StringIO(text)).columns[-1] == "P3"

    def test_malformed_schedule(self, tmp_path):
        path = tmp_path / "schedule.json"
        path.write_text('{"alphas": [1.0,\n')
        error = failing("profile", "--schedule", str(path))
        assert error.returncode == 1
        assert "line" in str(error)

    def test_invalid_schedule(self, tmp_path):
        path = tmp_path / "schedule.json"
        path.write_text(json.dumps({"alphas": [1.0, 2.0], "betas": [1.0]}))
        assert failing("profile", "--schedule", str(path)).returncode == 1

    @pytest.mark.parametrize("grid", ["1:0:10", "0:1:1", "0:2:10", "0:1"])
    def test_invalid_grid(self, grid):
        assert failing("profile", "--alphas", "1.0", "--grid", grid).returncode == 1

    def test_missing_schedule(self):
        assert failing("profile").returncode == 1


class TestFit:
    def test_deterministic(self, tmp_path):
        outputs = []
        for run in range(2):
            report = tmp_path / f"report{run}.json"
            profile = tmp_path / f"profile{run}.csv"
            grover(
                "fit", "--k", "1", "--grid", "0.1:1:32", "--restarts", "2",
                "--out", str(report), "--profile-out", str(profile),
            )
            outputs.append((report.read_bytes(), profile.read_bytes()))
        assert outputs[0] == outputs[1]
        document = json.loads(outputs[0][0])
        assert document["k"] == 1
        assert document["objective"] == "sum-of-squares"
        assert document["converged"]

    def test_invalid_k(self):
        assert failing("fit", "--k", "0").returncode == 1


class TestSolve2:
    def test_golden_pair(self):
        solutions = json.loads(grover("solve2", "--lambdas", "0.4,0.8"))
        assert any(
            s["alpha1"] == pytest.approx(1.00889485, abs=1e-6)
            and s["alpha2"] == pytest.approx(2.30794928, abs=1e-6)
            for s in solutions
        )
        assert all(s["beta1"] == -s["alpha2"] for s in solutions)

    def test_infeasible(self):
        assert failing("solve2", "--lambdas", "0.05,0.06").returncode == 2

    def test_surface(self):
        frame = pd.read_csv(StringIO(grover("solve2", "--surface", "5")))
        assert len(frame) == 25
        assert list(frame.columns) == [
            "alpha1",
            "alpha2",
            "discriminant",
            "degenerate",
            "smaller_root",
        ]


def test_roots():
    document = json.loads(grover("roots", "--alphas", repr(math.pi)))
    assert document["unit_roots"] == pytest.approx([0.25], abs=1e-10)


class TestIterate:
    def test_optimal(self):
        document = json.loads(grover("iterate", "--lambda", "0.01"))
        assert document["iterations"] == 7

    def test_unity_roots(self):
        document = json.loads(grover("iterate", "--alphas", repr(math.pi), "--k", "6"))
        assert document["unity_roots"][0] == pytest.approx(0.014529, abs=1e-6)

    def test_needs_arguments(self):
        assert failing("iterate").returncode == 1

    def test_phase_wrapped(self):
        alpha = repr(1.0 + 2 * math.pi)
        document = json.loads(grover("iterate", "--alphas", alpha, "--k", "2"))
        assert document["alpha"] == pytest.approx(1.0, abs=1e-12)


def test_envelope():
    frame = pd.read_csv(
        StringIO(grover("envelope", "--alphas", "0,1.5", "--grid", "0:1:11"))
    )
    assert list(frame.columns) == ["lambda", "alpha=0", "alpha=1.5"]
    assert frame["alpha=0"].tolist() == pytest.approx(frame["lambda"].tolist())


def test_classical():
    frame = pd.read_csv(
        StringIO(grover("classical", "--N", "4", "--marked", "2", "--k", "4"))
    )
    assert frame["exact"][1] == pytest.approx(5 / 6, abs=1e-11)
    assert frame["exhausted"].tolist() == [False, False, False, True]


class TestVerify:
    def test_random(self):
        document = json.loads(grover("verify", "--n", "8", "--marked", "37", "--k", "6"))
        assert document["passed"]
        assert document["marked"] == 37
        assert document["max_gap"] <= 1e-10
        assert len(document["probabilities"]) == 6

    def test_indices(self):
        document = json.loads(
            grover("verify", "--alphas", repr(math.pi), "--n", "2", "--marked", "3,")
        )
        assert document["probabilities"] == pytest.approx([1.0])

    @pytest.mark.parametrize("marked", ["abc", "1,x", ",", "2.5"])
    def test_malformed_marked(self, marked):
        error = failing("verify", "--n", "3", "--marked", marked, "--k", "1")
        assert error.returncode == 1

    def test_too_large(self):
        assert failing("verify", "--n", "20", "--marked", "1", "--k", "1").returncode == 1

    def test_failure(self):
        with override_settings(GROVER_VERIFY_TOLERANCE=-1.0):
            error = failing("verify", "--n", "3", "--marked", "2", "--k", "2")
        assert error.returncode == 3


def test_equiv():
    document = json.loads(
        grover("equiv", "--alphas", "1.2", "--betas=-0.7", "--lambda", "0.3", "--k", "4")
    )
    assert document["probability_gap"] <= 1e-12
    assert document["amplitude_gap"] > 1e-6
