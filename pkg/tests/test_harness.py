import math

import numpy as np
import pytest

from bofip.driver import BofipConfig, RunRecord, record_best
from bofip.errors import ParseError
from bofip.harness import (
    ExperimentConfig,
    emit_trace,
    mean_and_two_se,
    read_trace,
    run_experiment,
)
from bofip.surrogate import GpConfig

FAST_GP = GpConfig(restarts=2, maxiter=20)


def sphere_experiment(outdir, replications=3, seed=0, **overrides):
    bofip = BofipConfig(
        p=2, n_g=9, sweeps=2, bo_budget=9, n_complements=1,
        grid_scheme="uniform-lattice", gp=FAST_GP,
    )
    base = dict(
        problem="sphere", d=4, bofip=bofip, replications=replications,
        outdir=outdir, base_seed=seed,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


class TestRunExperiment:
    def test_file_count_contract(self, tmp_path):
        summary, paths = run_experiment(sphere_experiment(tmp_path, replications=3))
        traces = [p for p in paths if p.name.startswith("trace_")]
        assert len(traces) == 3
        assert paths[-1].name == "summary.csv"
        assert all(p.exists() for p in paths)

    def test_zero_variance_gives_zero_se(self, tmp_path):
        # Every replication of the tiny sphere run lands exactly on the
        # origin, so the gap spread collapses.
        summary, _ = run_experiment(sphere_experiment(tmp_path, replications=3))
        assert summary.mean_gap == 0.0
        assert summary.two_se_gap == 0.0

    def test_gap_soundness(self, tmp_path):
        summary, _ = run_experiment(sphere_experiment(tmp_path, replications=2))
        for r in summary.per_replication:
            assert r.gap >= 0.0
            assert (r.gap == 0.0) == (r.best_f == 0.0)

    def test_replication_seeds_derived_from_base(self, tmp_path):
        summary, _ = run_experiment(
            sphere_experiment(tmp_path, replications=3, seed=40)
        )
        assert [r.seed for r in summary.per_replication] == [40, 41, 42]

    def test_unwritable_outdir_fails_before_any_run(self, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("file, not a directory")
        calls = []
        config = sphere_experiment(blocker / "sub")
        with pytest.raises(OSError):
            run_experiment(config)
        assert calls == []

    def test_truncation_still_yields_valid_files(self, tmp_path):
        config = sphere_experiment(tmp_path, replications=1,
                                   wall_clock_limit=0.05)
        summary, paths = run_experiment(config)
        assert math.isfinite(summary.mean_best_f)
        rows = read_trace(paths[0])
        assert rows  # at least the initial design reported a record

    def test_byte_identical_summaries(self, tmp_path):
        c1 = sphere_experiment(tmp_path / "a", replications=2, seed=9)
        c2 = sphere_experiment(tmp_path / "b", replications=2, seed=9)
        _, p1 = run_experiment(c1)
        _, p2 = run_experiment(c2)
        assert p1[-1].read_bytes() == p2[-1].read_bytes()


class TestMetrics:
    def test_mean_and_two_se_hand_computed(self):
        mean, two_se = mean_and_two_se([1.0, 2.0, 3.0])
        assert mean == pytest.approx(2.0)
        assert two_se == pytest.approx(2.0 * 1.0 / math.sqrt(3), abs=1e-12)

    def test_single_value_has_zero_se(self):
        assert mean_and_two_se([5.0]) == (5.0, 0.0)


class TestTraceFiles:
    def test_empty_run_header_only(self, tmp_path):
        record = RunRecord(d=2)
        path = emit_trace(record, tmp_path / "t.csv")
        text = path.read_text()
        assert text.splitlines() == [
            "wall_clock_s,total_evals,record_best_f,record_best_gap"
        ]
        assert read_trace(path) == []

    def test_monotone_and_strictly_timed(self, tmp_path):
        record = RunRecord(d=1)
        for v in (5.0, 7.0, 3.0, 2.5, 9.0, 1.0):
            record_best(record, [v], v)
        path = emit_trace(record, tmp_path / "t.csv", f_star=0.0)
        rows = read_trace(path)
        bests = [r["record_best_f"] for r in rows]
        stamps = [r["wall_clock_s"] for r in rows]
        assert all(b < a for a, b in zip(bests, bests[1:]))
        assert all(b > a for a, b in zip(stamps, stamps[1:]))
        assert all(r["record_best_gap"] == r["record_best_f"] for r in rows)

    def test_round_trip_exact(self, tmp_path):
        record = RunRecord(d=1)
        rng = np.random.default_rng(3)
        for v in rng.normal(size=50):
            record_best(record, [v], float(v))
        path = emit_trace(record, tmp_path / "t.csv")
        rows = read_trace(path)
        assert len(rows) == len(record.series)
        for row, pt in zip(rows, record.series):
            assert row["wall_clock_s"] == pt.wall_clock
            assert row["total_evals"] == pt.total_evals
            assert row["record_best_f"] == pt.best_f
            assert row["record_best_gap"] is None

    def test_unknown_optimum_leaves_gap_blank(self, tmp_path):
        record = RunRecord(d=1)
        record_best(record, [0.1], 0.1)
        path = emit_trace(record, tmp_path / "t.csv", f_star=None)
        line = path.read_text().splitlines()[1]
        assert line.endswith(",")

    def test_bad_header_rejected(self, tmp_path):
        f = tmp_path / "t.csv"
        f.write_text("nope\n1,2,3,4\n")
        with pytest.raises(ParseError):
            read_trace(f)

    def test_bad_cell_reports_line(self, tmp_path):
        f = tmp_path / "t.csv"
        f.write_text(
            "wall_clock_s,total_evals,record_best_f,record_best_gap\n"
            "0.5,3,1.0,\n0.7,x,0.9,\n"
        )
        with pytest.raises(ParseError, match=":3"):
            read_trace(f)


class TestBeliefFiles:
    def test_belief_snapshots_written_when_logged(self, tmp_path):
        from dataclasses import replace

        config = sphere_experiment(tmp_path, replications=1)
        config = ExperimentConfig(
            **{**config.__dict__, "bofip": replace(config.bofip, log_beliefs=True)}
        )
        _, paths = run_experiment(config)
        belief_files = [p for p in paths if p.name.startswith("beliefs_")]
        assert len(belief_files) == 1
        lines = belief_files[0].read_text().splitlines()
        assert lines[0] == "subspace_id,t,weights"
        # 2 sweeps x 2 sub-spaces of snapshots
        assert len(lines) == 1 + 4
        weights = [float(w) for w in lines[-1].split(",")[2].split(";")]
        assert sum(weights) == pytest.approx(1.0, abs=1e-12)


class TestBoStepLog:
    def test_steps_recorded_when_enabled(self, tmp_path):
        from dataclasses import replace

        from bofip.driver import run_bofip

        config = sphere_experiment(tmp_path).bofip
        config = replace(config, log_bo_steps=True, seed=5)
        record = run_bofip(lambda x: float(np.sum(np.asarray(x) ** 2)),
                           (-1.0, 1.0), 4, config)
        assert record.bo_steps
        total_steps = sum(e.evaluations_spent for e in record.events)
        assert len(record.bo_steps) == total_steps  # n_complements = 1
        t, i, row, value, remaining = record.bo_steps[0]
        assert t == 0 and i == 0 and 0 <= row < 9


class TestNnExperiment:
    def test_nn_problem_wiring(self, tmp_path, dataset_path):
        bofip = BofipConfig(p=50, n_g=8, sweeps=1, bo_budget=4,
                            n_complements=1, gp=FAST_GP, n_initial=2)
        config = ExperimentConfig(
            problem="nn_502", d=502, bofip=bofip, replications=1,
            outdir=tmp_path, base_seed=1, dataset=str(dataset_path),
        )
        summary, paths = run_experiment(config)
        assert summary.mean_gap is None  # no known optimum
        assert math.isfinite(summary.mean_best_f)
        rows = read_trace(paths[0])
        assert all(r["record_best_gap"] is None for r in rows)
