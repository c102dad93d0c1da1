# -*- coding: utf-8 -*-

import os

import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose
from pandas.testing import assert_frame_equal

from sproxlib.applications import build_pca
from sproxlib.bench import SUMMARY_FIELDS, SUMMARY_FILE, BenchmarkRunner, run_benchmark
from sproxlib.config import SolverSpec, parse_config
from sproxlib.data import IterationTrace
from sproxlib.datasets import generate_synthetic_pca
from sproxlib.mappings import stationarity_measure
from sproxlib.solvers import solve

SOLVERS = [{'algorithm': name, 'budget_N': 8, 'trace_every': 3}
           for name in ('MBSPA', 'VRSPA', 'VRSPA2', 'DeterministicBaseline')]


def bench_config(output_dir, solvers=None, **changes):
    raw = {
        'problem': {'synthetic': {'d': 5, 'n': 50, 'sparsity': 0.4, 'seed': 1}},
        'solvers': solvers or SOLVERS,
        'seeds': [1, 2],
        'output_dir': str(output_dir),
        'workers': 2
    }
    raw.update(changes)
    return parse_config(raw)


def test_benchmark_writes_traces_and_summary(tmp_path, console, output):
    assert run_benchmark(bench_config(tmp_path), console=console) == 0

    files = sorted(os.listdir(tmp_path))
    assert len(files) == 9
    assert 'MBSPA_seed1.csv' in files
    assert 'DeterministicBaseline_seed2.csv' in files

    trace = pd.read_csv(tmp_path / 'VRSPA_seed1.csv')
    assert list(trace.columns) == list(IterationTrace.FIELDS)
    assert list(trace['iter']) == [0, 3, 6, 8]
    assert np.all(np.isfinite(trace['phi']))

    summary = pd.read_csv(tmp_path / SUMMARY_FILE)
    assert list(summary.columns) == list(SUMMARY_FIELDS)
    assert list(summary['algorithm']) == ['MBSPA', 'MBSPA', 'VRSPA', 'VRSPA', 'VRSPA2', 'VRSPA2',
                                          'DeterministicBaseline', 'DeterministicBaseline']
    assert list(summary['seed']) == [1, 2] * 4
    assert np.all(np.isfinite(summary['final_phi']))

    assert '8/8 runs done' in output.getvalue()


def test_pca_runs_leave_the_start(tmp_path, console):
    assert run_benchmark(bench_config(tmp_path), console=console) == 0

    summary = pd.read_csv(tmp_path / SUMMARY_FILE)
    assert np.all(summary['final_phi'] < 0.0)

    # every run starts from the same uniform point
    starts = [pd.read_csv(tmp_path / f'{name}_seed1.csv')['phi'][0]
              for name in ('MBSPA', 'VRSPA', 'DeterministicBaseline')]
    assert starts[0] < 0.0
    assert starts == [starts[0]] * 3


def test_zero_start_is_stationary_for_pca(tmp_path, console):
    problem = {'synthetic': {'d': 5, 'n': 50, 'sparsity': 0.4, 'seed': 1}, 'start': 'zeros'}
    assert run_benchmark(bench_config(tmp_path, problem=problem), console=console) == 0

    summary = pd.read_csv(tmp_path / SUMMARY_FILE)
    assert np.all(summary['final_phi'] == 0.0)


def test_random_start_is_seeded(tmp_path, console):
    problem = {'synthetic': {'d': 5, 'n': 50, 'sparsity': 0.4, 'seed': 1},
               'start': 'random', 'start_seed': 11}
    solvers = [{'algorithm': 'DeterministicBaseline', 'budget_N': 4}]

    runner = BenchmarkRunner(bench_config(tmp_path, solvers, problem=problem), console=console)
    assert runner.run() == 0
    assert_allclose(runner.w_init, runner.problem.start_point('random', 11))


def test_summary_counters(tmp_path, console):
    run_benchmark(bench_config(tmp_path), console=console)
    summary = pd.read_csv(tmp_path / SUMMARY_FILE).set_index(['algorithm', 'seed'])

    # n = 50: m = 4, b = 16, S = 2
    assert summary.loc[('VRSPA', 1), 'gradient_calls'] == 2 * 50 + 2 * 4 * 16
    assert summary.loc[('VRSPA', 1), 'prox_g_calls'] == 2 * 4

    # M = ceil(8^(2/3)) = 4
    assert summary.loc[('MBSPA', 2), 'gradient_calls'] == 8 * 4
    assert summary.loc[('DeterministicBaseline', 1), 'gradient_calls'] == 8 * 50
    assert summary.loc[('DeterministicBaseline', 1), 'prox_g_calls'] == 9


def test_benchmark_is_reproducible(tmp_path, console):
    first, second = tmp_path / 'first', tmp_path / 'second'
    run_benchmark(bench_config(first), console=console)
    run_benchmark(bench_config(second, workers=1), console=console)

    for name in ('MBSPA_seed2.csv', 'VRSPA2_seed1.csv'):
        a = pd.read_csv(first / name).drop(columns='elapsed_s')
        b = pd.read_csv(second / name).drop(columns='elapsed_s')
        assert_frame_equal(a, b)

    assert_frame_equal(pd.read_csv(first / SUMMARY_FILE), pd.read_csv(second / SUMMARY_FILE))


def test_duplicate_algorithms_get_numbered_labels(tmp_path, console):
    solvers = [{'algorithm': 'MBSPA', 'budget_N': 4}, {'algorithm': 'MBSPA', 'budget_N': 6},
               {'algorithm': 'VRSPA', 'budget_N': 4}]
    runner = BenchmarkRunner(bench_config(tmp_path, solvers, seeds=[5]), console=console)

    assert [job.file_name for job in runner.jobs()] == ['MBSPA-1_seed5.csv', 'MBSPA-2_seed5.csv',
                                                       'VRSPA_seed5.csv']
    assert runner.run() == 0
    assert (tmp_path / 'MBSPA-2_seed5.csv').exists()


def test_failed_run_is_reported(tmp_path, console, output):
    solvers = [{'algorithm': 'MBSPA', 'budget_N': 4},
               {'algorithm': 'DeterministicBaseline', 'gradient_budget': 10}]

    assert run_benchmark(bench_config(tmp_path, solvers), console=console) == 1

    summary = pd.read_csv(tmp_path / SUMMARY_FILE)
    assert list(summary['algorithm']) == ['MBSPA', 'MBSPA']
    assert 'DeterministicBaseline seed 1 failed' in output.getvalue()


@pytest.mark.slow
def test_larger_benchmark(tmp_path, console):
    solvers = [{'algorithm': name, 'gradient_budget': 200_000}
               for name in ('MBSPA', 'VRSPA', 'DeterministicBaseline')]
    config = bench_config(tmp_path, solvers, seeds=[1, 2, 3],
                          problem={'synthetic': {'d': 30, 'n': 1000, 'sparsity': 0.2, 'seed': 4}})

    assert run_benchmark(config, console=console) == 0

    summary = pd.read_csv(tmp_path / SUMMARY_FILE)
    assert np.all(summary['gradient_calls'] <= 200_000)


@pytest.mark.slow
def test_convergence_trend_on_synthetic_pca():
    budget = 2_000_000
    problem = build_pca(generate_synthetic_pca(50, 2000, 0.1, seed=7, noise=0.5, signal=1.5))
    n = problem.smooth.component_count
    w1 = problem.start_point('uniform')

    baseline = solve(problem, SolverSpec(algorithm='DeterministicBaseline', gradient_budget=budget)
                     .to_solver_config(1, n), w_init=w1)
    assert baseline.counters.gradient_calls <= budget

    for algorithm in ('MBSPA', 'VRSPA', 'VRSPA2'):
        spec = SolverSpec(algorithm=algorithm, gradient_budget=budget)
        phis, drops = [], []
        for seed in range(1, 11):
            config = spec.to_solver_config(seed, n)
            report = solve(problem, config, w_init=w1)
            assert report.counters.gradient_calls <= budget

            start = stationarity_measure(problem, w1, report.schedule.lam, config.gamma_bar)
            phis.append(report.final_phi)
            drops.append(start / max(report.stationarity, 1e-300))

        assert np.median(phis) <= baseline.final_phi + 1e-3, algorithm
        assert np.median(drops) >= 10.0, algorithm
