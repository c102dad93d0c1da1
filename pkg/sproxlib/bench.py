# -*- coding: utf-8 -*-

"""
Benchmark runner, every configured solver once per seed in Trace mode.

Each run writes its trace as one CSV file and adds a row to summary.csv.
Runs are independent and may execute on worker threads.

Licensed under the MIT License, see LICENSE.
"""

import asyncio
import logging
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pandas as pd

from .config import build_problem
from .console import Color, Console
from .data.results import IterationTrace
from .datasets import load_dataset
from .errors import SproxError
from .problem import evaluate_phi
from .solvers import solve

log = logging.getLogger(__name__)

SUMMARY_FILE = 'summary.csv'

SUMMARY_FIELDS = ('algorithm', 'seed', 'budget_N', 'final_phi', 'final_stationarity',
                  'gradient_calls', 'raw_gradient_evaluations', 'prox_g_calls',
                  'prox_h_calls', 'theory_phi', 'theory_nonzeros')


def write_csv_atomic(frame, path):
    """
    Write a data frame to CSV through a temporary file in the same directory.

    :param frame: The data.
    :type frame: pandas.DataFrame
    :param path: The destination.
    :type path: str
    """
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix='.tmp-', suffix='.csv', dir=directory)
    try:
        with os.fdopen(fd, 'w', newline='') as f:
            frame.to_csv(f, index=False, float_format='%.17g')
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def trace_frame(trace):
    """
    A run trace as a data frame with the trace CSV columns.

    :param trace: The traced iterations.
    :type trace: list
    :rtype: pandas.DataFrame
    """
    return pd.DataFrame([t.as_row() for t in trace], columns=list(IterationTrace.FIELDS))


class BenchmarkJob(object):
    """
    One (solver, seed) run of a benchmark.
    """
    def __init__(self, label, solver_spec, seed):
        self.label = label
        self.solver_spec = solver_spec
        self.seed = seed

    @property
    def file_name(self):
        return f'{self.label}_seed{self.seed}.csv'

    def __repr__(self):
        return f'BenchmarkJob({self.label}, seed={self.seed})'


class BenchmarkRunner(object):
    """
    Runs a benchmark config.

    The runner takes the following optional keyword arguments.

    :keyword loop: Asyncio event loop, a new one is created by default.

    :keyword console: Console for progress output.
    :type console: Console

    :keyword debug: Enable asyncio debug logging.
    :type debug: bool
    """
    def __init__(self, config, *, loop=None, **options):
        """
        Initiate the runner.

        :param config: The validated benchmark config.
        :type config: sproxlib.config.BenchmarkConfig
        """
        self.config = config
        self._own_loop = loop is None
        self.loop = asyncio.new_event_loop() if loop is None else loop
        self.console = options.get('console') or Console()
        self.debug = options.get('debug', False)

        self.loop.set_debug(self.debug)

        self.problem = None
        self.w_init = None
        self.summary = {}
        self.failed = []

    def jobs(self):
        """
        The runs of the benchmark, solvers in config order, then seeds.

        :rtype: list
        """
        algorithms = [s.algorithm for s in self.config.solvers]
        jobs = []
        for i, spec in enumerate(self.config.solvers):
            label = spec.algorithm
            if algorithms.count(spec.algorithm) > 1:
                label = f'{spec.algorithm}-{i + 1}'

            for seed in self.config.seeds:
                jobs.append(BenchmarkJob(label, spec, seed))

        return jobs

    def run(self):
        """
        Run the benchmark to completion.

        :return: 0 when every run succeeded, 1 otherwise.
        :rtype: int
        """
        try:
            return self.loop.run_until_complete(self.start())
        finally:
            if self._own_loop:
                self.loop.close()

    async def start(self):
        """
        Build the problem and run all jobs.

        :rtype: int
        """
        os.makedirs(self.config.output_dir, exist_ok=True)

        data = load_dataset(self.config.problem, self.config.max_n, self.config.max_d)
        self.problem = build_problem(self.config.problem, data)
        spec = self.config.problem
        self.w_init = self.problem.start_point(spec.start, spec.start_seed)
        log.info(f'starting every run from the {spec.start} point')
        await self.dispatch('problem_ready', self.problem)

        jobs = self.jobs()
        with ThreadPoolExecutor(max_workers=self.config.workers) as executor:
            await asyncio.gather(*(self._run_job(executor, job) for job in jobs))

        await self.dispatch('finished', len(jobs))
        return 1 if self.failed else 0

    async def _run_job(self, executor, job):
        await self.dispatch('run_start', job)
        try:
            row = await self.loop.run_in_executor(executor, self.execute, job)
        except SproxError as e:
            await self.dispatch('error', job, e)
        except Exception as e:
            log.exception(f'{job} crashed')
            await self.dispatch('error', job, e)
        else:
            await self.dispatch('run_done', job, row)

    def execute(self, job):
        """
        Solve and write the trace file of one job. Runs on a worker thread.

        :param job: The job.
        :type job: BenchmarkJob
        :return: The summary row.
        :rtype: dict
        """
        component_count = None
        if self.problem.smooth.is_finite_sum:
            component_count = self.problem.smooth.component_count

        config = job.solver_spec.to_solver_config(job.seed, component_count)
        report = solve(self.problem, config, w_init=self.w_init)

        path = os.path.join(self.config.output_dir, job.file_name)
        write_csv_atomic(trace_frame(report.trace), path)
        log.info(f'wrote {path}')

        counters = report.counters
        return {
            'algorithm': job.label,
            'seed': job.seed,
            'budget_N': config.budget_N,
            'final_phi': report.final_phi,
            'final_stationarity': np.nan if report.stationarity is None else report.stationarity,
            'gradient_calls': counters.gradient_calls,
            'raw_gradient_evaluations': counters.raw_gradient_evaluations,
            'prox_g_calls': counters.prox_g_calls,
            'prox_h_calls': counters.prox_h_calls,
            'theory_phi': evaluate_phi(self.problem, report.theory_output),
            'theory_nonzeros': report.theory_nonzeros
        }

    def write_summary(self):
        """
        Write summary.csv from the runs finished so far, in job order.
        """
        order = {(job.label, job.seed): i for i, job in enumerate(self.jobs())}
        rows = sorted(self.summary.values(), key=lambda r: order[(r['algorithm'], r['seed'])])

        path = os.path.join(self.config.output_dir, SUMMARY_FILE)
        write_csv_atomic(pd.DataFrame(rows, columns=list(SUMMARY_FIELDS)), path)

    async def dispatch(self, event, *args):
        """
        Call the on_<event> handler, if there is one.

        :param event: The event name.
        :type event: str
        """
        log.debug(f'dispatching: {event}')
        method = getattr(self, f'on_{event}', None)
        if method is not None:
            await method(*args)

    async def on_problem_ready(self, problem):
        self.console.write(f'problem: {problem}', Color.B_CYAN)

    async def on_run_start(self, job):
        log.info(f'starting {job}')

    async def on_run_done(self, job, row):
        self.summary[(job.label, job.seed)] = row
        # flushed after every run so partial results survive a failure
        self.write_summary()

        self.console.write(f'{job.label} seed {job.seed}: phi {row["final_phi"]:.6g}, '
                           f'{row["gradient_calls"]} gradient calls', Color.GREEN)

    async def on_error(self, job, error):
        self.failed.append((job, error))
        log.warning(f'{job} failed: {error}')
        self.console.write(f'{job.label} seed {job.seed} failed: {error}', Color.B_RED)

    async def on_finished(self, count):
        self.write_summary()

        color = Color.B_RED if self.failed else Color.B_GREEN
        self.console.write(f'{count - len(self.failed)}/{count} runs done, '
                           f'results in {self.config.output_dir}', color)


def run_benchmark(config, **options):
    """
    Run a benchmark config.

    :param config: The validated benchmark config.
    :type config: sproxlib.config.BenchmarkConfig
    :return: The exit status, 0 when every run succeeded.
    :rtype: int
    """
    return BenchmarkRunner(config, **options).run()
