"""
Command Layer

Run configuration, the argparse command surface, the verification suite,
the surface pipeline, parameter sweeps and artifact writers.
"""

from .config import (
    Tolerances,
    GridSettings,
    SweepSettings,
    OutputSettings,
    RunConfig,
    load_config,
    spawn_seeds,
    spawn_rngs,
)
from .writers import write_obj, write_omega_csv, write_report, to_jsonable
from .suite import SuiteCheck, ReportEntry, VerificationReport, list_checks, run_suite
from .pipeline import SurfaceResult, compute_frames, run_pipeline, surface_config, surface_residuals
from .sweep import run_sweep, sweep_passed, sweep_records
from .commands import main, build_parser, EXIT_PASS, EXIT_FAIL, EXIT_USAGE

__all__ = [
    'Tolerances', 'GridSettings', 'SweepSettings', 'OutputSettings', 'RunConfig',
    'load_config', 'spawn_seeds', 'spawn_rngs',
    'write_obj', 'write_omega_csv', 'write_report', 'to_jsonable',
    'SuiteCheck', 'ReportEntry', 'VerificationReport', 'list_checks', 'run_suite',
    'SurfaceResult', 'compute_frames', 'surface_config', 'surface_residuals', 'run_pipeline',
    'run_sweep', 'sweep_passed', 'sweep_records',
    'main', 'build_parser', 'EXIT_PASS', 'EXIT_FAIL', 'EXIT_USAGE',
]
