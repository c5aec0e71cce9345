"""Configuration, experiments, file formats and the command-line interface."""
from .fitting import FlooredError, PlaneFit, SlopeFit, fit_power_law, fit_slope, fit_slope_detail
from .snapshot import read_snapshot, write_snapshot
