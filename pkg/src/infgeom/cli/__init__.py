"""Command-line harness: configuration, verification suites, demos."""

from .config import Config
from .demos import demo
from .report import Case, Report
from .suites import run_suite

__all__ = ["Case", "Config", "Report", "demo", "run_suite"]
