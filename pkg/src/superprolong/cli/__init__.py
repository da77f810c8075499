"""Command-line interface: expression language, spec schema and runner."""

from .expr import ExprError, parse_expression, parse_field, parse_function
from .main import main, run, run_report
from .schema import ProblemSpec, SpecError

__all__ = ["ExprError", "parse_expression", "parse_field", "parse_function", "main", "run",
           "run_report", "ProblemSpec", "SpecError"]
