"""Full-duplex ISAC sum-secrecy-rate optimization."""

import csv
import io
import json

from . import _fdisac
from ._fdisac import InvalidArgument, steering_vector

__all__ = ["InvalidArgument", "audit", "benchmark", "default_config", "run_experiment", "solve",
           "spec_hash", "steering_vector"]


def _dump(obj):
    # The core accepts "-inf"/"inf" strings where Python would write -Infinity.
    def fix(v):
        if isinstance(v, float) and v in (float("inf"), float("-inf")):
            return "inf" if v > 0 else "-inf"
        if isinstance(v, dict):
            return {k: fix(x) for k, x in v.items()}
        if isinstance(v, list):
            return [fix(x) for x in v]
        return v
    return json.dumps(fix(obj))


def default_config():
    return json.loads(_fdisac.default_config())


def solve(config=None, **options):
    """Runs the iterative joint design on one channel draw."""
    cfg = default_config()
    cfg.update(config or {})
    return _fdisac.solve(_dump(cfg), **options)


def benchmark(config, method):
    cfg = default_config()
    cfg.update(config or {})
    return _fdisac.benchmark(_dump(cfg), method)


def run_experiment(spec, jobs=1):
    """Returns (rows, all_ok); rows are dicts keyed by the CSV columns."""
    text, ok = _fdisac.run_experiment(_dump(spec), jobs)
    return list(csv.DictReader(io.StringIO(text))), ok


def spec_hash(spec):
    return _fdisac.spec_hash(_dump(spec))


def audit(csv_path):
    errors, warnings = _fdisac.audit(str(csv_path))
    return {"errors": errors, "warnings": warnings}
