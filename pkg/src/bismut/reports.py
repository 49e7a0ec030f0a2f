"""Deterministic CSV / JSON report writing.

One row schema serves every suite::

    suite, model, d, K, K1, K2, t, x_id, quantity, estimate, std_error,
    bound, margin, pass

with margin = estimate - 3 std_error - bound and pass <=> margin <= 0.
Floats are printed with 17 significant digits and rows in construction
order, so a rerun with the same config produces byte-identical files.
"""

import hashlib
import json
from dataclasses import dataclass

COLUMNS = ("suite", "model", "d", "K", "K1", "K2", "t", "x_id",
           "quantity", "estimate", "std_error", "bound", "margin", "pass")


@dataclass
class ReportRow:
    suite: str
    model: str
    d: int
    K: float
    K1: float
    K2: float
    t: float
    x_id: int
    quantity: str
    estimate: float
    std_error: float
    bound: float

    @property
    def margin(self) -> float:
        return self.estimate - 3.0 * self.std_error - self.bound

    @property
    def passed(self) -> bool:
        return self.margin <= 0.0


def config_hash(config: dict) -> str:
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def write_csv(path, rows, header: dict):
    lines = [f"# {key}={value}" for key, value in header.items()]
    lines.append(",".join(COLUMNS))
    for r in rows:
        lines.append(",".join(_fmt(v) for v in (
            r.suite, r.model, r.d, r.K, r.K1, r.K2, r.t, r.x_id, r.quantity,
            r.estimate, r.std_error, r.bound, r.margin, r.passed,
        )))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def summarize(suite: str, rows) -> dict:
    n_fail = sum(1 for r in rows if not r.passed)
    finite_margins = [r.margin for r in rows if r.margin == r.margin and r.margin not in (float("inf"), float("-inf"))]
    worst = max(finite_margins) if finite_margins else float("-inf")
    return {"suite": suite, "n_pass": len(rows) - n_fail, "n_fail": n_fail,
            "worst_margin": worst}


def write_summary(path, summary: dict):
    with open(path, "w") as fh:
        json.dump(summary, fh, sort_keys=True, indent=2)
        fh.write("\n")
