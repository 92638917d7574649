"""Built-in verification suite: runs the scenario files shipped in ``data/``."""
from __future__ import annotations

from importlib import resources
from typing import List, Optional, Tuple

from .charts import DEFAULT_DEGREE_BOUND
from .saturation import CONVENTIONS, STRICT
from .scenario import Check, Report, Scenario, parse_scenario, run_parsed


def builtin_scenarios() -> List[Tuple[str, Scenario]]:
    root = resources.files("logsheaf") / "data"
    out = []
    for entry in sorted(root.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".scn"):
            out.append((entry.name, parse_scenario(entry.read_text(encoding="utf-8"), entry.name)))
    return out


def _label(sc: Scenario) -> str:
    crit = sc.headers.get("criterion", "-")
    return f"[{crit}] {sc.headers.get('claim', sc.name)}"


def _failure_detail(rep: Report) -> str:
    if rep.error:
        return f"exit {rep.exit_code}: {rep.error}"
    return "; ".join(c.label + (f" -> {c.detail}" if c.detail else "") for c in rep.checks if c.status == "FAIL")


def verify_paper_suite(degree_bound: int = DEFAULT_DEGREE_BOUND,
                       convention: str = STRICT,
                       only: Optional[List[str]] = None) -> Report:
    """One PASS/FAIL/SKIP line per built-in claim; exit code 1 if any fails."""
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    suite = Report("built-in verification suite", "verify-paper")
    suite.echo.update(degree_bound=degree_bound, convention=convention)
    for fname, sc in builtin_scenarios():
        if only is not None and sc.headers.get("criterion") not in only:
            continue
        sc.degree_bound = degree_bound
        sc.convention = convention
        label = f"{_label(sc)} ({fname})"
        need = int(sc.headers.get("min_degree_bound", "0"))
        if degree_bound < need:
            suite.checks.append(Check(label, "SKIP", f"needs degree bound >= {need}"))
            continue
        rep = run_parsed(sc)
        status = "PASS" if rep.passed else "FAIL"
        suite.checks.append(Check(label, status, "" if rep.passed else _failure_detail(rep)))
        if sc.kind == "saturated" and convention != STRICT:
            sc.convention = STRICT
            ref = run_parsed(sc)
            a, b = ref.results.get("saturated"), rep.results.get("saturated")
            if a != b:
                suite.notes.append(
                    f"convention difference in {fname}: saturated is {str(a).lower()} under "
                    f"{STRICT} and {str(b).lower()} under {convention}"
                )
            else:
                suite.notes.append(f"no convention difference in {fname}")
    counts = {s: sum(1 for c in suite.checks if c.status == s) for s in ("PASS", "FAIL", "SKIP")}
    suite.results.update(passed=counts["PASS"], failed=counts["FAIL"], skipped=counts["SKIP"])
    suite.exit_code = 1 if counts["FAIL"] else 0
    return suite
