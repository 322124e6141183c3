"""JSON, Markdown and tab-separated renderings of case reports."""

from __future__ import annotations

import json
from collections import Counter

from .pipeline import CaseReport


def summary(reports):
    verdicts = Counter(r.verdict for r in reports)
    return {
        "cases": len(reports),
        "verdicts": dict(sorted(verdicts.items())),
        "eigenpairs": sum(len(r.eigenpairs) for r in reports),
        "bound_states": sum(1 for r in reports for p in r.eigenpairs if p["bound_state"]),
        "budget_exceeded": sum(1 for r in reports if r.error),
    }


def report_dict(spec, reports):
    return {
        "spec": spec.to_dict(),
        "cases": [r.to_dict() for r in reports],
        "summary": summary(reports),
    }


def to_json(spec, reports):
    """Deterministic JSON text (no timing unless it was requested upstream)."""
    return json.dumps(report_dict(spec, reports), indent=2, ensure_ascii=False) + "\n"


def from_json(text):
    data = json.loads(text)
    return data["spec"], [CaseReport.from_dict(c) for c in data["cases"]]


def _cell(text):
    return str(text).replace("|", "\\|") if text not in (None, "") else "-"


def _case_title(r):
    if r.s is None:
        return "all cases"
    return f"{r.sign} branch, s = {r.s}"


def to_markdown(spec, reports):
    """Human-readable report: one overview table, then the full data per case."""
    lines = [f"# Potential V(x) = {spec.potential}", ""]
    for name, value in spec.to_dict()["params"].items():
        lines.append(f"- parameter `{name}` = {value}")
    lines += ["", "| s | sign | verdict | T(s, lambda) | parameter constraints | eigenvalues |",
              "|---|---|---|---|---|---|"]
    for r in reports:
        evs = ", ".join(p["lambda"] for p in r.eigenpairs)
        lines.append("| " + " | ".join(_cell(v) for v in (
            r.s, r.sign, r.verdict, r.T, "; ".join(r.param_constraints), evs)) + " |")
    for r in reports:
        lines += ["", f"## {_case_title(r)}", "", f"- verdict: {r.verdict}"]
        if r.quantization:
            lines.append(f"- quantization: `{r.quantization}`")
        if r.order:
            lines.append(f"- order: {r.order}")
        if r.generators:
            lines.append("- generators:")
            lines += [f"  - `{g}`" for g in r.generators]
        if r.groebner_basis:
            lines.append("- Groebner basis:")
            lines += [f"  - `{g}`" for g in r.groebner_basis]
        if r.T:
            lines.append(f"- T: `{r.T}`")
        for rel in r.lambda_relations[1:]:
            lines.append(f"- further lambda relation: `{rel}`")
        for c in r.param_constraints:
            lines.append(f"- parameter constraint: `{c}`")
        if r.free_parameters:
            lines.append(f"- free parameters: {', '.join(r.free_parameters)}")
        for note in r.notes:
            lines.append(f"- note: {note}")
        if r.error:
            lines.append(f"- error: {r.error}")
        if r.timing is not None:
            lines.append(f"- time: {r.timing} s")
        if r.eigenpairs:
            lines += ["", "| lambda | exact | approx | residual bound | multiplicity | P | parameters "
                      "| constraints | psi | bound | residual |",
                      "|---|---|---|---|---|---|---|---|---|---|---|"]
            for p in r.eigenpairs:
                params = ", ".join(f"{k}={v}" for k, v in p["params"].items())
                if p["symbolic_params"]:
                    params = ", ".join(filter(None, [params, "symbolic: " + ", ".join(p["symbolic_params"])]))
                bound = {True: "yes", False: "no", None: "indeterminate"}[p["bound_state"]]
                lines.append("| " + " | ".join(_cell(v) for v in (
                    p["lambda"], "yes" if p["exact"] else "no", p["lambda_approx"], p["residual_bound"],
                    p["multiplicity"], p["P"], params,
                    "; ".join(p["constraints"]), p["wavefunction"], bound, p["residual"])) + " |")
    return "\n".join(lines) + "\n"


TABLE_COLUMNS = ("s", "sign", "verdict", "T", "param_constraints", "lambda", "P", "params", "bound_state")


def to_table(reports):
    """Tab-separated rows: one per eigenpair, or one per case without eigenpairs."""
    rows = ["\t".join(TABLE_COLUMNS)]
    for r in reports:
        base = ["-" if r.s is None else str(r.s), r.sign or "-", r.verdict, r.T or "-",
                "; ".join(r.param_constraints) or "-"]
        if not r.eigenpairs:
            rows.append("\t".join(base + ["-", "-", "-", "-"]))
        for p in r.eigenpairs:
            params = ", ".join(f"{k}={v}" for k, v in p["params"].items()) or "-"
            bound = {True: "bound", False: "unbound", None: "indeterminate"}[p["bound_state"]]
            rows.append("\t".join(base + [p["lambda"], p["P"], params, bound]))
    return "\n".join(rows) + "\n"
