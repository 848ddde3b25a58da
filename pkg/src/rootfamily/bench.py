"""Benchmark cases, parameter sweeps, the reference-table rerun, and report rendering."""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import asdict, dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Optional

from .analysis import coc, format_rc
from .errors import RootFamilyError, UndefinedCOC, ValidationError
from .expr import parse_expression
from .model import BUILTINS, FunctionModel, builtin_model
from .numeric import BENCH_PRECISION, EvalContext, parse_complex, to_decimal_string
from .solvers import MethodSpec, SolverConfig, Status, iterate, refine_zero, to_scalar

TABLE2_P = ("-2", "-1", "0", "1", "2")
METHODS = ("family", "newton", "chebyshev", "halley", "halley-multiple", "basic3", "basic4", "basic5",
           "fourth-order")


@dataclass
class BenchmarkCase:
    function: str
    multiplicity: Optional[int] = None
    x0: Optional[str] = None
    alpha: Optional[str] = None
    p_values: list = field(default_factory=lambda: ["0"])
    iterations: int = 3
    precision_bits: int = BENCH_PRECISION
    method: str = "family"

    def resolved(self) -> "BenchmarkCase":
        """Copy with built-in defaults (m, x0, alpha) filled in and fields validated."""
        case = BenchmarkCase(**asdict(self))
        b = BUILTINS.get(case.function)
        if b is not None:
            if case.multiplicity is None:
                case.multiplicity = b.multiplicity
            if case.x0 is None:
                case.x0 = b.x0
            if case.alpha is None:
                case.alpha = "refine" if b.refine_alpha else b.alpha
        if case.multiplicity is None:
            case.multiplicity = 1
        case.p_values = [str(p) for p in case.p_values]
        case.validate()
        return case

    def validate(self):
        if not self.function:
            raise ValidationError("function is required")
        if self.x0 is None:
            raise ValidationError(f"x0 is required for {self.function!r}")
        if self.iterations < 1:
            raise ValidationError("iterations must be >= 1")
        if not self.p_values:
            raise ValidationError("p_values must be non-empty")
        if self.multiplicity is not None and self.multiplicity < 1:
            raise ValidationError("multiplicity must be >= 1")
        if self.method not in METHODS:
            raise ValidationError(f"unknown method {self.method!r}; choose from {', '.join(METHODS)}")
        try:
            if self.function not in BUILTINS:
                parse_expression(self.function)
            ctx = EvalContext(self.precision_bits)
            parse_complex(self.x0, ctx)
            if self.alpha not in (None, "refine"):
                parse_complex(self.alpha, ctx)
            for p in self.p_values:
                parse_complex(p, ctx)
        except (ValueError, RootFamilyError) as exc:
            raise ValidationError(str(exc)) from exc

    @property
    def label(self) -> str:
        return self.function


@dataclass
class RunResult:
    p: str
    errors: Optional[list]
    residuals: list
    rc: Optional[object]
    status: str
    reason: str = ""
    seconds: float = field(default=0.0, compare=False)

    @property
    def final_error(self):
        return self.errors[-1] if self.errors else None


@dataclass
class CaseResult:
    case: BenchmarkCase
    alpha: Optional[object]
    runs: list
    best_p: Optional[str] = None


@dataclass
class Report:
    precision_bits: int
    cases: list

    @property
    def failed(self) -> bool:
        return any(run.status == Status.FAILED.value for c in self.cases for run in c.runs)


def _method_for(case: BenchmarkCase, p) -> MethodSpec:
    m = case.multiplicity
    if case.method == "family":
        return MethodSpec.family_multiple(p, m) if m > 1 else MethodSpec.family_simple(p)
    if case.method.startswith("basic"):
        return MethodSpec.basic_sequence(int(case.method[-1]))
    if case.method == "halley-multiple":
        return MethodSpec.halley_multiple(m)
    return MethodSpec(case.method)


def case_model(case: BenchmarkCase, ctx: EvalContext) -> FunctionModel:
    """Function model of a resolved case with its reference zero (refined if requested)."""
    if case.function in BUILTINS:
        model = builtin_model(case.function, ctx, refine=False)
        model = FunctionModel(model.expr, None, case.multiplicity, case.function)
        hint = BUILTINS[case.function].alpha
    else:
        model = FunctionModel.from_text(case.function, None, case.multiplicity, case.function)
        hint = case.x0
    if case.alpha is None:
        return model
    if case.alpha == "refine":
        alpha = refine_zero(model, parse_complex(hint, ctx), case.multiplicity, ctx)
    else:
        alpha = parse_complex(case.alpha, ctx)
    return FunctionModel(model.expr, alpha, case.multiplicity, case.function)


def _run_one(model, case, p, ctx) -> RunResult:
    start = time.perf_counter()
    method = _method_for(case, to_scalar(p, ctx) if isinstance(p, Fraction) else p)
    trace = iterate(model, method, parse_complex(case.x0, ctx), SolverConfig.fixed(case.iterations), ctx)
    rc = None
    reason = trace.reason
    if len(trace.residuals) >= 3:
        try:
            rc = coc(trace.residuals[-3:])
        except UndefinedCOC as exc:
            reason = reason or f"COC undefined: {exc}"
    return RunResult(
        p=str(p),
        errors=trace.errors,
        residuals=trace.residuals,
        rc=rc,
        status=trace.status.value,
        reason=reason,
        seconds=time.perf_counter() - start,
    )


def run_case(case: BenchmarkCase) -> CaseResult:
    """Fixed-iteration runs of ``case`` for each of its parameter values.

    A failing run is recorded with status ``failed``; sibling runs continue.
    """
    case = case.resolved()
    ctx = EvalContext(case.precision_bits)
    try:
        model = case_model(case, ctx)
    except RootFamilyError as exc:
        runs = [RunResult(p, None, [], None, Status.FAILED.value, f"{type(exc).__name__}: {exc}") for p in case.p_values]
        return CaseResult(case, None, runs)
    runs = [_run_one(model, case, p, ctx) for p in case.p_values]
    return CaseResult(case, model.known_zero, runs)


def run_cases(cases, precision_bits: Optional[int] = None) -> Report:
    results = [run_case(c) for c in cases]
    bits = precision_bits or (results[0].case.precision_bits if results else BENCH_PRECISION)
    return Report(bits, results)


def table2_cases(precision_bits: int = BENCH_PRECISION, iterations: int = 3):
    return [BenchmarkCase(name, p_values=list(TABLE2_P), iterations=iterations, precision_bits=precision_bits)
            for name in ("f1", "f2", "f3", "f4")]


def run_table2(precision_bits: int = BENCH_PRECISION, iterations: int = 3) -> Report:
    """All four corpus functions for p in {-2, -1, 0, 1, 2}, three fixed steps each."""
    return run_cases(table2_cases(precision_bits, iterations), precision_bits)


def _grid_label(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    return str(Decimal(v.numerator) / Decimal(v.denominator))


def sweep_grid(start, stop, count: int) -> list:
    start, stop = Fraction(str(start)), Fraction(str(stop))
    if count < 2:
        raise ValidationError("sweep count must be >= 2")
    if not start < stop:
        raise ValidationError("sweep needs start < stop")
    return [start + (stop - start) * k / (count - 1) for k in range(count)]


def _sort_key(run: RunResult):
    err = run.final_error
    if run.status == Status.FAILED.value or err is None:
        return (1, 0)
    return (0, err)


def sweep_p(case: BenchmarkCase, start, stop, count: int) -> Report:
    """Run ``case`` over an evenly spaced real grid of p; runs are sorted by final error.

    ``best_p`` of the single case result is the grid argmin.
    """
    grid = sweep_grid(start, stop, count)
    case = BenchmarkCase(**{**asdict(case), "p_values": ["0"]}).resolved()
    ctx = EvalContext(case.precision_bits)
    model = case_model(case, ctx)
    runs = []
    for v in grid:
        run = _run_one(model, case, v, ctx)
        run.p = _grid_label(v)
        runs.append(run)
    runs.sort(key=_sort_key)
    case.p_values = [r.p for r in runs]
    best = runs[0].p if runs and _sort_key(runs[0])[0] == 0 else None
    return Report(case.precision_bits, [CaseResult(case, model.known_zero, runs, best)])


def best_p_by_final_error(case_result: CaseResult) -> Optional[str]:
    ok = [r for r in case_result.runs if _sort_key(r)[0] == 0]
    return min(ok, key=_sort_key).p if ok else None


# rendering

def exponent_notation(x, digits: int = 3) -> str:
    """``A(-h)`` notation for ``A x 10^-h``; values in [0.1, 10) print plainly."""
    text = to_decimal_string(x, digits)
    mantissa, _, exp = text.partition("e")
    e = int(exp)
    if e == 0:
        return mantissa
    if e == -1:
        return f"{float(text):.{digits}f}"
    return f"{mantissa}({e})"


def _iteration_count(case_result: CaseResult) -> int:
    return max((len(r.errors or r.residuals) - 1 for r in case_result.runs), default=0)


def _markdown(report: Report) -> str:
    out = [f"<!-- precision: {report.precision_bits} bits -->", ""]
    for cr in report.cases:
        n = _iteration_count(cr)
        case = cr.case
        title = f"### {case.function} (m = {case.multiplicity}, x0 = {case.x0}"
        if cr.alpha is not None:
            title += f", alpha = {to_decimal_string(cr.alpha, 15)}"
        out.append(title + ")")
        out.append("")
        quantity = r"\|x{k} - alpha\|" if cr.alpha is not None else r"\|f(x{k})\|"
        header = ["p"] + [quantity.format(k=k) for k in range(1, n + 1)] + ["r_c"]
        out.append("| " + " | ".join(header) + " |")
        out.append("|" + "---|" * len(header))
        best = best_p_by_final_error(cr) if cr.alpha is not None else None
        for run in cr.runs:
            values = (run.errors if run.errors is not None else run.residuals)[1:]
            cells = [exponent_notation(v) for v in values]
            if run.p == best and cells:
                cells[-1] = f"**{cells[-1]}**"
            cells += [""] * (n - len(cells))
            rc = format_rc(run.rc) if run.rc is not None else "-"
            if run.status == Status.FAILED.value:
                rc = f"failed: {run.reason}"
            out.append("| " + " | ".join([run.p] + cells + [rc]) + " |")
        out.append("")
    return "\n".join(out)


def _csv(report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["case", "function", "m", "p", "iteration", "error", "residual", "rc", "status"])
    for idx, cr in enumerate(report.cases):
        for run in cr.runs:
            rc = format_rc(run.rc) if run.rc is not None else ""
            for k, res in enumerate(run.residuals):
                err = to_decimal_string(run.errors[k], 12) if run.errors is not None else ""
                w.writerow([idx, cr.case.function, cr.case.multiplicity, run.p, k, err,
                            to_decimal_string(res, 12), rc, run.status])
    return buf.getvalue()


def _num(x, digits):
    return None if x is None else to_decimal_string(x, digits)


def report_to_dict(report: Report, include_timings: bool = False) -> dict:
    digits = EvalContext(report.precision_bits).decimal_digits
    cases = []
    for cr in report.cases:
        runs = []
        for run in cr.runs:
            entry = {
                "p": run.p,
                "errors": None if run.errors is None else [_num(e, digits) for e in run.errors],
                "residuals": [_num(r, digits) for r in run.residuals],
                "rc": _num(run.rc, digits),
                "status": run.status,
                "reason": run.reason,
            }
            if include_timings:
                entry["seconds"] = run.seconds
            runs.append(entry)
        cases.append({
            "case": asdict(cr.case),
            "alpha": _num(cr.alpha, digits),
            "best_p": cr.best_p,
            "runs": runs,
        })
    return {"precision_bits": report.precision_bits, "cases": cases}


def report_from_dict(data: dict) -> Report:
    ctx = EvalContext(data["precision_bits"])

    def num(text, real=True):
        if text is None:
            return None
        v = parse_complex(text, ctx)
        return ctx.mp.mpf(v.real) if real else v

    cases = []
    for c in data["cases"]:
        runs = [
            RunResult(
                p=r["p"],
                errors=None if r["errors"] is None else [num(e) for e in r["errors"]],
                residuals=[num(v) for v in r["residuals"]],
                rc=num(r["rc"]),
                status=r["status"],
                reason=r.get("reason", ""),
                seconds=r.get("seconds", 0.0),
            )
            for r in c["runs"]
        ]
        cases.append(CaseResult(BenchmarkCase(**c["case"]), num(c["alpha"], real=False), runs, c.get("best_p")))
    return Report(data["precision_bits"], cases)


def emit_report(report: Report, fmt: str = "markdown", out=None, include_timings: bool = False) -> str:
    """Render ``report`` as ``markdown``, ``csv`` or ``json``; write it to ``out`` when given.

    Output is byte-for-byte deterministic for a given report.  Wall-clock
    timings appear only in json and only with ``include_timings``.
    """
    if not report.cases or not any(cr.runs for cr in report.cases):
        raise ValidationError("report is empty")
    if fmt in ("markdown", "markdown-table", "md"):
        text = _markdown(report)
    elif fmt == "csv":
        text = _csv(report)
    elif fmt == "json":
        text = json.dumps(report_to_dict(report, include_timings), indent=2) + "\n"
    else:
        raise ValidationError(f"unknown format {fmt!r}")
    if out is not None:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
