import csv
import io
import json

from core.constants import OutputFormat
from schemas.bounds_schemas import BoundReport
from schemas.measure_schemas import AtomicMeasure, MeasurePayload, SInterval
from schemas.oracle_schemas import OracleRun
from schemas.table_schemas import TableReport
from utils.number_format import format_scientific


def _csv(rows: list[list]) -> str:
    buffer = io.StringIO()
    csv.writer(buffer, lineterminator="\n").writerows(rows)
    return buffer.getvalue()


def _json(payload) -> str:
    return json.dumps(payload, indent=2)


def _subset(indices) -> str:
    return "{" + ",".join(str(index) for index in indices) + "}"


def _mark(key, flagged: set) -> str:
    return "*" if key in flagged else ""


def render_bounds(
    reports: list[BoundReport],
    interval: SInterval,
    output: OutputFormat,
    precision: int | None = None,
    single: bool = False,
) -> str:
    def fmt(value):
        return format_scientific(value, precision)

    if output is OutputFormat.JSON:
        dumped = [
            report.model_dump(mode="json", by_alias=True)
            for report in reports
        ]
        return _json(dumped[0] if single else dumped)

    if output is OutputFormat.CSV:
        return _csv(
            [["k", "exact", "lower", "upper"]]
            + [
                [
                    report.k,
                    fmt(report.exact_mutual),
                    fmt(report.sharp_lower),
                    fmt(report.sharp_upper),
                ]
                for report in reports
            ]
        )

    lines = [
        f"s in [{fmt(interval.s_min)}, {fmt(interval.s_max)}], "
        f"p={interval.p}, m={interval.m}"
        + (" (collapsed)" if interval.collapsed else "")
    ]
    lines.append(
        f"{'k':>3}  {'exact':<12}{'lower':<12}{'upper':<12}coefficient"
    )
    for report in reports:
        lines.append(
            f"{report.k:>3}  {fmt(report.exact_mutual):<12}"
            f"{fmt(report.sharp_lower):<12}"
            f"{fmt(report.sharp_upper):<12}{report.coefficient}"
        )
    return "\n".join(lines) + "\n"


def render_interval(
    interval: SInterval,
    output: OutputFormat,
    precision: int | None = None,
) -> str:
    s_min = format_scientific(interval.s_min, precision)
    s_max = format_scientific(interval.s_max, precision)
    if output is OutputFormat.JSON:
        return _json(interval.model_dump(mode="json"))
    if output is OutputFormat.CSV:
        return _csv(
            [
                ["s_min", "s_max", "p", "m"],
                [s_min, s_max, interval.p, interval.m],
            ]
        )
    return f"[{s_min}, {s_max}], p={interval.p}, m={interval.m}\n"


def render_measure(
    measure: AtomicMeasure,
    payload: MeasurePayload,
    output: OutputFormat,
    precision: int | None = None,
) -> str:
    if output is OutputFormat.JSON:
        return _json(payload.model_dump(mode="json"))

    values = [
        (atom.subset, format_scientific(atom.prob, precision))
        for atom in payload.atoms
    ]
    if output is OutputFormat.CSV:
        return _csv(
            [["subset", "probability"]]
            + [[" ".join(map(str, subset)), value] for subset, value in values]
        )

    s = "-" if measure.s is None else format_scientific(measure.s, precision)
    lines = [f"n={measure.n} s={s}"]
    lines.extend(f"{_subset(subset):<24}{value}" for subset, value in values)
    return "\n".join(lines) + "\n"


def render_table(report: TableReport, output: OutputFormat) -> str:
    if output is OutputFormat.JSON:
        return _json(report.model_dump(mode="json"))

    if output is OutputFormat.CSV:
        return _csv(
            [["level", "row", "k", "value"]]
            + [
                [
                    repr(float(cell.level)),
                    cell.row.value,
                    cell.k,
                    cell.rendered,
                ]
                for cell in report.cells
            ]
        )

    flagged = {
        (footnote.level, footnote.k, footnote.row)
        for footnote in report.footnotes
    }
    ks = list(report.spec.ks)
    lines = [f"n = {report.spec.n}"]
    for level in report.spec.marginal_levels:
        lines.append("")
        lines.append(f"a = {float(level)!r}")
        lines.append(
            f"{'':<15}" + "".join(f"{'k=' + str(k):<13}" for k in ks)
        )
        for row in report.spec.rows_per_level:
            cells = {
                cell.k: cell
                for cell in report.cells
                if cell.level == level and cell.row is row
            }
            rendered = [
                cells[k].rendered + _mark((level, k, row), flagged) for k in ks
            ]
            columns = "".join(f"{text:<13}" for text in rendered)
            lines.append(f"{row.value:<15}{columns}")

    if report.footnotes:
        lines.append("")
        lines.append(
            "* Makarov cell differs from the reference table "
            "(computed / reference / convolution variant):"
        )
        for footnote in report.footnotes:
            lines.append(
                f"  a={float(footnote.level)!r} k={footnote.k} "
                f"{footnote.row.value}: {footnote.rendered} / "
                f"{footnote.reference} / {footnote.convolution}"
            )
    return "\n".join(lines) + "\n"


def render_verification(
    runs: list[OracleRun],
    output: OutputFormat,
    precision: int | None = None,
) -> str:
    def fmt(value):
        return format_scientific(value, precision)

    if output is OutputFormat.JSON:
        return _json([run.model_dump(mode="json") for run in runs])

    if output is OutputFormat.CSV:
        return _csv(
            [
                [
                    "n",
                    "passed",
                    "measures",
                    "normalization",
                    "marginal",
                    "product_rule",
                    "tail",
                    "min_atom",
                ]
            ]
            + [
                [
                    len(run.marginals),
                    run.passed,
                    run.measures_checked,
                    fmt(run.worst_normalization_residual),
                    fmt(run.worst_marginal_residual),
                    fmt(run.worst_product_rule_residual),
                    fmt(run.worst_tail_residual),
                    fmt(run.min_atom),
                ]
                for run in runs
            ]
        )

    lines = []
    for run in runs:
        status = "PASS" if run.passed else "FAIL"
        lines.append(
            f"{status} n={len(run.marginals)} measures={run.measures_checked} "
            f"normalization={fmt(run.worst_normalization_residual)} "
            f"marginal={fmt(run.worst_marginal_residual)} "
            f"product_rule={fmt(run.worst_product_rule_residual)} "
            f"tail={fmt(run.worst_tail_residual)} "
            f"min_atom={fmt(run.min_atom)}"
        )
        for violation in run.lemma_violations:
            lines.append(f"  {violation.check} at {_subset(violation.subset)}")
        if run.scan_mismatches:
            lines.append(
                f"  sharpness scan mismatch for k={list(run.scan_mismatches)}"
            )
        if run.failed_measures:
            failed = ", ".join(fmt(s) for s in run.failed_measures)
            lines.append(f"  failing measures at s={failed}")

    passed = sum(run.passed for run in runs)
    verdict = "PASS" if passed == len(runs) else "FAIL"
    seed = runs[0].seed if runs else None
    suffix = f" (seed {seed})" if seed is not None else ""
    lines.append(f"{verdict}: {passed}/{len(runs)} profiles{suffix}")
    return "\n".join(lines) + "\n"

