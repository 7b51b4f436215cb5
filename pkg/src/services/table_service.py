from fractions import Fraction

from loguru import logger

from core.constants import ArithmeticMode, RowKind, TablePreset
from core.exceptions import ThresholdOutOfRange, UnknownTablePreset
from core.reference_tables import REFERENCE_LEVELS, REFERENCE_N, reference_cell
from schemas.table_schemas import (
    TableCell,
    TableFootnote,
    TableReport,
    TableSpec,
)
from services.bounds_service import BoundsService
from utils.arithmetic import Number
from utils.number_format import format_scientific

MAKAROV_ROWS = (RowKind.MAKAROV_LOWER, RowKind.MAKAROV_UPPER)

PRESET_K_RANGES = {
    TablePreset.TABLE_1: (1, 4),
    TablePreset.TABLE_2: (5, 8),
}


class TableService:
    def __init__(self, bounds: BoundsService):
        self.bounds = bounds
        self.marginals = bounds.measure_family.marginals

    def preset_spec(self, preset: TablePreset | str) -> TableSpec:
        try:
            preset = TablePreset(preset)
        except ValueError as error:
            names = ", ".join(item.value for item in TablePreset)
            raise UnknownTablePreset(
                f"unknown table preset {preset!r}, expected one of {names}"
            ) from error
        return TableSpec(
            n=REFERENCE_N,
            marginal_levels=tuple(
                Fraction(level) for level in REFERENCE_LEVELS
            ),
            k_range=PRESET_K_RANGES[preset],
        )

    def build(
        self, spec: TableSpec, precision: int | None = None
    ) -> TableReport:
        """Evaluates every (level, k, row) cell in rational arithmetic."""
        if spec.k_range[0] < 0 or spec.k_range[1] > spec.n:
            raise ThresholdOutOfRange(
                f"k range {spec.k_range[0]}:{spec.k_range[1]} "
                f"outside 0..{spec.n}"
            )

        cells = []
        footnotes = []
        for level in spec.marginal_levels:
            profile = self.marginals.uniform_profile(
                spec.n, level, ArithmeticMode.RATIONAL
            )
            sharp = dict(
                zip(spec.ks, self.bounds.all_sharp_bounds(profile, spec.ks))
            )
            key = self._level_key(level) if spec.n == REFERENCE_N else None

            for k in spec.ks:
                report = sharp[k]
                makarov = self.bounds.makarov_bounds(profile, k)
                values: dict[RowKind, tuple[Number, Number | None]] = {
                    RowKind.MAKAROV_LOWER: (
                        makarov.lower,
                        makarov.convolution_lower,
                    ),
                    RowKind.SHARP_LOWER: (report.sharp_lower, None),
                    RowKind.EXACT: (report.exact_mutual, None),
                    RowKind.SHARP_UPPER: (report.sharp_upper, None),
                    RowKind.MAKAROV_UPPER: (
                        makarov.upper,
                        makarov.convolution_upper,
                    ),
                }
                for row in spec.rows_per_level:
                    value, convolution = values[row]
                    rendered = format_scientific(value, precision)
                    reference = (
                        reference_cell(key, k, row) if key else None
                    )
                    cells.append(
                        TableCell(
                            level=level,
                            k=k,
                            row=row,
                            value=value,
                            rendered=rendered,
                            reference=reference,
                            convolution_value=convolution,
                        )
                    )
                    if (
                        row in MAKAROV_ROWS
                        and reference is not None
                        and rendered != reference
                    ):
                        footnotes.append(
                            TableFootnote(
                                level=level,
                                k=k,
                                row=row,
                                rendered=rendered,
                                reference=reference,
                                convolution=format_scientific(
                                    convolution, precision
                                ),
                            )
                        )

        logger.log(
            "TABLE",
            f"Table n={spec.n} levels={len(spec.marginal_levels)} "
            f"k={spec.k_range[0]}..{spec.k_range[1]}: {len(cells)} cells, "
            f"{len(footnotes)} Makarov deviations",
        )
        return TableReport(
            spec=spec, cells=tuple(cells), footnotes=tuple(footnotes)
        )

    @staticmethod
    def _level_key(level: Number) -> str:
        return repr(float(level))
