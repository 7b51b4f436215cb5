from core.constants import RowKind

# Published n = 8 cells for uniform marginals, k = 1..8 per row.
REFERENCE_N = 8

_ROWS = {
    "0.1": {
        RowKind.MAKAROV_LOWER: "4.6953e-01 8.6895e-02 5.0243e-03 4.3165e-04 2.3410e-05 7.3000e-07 9.9999e-09 0.0000e+00",
        RowKind.SHARP_LOWER: "5.6953e-01 1.8690e-01 3.8090e-02 5.0240e-03 4.2850e-04 2.3200e-05 1.0000e-07 0.0000e+00",
        RowKind.EXACT: "5.6953e-01 1.8690e-01 3.8092e-02 5.0244e-03 4.3165e-04 2.3410e-05 7.3000e-07 1.0000e-08",
        RowKind.SHARP_UPPER: "5.6953e-01 1.8690e-01 3.8092e-02 5.0275e-03 4.3200e-04 2.5300e-05 8.0000e-07 1.0000e-07",
        RowKind.MAKAROV_UPPER: "1.0000e+00 5.6953e-01 1.8690e-01 3.8092e-02 5.0244e-03 4.3165e-04 2.3410e-05 7.3000e-07",
    },
    "0.2": {
        RowKind.MAKAROV_LOWER: "6.3223e-01 2.9668e-01 5.6282e-02 1.0406e-02 1.2314e-03 8.4480e-05 2.5600e-06 0.0000e+00",
        RowKind.SHARP_LOWER: "8.3222e-01 4.9667e-01 2.0287e-01 5.6192e-02 1.0048e-02 1.1776e-03 1.2800e-05 0.0000e+00",
        RowKind.EXACT: "8.3223e-01 4.9668e-01 2.0308e-01 5.6282e-02 1.0406e-02 1.2314e-03 8.4480e-05 2.5600e-06",
        RowKind.SHARP_UPPER: "8.3223e-01 4.9676e-01 2.0314e-01 5.6640e-02 1.0496e-02 1.4464e-03 1.0240e-04 1.2800e-05",
        RowKind.MAKAROV_UPPER: "1.0000e+00 8.3223e-01 4.9668e-01 2.0308e-01 5.6282e-02 1.0406e-02 1.2314e-03 8.4480e-05",
    },
    "0.3": {
        RowKind.MAKAROV_LOWER: "7.4470e-01 4.4823e-01 1.9410e-01 5.7968e-02 1.1292e-02 1.2903e-03 6.5610e-05 0.0000e+00",
        RowKind.SHARP_LOWER: "9.4220e-01 7.4424e-01 4.4501e-01 1.9181e-01 5.2610e-02 9.9144e-03 2.1870e-04 0.0000e+00",
        RowKind.EXACT: "9.4235e-01 7.4470e-01 4.4823e-01 1.9410e-01 5.7968e-02 1.1292e-02 1.2903e-03 6.5610e-05",
        RowKind.SHARP_UPPER: "9.4242e-01 7.4577e-01 4.4960e-01 1.9946e-01 6.0264e-02 1.4507e-02 1.7496e-03 2.1870e-04",
        RowKind.MAKAROV_UPPER: "1.0000e+00 9.4235e-01 7.4470e-01 4.4823e-01 1.9410e-01 5.7968e-02 1.1292e-02 1.2903e-03",
    },
    "0.4": {
        RowKind.MAKAROV_LOWER: "8.9362e-01 6.8461e-01 4.0591e-01 1.7367e-01 4.9807e-02 8.5200e-03 6.5536e-04 0.0000e+00",
        RowKind.SHARP_LOWER: "9.8222e-01 8.8904e-01 6.6396e-01 3.8298e-01 1.3926e-01 3.6045e-02 1.6384e-03 0.0000e+00",
        RowKind.EXACT: "9.8320e-01 8.9362e-01 6.8461e-01 4.0591e-01 1.7367e-01 4.9807e-02 8.5197e-03 6.5536e-04",
        RowKind.SHARP_UPPER: "9.8386e-01 9.0051e-01 6.9837e-01 4.4032e-01 1.9661e-01 7.0451e-02 1.3107e-02 1.6384e-03",
        RowKind.MAKAROV_UPPER: "1.0000e+00 9.8320e-01 8.9362e-01 6.8461e-01 4.0591e-01 1.7367e-01 4.9807e-02 8.5197e-03",
    },
    "0.5": {
        RowKind.MAKAROV_LOWER: "9.6484e-01 8.5547e-01 6.3672e-01 3.6328e-01 1.4453e-01 3.5156e-02 3.9063e-03 0.0000e+00",
        RowKind.SHARP_LOWER: "9.9219e-01 9.3750e-01 7.7344e-01 5.0000e-01 2.2656e-01 6.2500e-02 7.8125e-03 0.0000e+00",
        RowKind.EXACT: "9.9609e-01 9.6484e-01 8.5547e-01 6.3672e-01 3.6328e-01 1.4453e-01 3.5156e-02 3.9063e-03",
        RowKind.SHARP_UPPER: "1.0000e+00 9.9219e-01 9.3750e-01 7.7344e-01 5.0000e-01 2.2656e-01 6.2500e-02 7.8125e-03",
        RowKind.MAKAROV_UPPER: "1.0000e+00 9.9610e-01 9.6484e-01 8.5547e-01 6.3672e-01 3.6328e-01 1.4453e-01 3.5156e-02",
    },
}  # fmt: skip


def reference_cell(level: str, k: int, row: RowKind) -> str | None:
    """Rendered reference value, or None outside the published grid."""
    cells = _ROWS.get(level, {}).get(row)
    if cells is None or not 1 <= k <= REFERENCE_N:
        return None
    return cells.split()[k - 1]


REFERENCE_LEVELS = tuple(_ROWS)
