from pydantic import field_validator

from core.constants import TABLE_ROWS, RowKind
from schemas.base_schemas import FrozenSchema, Real


class TableSpec(FrozenSchema):
    n: int
    marginal_levels: tuple[Real, ...]
    k_range: tuple[int, int]
    rows_per_level: tuple[RowKind, ...] = TABLE_ROWS

    @field_validator("k_range")
    @classmethod
    def check_k_range(cls, value: tuple[int, int]) -> tuple[int, int]:
        if value[0] > value[1]:
            raise ValueError(f"empty k range {value[0]}:{value[1]}")
        return value

    @property
    def ks(self) -> range:
        return range(self.k_range[0], self.k_range[1] + 1)


class TableCell(FrozenSchema):
    level: Real
    k: int
    row: RowKind
    value: Real
    rendered: str
    reference: str | None = None
    convolution_value: Real | None = None


class TableFootnote(FrozenSchema):
    level: Real
    k: int
    row: RowKind
    rendered: str
    reference: str
    convolution: str


class TableReport(FrozenSchema):
    spec: TableSpec
    cells: tuple[TableCell, ...]
    footnotes: tuple[TableFootnote, ...] = ()
