from pydantic import Field, computed_field

from core.constants import BonferroniCoincidence
from schemas.base_schemas import FrozenSchema, Real


class BoundReport(FrozenSchema):
    k: int
    exact_mutual: Real = Field(serialization_alias="exact")
    sharp_lower: Real = Field(serialization_alias="lower")
    sharp_upper: Real = Field(serialization_alias="upper")
    s_at_lower: Real
    s_at_upper: Real
    coefficient: int
    collapsed: bool = False


class TailCdf(FrozenSchema):
    values: tuple[Real, ...]

    def at(self, j: int) -> Real:
        if j < 0:
            return 0
        if j >= len(self.values):
            return 1
        return self.values[j]


class BonferroniReport(FrozenSchema):
    coincidence: BonferroniCoincidence
    value: Real | None = None
    inclusion_exclusion_value: Real


class LllComparison(FrozenSchema):
    sharp_no_bad_event: Real
    product_bound: Real
    positivity: bool
    mutual_no_bad_event: Real
    local_lemma_condition: bool


class MakarovBounds(FrozenSchema):
    k: int
    lower: Real
    upper: Real
    convolution_lower: Real
    convolution_upper: Real

    @computed_field
    @property
    def differs(self) -> bool:
        return (
            self.lower != self.convolution_lower
            or self.upper != self.convolution_upper
        )
