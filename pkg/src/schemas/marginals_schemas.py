import numpy as np
from pydantic import BaseModel

from core.constants import ArithmeticMode
from schemas.base_schemas import FrozenSchema, Real
from utils.arithmetic import array_dtype


class MarginalProfile(FrozenSchema):
    sorted_values: tuple[Real, ...]
    # permutation[sorted_position] == original_position
    permutation: tuple[int, ...]
    mode: ArithmeticMode = ArithmeticMode.FLOATING

    @property
    def n(self) -> int:
        return len(self.sorted_values)

    @property
    def original_values(self) -> tuple[Real, ...]:
        values: list[Real] = [0.0] * self.n
        for position, original in enumerate(self.permutation):
            values[original] = self.sorted_values[position]
        return tuple(values)

    def values_array(self) -> np.ndarray:
        return np.array(self.sorted_values, dtype=array_dtype(self.mode))


class MarginalsPayload(BaseModel):
    marginals: list[float | str]
