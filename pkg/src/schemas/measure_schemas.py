import math

import numpy as np
from pydantic import Field, computed_field

from core.constants import ArithmeticMode
from schemas.base_schemas import FrozenSchema, Real


class SInterval(FrozenSchema):
    s_min: Real
    s_max: Real
    p: int
    m: int
    # log|s_min| and log s_max; floats underflow past n ~ 1000
    log_abs_s_min: float = Field(default=-math.inf, exclude=True)
    log_s_max: float = Field(default=-math.inf, exclude=True)

    @computed_field
    @property
    def collapsed(self) -> bool:
        return self.log_abs_s_min == -math.inf and self.log_s_max == -math.inf


class AtomicMeasure(FrozenSchema):
    n: int
    # Entry J (bitmask in sorted index space) is P(A^J)
    atom_probs: np.ndarray = Field(exclude=True)
    s: Real | None = None
    mode: ArithmeticMode = ArithmeticMode.FLOATING


class AtomRecord(FrozenSchema):
    subset: tuple[int, ...]
    prob: Real


class MeasurePayload(FrozenSchema):
    n: int
    s: Real | None = None
    atoms: tuple[AtomRecord, ...]
