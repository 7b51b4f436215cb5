from fractions import Fraction
from typing import Annotated

from pydantic import BaseModel, ConfigDict, PlainSerializer

# Probabilities and s values are floats or exact fractions depending on
# the arithmetic mode; JSON output always carries plain numbers.
Real = Annotated[
    float | Fraction,
    PlainSerializer(float, when_used="json"),
]


class FrozenSchema(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)
