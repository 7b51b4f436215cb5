import csv
import json
import math
from fractions import Fraction
from pathlib import Path

from loguru import logger
from pydantic import ValidationError

from core.constants import ArithmeticMode, ProfileFormat
from core.exceptions import (
    MarginalValidationError,
    ProfileFileNotFound,
    ProfileParseError,
    RationalModeError,
)
from core.settings import settings
from schemas.marginals_schemas import MarginalProfile, MarginalsPayload
from utils.arithmetic import Number, to_number
from utils.subset_masks import SubsetMask, indices_from_mask


class MarginalsService:
    """Validates raw marginals and keeps the sorted/original mapping."""

    def from_raw(
        self,
        values,
        mode: ArithmeticMode = ArithmeticMode.FLOATING,
    ) -> MarginalProfile:
        values = list(values)
        if not values:
            logger.error("Empty marginal profile")
            raise MarginalValidationError("no marginal probabilities given")

        numbers = [
            self._parse_value(value, index, mode)
            for index, value in enumerate(values, start=1)
        ]
        order = sorted(range(len(numbers)), key=lambda i: numbers[i])
        profile = MarginalProfile(
            sorted_values=tuple(numbers[i] for i in order),
            permutation=tuple(order),
            mode=mode,
        )
        logger.log(
            "PROFILE",
            f"Profile n={profile.n} mode={mode.value} "
            f"range=[{float(profile.sorted_values[0])}, "
            f"{float(profile.sorted_values[-1])}]",
        )
        return profile

    def uniform_profile(
        self,
        n: int,
        value,
        mode: ArithmeticMode = ArithmeticMode.FLOATING,
    ) -> MarginalProfile:
        if n < 1:
            raise MarginalValidationError(
                f"uniform profile needs n >= 1, got {n}"
            )
        return self.from_raw([value] * n, mode)

    def load_profile(
        self,
        path: str | Path,
        profile_format: ProfileFormat | None = None,
        mode: ArithmeticMode = ArithmeticMode.FLOATING,
    ) -> MarginalProfile:
        path = Path(path)
        if not path.is_file():
            logger.error(f"Profile file not found: {path}")
            raise ProfileFileNotFound(f"profile file not found: {path}")

        profile_format = profile_format or self._detect_format(path)
        text = path.read_text(encoding="utf-8")
        if profile_format is ProfileFormat.JSON:
            values = self._parse_json(path, text)
        else:
            values = self._parse_csv(path, text)
        return self.from_raw(values, mode)

    def dump_profile(
        self,
        profile: MarginalProfile,
        path: str | Path,
        profile_format: ProfileFormat | None = None,
    ) -> Path:
        path = Path(path)
        profile_format = profile_format or self._detect_format(path)
        values = [self._dump_value(v) for v in profile.original_values]

        if profile_format is ProfileFormat.JSON:
            path.write_text(json.dumps({"marginals": values}) + "\n")
        else:
            path.write_text("".join(f"{value}\n" for value in values))
        logger.log("PROFILE", f"Profile n={profile.n} written to {path}")
        return path

    def to_sorted_mask(
        self, profile: MarginalProfile, original_indices
    ) -> SubsetMask:
        """Translates 1-based input positions to a sorted-space mask."""
        sorted_position = {
            original: position
            for position, original in enumerate(profile.permutation)
        }
        mask = 0
        for index in original_indices:
            if not 1 <= index <= profile.n:
                raise MarginalValidationError(
                    f"event index {index} out of range 1..{profile.n}",
                    index=index,
                )
            mask |= 1 << sorted_position[index - 1]
        return SubsetMask(mask)

    def to_original_indices(
        self, profile: MarginalProfile, mask: SubsetMask
    ) -> list[int]:
        return sorted(
            profile.permutation[position] + 1
            for position in indices_from_mask(mask)
        )

    @staticmethod
    def _detect_format(path: Path) -> ProfileFormat:
        if path.suffix.lower() == ".json":
            return ProfileFormat.JSON
        return ProfileFormat.CSV

    @staticmethod
    def _parse_json(path: Path, text: str) -> list:
        try:
            payload = MarginalsPayload.model_validate_json(text)
        except ValidationError as error:
            details = "; ".join(
                f"{'.'.join(str(part) for part in item['loc']) or 'root'}: "
                f"{item['msg']}"
                for item in error.errors()
            )
            logger.error(f"Cannot parse {path}: {details}")
            raise ProfileParseError(f"{path}: {details}") from error
        return payload.marginals

    @staticmethod
    def _parse_csv(path: Path, text: str) -> list[str]:
        values = []
        for line_number, row in enumerate(
            csv.reader(text.splitlines()), start=1
        ):
            fields = [field.strip() for field in row if field.strip()]
            if not fields:
                continue
            if len(fields) > 1:
                raise ProfileParseError(
                    f"{path}: line {line_number}: "
                    f"expected one value, got {len(fields)}"
                )
            try:
                Fraction(fields[0])
            except (ValueError, ZeroDivisionError) as error:
                logger.error(f"Cannot parse {path} line {line_number}")
                raise ProfileParseError(
                    f"{path}: line {line_number}: "
                    f"cannot parse {fields[0]!r} as a probability"
                ) from error
            values.append(fields[0])

        if not values:
            raise ProfileParseError(f"{path}: line 1: empty profile file")
        return values

    @staticmethod
    def _parse_value(value, index: int, mode: ArithmeticMode) -> Number:
        try:
            if isinstance(value, str) and "/" in value:
                probe = float(Fraction(value))
            else:
                probe = float(value)
        except (TypeError, ValueError, ZeroDivisionError) as error:
            logger.error(f"Marginal at index {index} is not a number")
            raise MarginalValidationError(
                f"value {value!r} is not a number at index {index}",
                index=index,
            ) from error

        if not math.isfinite(probe):
            logger.error(f"Marginal at index {index} is not finite")
            raise MarginalValidationError(
                f"non-finite value at index {index}", index=index
            )

        number = to_number(value, mode)
        if not 0 <= number <= 1:
            logger.error(f"Marginal {value} at index {index} out of [0,1]")
            raise MarginalValidationError(
                f"value out of [0,1] at index {index}", index=index
            )

        if (
            isinstance(number, Fraction)
            and number.denominator > settings.app_rational_max_denominator
        ):
            raise RationalModeError(
                f"value {value!r} at index {index} needs denominator "
                f"{number.denominator} > "
                f"{settings.app_rational_max_denominator}"
            )
        return number

    @staticmethod
    def _dump_value(value: Number) -> str | float:
        if isinstance(value, Fraction):
            return str(value)
        return value
