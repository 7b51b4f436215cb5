from functools import lru_cache

import numpy as np
from loguru import logger

from core.constants import HARD_ENUMERATION_CAP, ArithmeticMode, Parity
from core.exceptions import (
    EnumerationCapExceeded,
    MarginalValidationError,
    SOutsideInterval,
)
from core.settings import settings
from schemas.marginals_schemas import MarginalProfile
from schemas.measure_schemas import (
    AtomRecord,
    AtomicMeasure,
    MeasurePayload,
    SInterval,
)
from services.marginals_service import MarginalsService
from utils.arithmetic import (
    Number,
    array_dtype,
    close_mask,
    exact_product,
    log_atom,
    to_number,
    to_scalar,
    tolerance,
)
from utils.number_format import format_scientific
from utils.subset_masks import (
    SubsetMask,
    popcount_array,
    prefix_mask,
    sign_array,
    superset_sums,
)


def enumeration_cap() -> int:
    return min(settings.app_enumeration_cap, HARD_ENUMERATION_CAP)


def check_enumeration_cap(n: int):
    cap = enumeration_cap()
    if n > cap:
        logger.error(f"Atom enumeration refused for n={n} > {cap}")
        raise EnumerationCapExceeded(
            f"n={n} exceeds the enumeration cap {cap}"
        )


@lru_cache(maxsize=32)
def _product_atoms(profile: MarginalProfile) -> np.ndarray:
    dtype = array_dtype(profile.mode)
    atoms = np.ones(1, dtype=dtype)
    if profile.mode is ArithmeticMode.RATIONAL:
        atoms[0] = to_number(1, profile.mode)
    for a in profile.values_array():
        # bit i of the mask is sorted event i
        atoms = np.concatenate([atoms * (1 - a), atoms * a])
    atoms.flags.writeable = False
    return atoms

def _atom_product(profile: MarginalProfile, mask: SubsetMask) -> Number:
    return exact_product(
        (
            a if mask >> i & 1 else 1 - a
            for i, a in enumerate(profile.sorted_values)
        ),
        profile.mode,
    )


def _invariant_p(profile: MarginalProfile) -> int:
    values = profile.sorted_values
    limit = (profile.n - 1) // 2
    p = 0
    # pairs (a_2, a_3), (a_4, a_5), ... in 1-based positions
    while p < limit and values[2 * p + 1] + values[2 * p + 2] <= 1:
        p += 1
    return p


def _invariant_m(profile: MarginalProfile) -> int:
    values = profile.sorted_values
    limit = profile.n // 2
    m = 0
    # pairs (a_1, a_2), (a_3, a_4), ...
    while m < limit and values[2 * m] + values[2 * m + 1] <= 1:
        m += 1
    return m


def _log_prefix_atom(profile: MarginalProfile, size: int) -> float:
    values = profile.sorted_values
    return log_atom(values[:size], values[size:])


@lru_cache(maxsize=32)
def _feasible_interval(profile: MarginalProfile) -> SInterval:
    p = _invariant_p(profile)
    m = _invariant_m(profile)
    zero = to_number(0, profile.mode)

    if profile.n == 1:
        # the marginal fixes both atoms of a single event
        interval = SInterval(s_min=zero, s_max=zero, p=p, m=m)
    else:
        even_minimum = _atom_product(profile, prefix_mask(2 * m))
        odd_minimum = _atom_product(profile, prefix_mask(2 * p + 1))
        interval = SInterval(
            s_min=zero - even_minimum,
            s_max=odd_minimum,
            p=p,
            m=m,
            log_abs_s_min=_log_prefix_atom(profile, 2 * m),
            log_s_max=_log_prefix_atom(profile, 2 * p + 1),
        )

    logger.log(
        "MEASURE",
        f"Interval n={profile.n} p={p} m={m} "
        f"[{format_scientific(interval.s_min)}, "
        f"{format_scientific(interval.s_max)}]",
    )
    return interval


class MeasureFamilyService:
    """The one-parameter family of (n-1)-wise independent measures.

    Every measure in the family is P(A^J) = a^J + (-1)^|J| s where a^J is the
    product-measure atom and s ranges over the feasible interval.
    """

    def __init__(self, marginals: MarginalsService):
        self.marginals = marginals

    def atom_product(
        self, profile: MarginalProfile, mask: SubsetMask
    ) -> Number:
        return _atom_product(profile, mask)

    def product_atoms(self, profile: MarginalProfile) -> np.ndarray:
        check_enumeration_cap(profile.n)
        return _product_atoms(profile)

    def product_rule_targets(self, profile: MarginalProfile) -> np.ndarray:
        """Entry J is prod_{j in J} a_j."""
        check_enumeration_cap(profile.n)
        targets = np.ones(1, dtype=array_dtype(profile.mode))
        if profile.mode is ArithmeticMode.RATIONAL:
            targets[0] = to_number(1, profile.mode)
        for a in profile.values_array():
            targets = np.concatenate([targets, targets * a])
        return targets

    def invariant_p(self, profile: MarginalProfile) -> int:
        return _invariant_p(profile)

    def invariant_m(self, profile: MarginalProfile) -> int:
        return _invariant_m(profile)

    def s_interval(self, profile: MarginalProfile) -> SInterval:
        return _feasible_interval(profile)

    def build_measure(self, profile: MarginalProfile, s) -> AtomicMeasure:
        s = to_number(s, profile.mode)
        interval = self.s_interval(profile)
        atoms = self.product_atoms(profile) + self._signs(profile) * s
        tol = tolerance(profile.mode)

        if s < interval.s_min - tol or s > interval.s_max + tol:
            endpoint = (
                f"s_min={format_scientific(interval.s_min)}"
                if s < interval.s_min
                else f"s_max={format_scientific(interval.s_max)}"
            )
            negative = np.flatnonzero(atoms < 0)
            witness = ""
            if negative.size:
                subset = self.marginals.to_original_indices(
                    profile, SubsetMask(int(negative[0]))
                )
                witness = (
                    f"; atom {subset} would be "
                    f"{format_scientific(atoms[negative[0]])}"
                )
            logger.error(f"s={s} outside {interval.s_min}..{interval.s_max}")
            raise SOutsideInterval(
                f"s outside feasible interval: s={format_scientific(s)} "
                f"violates {endpoint}{witness}"
            )

        if profile.mode is ArithmeticMode.FLOATING:
            atoms[(atoms < 0) & (atoms >= -tol)] = 0.0

        logger.opt(lazy=True).log(
            "MEASURE",
            "Measure n={} s={}",
            lambda: profile.n,
            lambda: format_scientific(s),
        )
        return AtomicMeasure(
            n=profile.n, atom_probs=atoms, s=s, mode=profile.mode
        )

    def parity_construction(
        self,
        n: int,
        parity: Parity,
        mode: ArithmeticMode = ArithmeticMode.FLOATING,
    ) -> AtomicMeasure:
        """Uniform 1/2 marginals at an endpoint of the interval.

        Even parity sits at s_min and loads only the odd-cardinality
        atoms, so P(no event) = 0. Odd parity sits at s_max and loads the
        even-cardinality atoms.
        """
        if n < 2:
            raise MarginalValidationError(
                f"parity construction needs n >= 2, got {n}"
            )
        profile = self.marginals.uniform_profile(n, "1/2", mode)
        magnitude = to_number(f"1/{2**n}", mode)
        s = -magnitude if parity is Parity.EVEN else magnitude
        return self.build_measure(profile, s)

    def joint_probability(
        self, measure: AtomicMeasure, mask: SubsetMask
    ) -> Number:
        """P(intersection of A_j for j in J) = sum of atoms over I ⊇ J."""
        masks = np.arange(measure.atom_probs.shape[0])
        selected = measure.atom_probs[(masks & mask) == mask]
        return to_scalar(selected.sum(), measure.mode)

    def joint_probabilities(self, measure: AtomicMeasure) -> np.ndarray:
        return superset_sums(measure.atom_probs)

    def independence_order(
        self, measure: AtomicMeasure, profile: MarginalProfile
    ) -> int:
        """Largest l such that every family of at most l events factorizes."""
        joint = self.joint_probabilities(measure)
        matches = close_mask(
            joint, self.product_rule_targets(profile), measure.mode
        )
        counts = popcount_array(measure.n)
        for size in range(1, measure.n + 1):
            if not matches[counts == size].all():
                return size - 1
        return measure.n

    def measure_to_json(
        self, measure: AtomicMeasure, profile: MarginalProfile
    ) -> MeasurePayload:
        return MeasurePayload(
            n=measure.n,
            s=measure.s,
            atoms=tuple(
                AtomRecord(
                    subset=self.marginals.to_original_indices(profile, mask),
                    prob=to_scalar(value, measure.mode),
                )
                for mask, value in enumerate(measure.atom_probs)
            ),
        )

    @staticmethod
    def _signs(profile: MarginalProfile) -> np.ndarray:
        return sign_array(profile.n).astype(array_dtype(profile.mode))
