import numpy as np
from loguru import logger

from core.constants import ArithmeticMode, BonferroniCoincidence
from core.exceptions import (
    BoundsInvariantViolation,
    MarginalValidationError,
    SOutsideInterval,
    ThresholdOutOfRange,
)
from schemas.bounds_schemas import (
    BonferroniReport,
    BoundReport,
    LllComparison,
    MakarovBounds,
    TailCdf,
)
from schemas.marginals_schemas import MarginalProfile
from schemas.measure_schemas import SInterval
from services.measure_service import MeasureFamilyService
from utils.arithmetic import (
    Number,
    as_array,
    binomial,
    exact_product,
    next_binomial,
    scaled,
    scaled_endpoint,
    to_number,
    to_scalar,
    tolerance,
)
from utils.number_format import format_scientific
from utils.poisson_binomial import PoissonBinomial


class BoundsService:
    """Tail probabilities of the (n-1)-wise independent family.

    P_s(n, k) = P_0(n, k) + (-1)^k C(n-1, k-1) s is linear in s, so the
    sharp bounds sit at the two endpoints of the feasible interval.
    """

    def __init__(self, measure_family: MeasureFamilyService):
        self.measure_family = measure_family

    def tail_probabilities(self, profile: MarginalProfile) -> np.ndarray:
        return PoissonBinomial.tails(profile.values_array())

    def tail_probability_dp(
        self, profile: MarginalProfile, k: int
    ) -> Number:
        if k < 0:
            raise ThresholdOutOfRange(f"k={k} must be >= 0")
        if k > profile.n:
            return to_number(0, profile.mode)
        return to_scalar(self.tail_probabilities(profile)[k], profile.mode)

    def probability_at_s(
        self, profile: MarginalProfile, k: int, s
    ) -> Number:
        self._check_threshold(profile, k)
        s = to_number(s, profile.mode)
        interval = self.measure_family.s_interval(profile)
        tol = tolerance(profile.mode)
        if s < interval.s_min - tol or s > interval.s_max + tol:
            raise SOutsideInterval(
                f"s outside feasible interval: s={format_scientific(s)} "
                f"not in [{format_scientific(interval.s_min)}, "
                f"{format_scientific(interval.s_max)}]"
            )
        exact = self.tail_probability_dp(profile, k)
        return exact + (-1) ** k * scaled(binomial(profile.n - 1, k - 1), s)

    def sharp_bounds(self, profile: MarginalProfile, k: int) -> BoundReport:
        self._check_threshold(profile, k)
        return self._sharp_bounds(
            profile,
            k,
            self.tail_probabilities(profile),
            self.measure_family.s_interval(profile),
            binomial(profile.n - 1, k - 1),
        )

    def all_sharp_bounds(
        self, profile: MarginalProfile, ks=None
    ) -> list[BoundReport]:
        """Bounds for every k in `ks` (default 1..n) from one DP run."""
        ks = range(1, profile.n + 1) if ks is None else ks
        tails = self.tail_probabilities(profile)
        interval = self.measure_family.s_interval(profile)
        reports = []
        previous_k, coefficient = None, 0
        for k in ks:
            self._check_threshold(profile, k)
            if previous_k is not None and k == previous_k + 1:
                coefficient = next_binomial(profile.n - 1, k - 1, coefficient)
            else:
                coefficient = binomial(profile.n - 1, k - 1)
            previous_k = k
            reports.append(
                self._sharp_bounds(profile, k, tails, interval, coefficient)
            )
        return reports

    def union_bounds(self, profile: MarginalProfile) -> BoundReport:
        """Bounds on P(at least one event)."""
        if profile.n == 1:
            return self.sharp_bounds(profile, 1)

        interval = self.measure_family.s_interval(profile)
        values = profile.sorted_values
        mode = profile.mode
        odd = 2 * interval.p + 1
        complements = [1 - a for a in values]

        lower = 1 - (
            exact_product(complements[:odd], mode)
            + exact_product(values[:odd], mode)
        ) * exact_product(complements[odd:], mode)
        upper = 1 - self._no_event_upper(profile, interval)

        return self._report(
            profile,
            k=1,
            exact=self.tail_probability_dp(profile, 1),
            lower=lower,
            upper=upper,
            interval=interval,
            s_at_lower=interval.s_max,
            s_at_upper=interval.s_min,
            coefficient=1,
        )

    def intersection_bounds(self, profile: MarginalProfile) -> BoundReport:
        """Bounds on P(all events)."""
        if profile.n == 1:
            return self.sharp_bounds(profile, 1)

        interval = self.measure_family.s_interval(profile)
        values = profile.sorted_values
        mode = profile.mode
        complements = [1 - a for a in values]
        even = 2 * interval.m
        odd = 2 * interval.p + 1

        def at_even(sign: int) -> Number:
            return exact_product(values[:even], mode) * (
                exact_product(values[even:], mode)
                + sign * exact_product(complements[even:], mode)
            )

        def at_odd(sign: int) -> Number:
            return exact_product(values[:odd], mode) * (
                exact_product(values[odd:], mode)
                + sign * exact_product(complements[odd:], mode)
            )

        if profile.n % 2 == 0:
            lower, s_at_lower = at_even(-1), interval.s_min
            upper, s_at_upper = at_odd(1), interval.s_max
        else:
            lower, s_at_lower = at_odd(-1), interval.s_max
            upper, s_at_upper = at_even(1), interval.s_min

        return self._report(
            profile,
            k=profile.n,
            exact=self.tail_probability_dp(profile, profile.n),
            lower=lower,
            upper=upper,
            interval=interval,
            s_at_lower=s_at_lower,
            s_at_upper=s_at_upper,
            coefficient=1,
        )

    def bonferroni_applicable(
        self, profile: MarginalProfile
    ) -> BonferroniReport:
        """Whether the sharp union bound is the truncated Bonferroni sum.

        With a_{n-1} + a_n <= 1 the sum up to order n-1 equals the sharp
        upper bound for even n and the sharp lower bound for odd n.
        """
        self._check_pairwise(profile, "Bonferroni comparison")
        values = profile.values_array()
        symmetric = PoissonBinomial.elementary_symmetric(values)
        truncated = sum(
            (-1) ** (q + 1) * symmetric[q] for q in range(1, profile.n)
        )
        truncated = to_scalar(truncated, profile.mode)

        if values[-2] + values[-1] > 1:
            return BonferroniReport(
                coincidence=BonferroniCoincidence.NEITHER,
                inclusion_exclusion_value=truncated,
            )

        union = self.union_bounds(profile)
        if profile.n % 2 == 0:
            coincidence = BonferroniCoincidence.UPPER
            value = union.sharp_upper
        else:
            coincidence = BonferroniCoincidence.LOWER
            value = union.sharp_lower
        logger.log("BOUNDS", f"Bonferroni n={profile.n}: {coincidence.value}")
        return BonferroniReport(
            coincidence=coincidence,
            value=value,
            inclusion_exclusion_value=truncated,
        )

    def lll_comparison(self, profile: MarginalProfile) -> LllComparison:
        self._check_pairwise(profile, "Local lemma comparison")
        mode = profile.mode
        values = profile.sorted_values
        interval = self.measure_family.s_interval(profile)
        return LllComparison(
            sharp_no_bad_event=self._no_event_upper(profile, interval),
            product_bound=exact_product((1 - 2 * a for a in values), mode),
            positivity=values[-1] < 1 and values[0] + values[1] < 1,
            mutual_no_bad_event=exact_product((1 - a for a in values), mode),
            local_lemma_condition=values[-1] <= to_number("1/4", mode),
        )

    def poisson_binomial_cdf(
        self,
        values,
        mode: ArithmeticMode = ArithmeticMode.FLOATING,
    ) -> TailCdf:
        cdf = PoissonBinomial.cdf(as_array(values, mode))
        return TailCdf(values=tuple(to_scalar(v, mode) for v in cdf))

    def makarov_bounds(
        self, profile: MarginalProfile, k: int
    ) -> MakarovBounds:
        """Standard bounds from combining Y_1 over the first n-1 events with
        the last event, without any assumption on their dependence.

        The printed variant pairs F_1 with a_n; the convolution variant uses
        the Bernoulli CDF value 1 - a_n.
        """
        self._check_threshold(profile, k)
        mode = profile.mode
        one = to_number(1, mode)
        if k == 0:
            return MakarovBounds(
                k=0,
                lower=one,
                upper=one,
                convolution_lower=one,
                convolution_upper=one,
            )

        cdf = self.poisson_binomial_cdf(profile.sorted_values[:-1], mode)
        last = profile.sorted_values[-1]
        zero = to_number(0, mode)

        def upper(point: Number) -> Number:
            return min(2 - max(cdf.at(k - 1) + point, cdf.at(k - 2) + 1), one)

        def lower(point: Number) -> Number:
            return max(1 - min(cdf.at(k), cdf.at(k - 1) + point), zero)

        bounds = MakarovBounds(
            k=k,
            lower=to_scalar(lower(last), mode),
            upper=to_scalar(upper(last), mode),
            convolution_lower=to_scalar(lower(1 - last), mode),
            convolution_upper=to_scalar(upper(1 - last), mode),
        )
        logger.log(
            "BOUNDS",
            f"Makarov n={profile.n} k={k}: "
            f"[{format_scientific(bounds.lower)}, "
            f"{format_scientific(bounds.upper)}]",
        )
        return bounds

    def _sharp_bounds(
        self,
        profile: MarginalProfile,
        k: int,
        tails: np.ndarray,
        interval: SInterval,
        coefficient: int,
    ) -> BoundReport:
        exact = to_scalar(tails[k], profile.mode)
        odd_term = scaled_endpoint(
            coefficient, interval.s_max, interval.log_s_max
        )
        even_term = scaled_endpoint(
            coefficient, interval.s_min, interval.log_abs_s_min
        )

        if k % 2 == 1:
            lower, s_at_lower = exact - odd_term, interval.s_max
            upper, s_at_upper = exact + even_term, interval.s_min
        else:
            lower, s_at_lower = exact - even_term, interval.s_min
            upper, s_at_upper = exact + odd_term, interval.s_max

        return self._report(
            profile,
            k=k,
            exact=exact,
            lower=lower,
            upper=upper,
            interval=interval,
            s_at_lower=s_at_lower,
            s_at_upper=s_at_upper,
            coefficient=coefficient,
        )

    def _report(
        self,
        profile: MarginalProfile,
        k: int,
        exact: Number,
        lower: Number,
        upper: Number,
        interval: SInterval,
        s_at_lower: Number,
        s_at_upper: Number,
        coefficient: int,
    ) -> BoundReport:
        mode = profile.mode
        lower = self._within_unit(lower, mode, f"lower bound for k={k}")
        upper = self._within_unit(upper, mode, f"upper bound for k={k}")
        tol = tolerance(mode)
        if lower > exact + tol or exact > upper + tol:
            raise BoundsInvariantViolation(
                f"bounds for k={k} out of order: "
                f"{lower} <= {exact} <= {upper} fails"
            )

        report = BoundReport(
            k=k,
            exact_mutual=exact,
            sharp_lower=lower,
            sharp_upper=upper,
            s_at_lower=s_at_lower,
            s_at_upper=s_at_upper,
            coefficient=coefficient,
            collapsed=interval.collapsed,
        )
        logger.log(
            "BOUNDS",
            f"Sharp bounds n={profile.n} k={k}: "
            f"[{format_scientific(lower)}, {format_scientific(upper)}]",
        )
        return report

    def _no_event_upper(
        self, profile: MarginalProfile, interval: SInterval
    ) -> Number:
        """Largest P(no event occurs) over the family, reached at s_min."""
        mode = profile.mode
        values = profile.sorted_values
        complements = [1 - a for a in values]
        even = 2 * interval.m
        return (
            exact_product(complements[:even], mode)
            - exact_product(values[:even], mode)
        ) * exact_product(complements[even:], mode)

    @staticmethod
    def _within_unit(value: Number, mode, label: str) -> Number:
        tol = tolerance(mode)
        if value < 0:
            if value < -tol:
                raise BoundsInvariantViolation(f"{label} is {value} < 0")
            return to_number(0, mode)
        if value > 1:
            if value > 1 + tol:
                raise BoundsInvariantViolation(f"{label} is {value} > 1")
            return to_number(1, mode)
        return to_scalar(value, mode)

    @staticmethod
    def _check_threshold(profile: MarginalProfile, k: int):
        if not 0 <= k <= profile.n:
            raise ThresholdOutOfRange(
                f"k={k} out of range 0..{profile.n}"
            )

    @staticmethod
    def _check_pairwise(profile: MarginalProfile, label: str):
        if profile.n < 2:
            raise MarginalValidationError(
                f"{label} needs at least two events, got n={profile.n}"
            )
