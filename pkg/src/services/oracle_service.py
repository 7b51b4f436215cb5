from fractions import Fraction

import numpy as np
from loguru import logger

from core.constants import ArithmeticMode
from core.exceptions import InvalidGrid, ThresholdOutOfRange
from core.settings import settings
from schemas.marginals_schemas import MarginalProfile
from schemas.measure_schemas import AtomicMeasure
from schemas.oracle_schemas import (
    LemmaViolation,
    OracleRun,
    SharpnessScan,
    VerificationReport,
)
from services.bounds_service import BoundsService
from services.measure_service import (
    MeasureFamilyService,
    check_enumeration_cap,
)
from utils.arithmetic import (
    Number,
    array_dtype,
    close_mask,
    is_close,
    to_number,
    to_scalar,
    tolerance,
)
from utils.subset_masks import (
    SubsetMask,
    popcount_array,
    prefix_mask,
    sign_array,
    superset_sums,
)


class OracleService:
    """Brute-force checks over all 2^n atoms.

    Nothing here reuses the closed forms of BoundsService except to compare
    against them.
    """

    def __init__(
        self,
        measure_family: MeasureFamilyService,
        bounds: BoundsService,
    ):
        self.measure_family = measure_family
        self.bounds = bounds
        self.marginals = measure_family.marginals

    def enumerate_tails(self, measure: AtomicMeasure) -> np.ndarray:
        """Entry k is the mass of atoms with at least k events, k = 0..n+1."""
        check_enumeration_cap(measure.n)
        counts = popcount_array(measure.n)
        tails = np.zeros(measure.n + 2, dtype=array_dtype(measure.mode))
        running = to_number(0, measure.mode)
        for size in range(measure.n, -1, -1):
            running = running + measure.atom_probs[counts == size].sum()
            tails[size] = running
        tails[measure.n + 1] = to_number(0, measure.mode)
        return tails

    def enumerate_tail(self, measure: AtomicMeasure, k: int) -> Number:
        if k < 0:
            raise ThresholdOutOfRange(f"k={k} must be >= 0")
        tails = self.enumerate_tails(measure)
        return to_scalar(tails[min(k, measure.n + 1)], measure.mode)

    def verify_measure(
        self, measure: AtomicMeasure, profile: MarginalProfile
    ) -> VerificationReport:
        check_enumeration_cap(measure.n)
        mode = measure.mode
        atoms = measure.atom_probs
        tol = tolerance(mode)
        full = (1 << measure.n) - 1
        violations = []

        total = atoms.sum()
        normalization_residual = to_scalar(total - 1, mode)
        if not is_close(total, 1, mode):
            violations.append(LemmaViolation(check="normalization"))

        min_atom = to_scalar(atoms.min(), mode)
        negative = np.flatnonzero(atoms < -tol)
        if negative.size:
            violations.append(
                self._violation(profile, "nonnegativity", int(negative[0]))
            )

        residuals = superset_sums(atoms) - (
            self.measure_family.product_rule_targets(profile)
        )
        matches = close_mask(
            residuals, np.zeros_like(residuals), mode
        )
        proper = np.arange(full + 1) != full
        failing = np.flatnonzero(~matches & proper)
        if failing.size:
            violations.append(
                self._violation(profile, "product-rule", int(failing[0]))
            )

        marginal_residuals: list[Number] = [0.0] * measure.n
        for position, original in enumerate(profile.permutation):
            marginal_residuals[original] = to_scalar(
                residuals[1 << position], mode
            )
        worst = max(abs(value) for value in residuals[proper])
        order = self.measure_family.independence_order(measure, profile)
        violations.extend(self.extremal_atom_violations(profile))

        passed = (
            is_close(total, 1, mode)
            and min_atom >= -tol
            and all(
                is_close(value, 0, mode) for value in marginal_residuals
            )
            and order >= measure.n - 1
        )
        report = VerificationReport(
            n=measure.n,
            s=measure.s,
            normalization_residual=normalization_residual,
            min_atom=min_atom,
            marginal_residuals=tuple(marginal_residuals),
            product_rule_residual=to_scalar(worst, mode),
            independence_order=order,
            lemma_violations=tuple(violations),
            passed=passed,
        )
        logger.log(
            "ORACLE",
            f"Measure n={measure.n} order={order} "
            f"{'PASS' if passed else 'FAIL'}",
        )
        return report

    def kernel_vector(
        self,
        n: int,
        s,
        mode: ArithmeticMode = ArithmeticMode.FLOATING,
    ) -> np.ndarray:
        """v_J = (-1)^|J| s, the direction the family moves along."""
        check_enumeration_cap(n)
        signs = sign_array(n).astype(array_dtype(mode))
        return signs * to_number(s, mode)

    def is_kernel_vector(
        self,
        vector: np.ndarray,
        mode: ArithmeticMode | None = None,
    ) -> bool:
        """True when every proper superset sum of `vector` vanishes."""
        if mode is None:
            mode = (
                ArithmeticMode.RATIONAL
                if vector.dtype == object
                else ArithmeticMode.FLOATING
            )
        sums = superset_sums(vector)[:-1]
        return bool(close_mask(sums, np.zeros_like(sums), mode).all())

    def verify_kernel(
        self,
        n: int,
        s,
        mode: ArithmeticMode = ArithmeticMode.FLOATING,
    ) -> bool:
        return self.is_kernel_vector(self.kernel_vector(n, s, mode), mode)

    def extremal_atom_violations(
        self, profile: MarginalProfile
    ) -> list[LemmaViolation]:
        """Exhaustive check of where the product atoms attain their minima.

        Every atom is at least the prefix atom of the same cardinality, the
        odd-cardinality minimum is a^[2p+1] and the even-cardinality minimum
        is a^[2m].
        """
        atoms = self.measure_family.product_atoms(profile)
        mode = profile.mode
        counts = popcount_array(profile.n)
        interval = self.measure_family.s_interval(profile)
        violations = []

        prefix_atoms = atoms[np.left_shift(1, counts) - 1]
        dominated = (atoms >= prefix_atoms) | close_mask(
            atoms, prefix_atoms, mode
        )
        failing = np.flatnonzero(~dominated)
        if failing.size:
            violations.append(
                self._violation(profile, "prefix-dominance", int(failing[0]))
            )

        for label, parity, expected_mask in (
            ("odd-minimum", 1, prefix_mask(2 * interval.p + 1)),
            ("even-minimum", 0, prefix_mask(2 * interval.m)),
        ):
            candidates = np.flatnonzero(counts % 2 == parity)
            values = atoms[candidates]
            position = int(np.argmin(values))
            if not is_close(values[position], atoms[expected_mask], mode):
                violations.append(
                    self._violation(
                        profile, label, int(candidates[position])
                    )
                )

        if interval.m - interval.p not in (0, 1):
            violations.append(LemmaViolation(check="m-equals-p-or-p-plus-1"))

        if violations:
            logger.log(
                "ORACLE",
                f"Extremal atom checks failed: "
                f"{[violation.check for violation in violations]}",
            )
        return violations

    def verify_extremal_atoms(self, profile: MarginalProfile) -> bool:
        return not self.extremal_atom_violations(profile)

    def scan_sharpness(
        self,
        profile: MarginalProfile,
        k: int,
        grid_points: int | None = None,
    ) -> SharpnessScan:
        if not 1 <= k <= profile.n:
            raise ThresholdOutOfRange(f"k={k} out of range 1..{profile.n}")
        grid = self.s_grid(profile, grid_points)
        tails = [
            self.enumerate_tails(self.measure_family.build_measure(profile, s))
            for s in grid
        ]
        return self._scan(profile, k, grid, [row[k] for row in tails])

    def s_grid(
        self, profile: MarginalProfile, grid_points: int | None = None
    ) -> list[Number]:
        """Evenly spaced s values over the interval, endpoints exact."""
        if grid_points is None:
            grid_points = settings.app_grid_points
        if grid_points < 2:
            raise InvalidGrid(
                f"grid needs at least 2 points, got {grid_points}"
            )
        check_enumeration_cap(profile.n)
        interval = self.measure_family.s_interval(profile)
        steps = grid_points - 1
        width = interval.s_max - interval.s_min
        if profile.mode is ArithmeticMode.RATIONAL:
            grid = [
                interval.s_min + width * Fraction(i, steps)
                for i in range(grid_points)
            ]
        else:
            grid = [
                interval.s_min + width * i / steps for i in range(grid_points)
            ]
        grid[0], grid[-1] = interval.s_min, interval.s_max
        return grid

    def random_profiles(
        self,
        count: int | None = None,
        max_n: int | None = None,
        seed: int | None = None,
        mode: ArithmeticMode = ArithmeticMode.FLOATING,
    ) -> list[MarginalProfile]:
        count = settings.app_random_profiles if count is None else count
        max_n = max_n or settings.app_random_max_n
        seed = settings.app_seed if seed is None else seed
        if max_n < 2:
            raise ThresholdOutOfRange(f"max_n={max_n} must be >= 2")
        check_enumeration_cap(max_n)

        rng = np.random.default_rng(seed)
        profiles = []
        for _ in range(count):
            n = int(rng.integers(2, max_n + 1))
            if mode is ArithmeticMode.RATIONAL:
                values = [
                    Fraction(int(numerator), 1000)
                    for numerator in rng.integers(1, 1000, size=n)
                ]
            else:
                values = [float(value) for value in rng.random(n)]
            profiles.append(self.marginals.from_raw(values, mode))
        logger.log(
            "ORACLE", f"Drew {count} profiles with n <= {max_n}, seed={seed}"
        )
        return profiles

    def run_verification(
        self,
        profile: MarginalProfile,
        grid_points: int | None = None,
        samples: int | None = None,
        seed: int | None = None,
    ) -> OracleRun:
        """Every oracle check for one profile."""
        mode = profile.mode
        samples = samples or settings.app_measure_samples
        zero = to_number(0, mode)

        violations = self.extremal_atom_violations(profile)
        worst_normalization = worst_marginal = worst_rule = zero
        worst_tail = zero
        min_atom = to_number(1, mode)
        failed: list[Number] = []

        sample_grid = self.s_grid(profile, max(samples, 2))
        for s in sample_grid:
            measure = self.measure_family.build_measure(profile, s)
            report = self.verify_measure(measure, profile)
            if not report.passed:
                failed.append(s)
            worst_normalization = max(
                worst_normalization, abs(report.normalization_residual)
            )
            worst_marginal = max(
                [worst_marginal]
                + [abs(value) for value in report.marginal_residuals]
            )
            worst_rule = max(worst_rule, report.product_rule_residual)
            min_atom = min(min_atom, report.min_atom)

        grid = self.s_grid(profile, grid_points)
        grid_tails = [
            self.enumerate_tails(self.measure_family.build_measure(profile, s))
            for s in grid
        ]
        for s, tails in zip(grid, grid_tails):
            for k in range(profile.n + 1):
                predicted = self.bounds.probability_at_s(profile, k, s)
                worst_tail = max(worst_tail, abs(tails[k] - predicted))

        mismatches = [
            k
            for k in range(1, profile.n + 1)
            if not self._scan(
                profile, k, grid, [row[k] for row in grid_tails]
            ).endpoints_match
        ]

        tail_ok = is_close(worst_tail, 0, mode)
        passed = not failed and not mismatches and not violations and tail_ok
        run = OracleRun(
            marginals=profile.original_values,
            seed=seed,
            measures_checked=len(sample_grid),
            worst_normalization_residual=to_scalar(worst_normalization, mode),
            worst_marginal_residual=to_scalar(worst_marginal, mode),
            worst_product_rule_residual=to_scalar(worst_rule, mode),
            min_atom=to_scalar(min_atom, mode),
            worst_tail_residual=to_scalar(worst_tail, mode),
            scan_mismatches=tuple(mismatches),
            lemma_violations=tuple(violations),
            failed_measures=tuple(failed),
            passed=passed,
        )
        logger.log(
            "ORACLE",
            f"Verification n={profile.n}: {'PASS' if passed else 'FAIL'}",
        )
        return run

    def _scan(
        self,
        profile: MarginalProfile,
        k: int,
        grid: list[Number],
        values: list[Number],
    ) -> SharpnessScan:
        mode = profile.mode
        argmin = min(range(len(values)), key=lambda i: values[i])
        argmax = max(range(len(values)), key=lambda i: values[i])
        sharp = self.bounds.sharp_bounds(profile, k)
        lower_index = 0 if sharp.s_at_lower == grid[0] else len(grid) - 1
        upper_index = 0 if sharp.s_at_upper == grid[0] else len(grid) - 1

        endpoints_match = (
            is_close(values[argmin], sharp.sharp_lower, mode)
            and is_close(values[argmax], sharp.sharp_upper, mode)
            and is_close(values[lower_index], values[argmin], mode)
            and is_close(values[upper_index], values[argmax], mode)
        )
        return SharpnessScan(
            k=k,
            grid_points=len(grid),
            empirical_min=to_scalar(values[argmin], mode),
            empirical_max=to_scalar(values[argmax], mode),
            argmin_s=grid[argmin],
            argmax_s=grid[argmax],
            sharp_lower=sharp.sharp_lower,
            sharp_upper=sharp.sharp_upper,
            predicted_argmin_s=sharp.s_at_lower,
            predicted_argmax_s=sharp.s_at_upper,
            endpoints_match=endpoints_match,
        )

    def _violation(
        self, profile: MarginalProfile, check: str, mask: int
    ) -> LemmaViolation:
        subset = self.marginals.to_original_indices(profile, SubsetMask(mask))
        return LemmaViolation(check=check, subset=tuple(subset))
