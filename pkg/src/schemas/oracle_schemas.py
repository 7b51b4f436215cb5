from schemas.base_schemas import FrozenSchema, Real


class LemmaViolation(FrozenSchema):
    check: str
    # 1-based indices in the original input order
    subset: tuple[int, ...] = ()


class VerificationReport(FrozenSchema):
    n: int
    s: Real | None = None
    normalization_residual: Real
    min_atom: Real
    marginal_residuals: tuple[Real, ...]
    product_rule_residual: Real
    independence_order: int
    lemma_violations: tuple[LemmaViolation, ...] = ()
    passed: bool


class SharpnessScan(FrozenSchema):
    k: int
    grid_points: int
    empirical_min: Real
    empirical_max: Real
    argmin_s: Real
    argmax_s: Real
    sharp_lower: Real
    sharp_upper: Real
    predicted_argmin_s: Real
    predicted_argmax_s: Real
    endpoints_match: bool


class OracleRun(FrozenSchema):
    marginals: tuple[Real, ...]
    seed: int | None = None
    measures_checked: int
    worst_normalization_residual: Real
    worst_marginal_residual: Real
    worst_product_rule_residual: Real
    min_atom: Real
    worst_tail_residual: Real
    scan_mismatches: tuple[int, ...] = ()
    lemma_violations: tuple[LemmaViolation, ...] = ()
    failed_measures: tuple[Real, ...] = ()
    passed: bool
