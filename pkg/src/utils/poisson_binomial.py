import numpy as np


class PoissonBinomial:
    """Distribution of the number of occurring events among independent ones.

    All routines accept float64 or object (Fraction) arrays and keep the
    dtype of their input, so the same recursion serves both arithmetic modes.
    """

    @staticmethod
    def tails(probabilities: np.ndarray) -> np.ndarray:
        """Entry t is P(Y >= t) for t = 0..n+1.

        Runs P(r, t) = P(r-1, t-1) a_r + P(r-1, t) (1 - a_r) with the
        boundary P(r, 0) = 1 and P(r, t) = 0 for t > r.
        """
        n = probabilities.shape[0]
        tails = np.zeros(n + 2, dtype=probabilities.dtype)
        tails[0] = 1
        for a in probabilities:
            # RHS is materialized before assignment, so this is one DP row
            tails[1:] = tails[:-1] * a + tails[1:] * (1 - a)
        return tails

    @staticmethod
    def pmf(probabilities: np.ndarray) -> np.ndarray:
        # Coefficients of the generating function prod(1 - a + a x)
        pmf = np.ones(1, dtype=probabilities.dtype)
        for a in probabilities:
            convolved = np.zeros(pmf.shape[0] + 1, dtype=probabilities.dtype)
            convolved[:-1] = pmf * (1 - a)
            convolved[1:] += pmf * a
            pmf = convolved
        return pmf

    @staticmethod
    def cdf(probabilities: np.ndarray) -> np.ndarray:
        cdf = np.cumsum(PoissonBinomial.pmf(probabilities))
        cdf[-1] = 1
        return cdf

    @staticmethod
    def elementary_symmetric(values: np.ndarray) -> np.ndarray:
        """e_0..e_n, the coefficients of prod(1 + a x)."""
        coefficients = np.ones(1, dtype=values.dtype)
        for a in values:
            expanded = np.zeros(
                coefficients.shape[0] + 1, dtype=values.dtype
            )
            expanded[:-1] = coefficients
            expanded[1:] += coefficients * a
            coefficients = expanded
        return coefficients
