from typing import Iterable, NewType

import numpy as np

SubsetMask = NewType("SubsetMask", int)


def popcount(mask: int) -> int:
    return mask.bit_count()


def prefix_mask(size: int) -> SubsetMask:
    """Mask of the first `size` sorted events, i.e. the set [size]."""
    return SubsetMask((1 << size) - 1)


def mask_from_indices(indices: Iterable[int]) -> SubsetMask:
    mask = 0
    for index in indices:
        mask |= 1 << index
    return SubsetMask(mask)


def indices_from_mask(mask: int) -> list[int]:
    indices = []
    index = 0
    while mask:
        if mask & 1:
            indices.append(index)
        mask >>= 1
        index += 1
    return indices


def popcount_array(n: int) -> np.ndarray:
    counts = np.zeros(1, dtype=np.int64)
    for _ in range(n):
        counts = np.concatenate([counts, counts + 1])
    return counts


def sign_array(n: int) -> np.ndarray:
    """(-1)^|J| for every mask J of n bits."""
    signs = np.ones(1, dtype=np.int64)
    for _ in range(n):
        signs = np.concatenate([signs, -signs])
    return signs


def superset_sums(vector: np.ndarray) -> np.ndarray:
    """Entry J of the result is the sum of vector[I] over all I ⊇ J."""
    size = vector.shape[0]
    n = size.bit_length() - 1
    result = vector.copy()
    for bit in range(n):
        block = 1 << bit
        view = result.reshape(-1, 2, block)
        view[:, 0, :] += view[:, 1, :]
    return result
