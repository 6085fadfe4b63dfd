"""
Physical-mode identification by continuation in the mesh size

The root set is recomputed on meshes scaled by t = 2^-j until the continuous
reference |k*h| * t drops below the continuation target. On the finest level the
physical root is the one nearest the reference in k/t space; it is then followed
back to t = 1 by nearest-neighbour matching.
"""

import logging
from typing import Callable, List, Optional

import numpy as np

from core.config import get_settings

logger = logging.getLogger(__name__)


def continuation_levels(reference: complex) -> List[float]:
    """Scales 1, 1/2, ..., 2^-J with J the first level under the target"""
    settings = get_settings()
    size = abs(reference)
    levels = 0
    while size * 2.0**-levels > settings.CONTINUATION_TARGET and levels < settings.CONTINUATION_MAX_LEVELS:
        levels += 1
    levels = max(levels, settings.CONTINUATION_MIN_LEVELS)
    return [2.0**-j for j in range(levels + 1)]


def _nearest(candidates: np.ndarray, target: complex) -> int:
    distance = np.abs(candidates - target)
    best = np.flatnonzero(distance <= distance.min() * (1 + 1e-12) + 1e-300)
    if len(best) == 1:
        return int(best[0])
    # Ties go to the least attenuated root
    return int(best[np.argmin(np.abs(candidates[best].imag))])


def continue_physical(
    roots_at: Callable[[float], np.ndarray],
    reference: complex,
    roots: Optional[np.ndarray] = None,
) -> int:
    """
    Index of the physical root at t = 1

    Args:
        roots_at: Root set of the scheme on the mesh scaled by t (k*h values)
        reference: Continuous k*h at t = 1; the scaled reference is reference * t
        roots: Precomputed roots at t = 1

    Returns:
        Position of the physical root in roots_at(1.0)
    """
    scales = continuation_levels(reference)
    level_roots = [np.asarray(roots if roots is not None else roots_at(1.0), dtype=complex)]
    level_roots += [np.asarray(roots_at(t), dtype=complex) for t in scales[1:]]

    index = _nearest(level_roots[-1] / scales[-1], reference)
    for level in range(len(scales) - 2, -1, -1):
        previous = level_roots[level + 1][index] / scales[level + 1]
        index = _nearest(level_roots[level] / scales[level], previous)

    logger.debug(f"Physical root located after {len(scales) - 1} continuation levels")
    return index
