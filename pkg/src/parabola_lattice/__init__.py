"""Exact lattice-point counting under and near dilated parabolas."""

from .counting import (
    P0,
    CountingInstance,
    Parabola,
    error_term,
    f_value,
    floor_sum,
    instance,
    main_term,
    near_count,
    near_count_error,
    psi_sum,
)
from .ratmath import Rat, dist_nearest_int, floor, format_rat, frac, parse_rat, psi

__version__ = "0.1.0"
