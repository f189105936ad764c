"""Unit conversions used at the interface boundary.

Everything inside the library is SI (watts, meters, radians). dBm shows up
only in request grids and CSV columns.
"""

import math


def dbm_to_watt(p_dbm: float) -> float:
    return 1e-3 * 10.0 ** (p_dbm / 10.0)


def watt_to_dbm(p_w: float) -> float:
    if p_w <= 0.0:
        raise ValueError("power must be positive to express in dBm")
    return 10.0 * math.log10(p_w / 1e-3)
