"""Frozen reference numbers used by the tests."""

# minimum entanglers for an arbitrary n-qubit unitary, {(n, G): value}; (5, 2) is an estimate
LOWER_BOUNDS = {
    (2, 1): 3, (3, 1): 14, (4, 1): 61, (5, 1): 252, (6, 1): 1020,
    (2, 2): 0, (3, 2): 4, (4, 2): 10, (5, 2): 42, (6, 2): 169,
    (2, 3): 0, (3, 3): 0, (4, 3): 4, (5, 3): 14, (6, 3): 36,
}
ESTIMATED_BOUNDS = {(5, 2)}

# rows n = 3..7: qubit lower bound, optimized qubit QSD, earlier qudit scheme, remapped QLOQ QSD g = 2, 3, 4
QSD_TABLE = {
    3: (14, 20, 64, 20, 24, 56),
    4: (61, 100, 272, 80, 48, 56),
    5: (252, 444, 1184, 344, 168, 104),
    6: (1020, 1868, 4848, 1448, 696, 344),
    7: (4091, 7660, 20016, 5960, 2904, 1400),
}

# smallest N with R > 1; rows g = 2..7, columns n = 2..9
RATIO_THRESHOLDS = {
    2: (3, 6, 8, 10, 12, 14, 16, 18),
    3: (4, 6, 7, 9, 11, 13, 15, 17),
    4: (5, 6, 7, 9, 11, 13, 14, 16),
    5: (6, 6, 7, 9, 11, 12, 14, 16),
    6: (7, 7, 8, 9, 11, 12, 14, 15),
    7: (8, 8, 8, 9, 10, 12, 13, 15),
}

# R at N = 1e12; rows g = 1..7, columns n = 2..9
ASYMPTOTIC_RATIOS = {
    1: (1, 1, 1, 1, 1, 1, 1, 1),
    2: (2, 1.333, 1.2, 1.143, 1.111, 1.091, 1.077, 1.067),
    3: (4, 2, 1.6, 1.429, 1.333, 1.273, 1.231, 1.2),
    4: (8, 3.333, 2.4, 2, 1.778, 1.636, 1.538, 1.467),
    5: (16, 6, 4, 3.143, 2.667, 2.364, 2.154, 2),
    6: (32, 11.333, 7.2, 5.429, 4.444, 3.818, 3.385, 3.067),
    7: (64, 22, 13.6, 10, 8, 6.727, 5.846, 5.2),
}
GATE_SIZES = tuple(range(2, 10))
