"""Hand-checked Taxicab decompositions used as test fixtures."""

CUBE_PAIRS = [
    (1729, (1, 12), (9, 10)),
    (4104, (9, 15), (16, 2)),
    (20683, (24, 19), (10, 27)),
]

# (3,6,6) and (3,8,8) solutions found by each algorithm
KNOWN_SOLUTIONS = {
    "ga-366": [
        ((1, 3, 3, 9, 13, 11), (12, 8, 4, 6, 4, 12)),
        ((12, 29, 31, 4, 5, 6), (9, 28, 23, 18, 25, 2)),
        ((27, 15, 27, 18, 10, 27), (30, 16, 12, 31, 12, 17)),
        ((2, 2, 21, 27, 15, 15), (30, 8, 3, 14, 11, 16)),
        ((7, 3, 31, 16, 24, 20), (28, 18, 1, 8, 28, 18)),
        ((15, 26, 15, 15, 15, 22), (19, 10, 2, 21, 27, 17)),
    ],
    "gqaa-366": [
        ((13, 9, 8, 6, 8, 8), (10, 2, 10, 11, 2, 11)),
        ((25, 9, 5, 10, 3, 9), (7, 15, 21, 12, 11, 13)),
        ((18, 15, 29, 27, 23, 13), (16, 26, 11, 30, 26, 4)),
        ((1, 23, 29, 18, 9, 13), (24, 28, 10, 3, 20, 8)),
        ((21, 29, 19, 3, 11, 3), (26, 13, 14, 9, 22, 20)),
        ((24, 26, 25, 3, 7, 11), (22, 20, 20, 28, 5, 1)),
    ],
    "ga-388": [
        ((22, 6, 2, 2, 19, 24, 4, 24), (21, 13, 13, 5, 5, 12, 3, 31)),
        ((26, 6, 3, 13, 10, 19, 18, 26), (17, 7, 5, 29, 16, 25, 4, 12)),
        ((2, 20, 23, 22, 15, 2, 22, 1), (4, 3, 10, 29, 11, 5, 7, 26)),
        ((16, 16, 8, 21, 24, 31, 9, 21), (30, 14, 19, 19, 29, 15, 7, 1)),
        ((21, 10, 15, 14, 19, 24, 22, 26), (17, 2, 20, 7, 4, 6, 31, 28)),
    ],
    "gqaa-388": [
        ((25, 13, 21, 3, 25, 1, 25, 21), (11, 24, 20, 30, 14, 14, 22, 11)),
        ((24, 28, 8, 25, 20, 12, 6, 10), (16, 23, 4, 26, 19, 16, 23, 18)),
        ((7, 28, 6, 4, 6, 28, 15, 29), (19, 26, 21, 10, 9, 18, 25, 25)),
        ((17, 9, 16, 23, 4, 21, 17, 14), (10, 5, 26, 7, 27, 3, 5, 2)),
    ],
}

# rows as printed whose cube sums disagree; kept out of KNOWN_SOLUTIONS
DEFECTIVE_ROWS = [
    ((13, 21, 14, 17, 19, 27, 14, 15), (12, 9, 26, 8, 2, 22, 28, 7)),
    ((17, 29, 21, 14, 1, 19, 17, 1), (26, 30, 7, 3, 11, 24, 12, 8)),
    ((20, 30, 3, 18, 14, 12, 12, 30), (25, 5, 2, 21, 19, 26, 29)),
]
