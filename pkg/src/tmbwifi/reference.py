"""Reference data from a single-floor office measurement campaign.

``LOCATIONS`` lists the 21 receiver positions (distance to the AP, traversed
office walls, antenna height). ``MCS_MODES`` lists, for every non-empty
(RSSI bin, BW, PTX) cell of the reference MCS table, the most selected
(MCS, NSS) pair and its appearance frequency in percent.
"""

from __future__ import annotations

# (location_id, height_m, distance_m, walls); all on one floor.
LOCATIONS = [
    ("0", 0.740, 1.000, 0),
    ("1", 0.505, 0.934, 0),
    ("2", 0.740, 3.084, 0),
    ("3", 0.740, 4.266, 0),
    ("4", 1.680, 2.717, 0),
    ("5", 1.970, 2.879, 0),
    ("6", 1.680, 3.995, 0),
    ("7", 0.740, 2.945, 0),
    ("8", 0.505, 5.778, 2),
    ("9", 1.800, 9.286, 1),
    ("10", 0.740, 11.141, 4),
    ("11", 1.970, 10.669, 3),
    ("12", 1.970, 13.884, 4),
    ("13", 0.740, 15.801, 4),
    ("14", 1.970, 17.579, 5),
    ("15", 1.800, 18.508, 3),
    ("16", 0.0, 22.020, 2),
    ("17", 0.505, 24.304, 2),
    ("18", 0.740, 8.975, 3),
    ("19", 1.970, 7.267, 2),
    ("20", 0.740, 4.623, 1),
]

AP_HEIGHT_M = 0.740

# Frequency study, mean RSSI (dBm) per location and channel; channel 36 is
# the reference.
CHANNEL_MEANS = {
    ("7", 36): -44.74,
    ("7", 40): -43.40,
    ("7", 44): -40.96,
    ("10", 36): -78.43,
    ("10", 40): -77.14,
    ("10", 44): -77.84,
    ("18", 36): -58.81,
    ("18", 40): -57.91,
    ("18", 44): -59.56,
}

# Per-packet RSSI std-dev (dB) over 10-minute captures, and max |grid point
# mean - centre mean| (dB) over the 3x3 grids.
TIME_STD_DB = {"7": 0.92, "10": 0.94, "18": 2.26}
GRID_MAX_ABS_DIFF_DB = {"7": 3.96, "10": 3.38, "18": 3.11}

# Fitted RMSE (dB) of each model against the reference campaign measurements.
RMSE_DB = {
    "residential": 7.9932,
    "enterprise": 7.8431,
    "log-distance": 13.3454,
    "wall-factor": 4.8237,
    "tmb": 7.7283,
    "itu": 11.5772,
}

# (rssi_bin_low_dbm, bw_mhz, ptx_dbm, mcs, nss, percent)
MCS_MODES = [
    (-97, 20, 4, 0, 1, 82.42),
    (-97, 20, 10, 3, 1, 54.57),
    (-92, 20, 4, 2, 1, 31.62),
    (-92, 20, 10, 3, 1, 74.76),
    (-92, 40, 4, 0, 1, 51.24),
    (-92, 40, 10, 1, 1, 51.41),
    (-92, 80, 4, 1, 1, 57.61),
    (-92, 80, 10, 0, 1, 46.37),
    (-92, 80, 23, 1, 1, 100.00),
    (-87, 20, 4, 4, 1, 33.10),
    (-87, 20, 10, 3, 1, 55.00),
    (-87, 20, 23, 5, 1, 42.86),
    (-87, 40, 4, 1, 1, 69.45),
    (-87, 40, 10, 1, 1, 34.75),
    (-87, 40, 23, 3, 1, 99.33),
    (-87, 80, 4, 1, 1, 48.37),
    (-87, 80, 10, 2, 1, 54.91),
    (-87, 80, 23, 1, 1, 43.62),
    (-82, 20, 4, 5, 1, 45.33),
    (-82, 20, 10, 6, 1, 27.27),
    (-82, 20, 23, 3, 2, 29.33),
    (-82, 40, 4, 4, 1, 54.72),
    (-82, 40, 10, 3, 1, 60.33),
    (-82, 40, 23, 5, 1, 31.47),
    (-82, 80, 4, 3, 1, 82.68),
    (-82, 80, 10, 4, 1, 31.15),
    (-82, 80, 23, 3, 1, 57.37),
    (-77, 20, 4, 4, 1, 35.76),
    (-77, 20, 10, 5, 1, 29.85),
    (-77, 20, 23, 5, 1, 30.89),
    (-77, 40, 4, 4, 1, 45.90),
    (-77, 40, 10, 6, 1, 17.61),
    (-77, 40, 23, 5, 1, 45.14),
    (-77, 80, 4, 4, 1, 81.67),
    (-77, 80, 10, 6, 1, 49.59),
    (-77, 80, 23, 4, 2, 35.14),
    (-72, 20, 4, 7, 2, 44.44),
    (-72, 20, 10, 6, 2, 36.17),
    (-72, 20, 23, 7, 2, 37.24),
    (-72, 40, 4, 4, 2, 34.29),
    (-72, 40, 10, 7, 1, 47.03),
    (-72, 40, 23, 6, 1, 41.91),
    (-72, 80, 4, 7, 1, 40.04),
    (-72, 80, 10, 7, 1, 67.49),
    (-72, 80, 23, 8, 1, 47.39),
    (-67, 20, 4, 8, 2, 77.39),
    (-67, 20, 10, 6, 2, 54.10),
    (-67, 20, 23, 5, 2, 28.45),
    (-67, 40, 4, 8, 2, 48.93),
    (-67, 40, 10, 7, 2, 45.38),
    (-67, 40, 23, 4, 2, 44.30),
    (-67, 80, 4, 7, 2, 58.14),
    (-67, 80, 10, 4, 2, 42.02),
    (-67, 80, 23, 5, 2, 61.79),
    (-62, 20, 4, 8, 2, 60.70),
    (-62, 20, 10, 8, 2, 86.00),
    (-62, 20, 23, 7, 2, 71.37),
    (-62, 40, 4, 9, 2, 51.95),
    (-62, 40, 10, 9, 2, 65.36),
    (-62, 40, 23, 9, 2, 55.56),
    (-62, 80, 4, 7, 2, 62.26),
    (-62, 80, 10, 9, 2, 63.79),
    (-62, 80, 23, 8, 2, 45.01),
    (-57, 20, 4, 8, 2, 50.33),
    (-57, 20, 10, 8, 2, 99.13),
    (-57, 20, 23, 8, 2, 66.46),
    (-57, 40, 4, 8, 2, 60.79),
    (-57, 40, 10, 9, 2, 93.40),
    (-57, 40, 23, 8, 2, 52.76),
    (-57, 80, 4, 7, 2, 68.81),
    (-57, 80, 10, 9, 2, 74.51),
    (-52, 20, 4, 8, 2, 97.92),
    (-52, 20, 10, 8, 2, 95.97),
    (-52, 20, 23, 8, 2, 99.12),
    (-52, 40, 4, 9, 2, 53.30),
    (-52, 40, 10, 9, 2, 93.35),
    (-52, 40, 23, 9, 2, 95.55),
    (-52, 80, 4, 9, 2, 94.86),
    (-52, 80, 10, 7, 2, 57.39),
    (-52, 80, 23, 9, 2, 96.58),
    (-47, 20, 4, 8, 2, 98.51),
    (-47, 20, 10, 8, 2, 97.89),
    (-47, 20, 23, 8, 2, 99.07),
    (-47, 40, 4, 9, 2, 95.37),
    (-47, 40, 10, 9, 2, 52.91),
    (-47, 40, 23, 9, 2, 95.82),
    (-47, 80, 4, 9, 2, 97.69),
    (-47, 80, 10, 9, 2, 93.71),
    (-47, 80, 23, 9, 2, 91.60),
    (-42, 20, 10, 8, 2, 97.25),
    (-42, 20, 23, 8, 2, 96.00),
    (-42, 40, 4, 9, 2, 99.58),
    (-42, 40, 10, 9, 2, 98.58),
    (-42, 40, 23, 9, 2, 85.96),
    (-42, 80, 10, 9, 2, 97.35),
    (-42, 80, 23, 9, 2, 87.26),
    (-37, 20, 23, 8, 2, 99.55),
    (-37, 40, 10, 9, 2, 99.12),
    (-37, 40, 23, 9, 2, 90.21),
    (-32, 20, 23, 8, 2, 64.42),
    (-32, 40, 23, 9, 2, 97.21),
    (-32, 80, 23, 9, 2, 98.16),
    (-27, 20, 23, 8, 2, 97.82),
]
