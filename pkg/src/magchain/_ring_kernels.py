"""Closed forms for the six ring interaction kernels and their derivatives.

The function bodies below were generated by symbolic differentiation of the
meromorphic kernel expressions (see tools/generate_ring_kernels.py) and are
checked in tests against high-order central differences.  ``LAURENT``
holds the Laurent coefficients of each kernel about t = 0, keyed by the
power of t; the series are used for singularity subtraction in the
finite-part quadrature of the nonlocal ring energy.
"""

from numpy import sin, cos


def k00_d0(t):
    return (1 / 64) * (cos(t) ** 2 + 38 * cos(t) + 57) / sin((1 / 2) * t) ** 5


def k00_d1(t):
    return (1 / 32) * (-1 + 60 / sin((1 / 2) * t) ** 2 - 120 / sin((1 / 2) * t) ** 4) * cos((1 / 2) * t) / sin((1 / 2) * t) ** 2


def k00_d2(t):
    return (1 / 512) * (cos(t) ** 3 + 361 * cos(t) ** 2 + 2635 * cos(t) + 2763) / sin((1 / 2) * t) ** 7


def k00_d3(t):
    return -1 / 512 * (58479 * cos(t) + 2178 * cos(2 * t) + cos(3 * t) + 100622) * sin(t) / ((cos(t) - 1) ** 4 * sin((1 / 2) * t))


def k00_d4(t):
    return (1 / 256) * (sin(t) ** 4 + 3276 * cos(t) ** 3 + 82904 * cos(t) ** 2 + 308204 * cos(t) + 250736) / ((cos(t) - 1) ** 4 * sin((1 / 2) * t))


def k01_d0(t):
    return (3 / 32) * (cos(t) + 11) * sin(t) / sin((1 / 2) * t) ** 5


def k01_d1(t):
    return (3 / 16) * (sin(t) ** 2 - 38 * cos(t) - 58) / ((cos(t) - 1) ** 2 * sin((1 / 2) * t))


def k01_d2(t):
    return (3 / 32) * (1 - 60 / sin((1 / 2) * t) ** 2 + 120 / sin((1 / 2) * t) ** 4) * cos((1 / 2) * t) / sin((1 / 2) * t) ** 2


def k01_d3(t):
    return (3 / 256) * (10543 * cos(t) + 722 * cos(2 * t) + cos(3 * t) + 11774) / ((cos(t) - 1) ** 3 * sin((1 / 2) * t))


def k01_d4(t):
    return (3 / 512) * (58479 * cos(t) + 2178 * cos(2 * t) + cos(3 * t) + 100622) * sin(t) / ((cos(t) - 1) ** 4 * sin((1 / 2) * t))


def k11_d0(t):
    return (3 / 64) * (3 * cos(t) ** 2 - 19) / sin((1 / 2) * t) ** 5


def k11_d1(t):
    return (3 / 64) * (-350 * cos((1 / 2) * t) + 27 * cos((3 / 2) * t) + 3 * cos((5 / 2) * t)) / (cos(t) - 1) ** 3


def k11_d2(t):
    return (3 / 512) * (3 * cos(t) ** 3 + 57 * cos(t) ** 2 - 379 * cos(t) - 641) / sin((1 / 2) * t) ** 7


def k11_d3(t):
    return (3 / 512) * (6659 * cos(t) - 378 * cos(2 * t) - 3 * cos(3 * t) + 20602) * sin(t) / ((cos(t) - 1) ** 4 * sin((1 / 2) * t))


def k11_d4(t):
    return (3 / 256) * (3 * sin(t) ** 4 + 594 * cos(t) ** 3 - 6610 * cos(t) ** 2 - 50962 * cos(t) - 50542) / ((cos(t) - 1) ** 4 * sin((1 / 2) * t))


def k02_d0(t):
    return (1 / 8) * (cos(t) + 3) / sin((1 / 2) * t) ** 3


def k02_d1(t):
    return -1 / 8 * (23 * cos((1 / 2) * t) + cos((3 / 2) * t)) / (cos(t) - 1) ** 2


def k02_d2(t):
    return (1 / 64) * (cos(t) ** 2 + 38 * cos(t) + 57) / sin((1 / 2) * t) ** 5


def k02_d3(t):
    return (1 / 32) * (-1 + 60 / sin((1 / 2) * t) ** 2 - 120 / sin((1 / 2) * t) ** 4) * cos((1 / 2) * t) / sin((1 / 2) * t) ** 2


def k02_d4(t):
    return (1 / 64) * (-cos(t) ** 3 - 361 * cos(t) ** 2 - 2635 * cos(t) - 2763) / ((cos(t) - 1) ** 3 * sin((1 / 2) * t))


def k12_d0(t):
    return (3 / 16) * (cos(t) - 3) * sin(t) / sin((1 / 2) * t) ** 5


def k12_d1(t):
    return (3 / 8) * (sin(t) ** 2 + 4 * cos(t) + 12) / ((cos(t) - 1) ** 2 * sin((1 / 2) * t))


def k12_d2(t):
    return (3 / 16) * (1 + 3 / sin((1 / 2) * t) ** 2 - 20 / sin((1 / 2) * t) ** 4) * cos((1 / 2) * t) / sin((1 / 2) * t) ** 2


def k12_d3(t):
    return (3 / 32) * (cos(t) ** 3 - 17 * cos(t) ** 2 - 417 * cos(t) - 527) / ((cos(t) - 1) ** 3 * sin((1 / 2) * t))


def k12_d4(t):
    return (3 / 256) * (-8609 * cos(t) - 90 * cos(2 * t) + cos(3 * t) - 18182) * sin(t) / ((cos(t) - 1) ** 4 * sin((1 / 2) * t))


def k22_d0(t):
    return (1 / 8) * (3 - cos(t)) / sin((1 / 2) * t) ** 3


def k22_d1(t):
    return (1 / 8) * (-13 * cos((1 / 2) * t) + cos((3 / 2) * t)) / (1 - cos(t)) ** 2


def k22_d2(t):
    return (1 / 64) * (sin(t) ** 2 + 16 * cos(t) + 32) / sin((1 / 2) * t) ** 5


def k22_d3(t):
    return (1 / 32) * (1 + 21 / sin((1 / 2) * t) ** 2 - 60 / sin((1 / 2) * t) ** 4) * cos((1 / 2) * t) / sin((1 / 2) * t) ** 2


def k22_d4(t):
    return (1 / 64) * (cos(t) ** 3 - 125 * cos(t) ** 2 - 1289 * cos(t) - 1467) / ((cos(t) - 1) ** 3 * sin((1 / 2) * t))


DERIVATIVES = {
    "00": (k00_d0, k00_d1, k00_d2, k00_d3, k00_d4),
    "01": (k01_d0, k01_d1, k01_d2, k01_d3, k01_d4),
    "11": (k11_d0, k11_d1, k11_d2, k11_d3, k11_d4),
    "02": (k02_d0, k02_d1, k02_d2, k02_d3, k02_d4),
    "12": (k12_d0, k12_d1, k12_d2, k12_d3, k12_d4),
    "22": (k22_d0, k22_d1, k22_d2, k22_d3, k22_d4),
}

# Laurent coefficients about t = 0 (exact rationals evaluated in double
# precision): kernel name -> {power of t: coefficient}.  The odd/even
# structure encodes each kernel's parity.
LAURENT = {
    "00": {
        -5: 48.0,
        1: 31 / 4032,
        3: 127 / 92160,
        5: 511 / 4055040,
        7: 1414477 / 169073049600,
        9: 8191 / 17836277760,
    },
    "01": {
        -4: 36.0,
        0: -7 / 160,
        2: -31 / 2688,
        4: -127 / 122880,
        6: -511 / 8110080,
        8: -1414477 / 450861465600,
        10: -8191 / 59454259200,
    },
    "11": {
        -5: -24.0,
        -3: -19 / 2,
        1: -3103 / 80640,
        3: -14447 / 3870720,
        5: -36763 / 162201600,
        7: -42064817 / 3719607091200,
        9: -49236493 / 97386076569600,
    },
    "02": {
        -3: 4.0,
        1: 7 / 480,
        3: 31 / 24192,
        5: 127 / 1843200,
        7: 73 / 24330240,
        9: 1414477 / 12173259571200,
    },
    "12": {
        -4: -12.0,
        -2: -7 / 2,
        0: 77 / 480,
        2: 1339 / 80640,
        4: 1001 / 1105920,
        6: 19999 / 486604800,
        8: 25324457 / 14878428364800,
        10: 4608967 / 69561483264000,
    },
    "22": {
        -3: 2.0,
        -1: 3 / 4,
        1: 37 / 960,
        3: 751 / 483840,
        5: 503 / 8601600,
        7: 14411 / 6812467200,
        9: 19744337 / 267811710566400,
    },
}
