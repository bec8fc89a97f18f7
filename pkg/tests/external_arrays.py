"""Arrays the package intentionally has no construction for, built here
by independent means to exercise the file-import surfaces.

oa_80_6_2_4   : symmetric weight-class juxtaposition.  Taking every
                weight-1 vector twice, each weight-2 and weight-3
                vector once, each weight-4 vector twice, and the
                all-ones vector three times gives 80 rows; for any 4
                coordinates showing a pattern of weight w the row count
                is m_w + 2 m_{w+1} + m_{w+2} = 5, so the array has
                strength 4 with index 5.
oa_128_9_2_5  : the 128 vectors orthogonal to 111111000 and 000111111
                over GF(2); the dual span has minimum weight 6, giving
                strength 5 with index 4.
oa_64_7_2_6   : the even-weight vectors of length 7 (dual of the
                repetition code), strength 6 with index 1.
"""

import itertools

import numpy as np

WEIGHT_MULTIPLICITY = (0, 2, 1, 1, 2, 0, 3)


def oa_80_6_2_4() -> np.ndarray:
    rows = []
    for v in range(64):
        bits = [(v >> i) & 1 for i in range(6)]
        rows.extend([bits] * WEIGHT_MULTIPLICITY[sum(bits)])
    out = np.array(rows, dtype=np.uint8)
    assert out.shape == (80, 6)
    return out


def oa_128_9_2_5() -> np.ndarray:
    checks = ((1, 1, 1, 1, 1, 1, 0, 0, 0), (0, 0, 0, 1, 1, 1, 1, 1, 1))
    rows = [
        v
        for v in itertools.product((0, 1), repeat=9)
        if all(sum(x * c for x, c in zip(v, chk)) % 2 == 0 for chk in checks)
    ]
    out = np.array(rows, dtype=np.uint8)
    assert out.shape == (128, 9)
    return out


def oa_64_7_2_6() -> np.ndarray:
    rows = [v for v in itertools.product((0, 1), repeat=7) if sum(v) % 2 == 0]
    out = np.array(rows, dtype=np.uint8)
    assert out.shape == (64, 7)
    return out
