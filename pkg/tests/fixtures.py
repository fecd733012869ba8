"""Reference spectra and configurations shared by the tests."""

import numpy as np

from rod_hearing import FasteningConfig

# clamped left end, pinned right end
CLAMPED_PINNED = FasteningConfig.from_coefficients([1, 1, 0, 0, 1, 0, 1, 0])
CLAMPED_PINNED_S = [
    15.4182057169801, 49.9648620318002, 104.247696458861, 178.269729494609,
    272.030971305025, 385.531421917553, 518.771081332259, 671.749949549144,
    844.468026568208,
]

# translational spring of stiffness 5 with zero moment on the left, clamped right
SPRING5_CLAMPED = FasteningConfig.from_coefficients([5, 0, 1, 1, 1, 1, 0, 0])
SPRING5_CLAMPED_S = [
    5.60163863016235, 22.4984332740862, 61.8604321649037, 120.984868139371,
    199.909638169628, 298.589053349029, 417.014779762035, 555.183266366176,
    713.092945010199,
]

# elastic fixing at both ends, stiffnesses (1, 2) on the left and (3, 4) on the right
ELASTIC_1234 = FasteningConfig.from_coefficients([1, 2, 1, 1, 3, 4, 1, 1])
ELASTIC_1234_S = [
    0.383848559322840, 11.9180148367849, 53.4326824121208, 114.157790468867,
    193.836586296759, 292.955617117120, 411.667770695782, 550.037492353361,
    708.096219400352,
]
ELASTIC_1234_X = [-24, -10, 1, 9, 3, -8, -32, -6, 18, 4]

PINNED_PINNED = FasteningConfig.from_coefficients([1, 0, 1, 0, 1, 0, 1, 0])
CLAMPED_FREE = FasteningConfig.from_coefficients([1, 1, 0, 0, 0, 0, 1, 1])


def random_config(rng: np.random.Generator) -> FasteningConfig:
    return FasteningConfig.from_angles(rng.uniform(0.0, np.pi / 2, 4))


def rel_err(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.abs(a - b) / np.abs(b)
