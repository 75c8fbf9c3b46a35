import numpy as np
import pytest

from envlp import Contour, PeriodicSignal, radial_parametrize

# Tips of the synthetic five-pointed star sit on the n=16 phase grid so a
# doubling chain of constraint grids sees every peak from n=16 onward.
STAR_TIPS = (0.0, 3 / 16, 3 / 8, 5 / 8, 13 / 16)
STAR_OUTER = 1.0
STAR_INNER = 0.6


def star_points(tips=STAR_TIPS, r_outer=STAR_OUTER, r_inner=STAR_INNER):
    pts = []
    k = len(tips)
    for i, t in enumerate(tips):
        theta = -np.pi + 2.0 * np.pi * t
        pts.append((r_outer * np.cos(theta), r_outer * np.sin(theta)))
        t_next = tips[(i + 1) % k] + (1.0 if i == k - 1 else 0.0)
        theta_mid = -np.pi + 2.0 * np.pi * 0.5 * (t + t_next)
        pts.append((r_inner * np.cos(theta_mid), r_inner * np.sin(theta_mid)))
    return np.asarray(pts)


def smooth_signal(seed, m=512, base=1.5, harmonics=3):
    """Random positive smooth test signal: DC plus a few decaying harmonics."""
    rng = np.random.default_rng(seed)
    t = np.arange(m) / m
    values = np.full(m, float(base))
    for k in range(1, harmonics + 1):
        a, b = rng.normal(scale=0.4 / k, size=2)
        values += a * np.cos(2 * np.pi * k * t) + b * np.sin(2 * np.pi * k * t)
    return PeriodicSignal.from_samples(values)


@pytest.fixture(scope="session")
def cos_signal():
    t = np.arange(1024) / 1024
    return PeriodicSignal.from_samples(np.cos(2 * np.pi * t))


@pytest.fixture(scope="session")
def cos_signal_user_c():
    t = np.arange(1024) / 1024
    return PeriodicSignal.from_samples(np.cos(2 * np.pi * t), lipschitz_c=2 * np.pi)


@pytest.fixture(scope="session")
def star_contour():
    return Contour.from_points(star_points())


@pytest.fixture(scope="session")
def star_signal(star_contour):
    return radial_parametrize(star_contour, M=1024)
