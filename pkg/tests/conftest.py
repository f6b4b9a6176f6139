import numpy as np
import pytest

from cfbi import kernels


def circle_points(xc, yc, r, n, start=0.0, stop=2 * np.pi, endpoint=False):
    t = np.linspace(start, stop, n, endpoint=endpoint)
    return np.column_stack([xc + r * np.cos(t), yc + r * np.sin(t)])


def mc_intersection(a, b, n=1_000_000, seed=0):
    """Monte-Carlo estimate of (intersection, union) areas of two disks."""
    rng = np.random.default_rng(seed)
    x0 = min(a.xc - a.r, b.xc - b.r)
    x1 = max(a.xc + a.r, b.xc + b.r)
    y0 = min(a.yc - a.r, b.yc - b.r)
    y1 = max(a.yc + a.r, b.yc + b.r)
    x = rng.uniform(x0, x1, n)
    y = rng.uniform(y0, y1, n)
    ina = (x - a.xc) ** 2 + (y - a.yc) ** 2 <= a.r ** 2
    inb = (x - b.xc) ** 2 + (y - b.yc) ** 2 <= b.r ** 2
    box = (x1 - x0) * (y1 - y0)
    return box * np.mean(ina & inb), box * np.mean(ina | inb)


@pytest.fixture(params=["python"] + (["cython"] if kernels.compiled_available() else []))
def backend(request):
    prev = kernels.BACKEND
    kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(prev)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[k])
