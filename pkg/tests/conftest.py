import numpy as np
import pytest

from wavemark import kernels


@pytest.fixture(scope="session")
def covers():
    pytest.importorskip("skimage")
    from wavemark.covers import load_covers

    return load_covers()


@pytest.fixture(scope="session")
def cover_dir(tmp_path_factory, covers):
    from wavemark.image_io import write_pgm

    d = tmp_path_factory.mktemp("covers")
    for name, img in covers.items():
        write_pgm(img, d / f"{name}.pgm")
    return d


@pytest.fixture(params=sorted(kernels.available_backends()))
def backend(request):
    return kernels.get_backend(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def natural_like(shape=(64, 64), seed=0):
    """Smooth random texture with edges, deterministic per seed."""
    from scipy import ndimage

    r = np.random.default_rng(seed)
    base = ndimage.gaussian_filter(r.uniform(0, 255, shape), 3)
    base = (base - base.min()) / (np.ptp(base) + 1e-12) * 200 + 25
    base[:, shape[1] // 2 :] += 20
    return np.clip(np.round(base + r.normal(0, 4, shape)), 0, 255).astype(np.uint8)


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"criterion {number:>2} [{'PASS' if ok else 'FAIL'}] {title}"
    if detail:
        line += f" -- {detail}"
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
