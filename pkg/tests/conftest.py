import numpy as np
import pytest

from hiercodes import _kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger JIT compilation once so timed tests measure work, not warmup."""
    a = np.arange(16, dtype=np.int64).reshape(4, 4) % 7
    _kernels.matmul_mod(a, a, 7)
    work = a.copy()
    _kernels.gauss_jordan(work, 7, 4)
