import os
import random
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mpcpn import kernels
from mpcpn.verify import random_network

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")


@needs_numba
@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 5))
def test_backends_agree(seed, n):
    rng = random.Random(seed)
    f = random_network(rng, n)
    nb, npy = kernels.backend("numba"), kernels.backend("numpy")
    tt = np.ascontiguousarray(f.table)
    e0a, e1a = nb.exists_tables(tt)
    e0b, e1b = npy.exists_tables(tt)
    assert np.array_equal(e0a, e0b) and np.array_equal(e1a, e1b)
    s0 = rng.randrange(1 << n)
    assert np.array_equal(nb.mp_reach(e0a, e1a, n, s0), npy.mp_reach(e0b, e1b, n, s0))
    for mode in (kernels.FA, kernels.SYN, kernels.GA):
        assert np.array_equal(nb.async_reach(f.image, n, s0, mode), npy.async_reach(f.image, n, s0, mode))


def test_exists_tables_by_hand():
    # f1 = x1 and x2 over two variables, MP state with x1 transient up and x2 = 0
    tt = np.array([[0, 0, 0, 1], [0, 1, 0, 1]], dtype=np.uint8)
    e0, e1 = kernels.backend("numpy").exists_tables(tt)
    s = 0b01 | (0b01 << 2)
    assert e0[0, s] == 1 and e1[0, s] == 0
    s = 0b11 | (0b01 << 2)
    assert e0[0, s] == 1 and e1[0, s] == 1


def _backend_in_subprocess(value):
    env = dict(os.environ)
    if value is None:
        env.pop("MPCPN_BACKEND", None)
    else:
        env["MPCPN_BACKEND"] = value
    return subprocess.run(
        [sys.executable, "-c", "from mpcpn import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True,
    )


def test_env_flag_selects_backend():
    out = _backend_in_subprocess("numpy")
    assert out.returncode == 0 and out.stdout.strip() == "numpy"
    if HAVE_NUMBA:
        assert _backend_in_subprocess(None).stdout.strip() == "numba"
    bad = _backend_in_subprocess("fortran")
    assert bad.returncode != 0 and "MPCPN_BACKEND" in bad.stderr
