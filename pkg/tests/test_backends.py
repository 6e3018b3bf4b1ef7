import os
import random
import subprocess
import sys

import pytest

from charp_nbg import _kernels_py, kernels
from charp_nbg.basefield import get_field

cy = pytest.importorskip("charp_nbg._kernels")


def rand_bytes(rng, n, q):
    return bytes(rng.randrange(q) for _ in range(n))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_prime_kernels_agree(p):
    rng = random.Random(p)
    for _ in range(50):
        a, b = rand_bytes(rng, rng.randrange(1, 60), p), rand_bytes(rng, rng.randrange(1, 60), p)
        nout = rng.randrange(1, len(a) + len(b))
        assert bytes(cy.mul_prime(a, b, nout, p)) == bytes(_kernels_py.mul_prime(a, b, nout, p))
        off_a, off_b = rng.randrange(3), rng.randrange(3)
        n = max(off_a + len(a), off_b + len(b))
        c = rng.randrange(p)
        assert (bytes(cy.axpy_prime(a, off_a, b, off_b, c, n, p))
                == bytes(_kernels_py.axpy_prime(a, off_a, b, off_b, c, n, p)))
        u = bytes([1]) + a[1:]
        assert bytes(cy.inv_prime(u, 40, p, 1)) == bytes(_kernels_py.inv_prime(u, 40, p, 1))


@pytest.mark.parametrize("p,f0", [(2, 2), (2, 3), (3, 2)])
def test_table_kernels_agree(p, f0):
    F = get_field(p, f0)
    rng = random.Random(F.q)
    for _ in range(50):
        a, b = rand_bytes(rng, rng.randrange(1, 40), F.q), rand_bytes(rng, rng.randrange(1, 40), F.q)
        nout = len(a) + len(b) - 1
        assert (bytes(cy.mul_table(a, b, nout, F.add_tab, F.mul_tab, F.q))
                == bytes(_kernels_py.mul_table(a, b, nout, F.add_tab, F.mul_tab, F.q)))
        c = rng.randrange(F.q)
        assert (bytes(cy.axpy_table(a, 0, b, 1, c, len(b) + 1, F.add_tab, F.mul_tab, F.q))
                == bytes(_kernels_py.axpy_table(a, 0, b, 1, c, len(b) + 1, F.add_tab, F.mul_tab, F.q)))
        u = bytes([1]) + a[1:]
        assert (bytes(cy.inv_table(u, 30, F.add_tab, F.mul_tab, F.neg_tab, F.q, 1))
                == bytes(_kernels_py.inv_table(u, 30, F.add_tab, F.mul_tab, F.neg_tab, F.q, 1)))


def test_backend_selection():
    assert kernels.BACKEND == "cython"
    env = dict(os.environ, CHARP_NBG_PURE_PYTHON="1")
    proc = subprocess.run([sys.executable, "-c", "import charp_nbg; print(charp_nbg.BACKEND)"],
                          capture_output=True, text=True, env=env, timeout=60)
    assert proc.stdout.strip() == "python"


def cli_output(pure):
    env = dict(os.environ)
    env.pop("CHARP_NBG_PURE_PYTHON", None)
    if pure:
        env["CHARP_NBG_PURE_PYTHON"] = "1"
    argv = [sys.executable, "-m", "charp_nbg", "verify-theorem", "--tower", "q4b1", "--samples", "10"]
    proc = subprocess.run(argv, capture_output=True, text=True, env=env, timeout=300)
    assert proc.returncode == 0, proc.stderr
    return proc.stdout


def test_pure_python_fallback_reproduces_report():
    assert cli_output(pure=True) == cli_output(pure=False)
