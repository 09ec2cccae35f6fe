import sys
import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from hyperoct.group import SignedPermutation, enumerate_group


def signed_perm_matrix(g: SignedPermutation) -> np.ndarray:
    """Independent oracle: column j of the matrix is (-1)^eta_{pi(j)} e_{pi(j)}."""
    n = g.n
    m = np.zeros((n, n), dtype=int)
    for j, pj in enumerate(g.pi):
        m[pj - 1, j] = -1 if g.eta[pj - 1] else 1
    return m


def signed_perms(n):
    return st.builds(
        SignedPermutation,
        st.tuples(*[st.integers(0, 1)] * n),
        st.permutations(range(1, n + 1)).map(tuple),
    )


@pytest.fixture(scope="session")
def w2():
    return enumerate_group(2)


@pytest.fixture(scope="session")
def w3():
    return enumerate_group(3)


@pytest.fixture(scope="session")
def w4():
    return enumerate_group(4)


def all_pairs(idx):
    return itertools.product(idx, idx)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        ok, detail = mod.RESULTS[k]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}")
