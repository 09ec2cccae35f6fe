"""Numpy implementations of the group-table kernels.

Used when the compiled ``_ckernels`` extension is unavailable, and as the
reference the compiled version is tested against.

Elements are passed as two arrays: ``etas`` (uint8, shape (N, n)) holding the
sign vectors and ``perms`` (int32, shape (N, n)) holding 0-based one-line
permutations.  An element's *code* is ``eta_int * n! + lex_rank(perm)`` where
``eta_int`` reads the sign vector as a binary number, first coordinate most
significant.
"""
from __future__ import annotations

from math import factorial

import numpy as np


def _eta_weights(n: int) -> np.ndarray:
    return (1 << np.arange(n - 1, -1, -1)).astype(np.int64)


def _fact_weights(n: int) -> np.ndarray:
    return np.array([factorial(n - 1 - i) for i in range(n)], dtype=np.int64)


def encode(etas: np.ndarray, perms: np.ndarray) -> np.ndarray:
    etas = np.asarray(etas, dtype=np.int64)
    perms = np.asarray(perms, dtype=np.int64)
    if etas.ndim == 1:
        etas = etas[None, :]
        perms = perms[None, :]
    n = perms.shape[1]
    fw = _fact_weights(n)
    rank = np.zeros(perms.shape[0], dtype=np.int64)
    for i in range(n - 1):
        smaller = (perms[:, i + 1:] < perms[:, i:i + 1]).sum(axis=1)
        rank += smaller * fw[i]
    return (etas @ _eta_weights(n)) * factorial(n) + rank


def product_codes(etas: np.ndarray, perms: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """``out[r, h]`` is the code of ``element[rows[r]] * element[h]``."""
    etas = np.ascontiguousarray(etas, dtype=np.uint8)
    perms = np.ascontiguousarray(perms, dtype=np.int32)
    rows = np.asarray(rows, dtype=np.int64)
    N, n = perms.shape
    out = np.empty((rows.shape[0], N), dtype=np.int64)
    for r, g in enumerate(rows):
        pg = perms[g]
        eg = etas[g]
        inv = np.empty(n, dtype=np.int64)
        inv[pg] = np.arange(n)
        new_perm = pg[perms]
        new_eta = etas[:, inv] ^ eg[None, :]
        out[r] = encode(new_eta, new_perm)
    return out
