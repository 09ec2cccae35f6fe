"""Signed permutations: the hyperoctahedral group W(B_n).

An element is a pair ``(eta, pi)`` with ``eta`` in {0,1}^n and ``pi`` a
permutation of {1..n} in one-line notation.  The product is

    (eta, pi) * (zeta, sigma) = (eta + zeta o pi^-1, pi sigma),

with the sign sum taken mod 2 and ``(pi sigma)(k) = pi(sigma(k))``.  Under this
convention the map ``(eta, pi) -> diag((-1)^eta) P_pi`` (with
``P_pi e_j = e_pi(j)``) is a homomorphism.
"""
from __future__ import annotations

import functools
import itertools
import os
from dataclasses import dataclass
from math import factorial
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels

DEFAULT_MAX_N = 5


class RankError(ValueError):
    """Elements of different rank were combined, or a rank is out of range."""


@dataclass(frozen=True, order=True)
class SignedPermutation:
    eta: tuple[int, ...]
    pi: tuple[int, ...]

    def __post_init__(self):
        eta = tuple(int(x) for x in self.eta)
        pi = tuple(int(x) for x in self.pi)
        if len(eta) != len(pi):
            raise ValueError(f"eta has {len(eta)} entries but pi has {len(pi)}")
        if any(x not in (0, 1) for x in eta):
            raise ValueError(f"eta entries must be 0 or 1, got {eta}")
        if sorted(pi) != list(range(1, len(pi) + 1)):
            raise ValueError(f"pi is not a permutation of 1..{len(pi)}: {pi}")
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "pi", pi)

    @property
    def n(self) -> int:
        return len(self.pi)

    @classmethod
    def identity(cls, n: int) -> SignedPermutation:
        return cls((0,) * n, tuple(range(1, n + 1)))

    def is_identity(self) -> bool:
        return not any(self.eta) and self.pi == tuple(range(1, self.n + 1))

    def __mul__(self, other: SignedPermutation) -> SignedPermutation:
        return multiply(self, other)

    def __repr__(self) -> str:
        eta = "".join(map(str, self.eta))
        pi = ",".join(map(str, self.pi))
        return f"SignedPermutation(eta={eta}, pi=[{pi}])"


def multiply(g: SignedPermutation, h: SignedPermutation) -> SignedPermutation:
    if g.n != h.n:
        raise RankError(f"cannot multiply rank {g.n} by rank {h.n}")
    n = g.n
    pinv = [0] * (n + 1)
    for k, v in enumerate(g.pi, start=1):
        pinv[v] = k
    eta = tuple(g.eta[j - 1] ^ h.eta[pinv[j] - 1] for j in range(1, n + 1))
    pi = tuple(g.pi[h.pi[k] - 1] for k in range(n))
    return SignedPermutation(eta, pi)


def inverse(g: SignedPermutation) -> SignedPermutation:
    # (eta, pi)^-1 = (eta o pi, pi^-1)
    n = g.n
    pinv = [0] * n
    for k, v in enumerate(g.pi, start=1):
        pinv[v - 1] = k
    eta = tuple(g.eta[g.pi[j] - 1] for j in range(n))
    return SignedPermutation(eta, tuple(pinv))


def sign_flip(n: int, A: Iterable[int]) -> SignedPermutation:
    """The diagonal element s_A flipping the signs of the coordinates in A."""
    A = set(A)
    bad = [a for a in A if not 1 <= a <= n]
    if bad:
        raise ValueError(f"sign-flip coordinates {sorted(bad)} outside 1..{n}")
    return SignedPermutation(tuple(int(j in A) for j in range(1, n + 1)),
                             tuple(range(1, n + 1)))


def transposition(n: int, i: int, j: int) -> SignedPermutation:
    if i == j:
        raise ValueError("transposition needs two distinct indices")
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"transposition ({i} {j}) outside 1..{n}")
    pi = list(range(1, n + 1))
    pi[i - 1], pi[j - 1] = pi[j - 1], pi[i - 1]
    return SignedPermutation((0,) * n, tuple(pi))


def act(g: SignedPermutation, k: int) -> int:
    """Signed action on X_n = {-n..-1, 1..n}:
    ``(eta, pi) k = (-1)^eta(pi(|k|)) * sgn(k) * pi(|k|)``."""
    if k == 0 or abs(k) > g.n:
        raise ValueError(f"{k} is not in X_{g.n}")
    target = g.pi[abs(k) - 1]
    sign = -1 if g.eta[target - 1] else 1
    return sign * (1 if k > 0 else -1) * target


def embed(g: SignedPermutation, drop: int) -> SignedPermutation:
    """Lift a rank n-1 element to rank n, fixing coordinate ``drop``.

    The remaining coordinates are matched to 1..n-1 in increasing order.
    """
    n = g.n + 1
    if not 1 <= drop <= n:
        raise ValueError(f"drop index {drop} outside 1..{n}")

    def up(j: int) -> int:
        return j if j < drop else j + 1

    eta = [0] * n
    pi = [0] * n
    pi[drop - 1] = drop
    for j in range(1, n):
        pi[up(j) - 1] = up(g.pi[j - 1])
        eta[up(j) - 1] = g.eta[j - 1]
    return SignedPermutation(tuple(eta), tuple(pi))


def max_rank() -> int:
    env = os.environ.get("HYPEROCT_MAX_N")
    return int(env) if env else DEFAULT_MAX_N


class GroupIndex:
    """A fixed enumeration of W_n (or of its sign-free subgroup S_n).

    Elements are ordered by sign vector in binary counting order, then by
    permutation in lexicographic order.
    """

    def __init__(self, n: int, signs: bool = True):
        self.n = n
        self.signs = signs
        perms = np.array(list(itertools.permutations(range(n))), dtype=np.int32).reshape(-1, n)
        if signs:
            eta_list = np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.uint8).reshape(-1, n)
        else:
            eta_list = np.zeros((1, n), dtype=np.uint8)
        self.etas = np.repeat(eta_list, len(perms), axis=0)
        self.perms = np.tile(perms, (len(eta_list), 1))
        self.codes = kernels.encode(self.etas, self.perms)
        self._code_to_index = np.full((2 ** n) * factorial(n), -1, dtype=np.int64)
        self._code_to_index[self.codes] = np.arange(len(self.codes))
        self.elements = [
            SignedPermutation(tuple(int(x) for x in e), tuple(int(x) + 1 for x in p))
            for e, p in zip(self.etas, self.perms)
        ]
        self._table: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[SignedPermutation]:
        return iter(self.elements)

    def __getitem__(self, i: int) -> SignedPermutation:
        return self.elements[i]

    def __repr__(self) -> str:
        kind = "W" if self.signs else "S"
        return f"GroupIndex({kind}_{self.n}, order={len(self)})"

    def index(self, g: SignedPermutation) -> int:
        if g.n != self.n:
            raise RankError(f"rank {g.n} element in rank {self.n} index")
        code = int(kernels.encode(np.array(g.eta), np.array(g.pi) - 1)[0])
        i = int(self._code_to_index[code])
        if i < 0:
            raise KeyError(f"{g!r} is not in {self!r}")
        return i

    def _to_indices(self, codes: np.ndarray) -> np.ndarray:
        idx = self._code_to_index[codes]
        if (idx < 0).any():
            raise KeyError(f"products leave {self!r}")
        return idx

    def left_rows(self, rows: Sequence[int]) -> np.ndarray:
        """``out[r, h] = index(self[rows[r]] * self[h])``."""
        rows = np.asarray(rows, dtype=np.int64)
        return self._to_indices(kernels.product_codes(self.etas, self.perms, rows))

    def left_row(self, g: SignedPermutation) -> np.ndarray:
        return self.left_rows([self.index(g)])[0]

    def multiplication_table(self) -> np.ndarray:
        if self._table is None:
            self._table = self.left_rows(np.arange(len(self)))
        return self._table


@functools.lru_cache(maxsize=None)
def _build(n: int, signs: bool) -> GroupIndex:
    return GroupIndex(n, signs)


def enumerate_group(n: int, *, signs: bool = True, max_n: int | None = None) -> GroupIndex:
    """Enumerate W_n (``signs=False``: the subgroup S_n of sign-free elements).

    Raises ``RankError`` above ``max_n`` (default 5, or ``HYPEROCT_MAX_N``).
    """
    if n < 1:
        raise RankError(f"rank must be >= 1, got {n}")
    limit = max_rank() if max_n is None else max_n
    if n > limit:
        raise RankError(
            f"rank {n} exceeds the enumeration limit n <= {limit}; "
            "raise it with --allow-large or HYPEROCT_MAX_N"
        )
    return _build(n, signs)
