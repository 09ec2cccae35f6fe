"""Matrix representations of W_n and representation Laplacians.

All representations here are real orthogonal.  Permutation-type
representations (regular, P_n) also expose the underlying permutation of
basis vectors, which lets Laplacians be assembled without dense products.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import WeightedElement, is_symmetric
from .group import GroupIndex, RankError, SignedPermutation, act


class RepLabel(enum.Enum):
    REGULAR = "regular"
    DEFINING_W = "dn"
    LIFTED_DEFINING_S = "d0n"
    PERMUTATION_P = "pn"
    SIGN_J = "jn"
    DEFINING_S = "d0"
    TRIVIAL = "trivial"


class RepresentationError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class MatrixRep:
    n: int
    dim: int
    label: RepLabel
    _eval: Callable[[SignedPermutation], np.ndarray]
    # For permutation representations: g -> array p with R(g) e_c = e_{p[c]}.
    _perm: Callable[[SignedPermutation], np.ndarray] | None = None
    index: GroupIndex | None = None

    def _check(self, g: SignedPermutation) -> None:
        if g.n != self.n:
            raise RankError(f"rank {g.n} element given to rank {self.n} representation {self.label.value}")

    def eval(self, g: SignedPermutation) -> np.ndarray:
        self._check(g)
        return self._eval(g)

    def permutation(self, g: SignedPermutation) -> np.ndarray | None:
        if self._perm is None:
            return None
        self._check(g)
        return self._perm(g)

    def __repr__(self) -> str:
        return f"MatrixRep({self.label.value}, n={self.n}, dim={self.dim})"


def _perm_matrix(p: np.ndarray) -> np.ndarray:
    m = np.zeros((len(p), len(p)))
    m[p, np.arange(len(p))] = 1.0
    return m


def regular_rep(idx: GroupIndex) -> MatrixRep:
    """Left regular representation: ``L(h) e_g = e_{hg}``."""
    perm = idx.left_row
    return MatrixRep(idx.n, len(idx), RepLabel.REGULAR,
                     lambda g: _perm_matrix(perm(g)), perm, index=idx)


def _signed_perm_matrix(g: SignedPermutation, use_signs: bool) -> np.ndarray:
    n = g.n
    m = np.zeros((n, n))
    for j in range(n):
        i = g.pi[j] - 1
        m[i, j] = -1.0 if (use_signs and g.eta[i]) else 1.0
    return m


def defining_w(n: int) -> MatrixRep:
    """``D_n(eta, pi)_ij = (-1)^eta_i delta_{i, pi(j)}``."""
    return MatrixRep(n, n, RepLabel.DEFINING_W, lambda g: _signed_perm_matrix(g, True))


def lifted_defining_s(n: int) -> MatrixRep:
    """Permutation matrix of ``pi``, ignoring the signs."""
    return MatrixRep(n, n, RepLabel.LIFTED_DEFINING_S, lambda g: _signed_perm_matrix(g, False))


def defining_s(n: int) -> MatrixRep:
    """Defining representation of S_n; only sign-free elements are accepted."""
    def ev(g: SignedPermutation) -> np.ndarray:
        if any(g.eta):
            raise RankError(f"{g!r} is not in S_{n}")
        return _signed_perm_matrix(g, False)
    return MatrixRep(n, n, RepLabel.DEFINING_S, ev)


def _x_position(n: int, k: int) -> int:
    # basis order -n..-1, 1..n
    return n + k if k < 0 else n - 1 + k


def permutation_p(n: int) -> MatrixRep:
    """2n-dimensional permutation representation of the signed action."""
    labels = [*range(-n, 0), *range(1, n + 1)]

    def perm(g: SignedPermutation) -> np.ndarray:
        return np.array([_x_position(n, act(g, k)) for k in labels], dtype=np.int64)

    return MatrixRep(n, 2 * n, RepLabel.PERMUTATION_P, lambda g: _perm_matrix(perm(g)), perm)


def sign_j(n: int) -> MatrixRep:
    """One-dimensional ``(-1)^(number of flipped signs)``."""
    return MatrixRep(n, 1, RepLabel.SIGN_J,
                     lambda g: np.array([[(-1.0) ** sum(g.eta)]]))


def trivial_rep(n: int) -> MatrixRep:
    return MatrixRep(n, 1, RepLabel.TRIVIAL, lambda g: np.ones((1, 1)))


REP_BUILDERS = {
    "dn": defining_w,
    "d0n": lifted_defining_s,
    "pn": permutation_p,
    "jn": sign_j,
    "d0": defining_s,
    "trivial": trivial_rep,
}


def laplacian(w: WeightedElement, rep: MatrixRep) -> np.ndarray:
    """``sum_h w_h (I - R(h))``, summed in sorted term order and symmetrized."""
    if w.n != rep.n:
        raise RankError(f"rank {w.n} element with rank {rep.n} representation")
    if not is_symmetric(w):
        raise ValueError("laplacian requires a symmetric group-algebra element")
    d = rep.dim
    out = np.zeros((d, d))
    cols = np.arange(d)
    terms = w.sorted_terms()
    if rep.label is RepLabel.REGULAR and terms:
        rows = rep.index.left_rows([rep.index.index(h) for h, _ in terms])
        for (_, c), p in zip(terms, rows):
            out[cols, cols] += c
            out[p, cols] -= c
    else:
        for h, c in terms:
            p = rep.permutation(h)
            if p is not None:
                out[cols, cols] += c
                out[p, cols] -= c
            else:
                out += c * (np.eye(d) - rep.eval(h))
    return 0.5 * (out + out.T)


def pn_basis_change(n: int) -> np.ndarray:
    """Orthogonal Q whose columns are (e+_1..e+_n, e-_1..e-_n) / sqrt(2)."""
    q = np.zeros((2 * n, 2 * n))
    s = 1.0 / np.sqrt(2.0)
    for k in range(1, n + 1):
        pos, neg = _x_position(n, k), _x_position(n, -k)
        q[pos, k - 1] = s
        q[neg, k - 1] = s
        q[pos, n + k - 1] = s
        q[neg, n + k - 1] = -s
    return q


def pn_block_decompose(n: int, g: SignedPermutation, tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Split ``P_n(g)`` into its even and odd blocks.

    Returns ``(plus, minus)``: the actions on span{e_k + e_-k} and
    span{e_k - e_-k}.
    """
    q = pn_basis_change(n)
    m = q.T @ permutation_p(n).eval(g) @ q
    off = max(np.abs(m[:n, n:]).max(), np.abs(m[n:, :n]).max())
    if off > tol:
        raise RepresentationError(f"off-diagonal block of size {off:.3g} in P_{n} decomposition")
    return m[:n, :n], m[n:, n:]


def pn_block_deviation(n: int, g: SignedPermutation) -> tuple[float, float]:
    """``(off-block size, max deviation of the blocks from (D~0_n, D_n))``."""
    q = pn_basis_change(n)
    m = q.T @ permutation_p(n).eval(g) @ q
    off = max(np.abs(m[:n, n:]).max(), np.abs(m[n:, :n]).max())
    dev = max(np.abs(m[:n, :n] - lifted_defining_s(n).eval(g)).max(),
              np.abs(m[n:, n:] - defining_w(n).eval(g)).max())
    return float(off), float(dev)


def character(rep: MatrixRep, idx: GroupIndex) -> np.ndarray:
    """Traces ``tr R(g)`` for every g in ``idx`` order."""
    if rep.label is RepLabel.REGULAR:
        if rep.index is not idx:
            raise RepresentationError("regular representation built on a different group index")
        table = idx.multiplication_table()
        return (table == np.arange(len(idx))[None, :]).sum(axis=1).astype(float)
    out = np.empty(len(idx))
    for k, g in enumerate(idx):
        p = rep.permutation(g)
        out[k] = (p == np.arange(len(p))).sum() if p is not None else np.trace(rep.eval(g))
    return out


def trivial_multiplicity(rep: MatrixRep, idx: GroupIndex) -> int:
    """Dimension of the invariant subspace, as the trace of the group average."""
    if idx.n != rep.n:
        raise RankError(f"rank {idx.n} index with rank {rep.n} representation")
    cache = idx.__dict__.setdefault("_trivial_cache", {})
    key = rep.label if rep.label is not RepLabel.REGULAR else (rep.label, id(rep.index))
    if key in cache:
        return cache[key]
    tr = character(rep, idx).sum() / len(idx)
    t = int(round(tr))
    if abs(tr - t) >= 1e-6:
        raise RepresentationError(f"averaging projector has non-integer trace {tr}")
    cache[key] = t
    return t
