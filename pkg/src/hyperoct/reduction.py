"""The reduction map from rank n weights to rank n-1 weights, and numerical
checks of the inequalities it is built to satisfy.

The map drops every sign flip whose set contains the coordinate ``ell`` and
redistributes the transposition weights touching ``ell`` onto the remaining
pairs (the "octopus" redistribution), then relabels the surviving
coordinates onto 1..n-1 in increasing order.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .algebra import (
    ClassAWeights,
    WeightedElement,
    a_hat,
    expand,
    select_ell,
)
from .group import GroupIndex, SignedPermutation, embed, enumerate_group, sign_flip, transposition
from .reps import defining_w, laplacian, lifted_defining_s, permutation_p, regular_rep, sign_j
from .spectral import (
    INFINITE,
    cayley_gap,
    eigenvalues,
    gap_min,
    is_psd,
    scale_of,
    spectral_gap,
)


def theta_n(signs: Mapping[tuple[int, ...], float], ell: int) -> dict[tuple[int, ...], float]:
    """Keep only the sign flips whose set avoids ``ell``."""
    return {A: a for A, a in signs.items() if ell not in A}


def theta_t(trans: Mapping[tuple[int, int], float], m: int) -> dict[tuple[int, int], float]:
    """Remove coordinate ``m`` from the transposition weights.

    Each pair ``{i, k}`` avoiding m gets ``b_ik + b_im * b_km / S`` with
    ``S = sum_j b_jm``; when nothing touches m this is the plain restriction.
    """
    def b(i, j):
        return trans.get((min(i, j), max(i, j)), 0.0)

    coords = sorted({x for p in trans for x in p} | {m})
    others = [j for j in coords if j != m]
    total = sum(b(j, m) for j in others)
    out = {}
    for i, k in itertools.combinations(others, 2):
        v = b(i, k)
        if total > 0:
            v += b(i, m) * b(k, m) / total
        if v != 0:
            out[(i, k)] = v
    return out


def _relabel_map(n: int, ell: int) -> dict[int, int]:
    return {j: (j if j < ell else j - 1) for j in range(1, n + 1) if j != ell}


@dataclass(frozen=True)
class ReductionStep:
    input: ClassAWeights
    ell: int
    output: ClassAWeights
    relabeling: dict[int, int]
    # the same output written in rank n, before relabeling
    unrelabeled: ClassAWeights = field(repr=False)

    def embedded_output(self) -> WeightedElement:
        """The output as an element of W_n, acting trivially on ``ell``."""
        w = expand(self.output)
        return WeightedElement(self.input.n, {embed(g, self.ell): c for g, c in w.terms.items()})


def reduce(caw: ClassAWeights) -> ReductionStep:
    n = caw.n
    if n < 2:
        raise ValueError("cannot reduce rank 1 weights")
    ell = select_ell(caw)
    signs = theta_n(caw.sign_weights, ell)
    pairs = theta_t(caw.transposition_weights, ell)
    relabel = _relabel_map(n, ell)
    out = ClassAWeights(
        n - 1,
        {tuple(relabel[x] for x in A): a for A, a in signs.items()},
        {(relabel[i], relabel[k]): b for (i, k), b in pairs.items()},
    )
    return ReductionStep(caw, ell, out, relabel, ClassAWeights(n, signs, pairs))


def octopus_margin(caw: ClassAWeights, idx: GroupIndex) -> float:
    """Scaled lowest eigenvalue of ``Delta(w - theta(w), L)``."""
    step = reduce(caw)
    delta = expand(caw) - step.embedded_output()
    spec = eigenvalues(laplacian(delta, regular_rep(idx))).eigenvalues
    return float(spec[0] / max(1.0, np.abs(spec).max()))


def octopus_check(caw: ClassAWeights, idx: GroupIndex, tol: float = 1e-9) -> bool:
    """Whether ``w - theta(w)`` lies in the cone of elements with PSD
    regular-representation Laplacian.

    ``idx`` may be the full group or, for transposition-only weights, the
    sign-free subgroup.
    """
    step = reduce(caw)
    delta = expand(caw) - step.embedded_output()
    return is_psd(laplacian(delta, regular_rep(idx)), tol)


def pn_gap(caw: ClassAWeights):
    return spectral_gap(expand(caw), permutation_p(caw.n), enumerate_group(caw.n)).gap


def gap_monotonicity(caw: ClassAWeights) -> tuple[float, float]:
    """``(psi(w, P_n), psi(theta w, P_{n-1}))``."""
    step = reduce(caw)
    return pn_gap(caw), pn_gap(step.output)


def gap_monotonicity_check(caw: ClassAWeights, tol: float = 1e-8) -> bool:
    lhs, rhs = gap_monotonicity(caw)
    return lhs <= rhs + tol * scale_of(lhs, rhs)


class Semirecursive(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    PRECONDITION_FAILED = "precondition-failed"


def semirecursive_check(w: ClassAWeights, z: ClassAWeights, idx: GroupIndex,
                        tol: float = 1e-8, drop: int | None = None) -> Semirecursive:
    """Check ``psi(w) >= min(psi(z), psi(w, P_n))`` when ``w - z`` is in the cone.

    ``z`` has rank n-1 and is embedded by fixing coordinate ``drop``
    (default n).
    """
    n = w.n
    drop = n if drop is None else drop
    we = expand(w)
    ze = WeightedElement(n, {embed(g, drop): c for g, c in expand(z).terms.items()})
    L = regular_rep(idx)
    if not is_psd(laplacian(we - ze, L), tol):
        return Semirecursive.PRECONDITION_FAILED
    lhs = cayley_gap(we, idx).gap
    sub = cayley_gap(expand(z), enumerate_group(n - 1, signs=idx.signs)).gap
    rhs = gap_min(sub, spectral_gap(we, permutation_p(n), idx).gap)
    if rhs is INFINITE:
        return Semirecursive.FAILS
    return Semirecursive.HOLDS if lhs >= rhs - tol * scale_of(lhs, rhs) else Semirecursive.FAILS


def rank_one_discrepancy(caw: ClassAWeights) -> dict:
    """Compare ``M - M_theta`` with the rank-one matrix ``d d^T / d_ell``.

    ``M`` and ``M_theta`` are the lifted-defining Laplacians of the
    transposition part before and after redistribution at ``ell``.
    """
    n = caw.n
    ell = select_ell(caw)
    rep = lifted_defining_s(n)
    trans = caw.transposition_weights
    M = laplacian(expand(caw.transposition_part()), rep)
    M_th = laplacian(expand(ClassAWeights(n, {}, theta_t(trans, ell))), rep)
    F = 2.0 * np.diag(a_hat(caw))
    d = np.array([-trans.get((min(i, ell), max(i, ell)), 0.0) if i != ell else 0.0
                  for i in range(1, n + 1)])
    d[ell - 1] = -d.sum()
    out = {"ell": ell, "d_ell": float(d[ell - 1])}
    if d[ell - 1] == 0:
        out["entry_deviation"] = float(np.abs(M - M_th).max())
        out["vacuous"] = True
    else:
        out["entry_deviation"] = float(np.abs(M - M_th - np.outer(d, d) / d[ell - 1]).max())
        out["vacuous"] = False
    lm = eigenvalues(M).eigenvalues
    lth = eigenvalues(M_th).eigenvalues
    lmf = eigenvalues(M + F).eigenvalues
    lthf = eigenvalues(M_th + F).eigenvalues
    # interlacing under a rank-one PSD update: lambda_k(A + L) <= lambda_{k+1}(A)
    out["lambda2_M_minus_lambda3_Mth"] = float(lm[1] - lth[2]) if n >= 3 else None
    out["lambda1_MF_minus_lambda2_MthF"] = float(lmf[0] - lthf[1]) if n >= 2 else None
    out["two_a_hat_deviation"] = float(abs(lthf[0] - 2.0 * a_hat(caw)[ell - 1]))
    return out


def rank_one_identity_check(caw: ClassAWeights, tol: float = 1e-12) -> bool:
    r = rank_one_discrepancy(caw)
    if r["vacuous"]:
        return True
    ok = r["entry_deviation"] <= tol
    for key in ("lambda2_M_minus_lambda3_Mth", "lambda1_MF_minus_lambda2_MthF"):
        if r[key] is not None:
            ok &= r[key] <= max(tol, 1e-10)
    return bool(ok)


class CounterexampleError(ValueError):
    pass


class Family(enum.Enum):
    SIGN_DOMINANT = "a"
    TRANSPOSITION_DOMINANT = "b"
    EVEN_SETS = "c"


@dataclass(frozen=True)
class CounterexampleSpec:
    family: Family
    n: int
    epsilon: float
    odd_weights: Mapping[tuple[int, ...], float]
    transposition_weights: Mapping[tuple[int, int], float]
    even_weights: Mapping[tuple[int, ...], float] = field(default_factory=dict)

    def __post_init__(self):
        if self.epsilon <= 0:
            raise CounterexampleError("epsilon must be positive")
        for A in self.odd_weights:
            if len(A) % 2 == 0:
                raise CounterexampleError(f"set {list(A)} listed as odd has even cardinality")
        for A in self.even_weights:
            if len(A) % 2 == 1:
                raise CounterexampleError(f"set {list(A)} listed as even has odd cardinality")
        if any(v < 0 for m in (self.odd_weights, self.even_weights, self.transposition_weights)
               for v in m.values()):
            raise CounterexampleError("weights must be nonnegative")
        if min(_hat(self.n, self.odd_weights)) <= 0:
            raise CounterexampleError("coverage condition violated: every coordinate needs positive odd sign weight")
        if self.family is Family.EVEN_SETS and min(_hat(self.n, self.even_weights)) <= 0:
            raise CounterexampleError("coverage condition violated: every coordinate needs positive even sign weight")
        if not _connected(self.n, self.transposition_weights):
            raise CounterexampleError(
                "connectivity condition violated: transposition weights must connect 1..n "
                "so that the support generates S_n"
            )

    def element(self) -> WeightedElement:
        eps = self.epsilon
        sign_scale, trans_scale = {
            Family.SIGN_DOMINANT: (1.0, eps),
            Family.TRANSPOSITION_DOMINANT: (eps, 1.0),
            Family.EVEN_SETS: (eps, 1.0),
        }[self.family]
        terms: dict[SignedPermutation, float] = {}
        for A, a in self.odd_weights.items():
            terms[sign_flip(self.n, A)] = sign_scale * a
        if self.family is Family.EVEN_SETS:
            for A, a in self.even_weights.items():
                g = sign_flip(self.n, A)
                terms[g] = terms.get(g, 0.0) + a
        for (i, j), b in self.transposition_weights.items():
            terms[transposition(self.n, i, j)] = trans_scale * b
        return WeightedElement(self.n, terms)


def _hat(n: int, weights: Mapping[tuple[int, ...], float]) -> list[float]:
    out = [0.0] * n
    for A, a in weights.items():
        for i in A:
            out[i - 1] += a
    return out


def _connected(n: int, pairs: Mapping[tuple[int, int], float]) -> bool:
    if n == 1:
        return True
    edges = [(i - 1, j - 1) for (i, j), b in pairs.items() if b > 0]
    if not edges:
        return False
    r, c = zip(*edges)
    graph = csr_matrix((np.ones(len(edges)), (r, c)), shape=(n, n))
    return connected_components(graph, directed=False)[0] == 1


def default_counterexample(family: Family | str, n: int = 2, epsilon: float = 1e-3) -> CounterexampleSpec:
    """Unit weights: all singletons (odd), a path of transpositions, and for
    the even-set family the consecutive pairs {i, i+1}."""
    family = Family(family) if not isinstance(family, Family) else family
    if family is Family.EVEN_SETS and n < 2:
        raise CounterexampleError("the even-set family needs n >= 2")
    odd = {(i,): 1.0 for i in range(1, n + 1)}
    trans = {(i, i + 1): 1.0 for i in range(1, n)}
    even = {(i, i + 1): 1.0 for i in range(1, n)} if family is Family.EVEN_SETS else {}
    return CounterexampleSpec(family, n, epsilon, odd, trans, even)


def counterexample(spec: CounterexampleSpec, idx: GroupIndex, tol: float = 1e-8) -> dict:
    """Gaps of ``w_eps`` in each representation and the ordering each family
    is meant to exhibit."""
    w = spec.element()
    n = spec.n
    gaps = {
        "dn": spectral_gap(w, defining_w(n), idx).gap,
        "d0n": spectral_gap(w, lifted_defining_s(n), idx).gap,
        "pn": spectral_gap(w, permutation_p(n), idx).gap,
        "jn": spectral_gap(w, sign_j(n), idx).gap,
        "cayley": cayley_gap(w, idx).gap,
    }
    report = {"family": spec.family.value, "n": n, "epsilon": spec.epsilon, "gaps": gaps}
    pn_deviation = abs(gaps["cayley"] - gaps["pn"])
    if spec.family is Family.SIGN_DOMINANT:
        margin = gaps["dn"] - gaps["d0n"]
        passed = margin > 0 and pn_deviation <= tol * scale_of(gaps["pn"])
        report.update(margin=margin, pn_deviation=pn_deviation)
    elif spec.family is Family.TRANSPOSITION_DOMINANT:
        margin = gaps["d0n"] - gaps["dn"]
        passed = margin > 0 and pn_deviation <= tol * scale_of(gaps["pn"])
        report.update(margin=margin, pn_deviation=pn_deviation)
    else:
        margin = gaps["pn"] - gaps["cayley"]
        jn_margin = gaps["pn"] - gaps["jn"]
        passed = jn_margin > 0 and margin > tol * scale_of(gaps["pn"])
        report.update(margin=margin, jn_margin=jn_margin)
    report["passed"] = bool(passed)
    return report
