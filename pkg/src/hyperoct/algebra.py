"""Real group-algebra elements of W_n and the weight class of odd sign flips
plus transpositions."""
from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .group import RankError, SignedPermutation, inverse, sign_flip, transposition


@dataclass(frozen=True)
class WeightedElement:
    """A finitely supported formal sum ``sum_g w_g g`` with real coefficients.

    Zero coefficients are dropped, so ``terms`` keys are exactly the support.
    """

    n: int
    terms: Mapping[SignedPermutation, float] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for g, c in self.terms.items():
            if g.n != self.n:
                raise RankError(f"rank {g.n} element in a rank {self.n} algebra element")
            c = float(c)
            if c != 0.0:
                clean[g] = c
        object.__setattr__(self, "terms", clean)

    @property
    def support(self) -> frozenset[SignedPermutation]:
        return frozenset(self.terms)

    def coefficient(self, g: SignedPermutation) -> float:
        return self.terms.get(g, 0.0)

    def sorted_terms(self) -> list[tuple[SignedPermutation, float]]:
        return sorted(self.terms.items())

    def _combine(self, other: WeightedElement, sign: float) -> WeightedElement:
        if other.n != self.n:
            raise RankError(f"cannot combine rank {self.n} with rank {other.n}")
        out = dict(self.terms)
        for g, c in other.terms.items():
            out[g] = out.get(g, 0.0) + sign * c
        return WeightedElement(self.n, out)

    def __add__(self, other: WeightedElement) -> WeightedElement:
        return self._combine(other, 1.0)

    def __sub__(self, other: WeightedElement) -> WeightedElement:
        return self._combine(other, -1.0)

    def __mul__(self, scalar: float) -> WeightedElement:
        return WeightedElement(self.n, {g: scalar * c for g, c in self.terms.items()})

    __rmul__ = __mul__


def zero(n: int) -> WeightedElement:
    return WeightedElement(n, {})


def involution(w: WeightedElement) -> WeightedElement:
    """``w* = sum_g w_g g^-1`` (coefficients are real)."""
    return WeightedElement(w.n, {inverse(g): c for g, c in w.terms.items()})


def is_symmetric(w: WeightedElement) -> bool:
    return all(w.coefficient(inverse(g)) == c for g, c in w.terms.items())


def is_positive(w: WeightedElement) -> bool:
    return all(c >= 0 for c in w.terms.values())


def _subset_key(A) -> tuple[int, ...]:
    return tuple(sorted(A))


@dataclass(frozen=True)
class ClassAWeights:
    """Weights ``a_A`` on odd sign flips s_A and ``b_ij`` on transpositions (ij).

    Keys are stored normalized: sets as increasing tuples, pairs as ``(i, j)``
    with ``i < j``.  Zero weights are dropped.
    """

    n: int
    sign_weights: Mapping[tuple[int, ...], float] = field(default_factory=dict)
    transposition_weights: Mapping[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise RankError(f"rank must be >= 1, got {self.n}")
        signs = {}
        for A, a in self.sign_weights.items():
            key = _subset_key(A)
            if len(set(key)) != len(key) or any(not 1 <= x <= self.n for x in key):
                raise ValueError(f"sign set {list(A)} is not a subset of 1..{self.n}")
            if len(key) % 2 == 0:
                raise ValueError(f"sign set {list(key)} has even cardinality; only odd sets are allowed")
            if a < 0:
                raise ValueError(f"negative weight {a} on sign set {list(key)}")
            if key in signs:
                raise ValueError(f"duplicate sign set {list(key)}")
            if a != 0:
                signs[key] = float(a)
        pairs = {}
        for (i, j), b in self.transposition_weights.items():
            key = (min(i, j), max(i, j))
            if i == j or not (1 <= key[0] and key[1] <= self.n):
                raise ValueError(f"transposition ({i} {j}) invalid for rank {self.n}")
            if b < 0:
                raise ValueError(f"negative weight {b} on transposition ({i} {j})")
            if key in pairs:
                raise ValueError(f"duplicate transposition ({key[0]} {key[1]})")
            if b != 0:
                pairs[key] = float(b)
        object.__setattr__(self, "sign_weights", dict(sorted(signs.items())))
        object.__setattr__(self, "transposition_weights", dict(sorted(pairs.items())))

    def sign_part(self) -> ClassAWeights:
        return ClassAWeights(self.n, self.sign_weights, {})

    def transposition_part(self) -> ClassAWeights:
        return ClassAWeights(self.n, {}, self.transposition_weights)

    def scaled(self, sign_factor: float = 1.0, transposition_factor: float = 1.0) -> ClassAWeights:
        return ClassAWeights(
            self.n,
            {A: sign_factor * a for A, a in self.sign_weights.items()},
            {p: transposition_factor * b for p, b in self.transposition_weights.items()},
        )

    def __add__(self, other: ClassAWeights) -> ClassAWeights:
        if other.n != self.n:
            raise RankError(f"cannot add rank {self.n} and rank {other.n} weights")
        signs = dict(self.sign_weights)
        for A, a in other.sign_weights.items():
            signs[A] = signs.get(A, 0.0) + a
        pairs = dict(self.transposition_weights)
        for p, b in other.transposition_weights.items():
            pairs[p] = pairs.get(p, 0.0) + b
        return ClassAWeights(self.n, signs, pairs)

    def is_empty(self) -> bool:
        return not self.sign_weights and not self.transposition_weights

    def digest(self) -> str:
        """Order-independent hash of the canonical weight lists."""
        canon = {
            "n": self.n,
            "sign_flips": sorted([list(A), repr(a)] for A, a in self.sign_weights.items()),
            "transpositions": sorted([list(p), repr(b)] for p, b in self.transposition_weights.items()),
        }
        blob = json.dumps(canon, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def expand(caw: ClassAWeights) -> WeightedElement:
    terms: dict[SignedPermutation, float] = {}
    for A, a in caw.sign_weights.items():
        terms[sign_flip(caw.n, A)] = a
    for (i, j), b in caw.transposition_weights.items():
        terms[transposition(caw.n, i, j)] = b
    return WeightedElement(caw.n, terms)


def a_hat(caw: ClassAWeights) -> np.ndarray:
    """``a_hat[i-1] = sum of a_A over sets A containing i``.

    Sets are visited in the order of their indicator vectors (first
    coordinate most significant), the same order in which sign flips are
    enumerated, so the sums match a Laplacian assembled in sorted term order
    bit for bit.
    """
    out = [0.0] * caw.n
    for A in sorted(caw.sign_weights, key=lambda A: tuple(int(i in A) for i in range(1, caw.n + 1))):
        a = caw.sign_weights[A]
        for i in A:
            out[i - 1] += a
    return np.array(out)


def select_ell(caw: ClassAWeights) -> int:
    """Largest 1-based index attaining the minimum of ``a_hat``."""
    ah = a_hat(caw)
    m = ah.min()
    return max(j + 1 for j in range(caw.n) if ah[j] == m)


def odd_subsets(n: int) -> list[tuple[int, ...]]:
    return [A for k in range(1, n + 1, 2) for A in itertools.combinations(range(1, n + 1), k)]


def random_class_a(n: int, density: float, seed) -> ClassAWeights:
    """Random weights: each odd set and each pair kept with probability
    ``density``, with weight uniform in (0, 1]."""
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density must lie in [0, 1], got {density}")
    rng = np.random.default_rng(seed)
    signs = {}
    for A in odd_subsets(n):
        keep, u = rng.random(), rng.random()
        if keep < density:
            signs[A] = 1.0 - u
    pairs = {}
    for p in itertools.combinations(range(1, n + 1), 2):
        keep, u = rng.random(), rng.random()
        if keep < density:
            pairs[p] = 1.0 - u
    return ClassAWeights(n, signs, pairs)


def coxeter_weights(n: int) -> ClassAWeights:
    """``s_{1} + sum_i (i, i+1)``."""
    return ClassAWeights(n, {(1,): 1.0}, {(i, i + 1): 1.0 for i in range(1, n)})


class WeightsFileError(ValueError):
    pass


def weights_from_json(data: dict) -> ClassAWeights:
    if not isinstance(data, dict):
        raise WeightsFileError("top level must be an object")
    if "n" not in data or not isinstance(data["n"], int) or data["n"] < 1:
        raise WeightsFileError("field 'n' must be a positive integer")
    n = data["n"]
    signs: dict[tuple[int, ...], float] = {}
    for k, entry in enumerate(data.get("sign_flips", [])):
        where = f"sign_flips[{k}]"
        try:
            A = entry["set"]
            a = entry["weight"]
        except (KeyError, TypeError):
            raise WeightsFileError(f"{where}: needs 'set' and 'weight'") from None
        if not isinstance(A, list) or not all(isinstance(x, int) for x in A):
            raise WeightsFileError(f"{where}.set: must be a list of integers")
        if any(b <= a_ for a_, b in zip(A, A[1:])):
            raise WeightsFileError(f"{where}.set: must be strictly increasing, got {A}")
        if not isinstance(a, (int, float)) or a < 0:
            raise WeightsFileError(f"{where}.weight: must be a nonnegative number, got {a!r}")
        key = tuple(A)
        if key in signs:
            raise WeightsFileError(f"{where}.set: duplicate set {A}")
        signs[key] = float(a)
    pairs: dict[tuple[int, int], float] = {}
    for k, entry in enumerate(data.get("transpositions", [])):
        where = f"transpositions[{k}]"
        try:
            i, j, b = entry["i"], entry["j"], entry["weight"]
        except (KeyError, TypeError):
            raise WeightsFileError(f"{where}: needs 'i', 'j' and 'weight'") from None
        if not isinstance(b, (int, float)) or b < 0:
            raise WeightsFileError(f"{where}.weight: must be a nonnegative number, got {b!r}")
        key = (min(i, j), max(i, j))
        if key in pairs:
            raise WeightsFileError(f"{where}: duplicate pair ({i} {j})")
        pairs[key] = float(b)
    try:
        return ClassAWeights(n, signs, pairs)
    except ValueError as exc:
        raise WeightsFileError(str(exc)) from None


def weights_to_json(caw: ClassAWeights) -> dict:
    return {
        "n": caw.n,
        "sign_flips": [{"set": list(A), "weight": a} for A, a in caw.sign_weights.items()],
        "transpositions": [{"i": i, "j": j, "weight": b}
                           for (i, j), b in caw.transposition_weights.items()],
    }


def load_weights(path: str | Path) -> ClassAWeights:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WeightsFileError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return weights_from_json(data)
