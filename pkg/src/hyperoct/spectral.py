"""Eigenvalues, spectral gaps and PSD tests for representation Laplacians."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import WeightedElement, is_positive, is_symmetric
from .group import GroupIndex
from .reps import MatrixRep, laplacian, regular_rep, trivial_multiplicity

GAP_RTOL = 1e-8


class _Infinite:
    """Gap of a representation with no nontrivial eigenvalue.

    Compares above every real number; not usable in arithmetic.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITE"

    def __str__(self) -> str:
        return "inf"

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("INFINITE")


INFINITE = _Infinite()


def gap_min(*gaps):
    finite = [g for g in gaps if g is not INFINITE]
    return min(finite) if finite else INFINITE


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def __getitem__(self, k):
        return self.eigenvalues[k]

    def __len__(self) -> int:
        return self.dim


@dataclass(frozen=True)
class GapReport:
    spectrum: Spectrum
    trivial_multiplicity: int
    gap: float | _Infinite
    rep_label: str
    w_description: str = ""
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "rep": self.rep_label,
            "dim": self.spectrum.dim,
            "trivial_multiplicity": self.trivial_multiplicity,
            "gap": None if self.gap is INFINITE else float(self.gap),
            "gap_is_infinite": self.gap is INFINITE,
            "spectrum": [float(x) for x in self.spectrum.eigenvalues],
            "w": self.w_description,
        }


def eigenvalues(m: np.ndarray) -> Spectrum:
    m = np.asarray(m, dtype=float)
    if not np.isfinite(m).all():
        raise ValueError("matrix has non-finite entries")
    if m.size == 0:
        return Spectrum(np.zeros(0))
    return Spectrum(np.linalg.eigvalsh(m))


def _describe(w: WeightedElement) -> str:
    return f"rank {w.n}, {len(w.terms)} terms"


def spectral_gap(w: WeightedElement, rep: MatrixRep, idx: GroupIndex) -> GapReport:
    """Smallest nontrivial eigenvalue of ``Delta(w, rep)``: ``lambda_{t+1}``
    where ``t`` is the multiplicity of the trivial representation."""
    if not is_symmetric(w):
        raise ValueError("spectral gap needs a symmetric element")
    if not is_positive(w):
        raise ValueError("spectral gap is only defined here for positive elements")
    spec = eigenvalues(laplacian(w, rep))
    t = trivial_multiplicity(rep, idx)
    gap = INFINITE if t >= spec.dim else float(spec[t])
    return GapReport(spec, t, gap, rep.label.value, _describe(w))


def cayley_gap(w: WeightedElement, idx: GroupIndex) -> GapReport:
    """Second-lowest eigenvalue of the Cayley-graph Laplacian over ``idx``."""
    report = spectral_gap(w, regular_rep(idx), idx)
    if report.trivial_multiplicity != 1:
        raise AssertionError(f"regular representation has trivial multiplicity {report.trivial_multiplicity}")
    return report


def scale_of(*values) -> float:
    finite = [abs(float(v)) for v in values if v is not INFINITE]
    return max([1.0, *finite])


def gaps_agree(a, b, rtol: float = GAP_RTOL) -> bool:
    if a is INFINITE or b is INFINITE:
        return a is b
    return abs(a - b) <= rtol * scale_of(a, b)


def is_psd(m: np.ndarray, tol: float = 1e-9) -> bool:
    spec = eigenvalues(m).eigenvalues
    if spec.size == 0:
        return True
    norm = np.abs(spec).max()
    return bool(spec[0] >= -tol * max(1.0, norm))


def quadratic_form_check(w: WeightedElement, rep: MatrixRep, trials: int, seed=0) -> float:
    """Max deviation of ``<Delta v, v>`` from ``1/2 sum_g w_g |R(g)v - v|^2``
    over random vectors v."""
    lap = laplacian(w, rep)
    mats = [(c, rep.eval(g)) for g, c in w.sorted_terms()]
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        v = rng.standard_normal(rep.dim)
        lhs = v @ lap @ v
        rhs = 0.5 * sum(c * np.sum((r @ v - v) ** 2) for c, r in mats)
        worst = max(worst, abs(lhs - rhs))
    return worst
