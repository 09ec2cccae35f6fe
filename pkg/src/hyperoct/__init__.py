"""Spectral gaps of weighted Cayley graphs on the hyperoctahedral group."""
from .group import (
    GroupIndex,
    RankError,
    SignedPermutation,
    act,
    embed,
    enumerate_group,
    inverse,
    multiply,
    sign_flip,
    transposition,
)
from .kernels import BACKEND
from .spectral import INFINITE, cayley_gap, spectral_gap

__version__ = "0.1.0"
