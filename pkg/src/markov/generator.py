"""
Continuous-time Markov chains for the number of known proxy identities.

States are 0..m. Every chain here moves up at rate q(k, k+1) = (m-k)/m * beta
(a probe finds an unknown type); the chains differ in how they move down.
"""
from dataclasses import dataclass

import numpy as np
from scipy import stats

from ..errors import ParameterError
from ..analytic.params import ModelParams

ROW_SUM_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class Generator:
    """
    Dense generator matrix Q on {0, ..., m}.

    Attributes:
        m: Largest state
        rates: (m+1) x (m+1) read-only matrix; off-diagonal entries are
            transition rates and each diagonal entry is minus its row's
            off-diagonal sum
    """

    m: int
    rates: np.ndarray

    def __post_init__(self):
        rates = np.array(self.rates, dtype=float)
        n = self.m + 1
        if rates.shape != (n, n):
            raise ParameterError(f"rates must be {n}x{n}, got {rates.shape}")
        off = rates - np.diag(np.diag(rates))
        if np.any(off < 0):
            raise ParameterError("off-diagonal rates must be nonnegative")
        scale = max(1.0, float(np.abs(rates).max()))
        if np.abs(rates.sum(axis=1)).max() > ROW_SUM_TOLERANCE * scale:
            raise ParameterError("generator rows must sum to zero")
        rates.setflags(write=False)
        object.__setattr__(self, 'rates', rates)

    @classmethod
    def from_off_diagonal(cls, m: int, off_diagonal: np.ndarray) -> "Generator":
        """Fill the diagonal so every row sums to zero."""
        q = np.array(off_diagonal, dtype=float)
        np.fill_diagonal(q, 0.0)
        np.fill_diagonal(q, -q.sum(axis=1))
        return cls(m=m, rates=q)

    def scaled(self, factor: float) -> "Generator":
        """Same chain with every rate multiplied by `factor` > 0."""
        if not factor > 0:
            raise ParameterError(f"scale factor must be > 0, got {factor!r}")
        return Generator(m=self.m, rates=self.rates * factor)

    def is_irreducible(self) -> bool:
        """Whether every state reaches every other through positive rates."""
        adjacency = (self.rates > 0).astype(int)
        np.fill_diagonal(adjacency, 1)
        reach = adjacency.copy()
        for _ in range(self.m.bit_length() + 1):
            reach = ((reach @ reach) > 0).astype(int)
        return bool(reach.all())


def _upward_rates(params: ModelParams) -> np.ndarray:
    m, beta = params.m, params.beta
    q = np.zeros((m + 1, m + 1))
    k = np.arange(m)
    q[k, k + 1] = (m - k) / m * beta
    return q


def build_selective_generator(params: ModelParams) -> Generator:
    """
    Chain where a replacement event (rate delta) replaces each type
    independently with probability r.

    From ell known identities the chain drops to k < ell at rate
    delta * C(ell, k) r^(ell-k) (1-r)^k. The k = ell term of that kernel is a
    self-transition and is left out.
    """
    m, delta, r = params.m, params.delta, params.r
    q = _upward_rates(params)
    for ell in range(1, m + 1):
        survivors = np.arange(ell)
        q[ell, :ell] = delta * stats.binom.pmf(survivors, ell, 1.0 - r)
    return Generator.from_off_diagonal(m, q)


def build_birth_death_generator(params: ModelParams) -> Generator:
    """
    Chain where each type is reset by its own rate-delta clock, so the only
    downward move is ell -> ell - 1 at rate delta * ell. r is ignored.
    """
    m, delta = params.m, params.delta
    q = _upward_rates(params)
    ell = np.arange(1, m + 1)
    q[ell, ell - 1] = delta * ell
    return Generator.from_off_diagonal(m, q)
