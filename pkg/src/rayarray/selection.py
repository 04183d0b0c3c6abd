"""Ray selection and baseband combining.

Channels are given as effective port channels ``h_k`` (length ``N``),
either as a list of vectors or a ``(K, N)`` array. Selections are index
sets into the ``N`` ports; the 0/1 selection matrix is materialised only
on request.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .errors import CapExceededError, EmptySelectionError, ZeroBeamformerError

DEFAULT_CAP = 10 ** 6


@dataclass(frozen=True)
class SelectionSet:
    """Chosen port indices ``Omega`` (in selection order)."""

    indices: tuple[int, ...]
    capacity: int
    total: int

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if len(idx) > self.capacity:
            raise ValueError(f"{len(idx)} indices exceed capacity {self.capacity}")
        if len(set(idx)) != len(idx):
            raise ValueError(f"duplicate indices in {idx}")
        if any(i < 0 or i >= self.total for i in idx):
            raise ValueError(f"indices {idx} outside [0, {self.total})")

    def __len__(self):
        return len(self.indices)

    @property
    def sorted_indices(self) -> tuple[int, ...]:
        return tuple(sorted(self.indices))

    def as_set(self) -> frozenset:
        return frozenset(self.indices)

    def matrix(self) -> np.ndarray:
        """0/1 selection matrix ``S``, shape (|Omega|, N)."""
        S = np.zeros((len(self.indices), self.total))
        S[np.arange(len(self.indices)), list(self.indices)] = 1.0
        return S


@dataclass(frozen=True)
class LinkBudget:
    """Transmit SNR ``P_t/sigma^2`` (linear) and the per-port noise scale ``M``."""

    snr: float
    elements_per_ray: int
    architecture: str = "raa"

    def __post_init__(self):
        if not self.snr > 0:
            raise ValueError(f"transmit SNR must be > 0, got {self.snr}")
        if self.elements_per_ray < 1:
            raise ValueError("elements_per_ray must be >= 1")

    @classmethod
    def from_db(cls, snr_db: float, M: int, architecture: str = "raa") -> "LinkBudget":
        return cls(10.0 ** (snr_db / 10.0), M, architecture)

    @property
    def noise_load(self) -> float:
        """Diagonal loading ``M / P_t`` of the interference-plus-noise covariance."""
        return self.elements_per_ray / self.snr


def _stack(channels) -> np.ndarray:
    H = np.asarray(channels, dtype=complex)
    if H.ndim == 1:
        H = H[None, :]
    if H.ndim != 2 or H.shape[0] == 0:
        raise ValueError("channels must be a non-empty list of equal-length vectors")
    return H


def _indices(sel) -> list[int]:
    if isinstance(sel, SelectionSet):
        return list(sel.indices)
    return [int(i) for i in sel]


def snr_single_user(h, sel, budget: LinkBudget) -> float:
    """Post-MRC SNR ``P_t * ||S h||^2 / M``."""
    idx = _indices(sel)
    if not idx:
        raise EmptySelectionError("SNR needs at least one selected port")
    hs = np.asarray(h, dtype=complex)[idx]
    return float(budget.snr * np.vdot(hs, hs).real / budget.elements_per_ray)


def select_rays_single_user(h, n_rf: int) -> SelectionSet:
    """The ``n_rf`` ports with largest ``|h_n|``; ties go to the lower index."""
    h = np.asarray(h, dtype=complex)
    if n_rf > len(h):
        raise ValueError(f"n_rf={n_rf} exceeds port count {len(h)}")
    order = np.argsort(-np.abs(h), kind="stable")[:n_rf]
    return SelectionSet(tuple(sorted(int(i) for i in order)), n_rf, len(h))


def _interference_cov(Hs: np.ndarray, k: int, load: float) -> np.ndarray:
    # Hs: (|Omega|, K) selected channels as columns
    others = np.delete(Hs, k, axis=1)
    return others @ others.conj().T + load * np.eye(Hs.shape[0])


def mmse_beamformer(channels, sel, budget: LinkBudget, k: int) -> np.ndarray:
    """MMSE combiner ``f_k = C_k^{-1} S h_k`` for user ``k``."""
    H = _stack(channels)
    if not 0 <= k < H.shape[0]:
        raise IndexError(f"user {k} out of range for K={H.shape[0]}")
    idx = _indices(sel)
    if not idx:
        raise EmptySelectionError("beamformer needs at least one selected port")
    Hs = H[:, idx].T
    C = _interference_cov(Hs, k, budget.noise_load)
    return np.linalg.solve(C, Hs[:, k])


def sinr(f, k: int, channels, sel, budget: LinkBudget) -> float:
    """SINR of user ``k`` with combiner ``f`` applied to the selected ports."""
    f = np.asarray(f, dtype=complex)
    fnorm2 = np.vdot(f, f).real
    if fnorm2 == 0.0:
        raise ZeroBeamformerError("SINR undefined for a zero combiner")
    H = _stack(channels)
    idx = _indices(sel)
    proj = f.conj() @ H[:, idx].T  # f^H S h_i for every user i
    power = np.abs(proj) ** 2
    signal = budget.snr * power[k]
    interference = budget.snr * (power.sum() - power[k])
    return float(signal / (interference + budget.elements_per_ray * fnorm2))


def sum_rate(sel, channels, budget: LinkBudget) -> float:
    """MMSE sum rate ``sum_k log2(1 + (S h_k)^H C_k^{-1} S h_k)`` in bit/s/Hz."""
    idx = sorted(_indices(sel))
    if not idx:
        raise EmptySelectionError("sum rate needs at least one selected port")
    H = _stack(channels)
    Hs = H[:, idx].T
    K = Hs.shape[1]
    C = np.stack([_interference_cov(Hs, k, budget.noise_load) for k in range(K)])
    X = np.linalg.solve(C, Hs.T[:, :, None])[:, :, 0]
    gamma = np.einsum("kn,kn->k", Hs.T.conj(), X).real
    return float(np.sum(np.log2(1.0 + gamma)))


class GreedyResult(NamedTuple):
    selection: SelectionSet
    step_rates: list
    evaluations: int


class ExhaustiveResult(NamedTuple):
    selection: SelectionSet
    rate: float
    candidates: int


def greedy_selection(channels, n_rf: int, budget: LinkBudget) -> GreedyResult:
    """Add one port per step, each time the one maximising the sum rate.

    Uses ``N + (N-1) + ... + (N-n_rf+1)`` sum-rate evaluations; ties go to
    the lowest port index.
    """
    H = _stack(channels)
    N = H.shape[1]
    if n_rf > N:
        raise ValueError(f"n_rf={n_rf} exceeds port count {N}")
    chosen: list[int] = []
    remaining = list(range(N))
    step_rates = []
    evaluations = 0
    for _ in range(n_rf):
        best_rate, best_n = -math.inf, None
        for n in remaining:
            r = sum_rate(chosen + [n], H, budget)
            evaluations += 1
            if r > best_rate:
                best_rate, best_n = r, n
        chosen.append(best_n)
        remaining.remove(best_n)
        step_rates.append(best_rate)
    return GreedyResult(SelectionSet(tuple(chosen), n_rf, N), step_rates, evaluations)


@lru_cache(maxsize=16)
def _combinations(N: int, r: int) -> np.ndarray:
    flat = np.fromiter(itertools.chain.from_iterable(itertools.combinations(range(N), r)),
                       dtype=np.intp)
    return flat.reshape(-1, r)


def batched_sum_rates(H: np.ndarray, combos: np.ndarray, loads) -> np.ndarray:
    """Sum rate of every row of ``combos`` for every diagonal load in ``loads``.

    Uses ``h_k^H C_k^{-1} h_k = q_k / (1 - q_k)`` with ``q_k = h_k^H R^{-1} h_k``
    and ``R = G + load*I`` the full covariance. One eigendecomposition of
    ``G`` per candidate then serves every load.

    Returns
    -------
    ndarray, shape (len(loads), len(combos))
    """
    Hs = np.transpose(H[:, combos], (1, 2, 0))  # (C, r, K)
    G = Hs @ np.conj(np.swapaxes(Hs, 1, 2))
    lam, U = np.linalg.eigh(G)
    W = np.abs(np.conj(np.swapaxes(U, 1, 2)) @ Hs) ** 2  # (C, r, K)
    out = []
    for load in np.atleast_1d(loads):
        q = np.einsum("crk,cr->ck", W, 1.0 / (lam + load))
        out.append(np.sum(-np.log2(1.0 - q), axis=1))
    return np.array(out)


def exhaustive_selection_multi(channels, n_rf: int, budgets: Sequence[LinkBudget],
                               cap: int = DEFAULT_CAP) -> list[ExhaustiveResult]:
    """:func:`exhaustive_selection` for several link budgets sharing one enumeration."""
    H = _stack(channels)
    N = H.shape[1]
    if n_rf > N or n_rf < 1:
        raise ValueError(f"n_rf={n_rf} must lie in [1, {N}]")
    count = math.comb(N, n_rf)
    if count > cap:
        raise CapExceededError(count, cap)
    combos = _combinations(N, n_rf)
    all_rates = batched_sum_rates(H, combos, [b.noise_load for b in budgets])
    results = []
    for budget, rates in zip(budgets, all_rates):
        top = rates.max()
        # re-rank the near-ties with the direct per-user evaluation
        near = np.flatnonzero(rates >= top - 1e-7 * max(1.0, abs(top)))
        best_rate, best_row = -math.inf, None
        for c in near:
            r = sum_rate(combos[c], H, budget)
            if r > best_rate:
                best_rate, best_row = r, c
        sel = SelectionSet(tuple(int(i) for i in combos[best_row]), n_rf, N)
        results.append(ExhaustiveResult(sel, best_rate, count))
    return results


def exhaustive_selection(channels, n_rf: int, budget: LinkBudget,
                         cap: int = DEFAULT_CAP) -> ExhaustiveResult:
    """Globally optimal ``n_rf``-subset by enumeration (lexicographic tie-break).

    Raises :class:`CapExceededError` when ``binom(N, n_rf)`` exceeds ``cap``.
    """
    return exhaustive_selection_multi(channels, n_rf, [budget], cap)[0]
