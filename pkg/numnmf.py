#!/usr/bin/env python3
"""
numnmf.py

Floating-point nonnegative matrix factorization (Frobenius Lee-Seung
multiplicative updates with seeded restarts) and column alignment of a
recovered left factor against a reference.

Usage:
    from numnmf import SolveConfig, nmf_solve, align_to_reference
    res = nmf_solve(to_float(paper_constants().M), SolveConfig(inner_dim=5))
    res.residual, res.restart
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, fields
from typing import Any, List, Mapping, Optional, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from linalg import DimensionError, NegativeEntryError, hstack, matmul, to_float
from paperdata import paper_constants

log = logging.getLogger(__name__)

FLOOR = 1e-16
INIT_LOW, INIT_HIGH = 0.1, 1.0


class NonFiniteError(ValueError):
    pass


class ZeroColumnError(ValueError):
    pass


@dataclass(frozen=True)
class SolveConfig:
    inner_dim: int
    max_iters: int = 50000
    tol: float = 1e-10
    restarts: int = 32
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("inner_dim", "max_iters", "restarts"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed!r}")

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Any]) -> SolveConfig:
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(mapping) - known)
        if unknown:
            raise ValueError(f"unknown solver settings: {', '.join(unknown)}")
        kwargs = dict(mapping)
        if "tol" in kwargs:
            kwargs["tol"] = float(kwargs["tol"])
        return cls(**kwargs)


@dataclass
class NMFResult:
    W: np.ndarray
    H: np.ndarray
    history: List[float]
    restart: int
    restart_residuals: List[float] = field(default_factory=list)

    @property
    def residual(self) -> float:
        return self.history[-1]

    def __iter__(self):
        return iter((self.W, self.H, self.history))


def restart_generator(seed: int, restart: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, restart])))


def _check_input(V: np.ndarray, d: int) -> np.ndarray:
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[0] == 0 or V.shape[1] == 0:
        raise DimensionError(f"expected a nonempty matrix, got shape {V.shape}")
    if d < 1:
        raise DimensionError(f"inner dimension must be >= 1, got {d}")
    if not np.all(np.isfinite(V)):
        raise NonFiniteError("input matrix has non-finite entries")
    if np.any(V < 0):
        i, j = np.argwhere(V < 0)[0]
        raise NegativeEntryError(f"V[{i + 1},{j + 1}] = {V[i, j]} is negative")
    return V


def _single_run(V: np.ndarray, d: int, cfg: SolveConfig, rng: np.random.Generator
                ) -> Tuple[np.ndarray, np.ndarray, List[float]]:
    m, n = V.shape
    W = rng.uniform(INIT_LOW, INIT_HIGH, size=(m, d))
    H = rng.uniform(INIT_LOW, INIT_HIGH, size=(d, n))
    history = [float(np.linalg.norm(V - W @ H))]
    for _ in range(cfg.max_iters):
        H = H * (W.T @ V) / (W.T @ W @ H + FLOOR)
        W = W * (V @ H.T) / (W @ H @ H.T + FLOOR)
        if not (np.all(np.isfinite(W)) and np.all(np.isfinite(H))):
            raise NonFiniteError("multiplicative updates produced non-finite entries")
        err = float(np.linalg.norm(V - W @ H))
        prev = history[-1]
        history.append(err)
        if err == 0.0 or prev - err <= cfg.tol * max(prev, np.finfo(float).tiny):
            break
    return W, H, history


def nmf_solve(V: np.ndarray, cfg: SolveConfig) -> NMFResult:
    """Best of cfg.restarts independent runs; ties go to the lower restart index."""
    V = _check_input(V, cfg.inner_dim)
    best: Optional[NMFResult] = None
    residuals: List[float] = []
    for r in range(cfg.restarts):
        W, H, history = _single_run(V, cfg.inner_dim, cfg, restart_generator(cfg.seed, r))
        residuals.append(history[-1])
        log.debug(f"restart {r}: residual {history[-1]:.3e} after {len(history) - 1} iterations")
        if best is None or history[-1] < best.residual:
            best = NMFResult(W, H, history, r)
    assert best is not None
    best.restart_residuals = residuals
    log.info(f"nmf d={cfg.inner_dim}: best residual {best.residual:.3e} (restart {best.restart} of {cfg.restarts})")
    return best


def decimate(history: List[float], points: int = 100) -> List[float]:
    """At most `points` evenly spaced entries, always keeping the last."""
    if len(history) <= points:
        return list(history)
    idx = np.unique(np.linspace(0, len(history) - 1, points).round().astype(int))
    return [history[i] for i in idx]


# ────────────────────────── alignment

def _stochastic_columns(A: np.ndarray, label: str) -> Tuple[np.ndarray, np.ndarray]:
    sums = A.sum(axis=0)
    zero = np.flatnonzero(sums <= 0)
    if zero.size:
        raise ZeroColumnError(f"column {zero[0] + 1} of {label} is zero")
    return A / sums, sums


@dataclass
class Alignment:
    permutation: List[int]
    scalings: List[float]
    max_abs_deviation: float


def align_to_reference(Wf: np.ndarray, Wref: np.ndarray) -> Alignment:
    """
    Match the columns of Wf to those of Wref after normalizing both to
    stochastic columns. permutation[i] is the Wf column matched to reference
    column i; scalings[i] the ratio of their column sums.
    """
    Wf, Wref = np.asarray(Wf, dtype=float), np.asarray(Wref, dtype=float)
    if Wf.shape != Wref.shape:
        raise DimensionError(f"shapes differ: {Wf.shape} vs {Wref.shape}")
    A, a_sums = _stochastic_columns(Wf, "the recovered factor")
    B, b_sums = _stochastic_columns(Wref, "the reference")
    cost = np.linalg.norm(B[:, :, None] - A[:, None, :], axis=0)
    row_ind, col_ind = linear_sum_assignment(cost)
    perm = [int(c) for _, c in sorted(zip(row_ind, col_ind))]
    deviation = float(np.max(np.abs(A[:, perm] - B)))
    scalings = [float(a_sums[perm[i]] / b_sums[i]) for i in range(len(perm))]
    return Alignment(perm, scalings, deviation)


def float_certificate_defect() -> float:
    """max |W . (H' | H_eps) - M| evaluated in doubles."""
    pc = paper_constants()
    H = hstack(pc.Hprime, pc.Heps)
    exact = matmul(pc.W, H)
    if exact != pc.M:
        raise ValueError("exact certificate does not reproduce M")
    return float(np.max(np.abs(to_float(pc.W) @ to_float(H) - to_float(pc.M))))
