"""Diagonalization, basis-size convergence sweeps, eigenvector weights and
1-norm scaling of the encoded Hamiltonians."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .encoding import Binary, encode_hamiltonian
from .errors import ConfigError, NumericalAssertionError
from .matrices import AssemblyMode, assemble, hermiticity_defect
from .models import ModelSpec, Ordering

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-13
MONOTONE_TOL = 1e-9  # cm-1
WEIGHT_TOL = 1e-10
DEFAULT_FIT_SIZES = (4, 8, 16, 32, 64, 128)


# ---------------------------------------------------------------------------
# eigensolver
# ---------------------------------------------------------------------------


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Disjoint (p, q) pairings covering every pair once per sweep (circle method)."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(a, b), max(a, b)) for a, b in pairs if a >= 0 and b >= 0]
        p = np.array([a for a, _ in pairs], dtype=np.intp)
        q = np.array([b for _, b in pairs], dtype=np.intp)
        rounds.append((p, q))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def jacobi_eigh(a: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi for real symmetric matrices.

    Each sweep visits all index pairs in a fixed round-robin order; the pairs
    of one round are disjoint, so their rotations are applied together.
    Stops once the off-diagonal Frobenius norm is below ``tol * ||A||_F``.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    if n == 1:
        return a.diagonal().copy(), v
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n), v
    rounds = _round_robin(n)
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(a - np.diag(a.diagonal())))
        if off <= tol * scale:
            break
        for p, q in rounds:
            apq = a[p, q]
            active = np.abs(apq) > 1e-300
            if not np.any(active):
                continue
            p, q, apq = p[active], q[active], apq[active]
            tau = (a[q, q] - a[p, p]) / (2.0 * apq)
            # hypot avoids overflowing tau**2 for nearly decoupled pairs
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            ap, aq = a[:, p].copy(), a[:, q]
            a[:, p] = c * ap - s * aq
            a[:, q] = s * ap + c * aq
            ap, aq = a[p, :].copy(), a[q, :]
            a[p, :] = c[:, None] * ap - s[:, None] * aq
            a[q, :] = s[:, None] * ap + c[:, None] * aq
            vp, vq = v[:, p].copy(), v[:, q]
            v[:, p] = c * vp - s * vq
            v[:, q] = s * vp + c * vq
    else:
        raise NumericalAssertionError(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = a.diagonal().copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def _fix_signs(vecs: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(vecs), axis=0)
    pivots = vecs[idx, np.arange(vecs.shape[1])]
    phase = np.conj(pivots) / np.abs(pivots)
    out = vecs * phase[None, :]
    return out.real.copy() if not np.iscomplexobj(vecs) else out


def eig(h: np.ndarray, method: str = "jacobi") -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors (columns).

    Each vector's largest-magnitude component is made real and positive.
    ``method="jacobi"`` handles real symmetric input; complex Hermitian input
    and ``method="lapack"`` go through :func:`numpy.linalg.eigh`.
    """
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] == 0:
        raise ConfigError(f"expected a non-empty square matrix, got shape {h.shape}")
    scale = max(1.0, float(np.max(np.abs(h))))
    defect = hermiticity_defect(h)
    if defect > HERMITIAN_TOL * scale:
        raise NumericalAssertionError(f"matrix is not Hermitian (max defect {defect:.3e})")
    if np.iscomplexobj(h) and np.all(np.abs(h.imag) < 1e-14):
        h = h.real
    if method == "jacobi" and not np.iscomplexobj(h):
        w, v = jacobi_eigh(0.5 * (h + h.T))
    elif method in ("jacobi", "lapack"):
        w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    else:
        raise ConfigError(f"unknown eigensolver {method!r}")
    return w, _fix_signs(v)


# ---------------------------------------------------------------------------
# spectra
# ---------------------------------------------------------------------------


@dataclass
class SpectrumReport:
    M: int
    ordering: str
    origin_label: str
    energies: np.ndarray
    unit: str = "cm-1"
    eigenvectors: np.ndarray | None = field(default=None, repr=False)
    weights: np.ndarray | None = field(default=None, repr=False)
    one_norm: float | None = None

    @property
    def splitting_01(self) -> float:
        return float(self.energies[1] - self.energies[0]) if len(self.energies) > 1 else float("nan")


def _unit_scale(model: ModelSpec, unit: str) -> float:
    if unit == "cm-1":
        return model.omega
    if unit == "dimensionless":
        return 1.0
    raise ConfigError(f"unit must be 'cm-1' or 'dimensionless', got {unit!r}")


def hamiltonian_matrix(model: ModelSpec, M: int, ordering: Ordering | str = Ordering.NORMAL,
                       mode: AssemblyMode = AssemblyMode.TRUNCATED_FACTORS) -> np.ndarray:
    """Dimensionless M x M Hamiltonian, assembled from restricted ladder matrices."""
    return assemble(model.ladder(ordering), M, mode)


def spectrum(
    model: ModelSpec,
    M: int,
    ordering: Ordering | str = Ordering.NORMAL,
    *,
    mode: AssemblyMode = AssemblyMode.TRUNCATED_FACTORS,
    unit: str = "cm-1",
    method: str = "jacobi",
    with_vectors: bool = True,
) -> SpectrumReport:
    ordering = Ordering(ordering)
    scale = _unit_scale(model, unit)
    h = hamiltonian_matrix(model, M, ordering, mode)
    w, v = eig(h, method)
    return SpectrumReport(
        M=M,
        ordering=ordering.value,
        origin_label=model.origin_label,
        energies=w * scale,
        unit=unit,
        eigenvectors=v if with_vectors else None,
    )


def weights(report: SpectrumReport) -> np.ndarray:
    """``w[n, i] = |<i|psi_n>|^2``; every row sums to one."""
    if report.eigenvectors is None:
        raise ConfigError("report has no eigenvectors")
    w = np.abs(report.eigenvectors.T) ** 2
    worst = float(np.max(np.abs(w.sum(axis=1) - 1.0)))
    if worst > WEIGHT_TOL:
        raise NumericalAssertionError(f"eigenvector weights not normalized (deviation {worst:.3e})")
    report.weights = w
    return w


# ---------------------------------------------------------------------------
# convergence sweeps
# ---------------------------------------------------------------------------


@dataclass
class SweepRow:
    M: int
    energies: np.ndarray  # lowest levels, report unit

    @property
    def splitting_01(self) -> float:
        return float(self.energies[1] - self.energies[0]) if len(self.energies) > 1 else float("nan")


@dataclass
class SweepTable:
    ordering: str
    origin_label: str
    unit: str
    rows: list[SweepRow]
    reference: SweepRow
    monotonicity_violations: list[int] = field(default_factory=list)
    below_reference: list[int] = field(default_factory=list)

    def row(self, M: int) -> SweepRow:
        for r in self.rows:
            if r.M == M:
                return r
        raise KeyError(M)

    def ground_energies(self) -> dict[int, float]:
        return {r.M: float(r.energies[0]) for r in self.rows}

    def to_csv(self, precision: int = 4, n_levels: int = 5) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["M"] + [f"E{n}" for n in range(n_levels)] + ["splitting01"])
        for r in self.rows:
            cells = [f"{e:.{precision}f}" for e in r.energies[:n_levels]]
            cells += [""] * (n_levels - len(cells))
            split = "" if math.isnan(r.splitting_01) else f"{r.splitting_01:.{precision}f}"
            writer.writerow([r.M] + cells + [split])
        return buf.getvalue()


def convergence_sweep(
    model: ModelSpec,
    ordering: Ordering | str,
    M_list: Sequence[int],
    *,
    n_levels: int = 5,
    reference_M: int | None = None,
    unit: str = "cm-1",
    method: str = "jacobi",
    workers: int | None = None,
) -> SweepTable:
    """Lowest ``n_levels`` energies for every basis size in ``M_list``.

    Normal-ordered sweeps must be variational: E0 may not rise with M by more
    than 1e-9 cm-1 (``NumericalAssertionError`` otherwise).  Unordered sweeps
    record where that fails and where E0 drops below the reference value.
    """
    ordering = Ordering(ordering)
    sizes = list(M_list)
    if not sizes:
        raise ConfigError("empty basis-size list")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ConfigError("basis sizes must be strictly increasing")
    ref_M = reference_M or sizes[-1]

    def levels(M: int) -> SweepRow:
        rep = spectrum(model, M, ordering, unit=unit, method=method, with_vectors=False)
        return SweepRow(M, rep.energies[:n_levels].copy())

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(levels, sizes))
    else:
        rows = [levels(M) for M in sizes]
    reference = next((r for r in rows if r.M == ref_M), None) or levels(ref_M)

    tol = MONOTONE_TOL * (_unit_scale(model, unit) / model.omega)
    rising = [b.M for a, b in zip(rows, rows[1:]) if b.energies[0] > a.energies[0] + tol]
    below = [r.M for r in rows if r.energies[0] < reference.energies[0] - tol]
    if ordering is Ordering.NORMAL and rising:
        raise NumericalAssertionError(
            f"normal-ordered ground energy increased with basis size at M={rising}"
        )
    return SweepTable(ordering.value, model.origin_label, unit, rows, reference, rising, below)


def weights_csv(w: np.ndarray, n_states: int | None = None, precision: int = 12) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "i", "w"])
    for n in range(n_states if n_states is not None else w.shape[0]):
        for i in range(w.shape[1]):
            writer.writerow([n, i, f"{w[n, i]:.{precision}e}"])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# 1-norm scaling
# ---------------------------------------------------------------------------


@dataclass
class NormFit:
    slope: float
    intercept: float
    sizes: list[int]
    norms: list[float]


def encoded_one_norm(model: ModelSpec, M: int, ordering: Ordering | str = Ordering.NORMAL,
                     unit: str = "dimensionless") -> float:
    K = M.bit_length() - 1
    if M < 2 or M != 1 << K:
        raise ConfigError(f"binary encoding needs M to be a power of two >= 2, got {M}")
    pauli = encode_hamiltonian(model.ladder(ordering), Binary(K))
    return pauli.one_norm() * _unit_scale(model, unit)


def norm_scaling_fit(
    model: ModelSpec,
    M_list: Sequence[int] = DEFAULT_FIT_SIZES,
    ordering: Ordering | str = Ordering.NORMAL,
) -> NormFit:
    """Least-squares slope of log(1-norm) against log(M) for the binary encoding."""
    sizes = list(M_list)
    if len(sizes) < 3:
        raise ConfigError("a scaling fit needs at least three basis sizes")
    norms = [encoded_one_norm(model, M, ordering) for M in sizes]
    if min(norms) <= 0:
        raise NumericalAssertionError("zero 1-norm cannot be fitted on a log scale")
    slope, intercept = np.polyfit(np.log(sizes), np.log(norms), 1)
    return NormFit(float(slope), float(intercept), sizes, norms)
