"""Finite matrix representations over the first M harmonic-oscillator states.

Two assembly modes are provided:

``TRUNCATED_FACTORS``
    every ``b``/``b+`` in a word is replaced by its own M x M restriction and
    the restrictions are multiplied.  This is what one gets when building a
    Hamiltonian from a fixed, pre-encoded ``b+_M``.
``EXACT_PROJECTION``
    the word is multiplied out in a basis of size ``M + degree`` and the
    leading M x M block is kept, i.e. ``P_M word P_M``.  Each factor moves
    the occupation by one, so this padding is exact.

Matrices are plain :class:`numpy.ndarray` values (row index = bra).
"""

from __future__ import annotations

import enum
import io
import math
from typing import Iterable, TextIO

import numpy as np

from .errors import ConfigError, NumericalAssertionError
from .ladder import ANNIHILATE, CREATE, LadderPoly, Word, parse_word

# DenseOperator: an M x M float64 or complex128 ndarray
DenseOperator = np.ndarray

REAL_TOL = 1e-14
HERMITIAN_TOL = 1e-12


class AssemblyMode(enum.Enum):
    TRUNCATED_FACTORS = "truncated"
    EXACT_PROJECTION = "exact"


def _check_dim(M: int) -> None:
    if not isinstance(M, (int, np.integer)) or M < 1:
        raise ConfigError(f"basis size must be a positive integer, got {M!r}")


def ladder_matrix(M: int) -> np.ndarray:
    """Restricted creation operator ``b+_M``: sqrt(r+1) at (r+1, r)."""
    _check_dim(M)
    return np.diag(np.sqrt(np.arange(1, M, dtype=float)), -1)


def annihilation_matrix(M: int) -> np.ndarray:
    return ladder_matrix(M).T.copy()


def number_matrix(M: int) -> np.ndarray:
    _check_dim(M)
    return np.diag(np.arange(M, dtype=float))


def projector(M: int) -> np.ndarray:
    _check_dim(M)
    return np.eye(M)


def _as_word(word) -> Word:
    return parse_word(word) if isinstance(word, str) else tuple(word)


def _product(word: Word, dim: int) -> np.ndarray:
    create = ladder_matrix(dim)
    factors = {CREATE: create, ANNIHILATE: create.T}
    out = np.eye(dim)
    for sym in word:
        out = out @ factors[sym]
    return out


def word_matrix(word: Word | str, M: int, mode: AssemblyMode = AssemblyMode.TRUNCATED_FACTORS) -> np.ndarray:
    _check_dim(M)
    word = _as_word(word)
    if mode is AssemblyMode.TRUNCATED_FACTORS:
        return _product(word, M)
    if mode is AssemblyMode.EXACT_PROJECTION:
        return _product(word, M + len(word))[:M, :M].copy()
    raise ConfigError(f"unknown assembly mode {mode!r}")


def _maybe_real(mat: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(mat) and np.all(np.abs(mat.imag) < REAL_TOL):
        return mat.real.copy()
    return mat


def hermiticity_defect(mat: np.ndarray) -> float:
    if mat.size == 0:
        return 0.0
    return float(np.max(np.abs(mat - mat.conj().T)))


def assemble(poly: LadderPoly, M: int, mode: AssemblyMode = AssemblyMode.TRUNCATED_FACTORS) -> np.ndarray:
    """Coefficient-weighted sum of word matrices.

    The result is real when every imaginary part is below 1e-14.  Hermitian
    input polynomials must produce Hermitian matrices (checked to 1e-12
    relative to the largest entry).
    """
    _check_dim(M)
    cache: dict[Word, np.ndarray] = {}
    out = np.zeros((M, M), dtype=complex)
    for word, coeff in poly.items():
        if word not in cache:
            cache[word] = word_matrix(word, M, mode)
        out += coeff * cache[word]
    out = _maybe_real(out)
    if poly.is_hermitian():
        scale = max(1.0, float(np.max(np.abs(out)))) if out.size else 1.0
        if hermiticity_defect(out) > HERMITIAN_TOL * scale:
            raise NumericalAssertionError(
                f"assembled matrix (M={M}, mode={mode.value}) is not Hermitian: "
                f"defect {hermiticity_defect(out):.3e}"
            )
    return out


def commutator_defect(M: int) -> np.ndarray:
    """``[b_M, b+_M] - P_M``; only the last diagonal entry (-M) survives."""
    create = ladder_matrix(M)
    annihilate = create.T
    return annihilate @ create - create @ annihilate - np.eye(M)


def ladder_only_defect(M: int) -> np.ndarray:
    """Same defect written with ladder powers only:
    ``-M (b+_M)^(M-1) (b_M)^(M-1) / (M-1)!``.

    The factorial is divided out step by step (one ``1/sqrt(j)`` per factor)
    so large M does not overflow.
    """
    create = ladder_matrix(M)
    raised = np.eye(M)
    for j in range(1, M):
        raised = raised @ create / math.sqrt(j)
    return -M * raised @ raised.T


def xp_power_oracle(symbol: str, n: int, M: int) -> np.ndarray:
    """Exact ``P_M x^n P_M`` or ``P_M p^n P_M`` from enlarged-basis products.

    x and p are built directly from their matrix elements, independently of
    the symbolic ladder expansion.
    """
    _check_dim(M)
    if n < 0:
        raise ConfigError("power must be non-negative")
    dim = M + n
    off = np.sqrt(np.arange(1, dim, dtype=float) / 2.0)
    if symbol == "x":
        base = np.diag(off, 1) + np.diag(off, -1)
    elif symbol == "p":
        # <r|p|r+1> = -i sqrt((r+1)/2), <r+1|p|r> = +i sqrt((r+1)/2)
        base = np.diag(-1j * off, 1) + np.diag(1j * off, -1)
    else:
        raise ConfigError(f"symbol must be 'x' or 'p', got {symbol!r}")
    out = np.linalg.matrix_power(base, n)[:M, :M]
    return _maybe_real(out)


# ---------------------------------------------------------------------------
# matrix dump
# ---------------------------------------------------------------------------


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def dump_matrix(mat: np.ndarray, fh: TextIO | None = None, fmt: str = "csv") -> str:
    """Row-major dump with 17 significant digits.

    ``fmt="csv"`` writes comma-separated rows; ``fmt="text"`` uses spaces.
    Complex matrices write ``re+imj`` entries.
    """
    sep = "," if fmt == "csv" else " "
    buf = io.StringIO()
    for row in np.atleast_2d(mat):
        if np.iscomplexobj(row):
            cells = [f"{_fmt(v.real)}{'+' if v.imag >= 0 else '-'}{_fmt(abs(v.imag))}j" for v in row]
        else:
            cells = [_fmt(float(v)) for v in row]
        buf.write(sep.join(cells) + "\n")
    text = buf.getvalue()
    if fh is not None:
        fh.write(text)
    return text


def load_matrix(lines: Iterable[str] | str, fmt: str = "csv") -> np.ndarray:
    if isinstance(lines, str):
        lines = lines.splitlines()
    sep = "," if fmt == "csv" else None
    rows = [[complex(c) for c in line.strip().split(sep)] for line in lines if line.strip()]
    return _maybe_real(np.array(rows, dtype=complex))
