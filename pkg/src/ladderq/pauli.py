"""Pauli-string sums over a fixed number of qubits.

Each string is stored as a pair of bit masks ``(x, z)`` with qubit ``j``
(1-based) on bit ``j - 1``.  The letter on a qubit is ``I, X, Z, Y`` for
``(x, z) = (0,0), (1,0), (0,1), (1,1)``, and a string stands for

    P(x, z) = i**popcount(x & z) * X**x Z**z,

so ``Y = i X Z``.  With this convention the product of two strings is

    P(x1, z1) P(x2, z2) = i**(w1 + w2 - w3 + 2*popcount(z1 & x2)) P(x1^x2, z1^z2),

``w = popcount(x & z)``; phases are integers mod 4 and never drift.

Matrices use qubit 1 as the least significant tensor factor, so the basis
index ``r`` has bit ``j - 1`` equal to the state of qubit ``j``.
"""

from __future__ import annotations

import json
from numbers import Number
from typing import Iterable, Mapping

import numpy as np

from .errors import ConfigError

COLLECT_TOL = 1e-10
MAX_DENSE_QUBITS = 12
_CHUNK = 1 << 21

_LETTERS = "IXZY"  # index = x + 2 z
_CODE = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_PHASES = np.array([1, 1j, -1, -1j])

QUBIT1_FIRST = "qubit1-first"
QUBITK_FIRST = "qubitK-first"
LABEL_ORDERS = (QUBIT1_FIRST, QUBITK_FIRST)

_PAULI_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

if hasattr(np, "bitwise_count"):
    def _popcount(a: np.ndarray) -> np.ndarray:
        return np.bitwise_count(a).astype(np.int64)
else:  # numpy < 2.0
    _BYTE_COUNTS = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)

    def _popcount(a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64).copy()
        out = np.zeros(a.shape, dtype=np.int64)
        while np.any(a):
            out += _BYTE_COUNTS[a & 0xFF]
            a >>= 8
        return out


def label_to_masks(label: str, order: str = QUBIT1_FIRST) -> tuple[int, int]:
    if order not in LABEL_ORDERS:
        raise ConfigError(f"label order must be one of {LABEL_ORDERS}")
    letters = label if order == QUBIT1_FIRST else label[::-1]
    x = z = 0
    for j, ch in enumerate(letters):
        try:
            bx, bz = _CODE[ch]
        except KeyError:
            raise ConfigError(f"invalid Pauli letter {ch!r} in {label!r}") from None
        x |= bx << j
        z |= bz << j
    return x, z


def masks_to_label(x: int, z: int, num_qubits: int, order: str = QUBIT1_FIRST) -> str:
    letters = "".join(_LETTERS[((x >> j) & 1) + 2 * ((z >> j) & 1)] for j in range(num_qubits))
    return letters if order == QUBIT1_FIRST else letters[::-1]


def _collect(num_qubits: int, xs, zs, coeffs, tol: float):
    if len(coeffs) == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy(), np.zeros(0, dtype=complex)
    keys = (xs << num_qubits) | zs
    uniq, inv = np.unique(keys, return_inverse=True)
    re = np.bincount(inv, weights=coeffs.real, minlength=len(uniq))
    im = np.bincount(inv, weights=coeffs.imag, minlength=len(uniq))
    c = re + 1j * im
    keep = np.abs(c) >= tol
    uniq = uniq[keep]
    mask = (1 << num_qubits) - 1
    return uniq >> num_qubits, uniq & mask, c[keep]


class PauliSum:
    """Immutable linear combination of K-qubit Pauli strings."""

    __slots__ = ("num_qubits", "xs", "zs", "coeffs")

    def __init__(self, num_qubits: int, xs=(), zs=(), coeffs=(), *, tol: float = COLLECT_TOL):
        if num_qubits < 1:
            raise ConfigError("a Pauli sum needs at least one qubit")
        if num_qubits > 30:
            raise ConfigError("more than 30 qubits is not supported")
        xs = np.asarray(xs, dtype=np.int64).ravel()
        zs = np.asarray(zs, dtype=np.int64).ravel()
        coeffs = np.asarray(coeffs, dtype=complex).ravel()
        if not (len(xs) == len(zs) == len(coeffs)):
            raise ValueError("mask and coefficient arrays differ in length")
        self.num_qubits = int(num_qubits)
        self.xs, self.zs, self.coeffs = _collect(self.num_qubits, xs, zs, coeffs, tol)
        for arr in (self.xs, self.zs, self.coeffs):
            arr.flags.writeable = False

    # construction -----------------------------------------------------------
    @classmethod
    def zero(cls, num_qubits: int) -> "PauliSum":
        return cls(num_qubits)

    @classmethod
    def identity(cls, num_qubits: int, coeff: Number = 1.0) -> "PauliSum":
        return cls(num_qubits, [0], [0], [coeff])

    @classmethod
    def from_label(cls, label: str, coeff: Number = 1.0, order: str = QUBIT1_FIRST) -> "PauliSum":
        x, z = label_to_masks(label, order)
        return cls(len(label), [x], [z], [coeff])

    @classmethod
    def from_terms(cls, terms: Mapping[str, Number] | Iterable[tuple[Number, str]],
                   order: str = QUBIT1_FIRST, num_qubits: int | None = None) -> "PauliSum":
        items = list(terms.items()) if isinstance(terms, Mapping) else [(w, c) for c, w in terms]
        if num_qubits is None:
            if not items:
                raise ConfigError("num_qubits is required for an empty term list")
            num_qubits = len(items[0][0])
        xs, zs, cs = [], [], []
        for label, coeff in items:
            if len(label) != num_qubits:
                raise ConfigError(f"label {label!r} does not have {num_qubits} letters")
            x, z = label_to_masks(label, order)
            xs.append(x)
            zs.append(z)
            cs.append(coeff)
        return cls(num_qubits, xs, zs, cs)

    @classmethod
    def from_matrix(cls, mat: np.ndarray, tol: float = COLLECT_TOL) -> "PauliSum":
        """Pauli decomposition ``c_P = Tr(P A) / 2**K`` via Walsh-Hadamard transforms."""
        mat = np.asarray(mat)
        dim = mat.shape[0]
        num_qubits = dim.bit_length() - 1
        if mat.shape != (dim, dim) or dim != 1 << num_qubits or num_qubits < 1:
            raise ConfigError("matrix must be square with a power-of-two dimension >= 2")
        idx = np.arange(dim)
        xs, zs, cs = [], [], []
        for x in range(dim):
            v = mat[idx, idx ^ x].astype(complex)
            h = 1
            while h < dim:
                v = v.reshape(-1, 2 * h)
                a, b = v[:, :h].copy(), v[:, h:].copy()
                v[:, :h], v[:, h:] = a + b, a - b
                v = v.reshape(-1)
                h *= 2
            z = np.arange(dim)
            w = _popcount(np.int64(x) & z)
            xs.append(np.full(dim, x))
            zs.append(z)
            cs.append(_PHASES[w % 4] * v / dim)
        return cls(num_qubits, np.concatenate(xs), np.concatenate(zs), np.concatenate(cs), tol=tol)

    # inspection -------------------------------------------------------------
    def __len__(self) -> int:
        return len(self.coeffs)

    def terms(self, order: str = QUBIT1_FIRST) -> dict[str, complex]:
        return {
            masks_to_label(int(x), int(z), self.num_qubits, order): complex(c)
            for x, z, c in zip(self.xs, self.zs, self.coeffs)
        }

    def coeff(self, label: str, order: str = QUBIT1_FIRST) -> complex:
        x, z = label_to_masks(label, order)
        hit = np.nonzero((self.xs == x) & (self.zs == z))[0]
        return complex(self.coeffs[hit[0]]) if len(hit) else 0j

    def one_norm(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))

    def max_imag(self) -> float:
        return float(np.max(np.abs(self.coeffs.imag))) if len(self) else 0.0

    def is_zero(self) -> bool:
        return len(self) == 0

    def __repr__(self):
        shown = ", ".join(f"{c:.6g}*{lab}" for lab, c in list(self.terms().items())[:6])
        more = "" if len(self) <= 6 else f", ... ({len(self)} terms)"
        return f"PauliSum(K={self.num_qubits}: {shown or '0'}{more})"

    # algebra ----------------------------------------------------------------
    def _check(self, other: "PauliSum") -> None:
        if other.num_qubits != self.num_qubits:
            raise ConfigError(
                f"qubit count mismatch: {self.num_qubits} vs {other.num_qubits}"
            )

    def __add__(self, other):
        if isinstance(other, Number):
            other = PauliSum.identity(self.num_qubits, other)
        if not isinstance(other, PauliSum):
            return NotImplemented
        self._check(other)
        return PauliSum(
            self.num_qubits,
            np.concatenate([self.xs, other.xs]),
            np.concatenate([self.zs, other.zs]),
            np.concatenate([self.coeffs, other.coeffs]),
        )

    __radd__ = __add__

    def __neg__(self):
        return PauliSum(self.num_qubits, self.xs, self.zs, -self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return PauliSum(self.num_qubits, self.xs, self.zs, self.coeffs * other)
        if not isinstance(other, PauliSum):
            return NotImplemented
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Number):
            return self * (1.0 / other)
        return NotImplemented

    def __pow__(self, n: int) -> "PauliSum":
        out = PauliSum.identity(self.num_qubits)
        for _ in range(n):
            out = out * self
        return out

    def adjoint(self) -> "PauliSum":
        # Pauli strings are Hermitian
        return PauliSum(self.num_qubits, self.xs, self.zs, self.coeffs.conj())

    def extend(self, num_qubits: int) -> "PauliSum":
        """Embed into a larger register, acting as identity on the new qubits."""
        if num_qubits < self.num_qubits:
            raise ConfigError("cannot shrink a Pauli sum")
        return PauliSum(num_qubits, self.xs, self.zs, self.coeffs)

    def permute_qubits(self, perm: list[int]) -> "PauliSum":
        """Relabel qubits: old qubit index ``j`` (0-based) moves to ``perm[j]``."""
        if sorted(perm) != list(range(self.num_qubits)):
            raise ConfigError("perm must be a permutation of range(num_qubits)")
        xs = np.zeros_like(self.xs)
        zs = np.zeros_like(self.zs)
        for old, new in enumerate(perm):
            xs |= ((self.xs >> old) & 1) << new
            zs |= ((self.zs >> old) & 1) << new
        return PauliSum(self.num_qubits, xs, zs, self.coeffs)

    def isclose(self, other: "PauliSum", tol: float = 1e-12) -> bool:
        self._check(other)
        diff = self - other
        return bool(np.all(np.abs(diff.coeffs) <= tol))

    def __eq__(self, other):
        if not isinstance(other, PauliSum):
            return NotImplemented
        return (
            self.num_qubits == other.num_qubits
            and np.array_equal(self.xs, other.xs)
            and np.array_equal(self.zs, other.zs)
            and np.array_equal(self.coeffs, other.coeffs)
        )

    __hash__ = None

    # dense bridge -----------------------------------------------------------
    def to_matrix(self) -> np.ndarray:
        """Kronecker expansion, qubit 1 as the least significant factor."""
        if self.num_qubits > MAX_DENSE_QUBITS:
            raise ConfigError(
                f"to_matrix is limited to {MAX_DENSE_QUBITS} qubits, got {self.num_qubits}"
            )
        dim = 1 << self.num_qubits
        out = np.zeros((dim, dim), dtype=complex)
        for label, c in self.terms(QUBITK_FIRST).items():
            m = np.ones((1, 1), dtype=complex)
            for ch in label:
                m = np.kron(m, _PAULI_MATS[ch])
            out += c * m
        return out

    # serialization ----------------------------------------------------------
    def _sorted_rows(self, order: str):
        rows = [(lab, c) for lab, c in self.terms(order).items()]
        rows.sort(key=lambda t: t[0])
        return rows

    def to_text(self, order: str = QUBIT1_FIRST, scale: float = 1.0, precision: int | None = None) -> str:
        def fmt(v: float) -> str:
            v = float(v) + 0.0
            return repr(v) if precision is None else f"{v:.{precision}f}"

        lines = [f"{fmt(c.real * scale)} {fmt(c.imag * scale)} {lab}" for lab, c in self._sorted_rows(order)]
        return "".join(line + "\n" for line in lines)

    @classmethod
    def from_text(cls, text: str, order: str = QUBIT1_FIRST, scale: float = 1.0) -> "PauliSum":
        terms = []
        num_qubits = None
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            re_, im_, label = line.split()
            num_qubits = len(label)
            terms.append((complex(float(re_), float(im_)) / scale, label))
        if num_qubits is None:
            raise ConfigError("no Pauli terms found")
        return cls.from_terms(terms, order=order, num_qubits=num_qubits)

    def to_json_obj(self, order: str = QUBIT1_FIRST, scale: float = 1.0) -> list[dict]:
        return [
            {"coeff_re": c.real * scale + 0.0, "coeff_im": c.imag * scale + 0.0, "letters": lab}
            for lab, c in self._sorted_rows(order)
        ]

    @classmethod
    def from_json_obj(cls, obj: list[dict], order: str = QUBIT1_FIRST, scale: float = 1.0) -> "PauliSum":
        if not obj:
            raise ConfigError("no Pauli terms found")
        terms = [(complex(e["coeff_re"], e.get("coeff_im", 0.0)) / scale, e["letters"]) for e in obj]
        return cls.from_terms(terms, order=order, num_qubits=len(obj[0]["letters"]))

    def dumps(self, order: str = QUBIT1_FIRST, scale: float = 1.0) -> str:
        return json.dumps(self.to_json_obj(order, scale), indent=1)


def _string_products(a: PauliSum, b: PauliSum, rows: slice):
    x1 = a.xs[rows, None]
    z1 = a.zs[rows, None]
    x2 = b.xs[None, :]
    z2 = b.zs[None, :]
    x3 = x1 ^ x2
    z3 = z1 ^ z2
    w = (
        _popcount(x1 & z1)
        + _popcount(x2 & z2)
        - _popcount(x3 & z3)
        + 2 * _popcount(z1 & x2)
    ) % 4
    c = a.coeffs[rows, None] * b.coeffs[None, :] * _PHASES[w]
    return x3.ravel(), z3.ravel(), c.ravel()


def multiply(a: PauliSum, b: PauliSum) -> PauliSum:
    """Distributive product with exact per-string phases, then collection."""
    a._check(b)
    K = a.num_qubits
    if len(a) == 0 or len(b) == 0:
        return PauliSum.zero(K)
    step = max(1, _CHUNK // len(b))
    parts_x, parts_z, parts_c = [], [], []
    for start in range(0, len(a), step):
        x, z, c = _string_products(a, b, slice(start, start + step))
        # collect each chunk without pruning; prune once at the end
        x, z, c = _collect(K, x, z, c, 0.0)
        parts_x.append(x)
        parts_z.append(z)
        parts_c.append(c)
    return PauliSum(K, np.concatenate(parts_x), np.concatenate(parts_z), np.concatenate(parts_c))


def one_norm(s: PauliSum) -> float:
    return s.one_norm()


def to_matrix(s: PauliSum) -> np.ndarray:
    return s.to_matrix()
