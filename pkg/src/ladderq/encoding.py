"""Boson-to-qubit encodings of the truncated ladder operators.

Unary (one-hot): M qubits, basis state ``n`` is the string with a single 1 on
qubit ``n + 1``.

Binary (compact): K qubits, basis state ``r = sum_j eta_j 2**(j-1)`` where
``eta_j`` is the state of qubit ``j``; M = 2**K.

Single-qubit building blocks::

    sigma-  = |1><0| = (X - iY)/2        I+ = |0><0| = (I + Z)/2
    sigma+  = |0><1| = (X + iY)/2        I- = |1><1| = (I - Z)/2

Hamiltonians are encoded by substituting the encoded ``b+`` (and its adjoint
for ``b``) into every ladder word and multiplying in the Pauli algebra; no
dense matrices are involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

from .errors import ConfigError
from .ladder import CREATE, LadderPoly, Word
from .pauli import PauliSum

SIGMA_MINUS = "sigma-"
SIGMA_PLUS = "sigma+"
PROJ_ZERO = "I+"
PROJ_ONE = "I-"

_LOCAL = {
    SIGMA_MINUS: {"X": 0.5, "Y": -0.5j},
    SIGMA_PLUS: {"X": 0.5, "Y": 0.5j},
    PROJ_ZERO: {"I": 0.5, "Z": 0.5},
    PROJ_ONE: {"I": 0.5, "Z": -0.5},
}


@dataclass(frozen=True)
class Unary:
    M: int

    def __post_init__(self):
        if self.M < 1:
            raise ConfigError("unary encoding needs M >= 1")

    @property
    def num_qubits(self) -> int:
        return self.M

    @property
    def dim(self) -> int:
        return self.M


@dataclass(frozen=True)
class Binary:
    K: int

    def __post_init__(self):
        if self.K < 1:
            raise ConfigError("binary encoding needs K >= 1")

    @property
    def num_qubits(self) -> int:
        return self.K

    @property
    def dim(self) -> int:
        return 1 << self.K

    @classmethod
    def for_basis_size(cls, M: int) -> "Binary":
        """Smallest register holding M states (callers warn when M is not 2**K)."""
        if M < 2:
            raise ConfigError("binary encoding needs M >= 2")
        return cls(max(1, math.ceil(math.log2(M))))


Encoding = Union[Unary, Binary]


def local_operator(num_qubits: int, factors: dict[int, str]) -> PauliSum:
    """Tensor product of single-qubit operators; ``factors`` maps 1-based qubit -> name."""
    out = PauliSum.identity(num_qubits)
    for qubit, name in factors.items():
        if not 1 <= qubit <= num_qubits:
            raise ConfigError(f"qubit {qubit} outside 1..{num_qubits}")
        letters = _LOCAL[name]
        label = ["I"] * num_qubits
        terms = {}
        for letter, c in letters.items():
            label[qubit - 1] = letter
            terms["".join(label)] = c
        out = out * PauliSum.from_terms(terms, num_qubits=num_qubits)
    return out


def vacuum_projector(num_qubits: int) -> PauliSum:
    return local_operator(num_qubits, {j: PROJ_ZERO for j in range(1, num_qubits + 1)})


# ---------------------------------------------------------------------------
# unary
# ---------------------------------------------------------------------------


def unary_creation(M: int) -> PauliSum:
    """sum_{r=1}^{M-1} sqrt(r) sigma-_{r+1} sigma+_r on M qubits."""
    if M < 2:
        raise ConfigError("unary creation operator needs M >= 2 (no transition exists)")
    out = PauliSum.zero(M)
    for r in range(1, M):
        out = out + math.sqrt(r) * local_operator(M, {r + 1: SIGMA_MINUS, r: SIGMA_PLUS})
    return out


def one_hot_indices(M: int) -> list[int]:
    """Computational-basis indices of the M one-hot states, in occupation order."""
    return [1 << n for n in range(M)]


# ---------------------------------------------------------------------------
# binary
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _jump_operators(K: int) -> tuple[PauliSum, ...]:
    """First-neighbour jumps ``c_i = |i><i-1|`` for i = 1 .. 2**K - 1, built recursively."""
    if K == 1:
        return (local_operator(1, {1: SIGMA_MINUS}),)
    prev = _jump_operators(K - 1)
    half = 1 << (K - 1)
    low = local_operator(K, {K: PROJ_ZERO})
    high = local_operator(K, {K: PROJ_ONE})
    carry_factors = {j: SIGMA_PLUS for j in range(1, K)}
    carry_factors[K] = SIGMA_MINUS
    carry = local_operator(K, carry_factors)
    lifted = [c.extend(K) for c in prev]
    lower = [c * low for c in lifted]
    upper = [c * high for c in lifted]
    # index order: 1..half-1, half (carry), half+1..2**K-1
    return tuple(lower) + (carry,) + tuple(upper)


def jump_operators(K: int) -> tuple[PauliSum, ...]:
    if K < 1:
        raise ConfigError("binary encoding needs K >= 1")
    return _jump_operators(K)


@lru_cache(maxsize=None)
def binary_creation(K: int) -> PauliSum:
    """Binary-encoded ``b+`` on K qubits: sum_i sqrt(i) c_i."""
    jumps = jump_operators(K)
    out = PauliSum.zero(K)
    for i, c in enumerate(jumps, start=1):
        out = out + math.sqrt(i) * c
    return out


@lru_cache(maxsize=None)
def binary_d_operator(K: int) -> PauliSum:
    """Same jumps as :func:`binary_creation` with every weight set to one."""
    jumps = jump_operators(K)
    out = PauliSum.zero(K)
    for c in jumps:
        out = out + c
    return out


_BIT_FACTOR = {
    (0, 0): PROJ_ZERO,   # sigma+ sigma- = |0><0|
    (0, 1): SIGMA_PLUS,  # |0><1|
    (1, 0): SIGMA_MINUS,  # |1><0|
    (1, 1): PROJ_ONE,    # sigma- sigma+ = |1><1|
}


def _check_index(i: int, dim: int, name: str) -> None:
    if not 0 <= i < dim:
        raise ConfigError(f"{name}={i} out of range 0..{dim - 1}")


def transition_operator(k: int, h: int, enc: Encoding, route: str = "bits") -> PauliSum:
    """Encoded ``|k><h|``.

    ``route="bits"`` uses the per-qubit bit-pattern product; ``route="ladder"``
    uses ``(b+)^k |0><0| b^h / sqrt(k! h!)`` (binary encoding only).
    """
    _check_index(k, enc.dim, "k")
    _check_index(h, enc.dim, "h")
    if isinstance(enc, Unary):
        if k == h:
            return local_operator(enc.M, {k + 1: PROJ_ONE})
        return local_operator(enc.M, {k + 1: SIGMA_MINUS, h + 1: SIGMA_PLUS})
    K = enc.K
    if route == "bits":
        factors = {j: _BIT_FACTOR[((k >> (j - 1)) & 1, (h >> (j - 1)) & 1)] for j in range(1, K + 1)}
        return local_operator(K, factors)
    if route == "ladder":
        create = binary_creation(K)
        left = _normalized_power(create, k)
        right = _normalized_power(create.adjoint(), h)
        return left * vacuum_projector(K) * right
    raise ConfigError(f"unknown route {route!r}")


def _normalized_power(op: PauliSum, n: int) -> PauliSum:
    """``op**n / sqrt(n!)`` with the factorial divided out one step at a time."""
    out = PauliSum.identity(op.num_qubits)
    for j in range(1, n + 1):
        out = op * out / math.sqrt(j)
    return out


def a_dagger_binary(k: int, K: int) -> PauliSum:
    """Basis-agnostic creation ``a+_k = (d+_K)^k (x)_i I+_i``, i.e. ``|k><0|``."""
    _check_index(k, 1 << K, "k")
    d = binary_d_operator(K)
    out = vacuum_projector(K)
    for _ in range(k):
        out = d * out
    return out


def a_binary(k: int, K: int) -> PauliSum:
    return a_dagger_binary(k, K).adjoint()


# ---------------------------------------------------------------------------
# Hamiltonians
# ---------------------------------------------------------------------------


def creation_operator(enc: Encoding) -> PauliSum:
    if isinstance(enc, Binary):
        return binary_creation(enc.K)
    return unary_creation(enc.M)


def encode_hamiltonian(poly: LadderPoly, enc: Encoding) -> PauliSum:
    """Substitute the encoded ladder operators into every word.

    Factors are multiplied left to right; shared word prefixes are reused.
    For the unary encoding the result is only meaningful on the one-hot
    subspace.
    """
    create = creation_operator(enc)
    annihilate = create.adjoint()
    factor = {CREATE: create, "b": annihilate}
    K = enc.num_qubits
    prefixes: dict[Word, PauliSum] = {(): PauliSum.identity(K)}

    def product(word: Word) -> PauliSum:
        if word not in prefixes:
            prefixes[word] = product(word[:-1]) * factor[word[-1]]
        return prefixes[word]

    out = PauliSum.zero(K)
    for word, coeff in sorted(poly.items(), key=lambda t: (len(t[0]), t[0])):
        out = out + coeff * product(word)
    return out


# ---------------------------------------------------------------------------
# bit-flip pattern census
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PatternGroup:
    trailing_ones: int
    flip_mask: int
    jumps: tuple[tuple[int, int], ...]  # (r + 1, r) pairs
    string_budget: int

    @property
    def projector_count(self) -> int:
        return len(self.jumps)


def _trailing_ones(r: int) -> int:
    t = 0
    while r & 1:
        t += 1
        r >>= 1
    return t


def flip_pattern_census(K: int) -> list[PatternGroup]:
    """Group the 2**K - 1 jumps ``|r+1><r|`` by which bits the increment flips.

    Incrementing ``r`` flips its trailing ones and the next zero, so the
    pattern is fixed by the number of trailing ones (0 .. K-1).  Every jump in
    a group expands over the same 2**K strings (X/Y on flipped qubits, I/Z on
    the rest).
    """
    if K < 1:
        raise ConfigError("census needs K >= 1")
    groups: dict[int, list[tuple[int, int]]] = {}
    for r in range((1 << K) - 1):
        groups.setdefault(_trailing_ones(r), []).append((r + 1, r))
    return [
        PatternGroup(t, (1 << (t + 1)) - 1, tuple(jumps), 1 << K)
        for t, jumps in sorted(groups.items())
    ]


def naive_string_count(K: int) -> int:
    """Strings before merging: (2**K - 1) jumps with 2**K strings each."""
    M = 1 << K
    return (M - 1) * M


def redundant_string_count(K: int) -> int:
    """Strings shared between jumps of the same pattern: M**2 - (K + 1) M."""
    M = 1 << K
    return M * M - (K + 1) * M
