"""Symbolic polynomials in position/momentum and in bosonic ladder operators.

Two polynomial types live here:

* :class:`XPPoly` -- real combinations of ordered words over ``{x, p}``.
  Coefficients may be :class:`fractions.Fraction` so that model presets stay
  exact until they are converted to ladder form.
* :class:`LadderPoly` -- complex combinations of ordered words over
  ``{b, b+}`` (``b+`` is the creation operator).  Words are kept verbatim, so
  an unordered expansion such as ``b b+ b`` is representable as-is.

Wick normal ordering rewrites ``b b+ -> b+ b + 1`` until every creation
operator sits left of every annihilation operator.
"""

from __future__ import annotations

import itertools
import json
import re
from fractions import Fraction
from functools import lru_cache
from numbers import Number, Real
from typing import Iterable, Iterator, Mapping, Union

from .errors import ConfigError, NumericalAssertionError

CREATE = "b+"
ANNIHILATE = "b"

Word = tuple[str, ...]
XPCoeff = Union[int, float, Fraction]

DEFAULT_MAX_DEGREE = 8
COLLECT_TOL = 1e-12
HERMITIAN_TOL = 1e-12

_WORD_TOKEN = re.compile(r"b\+|b")


def _is_negligible(c) -> bool:
    if isinstance(c, (int, Fraction)):
        return c == 0
    return abs(c) < COLLECT_TOL


# ---------------------------------------------------------------------------
# position / momentum polynomials
# ---------------------------------------------------------------------------


class XPPoly:
    """Linear combination of ordered words over ``{x, p}`` with real coefficients.

    Words are plain strings (``"xxp"``); the empty string is the identity.
    """

    __slots__ = ("_terms", "max_degree")

    def __init__(
        self,
        terms: Mapping[str, XPCoeff] | Iterable[tuple[XPCoeff, str]] = (),
        max_degree: int = DEFAULT_MAX_DEGREE,
    ):
        self.max_degree = max_degree
        items = terms.items() if isinstance(terms, Mapping) else ((w, c) for c, w in terms)
        acc: dict[str, XPCoeff] = {}
        for word, coeff in items:
            if set(word) - {"x", "p"}:
                raise ConfigError(f"invalid symbol in word {word!r}; only 'x' and 'p' allowed")
            if len(word) > max_degree:
                raise ConfigError(
                    f"word {word!r} has degree {len(word)}, above the limit of {max_degree}"
                )
            if isinstance(coeff, complex) or not isinstance(coeff, Real):
                raise ConfigError(f"coefficient of {word!r} must be real, got {coeff!r}")
            if isinstance(coeff, float) and not (coeff == coeff and abs(coeff) != float("inf")):
                raise ConfigError(f"coefficient of {word!r} is not finite")
            acc[word] = acc.get(word, 0) + coeff
        self._terms = {w: c for w, c in acc.items() if not _is_negligible(c)}

    # container protocol -----------------------------------------------------
    def items(self):
        return self._terms.items()

    def __iter__(self) -> Iterator[str]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __getitem__(self, word: str) -> XPCoeff:
        return self._terms.get(word, 0)

    @property
    def degree(self) -> int:
        return max((len(w) for w in self._terms), default=0)

    # algebra ----------------------------------------------------------------
    def _coerce(self, other) -> "XPPoly":
        if isinstance(other, XPPoly):
            return other
        if isinstance(other, Real):
            return XPPoly({"": other}, self.max_degree)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        merged = list(self._terms.items()) + list(other._terms.items())
        return XPPoly(((c, w) for w, c in merged), max(self.max_degree, other.max_degree))

    __radd__ = __add__

    def __neg__(self):
        return XPPoly({w: -c for w, c in self._terms.items()}, self.max_degree)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Real):
            return XPPoly({w: c * other for w, c in self._terms.items()}, self.max_degree)
        if not isinstance(other, XPPoly):
            return NotImplemented
        limit = max(self.max_degree, other.max_degree)
        prods = (
            (c1 * c2, w1 + w2)
            for w1, c1 in self._terms.items()
            for w2, c2 in other._terms.items()
        )
        return XPPoly(prods, limit)

    def __rmul__(self, other):
        if isinstance(other, Real):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        out = XPPoly({"": 1}, self.max_degree)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, XPPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        body = " + ".join(f"({c})*{w or '1'}" for w, c in sorted(self._terms.items()))
        return f"XPPoly({body or '0'})"

    # model manipulation -----------------------------------------------------
    def is_hermitian(self) -> bool:
        """x and p are self-adjoint, so a word's adjoint is the reversed word."""
        return all(self[w[::-1]] == c for w, c in self._terms.items())

    def shift_x(self, delta: XPCoeff) -> "XPPoly":
        """Substitute ``x -> x + delta`` everywhere, keeping factor order."""
        out = XPPoly(max_degree=self.max_degree)
        for word, coeff in self._terms.items():
            term = XPPoly({"": coeff}, self.max_degree)
            for sym in word:
                factor = XPPoly({"x": 1, "": delta}) if sym == "x" else XPPoly({"p": 1})
                term = term * factor
            out = out + term
        return out

    def to_float(self) -> "XPPoly":
        return XPPoly({w: float(c) for w, c in self._terms.items()}, self.max_degree)

    # serialization ----------------------------------------------------------
    def to_json_obj(self, exact: bool = False) -> list[dict]:
        def enc(c):
            if exact and isinstance(c, Fraction) and c.denominator != 1:
                return str(c)
            return float(c) if not isinstance(c, int) else c

        return [{"coeff": enc(c), "word": w} for w, c in sorted(self._terms.items())]

    @classmethod
    def from_json_obj(cls, obj: list[dict], max_degree: int = DEFAULT_MAX_DEGREE) -> "XPPoly":
        terms = []
        for entry in obj:
            coeff = entry["coeff"]
            if isinstance(coeff, str):
                coeff = Fraction(coeff)
            terms.append((coeff, entry.get("word", "")))
        return cls(terms, max_degree)

    def dumps(self, exact: bool = False) -> str:
        return json.dumps(self.to_json_obj(exact))

    @classmethod
    def loads(cls, text: str, max_degree: int = DEFAULT_MAX_DEGREE) -> "XPPoly":
        return cls.from_json_obj(json.loads(text), max_degree)


# ---------------------------------------------------------------------------
# ladder polynomials
# ---------------------------------------------------------------------------


def parse_word(text: str) -> Word:
    """``"b+b+b"`` -> ``("b+", "b+", "b")``; the empty string is the identity."""
    text = text.replace(" ", "")
    tokens = _WORD_TOKEN.findall(text)
    if "".join(tokens) != text:
        raise ConfigError(f"cannot parse ladder word {text!r}")
    return tuple(tokens)


def format_word(word: Word) -> str:
    return "".join(word)


def is_normal_ordered(word: Word) -> bool:
    seen_annihilator = False
    for sym in word:
        if sym == ANNIHILATE:
            seen_annihilator = True
        elif seen_annihilator:
            return False
    return True


def inversion_count(word: Word) -> int:
    """Number of (b, b+) pairs standing in the wrong order."""
    count = annihilators = 0
    for sym in word:
        if sym == ANNIHILATE:
            annihilators += 1
        else:
            count += annihilators
    return count


def word_adjoint(word: Word) -> Word:
    return tuple(CREATE if s == ANNIHILATE else ANNIHILATE for s in reversed(word))


def word_shift(word: Word) -> int:
    """Net change of the occupation number produced by the word."""
    return sum(1 if s == CREATE else -1 for s in word)


def pretty_word(word: Word) -> str:
    if not word:
        return "1"
    if is_normal_ordered(word):
        a = word.count(CREATE)
        c = len(word) - a
        if a and c:
            parts = ["b†"] * (a - 1) + ["n"] + ["b"] * (c - 1)
            return " ".join(parts)
    return " ".join("b†" if s == CREATE else "b" for s in word)


class LadderPoly:
    """Complex linear combination of ordered ladder words.

    >>> p = LadderPoly({("b", "b+"): 1.0})
    >>> normal_order(p).coeff(())
    (1+0j)
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, Number] | Iterable[tuple[Number, Word]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else ((w, c) for c, w in terms)
        acc: dict[Word, complex] = {}
        for word, coeff in items:
            word = parse_word(word) if isinstance(word, str) else tuple(word)
            if any(s not in (CREATE, ANNIHILATE) for s in word):
                raise ConfigError(f"invalid ladder word {word!r}")
            acc[word] = acc.get(word, 0j) + complex(coeff)
        self._terms = {w: c for w, c in acc.items() if abs(c) >= COLLECT_TOL}

    @classmethod
    def identity(cls, coeff: Number = 1.0) -> "LadderPoly":
        return cls({(): coeff})

    def items(self):
        return self._terms.items()

    def words(self) -> list[Word]:
        return list(self._terms)

    def coeff(self, word: Word | str) -> complex:
        if isinstance(word, str):
            word = parse_word(word)
        return self._terms.get(tuple(word), 0j)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    @property
    def degree(self) -> int:
        return max((len(w) for w in self._terms), default=0)

    def is_normal_ordered(self) -> bool:
        return all(is_normal_ordered(w) for w in self._terms)

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        adj = hermitian_conjugate(self)
        return (self - adj).max_abs() <= tol

    def max_abs(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def normal_form(self) -> dict[tuple[int, int], complex]:
        """Exponent pairs ``(a, c)`` for ``b+^a b^c``; requires normal order."""
        if not self.is_normal_ordered():
            raise ValueError("normal_form requires a normal-ordered polynomial")
        return {(w.count(CREATE), w.count(ANNIHILATE)): c for w, c in self._terms.items()}

    # algebra ----------------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Number):
            other = LadderPoly.identity(other)
        if not isinstance(other, LadderPoly):
            return NotImplemented
        return LadderPoly(itertools.chain(
            ((c, w) for w, c in self._terms.items()),
            ((c, w) for w, c in other._terms.items()),
        ))

    __radd__ = __add__

    def __neg__(self):
        return LadderPoly({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Number):
            return LadderPoly({w: c * other for w, c in self._terms.items()})
        if not isinstance(other, LadderPoly):
            return NotImplemented
        return LadderPoly(
            (c1 * c2, w1 + w2)
            for w1, c1 in self._terms.items()
            for w2, c2 in other._terms.items()
        )

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, LadderPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def isclose(self, other: "LadderPoly", tol: float = 1e-12) -> bool:
        return (self - other).max_abs() <= tol

    def __repr__(self):
        return f"LadderPoly({self.pretty()})"

    def pretty(self) -> str:
        def fmt(c: complex) -> str:
            if abs(c.imag) < COLLECT_TOL:
                return f"{c.real:+.12g}"
            return f"+({c.real:.12g}{c.imag:+.12g}j)"

        def key(item):
            w = item[0]
            return (len(w), format_word(w))

        parts = [f"{fmt(c)} {pretty_word(w)}" for w, c in sorted(self._terms.items(), key=key)]
        return " ".join(parts) if parts else "0"

    # serialization ----------------------------------------------------------
    def to_json_obj(self) -> list[dict]:
        return [
            {"coeff_re": c.real, "coeff_im": c.imag, "word": format_word(w)}
            for w, c in sorted(self._terms.items(), key=lambda t: (len(t[0]), t[0]))
        ]

    @classmethod
    def from_json_obj(cls, obj: list[dict]) -> "LadderPoly":
        return cls(
            (complex(e["coeff_re"], e.get("coeff_im", 0.0)), parse_word(e["word"])) for e in obj
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def loads(cls, text: str) -> "LadderPoly":
        return cls.from_json_obj(json.loads(text))


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

# x = (b + b+)/sqrt2, p = (b - b+)/(i sqrt2) = (-i b + i b+)/sqrt2
_SUBSTITUTION = {
    "x": ((ANNIHILATE, 1 + 0j), (CREATE, 1 + 0j)),
    "p": ((ANNIHILATE, -1j), (CREATE, 1j)),
}


def ladder_from_xp(poly: XPPoly) -> LadderPoly:
    """Expand x and p into ladder operators without any reordering.

    The ``1/sqrt(2)`` factors are applied once per monomial as ``2**(-n/2)``,
    which is exact for even degree.
    """
    if poly.degree > poly.max_degree:
        raise ConfigError(f"degree {poly.degree} exceeds the limit of {poly.max_degree}")
    out: list[tuple[complex, Word]] = []
    for word, coeff in poly.items():
        n = len(word)
        scale = complex(float(coeff)) * 2.0 ** (-n / 2)
        choices = [_SUBSTITUTION[s] for s in word]
        for combo in itertools.product(*choices):
            unit = 1 + 0j
            for _, u in combo:
                unit *= u
            out.append((scale * unit, tuple(sym for sym, _ in combo)))
    result = LadderPoly(out)
    if poly.is_hermitian() and not result.is_hermitian(HERMITIAN_TOL):
        raise NumericalAssertionError("ladder expansion of a Hermitian polynomial is not Hermitian")
    return result


def commute_once(word: Word) -> list[tuple[int, Word]] | None:
    """Apply ``b b+ -> b+ b + 1`` at the leftmost inversion.

    Returns ``None`` when the word is already normal ordered.
    """
    for i in range(len(word) - 1):
        if word[i] == ANNIHILATE and word[i + 1] == CREATE:
            swapped = word[:i] + (CREATE, ANNIHILATE) + word[i + 2:]
            contracted = word[:i] + word[i + 2:]
            return [(1, swapped), (1, contracted)]
    return None


@lru_cache(maxsize=4096)
def _normal_order_word(word: Word) -> tuple[tuple[Word, int], ...]:
    step = commute_once(word)
    if step is None:
        return ((word, 1),)
    acc: dict[Word, int] = {}
    for mult, w in step:
        for w2, m2 in _normal_order_word(w):
            acc[w2] = acc.get(w2, 0) + mult * m2
    return tuple(acc.items())


def normal_order(poly: LadderPoly) -> LadderPoly:
    """Wick normal order: all ``b+`` to the left of all ``b``.

    Multiplicities produced by the rewriting are integers, so dyadic input
    coefficients stay exact.
    """
    out: list[tuple[complex, Word]] = []
    for word, coeff in poly.items():
        for w, mult in _normal_order_word(word):
            out.append((coeff * mult, w))
    return LadderPoly(out)


def hermitian_conjugate(poly: LadderPoly) -> LadderPoly:
    return LadderPoly((c.conjugate(), word_adjoint(w)) for w, c in poly.items())


def vacuum_expectation(poly: LadderPoly) -> float | complex:
    """``<0|poly|0>``, read off as the identity coefficient of the normal form."""
    c = normal_order(poly).coeff(())
    return c.real if abs(c.imag) <= HERMITIAN_TOL else c
