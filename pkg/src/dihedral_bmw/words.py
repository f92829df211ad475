"""Generator tokens, alternating words and the spanning sets of the dihedral algebras."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Tuple


class GenToken(Enum):
    X0 = "X0"
    X1 = "X1"
    X0inv = "X0i"
    X1inv = "X1i"
    E0 = "E0"
    E1 = "E1"

    @property
    def node(self) -> int:
        return 0 if self in (GenToken.X0, GenToken.X0inv, GenToken.E0) else 1

    @property
    def is_x(self) -> bool:
        return self in (GenToken.X0, GenToken.X1, GenToken.X0inv, GenToken.X1inv)

    @property
    def is_e(self) -> bool:
        return self in (GenToken.E0, GenToken.E1)

    @property
    def inverse(self) -> "GenToken":
        return _INVERSE[self]

    def swapped(self) -> "GenToken":
        """Same kind of token on the other node."""
        return _SWAP[self]

    def __repr__(self) -> str:
        return self.value

    def __lt__(self, other: "GenToken") -> bool:
        return _ORDER[self] < _ORDER[other]


X0, X1, X0i, X1i, E0, E1 = (GenToken.X0, GenToken.X1, GenToken.X0inv,
                            GenToken.X1inv, GenToken.E0, GenToken.E1)
_INVERSE = {X0: X0i, X0i: X0, X1: X1i, X1i: X1}
_SWAP = {X0: X1, X1: X0, X0i: X1i, X1i: X0i, E0: E1, E1: E0}
_ORDER = {X0: 0, X1: 1, X0i: 2, X1i: 3, E0: 4, E1: 5}
_BY_TEXT = {t.value: t for t in GenToken}

Word = Tuple[GenToken, ...]


def parse_word(text: str) -> Word:
    """'X0 X1i E0' -> (X0, X1inv, E0).  The empty string (or '1') is the unit."""
    text = text.strip()
    if text in ("", "1"):
        return ()
    try:
        return tuple(_BY_TEXT[t] for t in text.split())
    except KeyError as exc:
        raise ValueError(f"unknown token {exc.args[0]!r}") from None


def format_word(w: Word) -> str:
    return " ".join(t.value for t in w) if w else "1"


def alternating(first: GenToken, second: GenToken, N: int) -> Word:
    """[first second ...]_N"""
    if first == second:
        raise ValueError("alternating word needs two different letters")
    if N < 0:
        raise ValueError("negative length")
    return tuple(first if k % 2 == 0 else second for k in range(N))


def alternating_ending(before_last: GenToken, last: GenToken, N: int) -> Word:
    """[... before_last last]_N: length N, alternating, ending with `last`."""
    if N == 0:
        return ()
    start = last if N % 2 else before_last
    other = before_last if N % 2 else last
    return alternating(start, other, N)


def reverse(w: Word) -> Word:
    return tuple(reversed(w))


def inverse_word(w: Word) -> Word:
    if any(t.is_e for t in w):
        raise ValueError("E tokens are not invertible")
    return tuple(t.inverse for t in reversed(w))


def swap_nodes(w: Word) -> Word:
    return tuple(t.swapped() for t in w)


# ------------------------------------------------------------------ spanning set

@dataclass(frozen=True, order=True)
class SigmaIndex:
    """part is 'ideal0', 'ideal1' or 'positive'.

    Ideal entries carry (i1, i2); positive entries carry (start, length),
    start being the node of the first letter (0 for the empty word).
    """
    case_tag: str
    part: str
    a: int
    b: int

    def label(self) -> str:
        if self.part == "positive":
            return f"P[{self.a}]{self.b}"
        return f"C{self.part[-1]}[{self.a},{self.b}]"


def ideal_word(node: int, i1: int, i2: int) -> Word:
    """C_{i1,i2} = [...X_o X_p]_{i1} E_o [X_p X_o ...]_{i2} with o = node, p the other node.

    For node 0 this is [...X0 X1]_{i1} E0 [X1 X0 ...]_{i2}.
    """
    xo = X0 if node == 0 else X1
    xp = X1 if node == 0 else X0
    e = E0 if node == 0 else E1
    return alternating_ending(xo, xp, i1) + (e,) + alternating(xp, xo, i2)


def positive_word(start: int, length: int) -> Word:
    if length == 0:
        return ()
    a, b = (X0, X1) if start == 0 else (X1, X0)
    return alternating(a, b, length)


def sigma_enumerate(case_tag: str, n: int) -> list:
    """Ordered list of (SigmaIndex, Word) for the spanning basis."""
    if n < 1:
        raise ValueError("n must be at least 1")
    case_tag = _norm_case(case_tag)
    out = []
    if case_tag == "Odd":
        top = 2 * n
        for i1 in range(top + 1):
            for i2 in range(top + 1):
                out.append((SigmaIndex("Odd", "ideal0", i1, i2), ideal_word(0, i1, i2)))
        pos = [(1, i) for i in range(0, 2 * n + 1)] + [(0, j) for j in range(1, 2 * n + 2)]
    else:
        if n < 2:
            raise ValueError("the even case needs n >= 2")
        for node in (0, 1):
            for i1 in range(n):
                for i2 in range(n):
                    out.append((SigmaIndex("Even", f"ideal{node}", i1, i2), ideal_word(node, i1, i2)))
        pos = [(0, i) for i in range(0, 2 * n + 1)] + [(1, j) for j in range(1, 2 * n)]
    pos_entries = []
    for start, length in pos:
        if length == 0:
            start = 0
        w = positive_word(start, length)
        pos_entries.append((SigmaIndex(case_tag, "positive", start, length), w))
    pos_entries.sort(key=lambda e: (len(e[1]), [t for t in e[1]]))
    return out + pos_entries


def sigma_size(case_tag: str, n: int) -> int:
    case_tag = _norm_case(case_tag)
    if case_tag == "Odd":
        return 2 * (2 * n + 1) + (2 * n + 1) ** 2
    return 4 * n + 2 * n * n


def _norm_case(case_tag: str) -> str:
    c = case_tag.lower()
    if c == "odd":
        return "Odd"
    if c == "even":
        return "Even"
    raise ValueError(f"unknown case {case_tag!r}")
