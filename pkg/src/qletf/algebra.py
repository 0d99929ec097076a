"""The six-element snapshot domain and its twist-structure operations.

A snapshot ``(z1, z2, z3)`` records whether a sentence ``A``, its negation
``~A`` and its classicality ``@A`` hold.  Only six of the eight bit triples
are admissible; the smart constructor :func:`mk_snapshot` refuses the other
two, so every :class:`Snapshot` in circulation is a member of the domain.
"""

from __future__ import annotations

import enum
from typing import NamedTuple


class SnapshotError(ValueError):
    """Raised for a bit triple outside the six-element domain."""


class Snapshot(NamedTuple):
    z1: int
    z2: int
    z3: int

    @property
    def name(self) -> str:
        return _NAMES[self]

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"Snapshot({self.z1},{self.z2},{self.z3}:{self.name})"


def _admissible(z1: int, z2: int, z3: int) -> bool:
    return z3 <= (z1 | z2) and (z1 & z2 & z3) == 0


def mk_snapshot(z1: int, z2: int, z3: int) -> Snapshot:
    for bit in (z1, z2, z3):
        if bit not in (0, 1):
            raise SnapshotError(f"snapshot coordinates must be bits, got {(z1, z2, z3)}")
    if not _admissible(z1, z2, z3):
        raise SnapshotError(f"({z1},{z2},{z3}) violates the domain constraints")
    return Snapshot(z1, z2, z3)


T = Snapshot(1, 0, 1)
T0 = Snapshot(1, 0, 0)
B = Snapshot(1, 1, 0)
N = Snapshot(0, 0, 0)
F0 = Snapshot(0, 1, 0)
F = Snapshot(0, 1, 1)

#: Canonical row/column order used by tables, enumeration and output.
VALUES: tuple[Snapshot, ...] = (T, T0, B, N, F0, F)

_NAMES = {T: "T", T0: "T0", B: "b", N: "n", F0: "F0", F: "F"}
_BY_NAME = {name: z for z, name in _NAMES.items()}

DESIGNATED = frozenset(z for z in VALUES if z.z1 == 1)


class SixValue(enum.Enum):
    T = "T"
    T0 = "T0"
    B = "b"
    N = "n"
    F0 = "F0"
    F = "F"

    @property
    def snapshot(self) -> Snapshot:
        return _BY_NAME[self.value]

    @classmethod
    def of(cls, z: Snapshot) -> "SixValue":
        return cls(_NAMES[z])


def from_name(name: str) -> Snapshot:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise SnapshotError(
            f"unknown value {name!r}; expected one of {' '.join(_BY_NAME)}"
        ) from None


def index(z: Snapshot) -> int:
    return VALUES.index(z)


def conj(z: Snapshot, w: Snapshot) -> Snapshot:
    z1, z2, z3 = z
    w1, w2, w3 = w
    u3 = (z1 & z3 & w1 & w3) | (z2 & z3) | (w2 & w3)
    return Snapshot(z1 & w1, z2 | w2, u3)


def disj(z: Snapshot, w: Snapshot) -> Snapshot:
    z1, z2, z3 = z
    w1, w2, w3 = w
    u3 = (z2 & z3 & w2 & w3) | (z1 & z3) | (w1 & w3)
    return Snapshot(z1 | w1, z2 & w2, u3)


def neg(z: Snapshot) -> Snapshot:
    return Snapshot(z.z2, z.z1, z.z3)


def circ(z: Snapshot) -> Snapshot:
    return Snapshot(z.z3, 1 - z.z3, 1)


def bullet(z: Snapshot) -> Snapshot:
    return neg(circ(z))


def is_designated(z: Snapshot) -> bool:
    return z.z1 == 1


BINARY_OPS = {"conj": conj, "disj": disj}
UNARY_OPS = {"neg": neg, "circ": circ, "bullet": bullet}


def operation_table(op: str) -> list[list[Snapshot]]:
    """Rows for a binary op (6x6) or a single column for a unary op (6x1)."""
    if op in BINARY_OPS:
        fn = BINARY_OPS[op]
        return [[fn(z, w) for w in VALUES] for z in VALUES]
    if op in UNARY_OPS:
        fn = UNARY_OPS[op]
        return [[fn(z)] for z in VALUES]
    raise KeyError(f"unknown operation {op!r}")
