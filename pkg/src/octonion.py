#!/usr/bin/env python3
"""
Octonions over the rationals with basis (1, i, j, k, e, f, g, h).

The table is the Cayley–Dickson double of the quaternions,
(a, b)(c, d) = (ac − d̄b, da + bc̄), with e = (0, 1), f = (0, i), g = (0, j)
and h = (0, k). Its signs reproduce every printed Kähler-form table.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

from .algebra_core import ExactMatrix, simplify

logger = logging.getLogger(__name__)

BASIS_NAMES: Tuple[str, ...] = ("1", "i", "j", "k", "e", "f", "g", "h")

# Oriented triples (x, y, z) with x·y = z, y·z = x, z·x = y.
ORIENTED_TRIPLES: Tuple[Tuple[int, int, int], ...] = (
    (1, 2, 3),
    (1, 4, 5),
    (1, 7, 6),
    (2, 4, 6),
    (2, 5, 7),
    (3, 4, 7),
    (3, 6, 5),
)


@dataclass(frozen=True)
class MulTable:
    """Signed product table of basis units: table[a][b] = (sign, index) with e_a·e_b = sign·e_index."""

    table: Tuple[Tuple[Tuple[int, int], ...], ...] = field(default=())

    @classmethod
    def from_triples(cls, triples: Sequence[Tuple[int, int, int]] = ORIENTED_TRIPLES) -> "MulTable":
        grid: List[List[Tuple[int, int]]] = [[(0, 0)] * 8 for _ in range(8)]
        for a in range(8):
            grid[0][a] = (1, a)
            grid[a][0] = (1, a)
        for a in range(1, 8):
            grid[a][a] = (-1, 0)
        for x, y, z in triples:
            for p, q, r in ((x, y, z), (y, z, x), (z, x, y)):
                grid[p][q] = (1, r)
                grid[q][p] = (-1, r)
        for a in range(8):
            for b in range(8):
                if grid[a][b][0] == 0:
                    raise ValueError(f"Triples leave product {BASIS_NAMES[a]}·{BASIS_NAMES[b]} undefined")
        return cls(tuple(tuple(row) for row in grid))

    def product(self, a: int, b: int) -> Tuple[int, int]:
        return self.table[a][b]

    def as_json(self) -> Dict[str, object]:
        """Basis names plus one {left, right, sign, result} record per product."""
        entries = []
        for a in range(8):
            for b in range(8):
                sign, c = self.table[a][b]
                entries.append({
                    "left": BASIS_NAMES[a],
                    "right": BASIS_NAMES[b],
                    "sign": sign,
                    "result": c,
                    "result_name": BASIS_NAMES[c],
                })
        return {"basis": list(BASIS_NAMES), "products": entries}


MUL_TABLE = MulTable.from_triples()


class Octonion:
    """Element of O with exact rational coordinates."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Union[int, Fraction]]):
        if len(coeffs) != 8:
            raise ValueError(f"An octonion has 8 coordinates, got {len(coeffs)}")
        self.coeffs = tuple(simplify(Fraction(c)) for c in coeffs)

    @classmethod
    def unit(cls, which: Union[int, str]) -> "Octonion":
        index = BASIS_NAMES.index(which) if isinstance(which, str) else which
        if not 0 <= index < 8:
            raise ValueError(f"Unknown basis unit: {which}")
        coeffs = [0] * 8
        coeffs[index] = 1
        return cls(coeffs)

    @classmethod
    def zero(cls) -> "Octonion":
        return cls([0] * 8)

    def __add__(self, other: "Octonion") -> "Octonion":
        return Octonion([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "Octonion") -> "Octonion":
        return Octonion([a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "Octonion":
        return Octonion([-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, Octonion):
            return oct_mul(self, other)
        if isinstance(other, (int, Fraction)):
            return Octonion([a * other for a in self.coeffs])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Octonion([other * a for a in self.coeffs])
        return NotImplemented

    def conj(self) -> "Octonion":
        return Octonion([self.coeffs[0]] + [-a for a in self.coeffs[1:]])

    def norm(self) -> Union[int, Fraction]:
        """Squared Euclidean norm Σ coeffs²."""
        return simplify(Fraction(sum(a * a for a in self.coeffs)))

    def real(self) -> Union[int, Fraction]:
        return self.coeffs[0]

    def __eq__(self, other):
        if not isinstance(other, Octonion):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        terms = [f"{c}{'' if n == '1' else n}" for c, n in zip(self.coeffs, BASIS_NAMES) if c]
        return f"Octonion({' + '.join(terms) or '0'})"


def oct_mul(x: Octonion, y: Octonion, table: MulTable = MUL_TABLE) -> Octonion:
    """Bilinear extension of the unit table."""
    out = [0] * 8
    for a, xa in enumerate(x.coeffs):
        if not xa:
            continue
        for b, yb in enumerate(y.coeffs):
            if not yb:
                continue
            sign, c = table.table[a][b]
            out[c] += sign * xa * yb
    return Octonion(out)


def right_mult_matrix(u: Octonion, table: MulTable = MUL_TABLE) -> ExactMatrix:
    """Matrix of x ↦ x·u; column a holds the coordinates of e_a·u."""
    rows: List[Dict[int, object]] = [{} for _ in range(8)]
    for a in range(8):
        image = oct_mul(Octonion.unit(a), u, table)
        for b, v in enumerate(image.coeffs):
            if v:
                rows[b][a] = v
    return ExactMatrix(8, rows)


def right_mult_composition(u: Octonion, v: Octonion, table: MulTable = MUL_TABLE) -> ExactMatrix:
    """R_uv = R_u ∘ R_v."""
    return right_mult_matrix(u, table) @ right_mult_matrix(v, table)


def unit_right_mult(index: int) -> ExactMatrix:
    """R for the basis unit with the given index (0 is 1, 7 is h)."""
    return right_mult_matrix(Octonion.unit(index))
