#!/usr/bin/env python3
"""
Exact scalar arithmetic and exact linear algebra.

Scalars are Python ints, fractions.Fraction values or GaussianRational values.
Containers keep them normalized with simplify(): an integral real value is
stored as int, a real value as Fraction, and only values with a nonzero
imaginary part as GaussianRational. This keeps the form kernels on int
arithmetic, which is where almost all of their time goes.
"""

import logging
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

logger = logging.getLogger(__name__)


class GaussianRational:
    """Exact complex number re + im·i with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def lift(value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussianRational(value, 0)
        raise TypeError(f"Cannot lift {type(value).__name__} to a Gaussian rational")

    def __add__(self, other):
        try:
            o = GaussianRational.lift(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = GaussianRational.lift(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        try:
            o = GaussianRational.lift(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        try:
            o = GaussianRational.lift(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = GaussianRational.lift(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        try:
            o = GaussianRational.lift(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            o = GaussianRational.lift(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """|x|², always real."""
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("Division by zero Gaussian rational")
        return GaussianRational(self.re / n, -self.im / n)

    def __repr__(self):
        return f"GaussianRational({self.re!s}, {self.im!s})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


Scalar = Union[int, Fraction, GaussianRational]

I_UNIT = GaussianRational(0, 1)


def simplify(x: Scalar) -> Scalar:
    """Normalize a scalar to the narrowest exact type."""
    if isinstance(x, GaussianRational):
        if x.im != 0:
            return x
        x = x.re
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, int):
        return x
    raise TypeError(f"Not an exact scalar: {x!r}")


def conj(x: Scalar) -> Scalar:
    if isinstance(x, GaussianRational):
        return x.conjugate()
    return x


def real_part(x: Scalar) -> Fraction:
    if isinstance(x, GaussianRational):
        return x.re
    return Fraction(x)


def imag_part(x: Scalar) -> Fraction:
    if isinstance(x, GaussianRational):
        return x.im
    return Fraction(0)


def is_real(x: Scalar) -> bool:
    return not isinstance(x, GaussianRational) or x.im == 0


def inverse(x: Scalar) -> Scalar:
    if isinstance(x, GaussianRational):
        return simplify(x.inverse())
    if x == 0:
        raise ZeroDivisionError("Division by zero")
    return simplify(Fraction(1) / Fraction(x))


def parse_scalar(re: str, im: str = "0") -> Scalar:
    """Parse the 'p/q' strings used by the JSON formats."""
    return simplify(GaussianRational(Fraction(re), Fraction(im)))


def format_parts(x: Scalar) -> Tuple[str, str]:
    """Exact (re, im) strings as written to JSON lines."""
    return str(real_part(x)), str(imag_part(x))


def gr_field_ops(a: Scalar, b: Optional[Scalar], op: str) -> GaussianRational:
    """Field operation on Gaussian rationals: add, mul, div or conj (b ignored)."""
    a = GaussianRational.lift(a)
    if op == "conj":
        return a.conjugate()
    b = GaussianRational.lift(b)
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"Unknown field operation: {op}")


REALMS = ("real-32", "real-16", "complex-16", "other")


class ExactMatrix:
    """
    Square matrix over the Gaussian rationals.

    Rows are stored sparsely (column -> nonzero scalar); every matrix in this
    project is monomial or close to it. Instances are immutable by contract.
    """

    __slots__ = ("dim", "_rows", "realm")

    def __init__(self, dim: int, rows: Optional[Iterable[Mapping[int, Scalar]]] = None,
                 realm: Optional[str] = None):
        if dim <= 0:
            raise ValueError(f"Matrix dimension must be positive, got {dim}")
        self.dim = dim
        built = []
        if rows is not None:
            for r, row in enumerate(rows):
                clean = {}
                for c, v in row.items():
                    if not 0 <= c < dim:
                        raise ValueError(f"Column {c} out of range for dimension {dim}")
                    v = simplify(v)
                    if v:
                        clean[c] = v
                built.append(clean)
        if len(built) > dim:
            raise ValueError(f"Too many rows ({len(built)}) for dimension {dim}")
        built.extend({} for _ in range(dim - len(built)))
        self._rows: Tuple[Dict[int, Scalar], ...] = tuple(built)
        real = all(is_real(v) for row in self._rows for v in row.values())
        if realm is None:
            if real:
                realm = f"real-{dim}" if dim in (16, 32) else "other"
            else:
                realm = "complex-16" if dim == 16 else "other"
        if realm not in REALMS:
            raise ValueError(f"Unknown realm: {realm}")
        if realm.startswith("real") and not real:
            raise ValueError(f"Realm {realm} requires real entries")
        if realm != "other" and int(realm.split("-")[1]) != dim:
            raise ValueError(f"Realm {realm} does not match dimension {dim}")
        self.realm = realm

    # Constructors

    @classmethod
    def identity(cls, dim: int, realm: Optional[str] = None) -> "ExactMatrix":
        return cls(dim, ({i: 1} for i in range(dim)), realm)

    @classmethod
    def zero(cls, dim: int, realm: Optional[str] = None) -> "ExactMatrix":
        return cls(dim, None, realm)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[Scalar]], realm: Optional[str] = None) -> "ExactMatrix":
        dim = len(rows)
        if any(len(row) != dim for row in rows):
            raise ValueError("Dense matrix must be square")
        return cls(dim, ({c: v for c, v in enumerate(row) if v} for row in rows), realm)

    @classmethod
    def from_entries(cls, dim: int, entries: Mapping[Tuple[int, int], Scalar],
                     realm: Optional[str] = None) -> "ExactMatrix":
        rows: List[Dict[int, Scalar]] = [{} for _ in range(dim)]
        for (r, c), v in entries.items():
            if not 0 <= r < dim:
                raise ValueError(f"Row {r} out of range for dimension {dim}")
            rows[r][c] = v
        return cls(dim, rows, realm)

    @classmethod
    def block(cls, top_left: Optional["ExactMatrix"], top_right: Optional["ExactMatrix"],
              bottom_left: Optional["ExactMatrix"], bottom_right: Optional["ExactMatrix"],
              realm: Optional[str] = None) -> "ExactMatrix":
        """[[A, B], [C, D]] from equal-size blocks; None stands for a zero block."""
        blocks = [top_left, top_right, bottom_left, bottom_right]
        sizes = {b.dim for b in blocks if b is not None}
        if len(sizes) != 1:
            raise ValueError(f"Blocks must share one dimension, got {sorted(sizes)}")
        n = sizes.pop()
        rows: List[Dict[int, Scalar]] = [{} for _ in range(2 * n)]
        for index, b in enumerate(blocks):
            if b is None:
                continue
            dr, dc = (index // 2) * n, (index % 2) * n
            for r, row in enumerate(b._rows):
                for c, v in row.items():
                    rows[dr + r][dc + c] = v
        return cls(2 * n, rows, realm)

    @classmethod
    def diag(cls, upper: "ExactMatrix", lower: "ExactMatrix", realm: Optional[str] = None) -> "ExactMatrix":
        return cls.block(upper, None, None, lower, realm)

    # Access

    def entry(self, r: int, c: int) -> Scalar:
        return self._rows[r].get(c, 0)

    def __getitem__(self, key: Tuple[int, int]) -> Scalar:
        return self.entry(*key)

    def row(self, r: int) -> Dict[int, Scalar]:
        return dict(self._rows[r])

    def nonzero_entries(self) -> Iterator[Tuple[int, int, Scalar]]:
        """Row-major nonzero entries."""
        for r, row in enumerate(self._rows):
            for c in sorted(row):
                yield r, c, row[c]

    def to_dense(self) -> List[List[Scalar]]:
        return [[self.entry(r, c) for c in range(self.dim)] for r in range(self.dim)]

    def flatten(self) -> Dict[int, Scalar]:
        """Entries keyed by r·dim + c."""
        return {r * self.dim + c: v for r, row in enumerate(self._rows) for c, v in row.items()}

    def with_realm(self, realm: str) -> "ExactMatrix":
        return ExactMatrix(self.dim, self._rows, realm)

    def is_real(self) -> bool:
        return all(is_real(v) for row in self._rows for v in row.values())

    # Arithmetic

    def _check_dim(self, other: "ExactMatrix") -> None:
        if not isinstance(other, ExactMatrix):
            raise TypeError(f"Expected ExactMatrix, got {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"Dimension mismatch: {self.dim} vs {other.dim}")

    def _combine(self, other: "ExactMatrix", sign: int) -> "ExactMatrix":
        self._check_dim(other)
        rows = []
        for a, b in zip(self._rows, other._rows):
            row = dict(a)
            for c, v in b.items():
                row[c] = row.get(c, 0) + sign * v
            rows.append(row)
        return ExactMatrix(self.dim, rows, _joint_realm(self, other))

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self._combine(other, -1)

    def __neg__(self) -> "ExactMatrix":
        return self.scale(-1)

    def scale(self, s: Scalar) -> "ExactMatrix":
        rows = [{c: s * v for c, v in row.items()} for row in self._rows]
        realm = self.realm if is_real(s) else None
        return ExactMatrix(self.dim, rows, realm)

    def __mul__(self, s: Scalar) -> "ExactMatrix":
        if isinstance(s, ExactMatrix):
            return NotImplemented
        return self.scale(s)

    __rmul__ = __mul__

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return mat_mul(self, other)

    def transpose(self) -> "ExactMatrix":
        rows: List[Dict[int, Scalar]] = [{} for _ in range(self.dim)]
        for r, row in enumerate(self._rows):
            for c, v in row.items():
                rows[c][r] = v
        return ExactMatrix(self.dim, rows, self.realm)

    def conj_transpose(self) -> "ExactMatrix":
        rows: List[Dict[int, Scalar]] = [{} for _ in range(self.dim)]
        for r, row in enumerate(self._rows):
            for c, v in row.items():
                rows[c][r] = conj(v)
        return ExactMatrix(self.dim, rows, self.realm)

    def trace(self) -> Scalar:
        return simplify(sum((row.get(i, 0) for i, row in enumerate(self._rows)), 0))

    def is_zero(self) -> bool:
        return not any(self._rows)

    def is_symmetric(self) -> bool:
        return self == self.transpose()

    def is_skew(self) -> bool:
        return self == -self.transpose()

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.dim == other.dim and self._rows == other._rows

    def __hash__(self):
        return hash((self.dim, tuple(tuple(sorted(row.items())) for row in self._rows)))

    def __repr__(self):
        nnz = sum(len(row) for row in self._rows)
        return f"ExactMatrix(dim={self.dim}, realm={self.realm}, nnz={nnz})"


def _joint_realm(a: ExactMatrix, b: ExactMatrix) -> Optional[str]:
    if a.realm == "complex-16" or b.realm == "complex-16":
        return "complex-16"
    return None


def mat_mul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Exact product a·b."""
    a._check_dim(b)
    rows = []
    for arow in a._rows:
        out: Dict[int, Scalar] = {}
        for k, av in arow.items():
            for c, bv in b._rows[k].items():
                out[c] = out.get(c, 0) + av * bv
        rows.append(out)
    return ExactMatrix(a.dim, rows, _joint_realm(a, b))


def mat_bracket(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Commutator ab − ba."""
    return mat_mul(a, b) - mat_mul(b, a)


def anticommutator(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    return mat_mul(a, b) + mat_mul(b, a)


def herm_inner(a: ExactMatrix, b: ExactMatrix) -> Scalar:
    """trace(a* b) = Σ conj(a_ij)·b_ij."""
    a._check_dim(b)
    total: Scalar = 0
    for arow, brow in zip(a._rows, b._rows):
        for c, av in arow.items():
            bv = brow.get(c)
            if bv is not None:
                total = total + conj(av) * bv
    return simplify(total)


def realify(m: ExactMatrix) -> ExactMatrix:
    """
    Real 32×32 form [[A, −B], [B, A]] of M = A + iB.

    Indices 0..15 carry the real coordinates and 16..31 their partners under
    multiplication by i, so realify(i·Id) = [[0, −Id], [Id, 0]].
    """
    if m.dim != 16 or m.realm not in ("complex-16", "real-16"):
        raise ValueError(f"realify expects a 16×16 complex matrix, got realm {m.realm} (dim {m.dim})")
    return realify_blocks(m)


def realify_blocks(m: ExactMatrix) -> ExactMatrix:
    """[[A, −B], [B, A]] for any size, without the realm contract of realify()."""
    n = m.dim
    rows: List[Dict[int, Scalar]] = [{} for _ in range(2 * n)]
    for r, c, v in m.nonzero_entries():
        re, im = simplify(real_part(v)), simplify(imag_part(v))
        if re:
            rows[r][c] = re
            rows[n + r][n + c] = re
        if im:
            rows[r][n + c] = -im
            rows[n + r][c] = im
    return ExactMatrix(2 * n, rows, "real-32" if n == 16 else None)


# Gaussian-integer elimination. A Gaussian integer is an (re, im) int pair.

def _gi_mul(a: Tuple[int, int], b: Tuple[int, int]) -> Tuple[int, int]:
    return a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]


def _integral_row(row: Mapping[int, Scalar]) -> Dict[int, Tuple[int, int]]:
    """Scale a row by the lcm of its denominators so that entries become Gaussian integers."""
    parts = {c: (real_part(v), imag_part(v)) for c, v in row.items()}
    lcm = 1
    for re, im in parts.values():
        for q in (re.denominator, im.denominator):
            lcm = lcm * q // gcd(lcm, q)
    return {c: (int(re * lcm), int(im * lcm)) for c, (re, im) in parts.items()}


def _reduce_content(row: Dict[int, Tuple[int, int]]) -> Dict[int, Tuple[int, int]]:
    g = 0
    for re, im in row.values():
        g = gcd(g, gcd(re, im))
    if g > 1:
        return {c: (re // g, im // g) for c, (re, im) in row.items()}
    return row


def rank_of_family(mats: Sequence[ExactMatrix]) -> int:
    """
    Dimension of the span of a matrix family over the Gaussian rationals.

    Fraction-free elimination on the flattened matrices: every row is kept
    integral and divided by its content after each elimination step.
    """
    mats = list(mats)
    if not mats:
        return 0
    dim = mats[0].dim
    for m in mats:
        if m.dim != dim:
            raise ValueError(f"Dimension mismatch in family: {dim} vs {m.dim}")
    pivots: Dict[int, Dict[int, Tuple[int, int]]] = {}
    for m in mats:
        row = _integral_row(m.flatten())
        while row:
            lead = min(row)
            pivot = pivots.get(lead)
            if pivot is None:
                pivots[lead] = _reduce_content(row)
                break
            pv, rv = pivot[lead], row[lead]
            out: Dict[int, Tuple[int, int]] = {}
            for c, v in row.items():
                out[c] = _gi_mul(pv, v)
            for c, v in pivot.items():
                w = _gi_mul(rv, v)
                cur = out.get(c, (0, 0))
                out[c] = (cur[0] - w[0], cur[1] - w[1])
            row = _reduce_content({c: v for c, v in out.items() if v != (0, 0)})
    logger.debug(f"rank_of_family: {len(pivots)} of {len(mats)} members independent")
    return len(pivots)


class SpanSolver:
    """
    Reduced echelon form of a linearly independent basis, reusable for many
    solve() calls. Raises ValueError on a dependent basis.
    """

    def __init__(self, basis: Sequence[ExactMatrix]):
        self.basis = list(basis)
        self.dim = self.basis[0].dim if self.basis else None
        self._pivots: Dict[int, Tuple[Dict[int, Scalar], Dict[int, Scalar]]] = {}
        for k, b in enumerate(self.basis):
            if b.dim != self.dim:
                raise ValueError(f"Dimension mismatch in basis: {self.dim} vs {b.dim}")
            row, combo = self._reduce(b.flatten(), {k: 1})
            if not row:
                raise ValueError(f"Basis is linearly dependent at member {k}")
            lead = min(row)
            scale = inverse(row[lead])
            row = {c: simplify(scale * v) for c, v in row.items()}
            combo = {i: simplify(scale * v) for i, v in combo.items()}
            self._pivots[lead] = (row, combo)

    def _reduce(self, row: Dict[int, Scalar], combo: Dict[int, Scalar]):
        row = dict(row)
        combo = dict(combo)
        while row:
            lead = min(row)
            pivot = self._pivots.get(lead)
            if pivot is None:
                break
            prow, pcombo = pivot
            f = row[lead]
            for c, v in prow.items():
                nv = simplify(row.get(c, 0) - f * v)
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
            for i, v in pcombo.items():
                nv = simplify(combo.get(i, 0) - f * v)
                if nv:
                    combo[i] = nv
                else:
                    combo.pop(i, None)
        return row, combo

    def solve(self, target: ExactMatrix) -> Optional[List[Scalar]]:
        """Coefficients c with Σ c_k basis_k = target, or None if target is outside the span."""
        if self.dim is not None and target.dim != self.dim:
            raise ValueError(f"Dimension mismatch: {self.dim} vs {target.dim}")
        row, combo = self._reduce(target.flatten(), {})
        if row:
            return None
        # reduction subtracted the combination, so the coefficients carry the opposite sign
        return [simplify(-combo.get(k, 0)) for k in range(len(self.basis))]


def solve_in_span(target: ExactMatrix, basis: Sequence[ExactMatrix]) -> Optional[List[Scalar]]:
    """Exact coordinates of target in span(basis); None when it is not in the span."""
    return SpanSolver(basis).solve(target)
