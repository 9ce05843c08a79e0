#!/usr/bin/env python3
"""
Sparse exact exterior algebra over the 32 real covectors of C^16 = R^32.

A blade is an int bitmask (bit a is dx_a, canonical order ascending); a
SparseForm maps blades to nonzero exact scalars. Indices 0..15 are the real
coordinates x_1..x_8, x_1'..x_8' and 16..31 their partners y_a = x_{a+16}
under multiplication by i. The complex view uses dz_a = dx_a − i·dy_a, with
bit a for dz_a and bit 16+a for dz̄_a.

τ₄ is the hot path: each 4×4 principal minor contributes the square of its
Pfaffian, and quadruples are independent tasks merged in order.
"""

import hashlib
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import gcd
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .algebra_core import I_UNIT, ExactMatrix, Scalar, format_parts, parse_scalar, realify, simplify
from .clifford_systems import multiplication_by_i
from .reports import CheckResult, IdentityReport, check
from .spin_algebras import build_JC, build_JD
from .workers import ordered_map, shared

logger = logging.getLogger(__name__)

N_COVECTORS = 32
HALF = 16
FULL_MASK = (1 << N_COVECTORS) - 1

Terms = Dict[int, Scalar]


def mask_of(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        if not 0 <= i < N_COVECTORS:
            raise ValueError(f"Covector index {i} out of range")
        mask |= 1 << i
    return mask


def bits_of(mask: int) -> List[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def merge_sign(a: int, b: int) -> int:
    """Sign that sorts the word (bits of a)(bits of b) into ascending order."""
    swaps = 0
    while b:
        low = b & -b
        swaps += (a & ~((low << 1) - 1)).bit_count()
        b ^= low
    return -1 if swaps & 1 else 1


def word_sign(word: Sequence[int]) -> int:
    """Sign of the permutation sorting a word of distinct indices; 0 on repeats."""
    if len(set(word)) != len(word):
        return 0
    inversions = sum(1 for i, j in combinations(range(len(word)), 2) if word[i] > word[j])
    return -1 if inversions & 1 else 1


def _wedge_into(acc: Terms, ta: Mapping[int, Scalar], tb: Mapping[int, Scalar], factor: Scalar = 1) -> None:
    for ma, ca in ta.items():
        cf = factor * ca
        for mb, cb in tb.items():
            if ma & mb:
                continue
            key = ma | mb
            v = cf * cb
            if merge_sign(ma, mb) < 0:
                v = -v
            acc[key] = acc.get(key, 0) + v


def _square_into(acc: Terms, terms: Mapping[int, Scalar]) -> None:
    """acc += f∧f for f of even degree: 2·Σ_{i<j} c_i c_j b_i∧b_j over disjoint blades."""
    items = list(terms.items())
    for i, (mi, ci) in enumerate(items):
        c2 = 2 * ci
        for mj, cj in items[i + 1:]:
            if mi & mj:
                continue
            key = mi | mj
            v = c2 * cj
            if merge_sign(mi, mj) < 0:
                v = -v
            acc[key] = acc.get(key, 0) + v


def _clean(terms: Mapping[int, Scalar]) -> Terms:
    out = {}
    for k, v in terms.items():
        v = simplify(v)
        if v:
            out[k] = v
    return out


class SparseForm:
    """Homogeneous exterior form with exact coefficients; zero coefficients are never stored."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: Optional[Mapping[int, Scalar]] = None):
        if not 0 <= degree <= N_COVECTORS:
            raise ValueError(f"Degree must lie in 0..{N_COVECTORS}, got {degree}")
        self.degree = degree
        self.terms: Terms = _clean(terms or {})
        for mask in self.terms:
            if mask & ~FULL_MASK or mask.bit_count() != degree:
                raise ValueError(f"Blade {bits_of(mask)} does not have degree {degree}")

    @classmethod
    def _raw(cls, degree: int, terms: Terms) -> "SparseForm":
        form = cls.__new__(cls)
        form.degree = degree
        form.terms = terms
        return form

    @classmethod
    def zero(cls, degree: int) -> "SparseForm":
        return cls(degree)

    @classmethod
    def scalar(cls, value: Scalar) -> "SparseForm":
        return cls(0, {0: value})

    @classmethod
    def covector(cls, index: int) -> "SparseForm":
        return cls(1, {mask_of([index]): 1})

    @classmethod
    def blade(cls, *indices: int, coeff: Scalar = 1) -> "SparseForm":
        """coeff·dx_{i1}∧…∧dx_{ik} for indices in any order."""
        sign = word_sign(indices)
        if sign == 0:
            return cls.zero(len(indices))
        return cls(len(indices), {mask_of(indices): sign * coeff})

    # Arithmetic

    def _check_degree(self, other: "SparseForm") -> None:
        if not isinstance(other, SparseForm):
            raise TypeError(f"Expected SparseForm, got {type(other).__name__}")
        if other.degree != self.degree:
            raise ValueError(f"Degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other: "SparseForm") -> "SparseForm":
        self._check_degree(other)
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, 0) + v
        return SparseForm._raw(self.degree, _clean(acc))

    def __sub__(self, other: "SparseForm") -> "SparseForm":
        return self + (-other)

    def __neg__(self) -> "SparseForm":
        return SparseForm._raw(self.degree, {k: -v for k, v in self.terms.items()})

    def scale(self, s: Scalar) -> "SparseForm":
        return SparseForm._raw(self.degree, _clean({k: s * v for k, v in self.terms.items()}))

    def __mul__(self, s: Scalar) -> "SparseForm":
        if isinstance(s, SparseForm):
            return NotImplemented
        return self.scale(s)

    __rmul__ = __mul__

    def __xor__(self, other: "SparseForm") -> "SparseForm":
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, SparseForm):
            return NotImplemented
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, *indices: int) -> Scalar:
        """Coefficient of dx_{i1}∧…∧dx_{ik} in the given order."""
        sign = word_sign(indices)
        if sign == 0:
            return 0
        return simplify(sign * self.terms.get(mask_of(indices), 0))

    def sorted_terms(self) -> List[Tuple[int, Scalar]]:
        return sorted(self.terms.items())

    def content(self) -> int:
        """gcd of the coefficients; the form must have integer coefficients."""
        g = 0
        for v in self.terms.values():
            if not isinstance(v, int):
                raise ValueError("content() needs integer coefficients")
            g = gcd(g, v)
        return g

    def divide_exact(self, n: int) -> "SparseForm":
        """Division by an integer that divides every coefficient."""
        out = {}
        for k, v in self.terms.items():
            if not isinstance(v, int) or v % n:
                raise ValueError(f"Coefficient {v} is not divisible by {n}")
            out[k] = v // n
        return SparseForm._raw(self.degree, out)

    def __repr__(self):
        return f"SparseForm(degree={self.degree}, terms={len(self.terms)})"


def wedge(f: SparseForm, g: SparseForm) -> SparseForm:
    """Exterior product; blades sharing a covector vanish."""
    degree = f.degree + g.degree
    if degree > N_COVECTORS:
        raise ValueError(f"Degree overflow: {f.degree} + {g.degree} > {N_COVECTORS}")
    acc: Terms = {}
    _wedge_into(acc, f.terms, g.terms)
    return SparseForm._raw(degree, _clean(acc))


def wedge_power(f: SparseForm, k: int) -> SparseForm:
    result = SparseForm.scalar(1)
    for _ in range(k):
        result = wedge(result, f)
    return result


def restrict(f: SparseForm, killed: Iterable[int]) -> SparseForm:
    """Drops every term whose blade meets the killed covectors."""
    kill = mask_of(killed)
    return SparseForm._raw(f.degree, {k: v for k, v in f.terms.items() if not k & kill})


def kahler_form_of(j: ExactMatrix) -> SparseForm:
    """ψ = Σ_{a<b} J[a][b]·dx_a∧dx_b, i.e. ψ(X, Y) = g(X, JY)."""
    if j.dim not in (16, 32):
        raise ValueError(f"Kähler forms live on R^16 or R^32, got dimension {j.dim}")
    if not j.is_real():
        raise ValueError("Kähler form needs a real matrix; realify complex matrices first")
    if not j.is_skew():
        raise ValueError("Kähler form needs a skew-symmetric matrix")
    terms = {(1 << r) | (1 << c): v for r, c, v in j.nonzero_entries() if r < c}
    return SparseForm(2, terms)


def lie_derivation(a: ExactMatrix, f: SparseForm) -> SparseForm:
    """
    Degree-preserving derivation (A·f)(X1..Xk) = −Σ f(X1, .., A·Xi, .., Xk).
    On covectors A·dx_p = −Σ_q A[p][q]·dx_q.
    """
    rows = [a.row(p) for p in range(a.dim)]
    acc: Terms = {}
    for mask, coeff in f.terms.items():
        rest = mask
        while rest:
            low = rest & -rest
            rest ^= low
            p = low.bit_length() - 1
            if p >= a.dim:
                raise ValueError(f"Form uses covector {p} beyond matrix dimension {a.dim}")
            others = mask ^ low
            for q, v in rows[p].items():
                if q == p:
                    acc[mask] = acc.get(mask, 0) - v * coeff
                    continue
                bit = 1 << q
                if others & bit:
                    continue
                lo, hi = (q, p) if q < p else (p, q)
                between = others & ((1 << hi) - 1) & ~((1 << (lo + 1)) - 1)
                term = -v * coeff
                if between.bit_count() & 1:
                    term = -term
                key = others | bit
                acc[key] = acc.get(key, 0) + term
    return SparseForm._raw(f.degree, _clean(acc))


def form_digest(f: SparseForm, name: str) -> str:
    """SHA-256 of the named JSON-lines serialization, newline-terminated as written to disk."""
    h = hashlib.sha256()
    for line in form_lines(f, name):
        h.update(line.encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()


def form_records(f: SparseForm, name: Optional[str] = None) -> Iterator[Dict[str, object]]:
    for mask, v in f.sorted_terms():
        re, im = format_parts(v)
        record: Dict[str, object] = {}
        if name is not None:
            record["form"] = name
        record["blade"] = bits_of(mask)
        record["re"] = re
        record["im"] = im
        yield record


def form_lines(f: SparseForm, name: Optional[str] = None) -> Iterator[str]:
    for record in form_records(f, name):
        yield json.dumps(record)


def parse_form_records(records: Iterable[Mapping[str, object]], degree: Optional[int] = None) -> SparseForm:
    terms: Terms = {}
    for record in records:
        blade = list(record["blade"])
        terms[mask_of(blade)] = parse_scalar(str(record["re"]), str(record.get("im", "0")))
        if degree is None:
            degree = len(blade)
    return SparseForm(degree or 0, terms)


# Complex view

def dz(a: int) -> int:
    """Complex-view position of dz_a."""
    return a


def dzbar(a: int) -> int:
    """Complex-view position of dz̄_a."""
    return HALF + a


def _real_to_complex_images() -> List[Terms]:
    half = Fraction(1, 2)
    i_half = I_UNIT * half
    images = []
    for a in range(HALF):
        images.append({1 << dz(a): half, 1 << dzbar(a): half})
    for a in range(HALF):
        images.append({1 << dz(a): i_half, 1 << dzbar(a): -i_half})
    return images


def _complex_to_real_images() -> List[Terms]:
    images = []
    for a in range(HALF):
        images.append({1 << a: 1, 1 << (HALF + a): -I_UNIT})
    for a in range(HALF):
        images.append({1 << a: 1, 1 << (HALF + a): I_UNIT})
    return images


_TO_COMPLEX = _real_to_complex_images()
_TO_REAL = _complex_to_real_images()


def _linear_image(terms: Mapping[int, Scalar], images: Sequence[Terms]) -> Terms:
    """Image of a form under the algebra map sending covector k to the 1-form images[k]."""
    acc: Terms = {}
    for mask, coeff in terms.items():
        partial: Terms = {0: coeff}
        for k in bits_of(mask):
            nxt: Terms = {}
            _wedge_into(nxt, partial, images[k])
            partial = nxt
        for k, v in partial.items():
            acc[k] = acc.get(k, 0) + v
    return _clean(acc)


class ComplexBladeView:
    """
    A form written over dz/dz̄ blades. Terms are keyed by complex masks
    (bit a is dz_a, bit 16+a is dz̄_a) in ascending canonical order.
    """

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: Mapping[int, Scalar]):
        self.degree = degree
        self.terms: Terms = _clean(terms)

    @classmethod
    def from_words(cls, degree: int, words: Iterable[Tuple[Scalar, Sequence[int]]]) -> "ComplexBladeView":
        """Σ coeff·(ordered word of complex positions)."""
        acc: Terms = {}
        for coeff, word in words:
            sign = word_sign(word)
            if sign:
                key = mask_of(word)
                acc[key] = acc.get(key, 0) + sign * coeff
        return cls(degree, acc)

    def to_real(self) -> SparseForm:
        return SparseForm._raw(self.degree, _linear_image(self.terms, _TO_REAL))

    def coefficient_of(self, word: Sequence[int]) -> Scalar:
        """Coefficient of an ordered dz/dz̄ word, e.g. [dz(0), dzbar(0), dz(1), dzbar(1)]."""
        sign = word_sign(word)
        if sign == 0:
            return 0
        return simplify(sign * self.terms.get(mask_of(word), 0))

    def bidegrees(self) -> Dict[Tuple[int, int], int]:
        counts: Dict[Tuple[int, int], int] = {}
        for mask in self.terms:
            p = (mask & 0xFFFF).bit_count()
            key = (p, mask.bit_count() - p)
            counts[key] = counts.get(key, 0) + 1
        return counts

    def is_pure(self, p: int, q: int) -> bool:
        return all(key == (p, q) for key in self.bidegrees())

    def project(self, keep: Callable[[int], bool]) -> "ComplexBladeView":
        return ComplexBladeView(self.degree, {k: v for k, v in self.terms.items() if keep(k)})

    def scale(self, s: Scalar) -> "ComplexBladeView":
        return ComplexBladeView(self.degree, {k: s * v for k, v in self.terms.items()})

    def __add__(self, other: "ComplexBladeView") -> "ComplexBladeView":
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, 0) + v
        return ComplexBladeView(self.degree, acc)

    def __sub__(self, other: "ComplexBladeView") -> "ComplexBladeView":
        return self + other.scale(-1)

    def __eq__(self, other):
        if not isinstance(other, ComplexBladeView):
            return NotImplemented
        return self.degree == other.degree and self.terms == other.terms

    def __len__(self) -> int:
        return len(self.terms)

    def records(self, name: Optional[str] = None) -> Iterator[Dict[str, object]]:
        for mask, v in sorted(self.terms.items()):
            re, im = format_parts(v)
            bits = bits_of(mask)
            record: Dict[str, object] = {}
            if name is not None:
                record["form"] = name
            record["dz"] = [b for b in bits if b < HALF]
            record["dzbar"] = [b - HALF for b in bits if b >= HALF]
            record["re"] = re
            record["im"] = im
            yield record

    def lines(self, name: Optional[str] = None) -> Iterator[str]:
        for record in self.records(name):
            yield json.dumps(record)

    def __repr__(self):
        return f"ComplexBladeView(degree={self.degree}, terms={len(self.terms)}, bidegrees={self.bidegrees()})"


def to_complex_view(f: SparseForm) -> ComplexBladeView:
    return ComplexBladeView(f.degree, _linear_image(f.terms, _TO_COMPLEX))


# Form-valued skew matrices

class FormMatrix:
    """Skew n×n matrix of 2-forms; only the strict upper triangle is stored."""

    __slots__ = ("n", "first_index", "_upper")

    def __init__(self, n: int, upper: Mapping[Tuple[int, int], SparseForm], first_index: int = 0):
        self.n = n
        self.first_index = first_index
        self._upper: Dict[Tuple[int, int], SparseForm] = {}
        for (a, b), form in upper.items():
            if not (0 <= a < b < n):
                raise ValueError(f"Entry ({a},{b}) is not in the strict upper triangle of a {n}×{n} matrix")
            if form.degree != 2:
                raise ValueError(f"Entry ({a},{b}) has degree {form.degree}, expected 2")
            self._upper[(a, b)] = form

    def entry(self, a: int, b: int) -> SparseForm:
        """Entry at positions (a, b); entry(b, a) = −entry(a, b), diagonal zero."""
        if a == b:
            return SparseForm.zero(2)
        if a < b:
            return self._upper.get((a, b), SparseForm.zero(2))
        return -self._upper.get((b, a), SparseForm.zero(2))

    def labelled(self, alpha: int, beta: int) -> SparseForm:
        """Entry by its α, β labels, e.g. ψ09 in ψ^D."""
        return self.entry(alpha - self.first_index, beta - self.first_index)

    def upper_items(self) -> Iterator[Tuple[Tuple[int, int], SparseForm]]:
        for a, b in combinations(range(self.n), 2):
            yield (a, b), self.entry(a, b)

    def submatrix(self, positions: Sequence[int]) -> "FormMatrix":
        positions = list(positions)
        upper = {(i, j): self.entry(positions[i], positions[j]) for i, j in combinations(range(len(positions)), 2)}
        return FormMatrix(len(positions), upper)

    def map_entries(self, func: Callable[[SparseForm], SparseForm]) -> "FormMatrix":
        return FormMatrix(self.n, {k: func(v) for k, v in self._upper.items()}, self.first_index)

    def restrict(self, killed: Iterable[int]) -> "FormMatrix":
        killed = list(killed)
        return self.map_entries(lambda f: restrict(f, killed))

    def conjugate(self, perm: Sequence[int], signs: Sequence[int]) -> "FormMatrix":
        """QᵀψQ for the signed permutation Q·e_a = signs[a]·e_{perm[a]}."""
        if sorted(perm) != list(range(self.n)) or len(signs) != self.n:
            raise ValueError("Not a signed permutation of the matrix indices")
        upper = {(a, b): self.entry(perm[a], perm[b]).scale(signs[a] * signs[b])
                 for a, b in combinations(range(self.n), 2)}
        return FormMatrix(self.n, upper, self.first_index)

    def __repr__(self):
        return f"FormMatrix(n={self.n}, first_index={self.first_index})"


def tau2(m: FormMatrix) -> SparseForm:
    """Σ_{α<β} ψ_αβ∧ψ_αβ."""
    acc: Terms = {}
    for _, form in m.upper_items():
        _square_into(acc, form.terms)
    return SparseForm._raw(4, _clean(acc))


def _upper_terms(m: FormMatrix) -> Dict[Tuple[int, int], Terms]:
    return {key: form.terms for key, form in m.upper_items()}


def _tau4_chunk(quads: Sequence[Tuple[int, int, int, int]]) -> Tuple[Terms, int]:
    entries = shared()
    acc: Terms = {}
    peak = 0
    for a, b, c, d in quads:
        pf: Terms = {}
        _wedge_into(pf, entries[(a, b)], entries[(c, d)], 1)
        _wedge_into(pf, entries[(a, c)], entries[(b, d)], -1)
        _wedge_into(pf, entries[(a, d)], entries[(b, c)], 1)
        pf = {k: v for k, v in pf.items() if v}
        peak = max(peak, len(pf))
        _square_into(acc, pf)
    return _clean(acc), peak


DERANGEMENTS_4 = [(p, word_sign(p)) for p in permutations(range(4)) if all(p[i] != i for i in range(4))]


def _minor_chunk(quads: Sequence[Tuple[int, int, int, int]]) -> Tuple[Terms, int]:
    entries = shared()
    acc: Terms = {}
    for quad in quads:
        def entry(i: int, j: int) -> Tuple[Terms, int]:
            x, y = quad[i], quad[j]
            return (entries[(x, y)], 1) if x < y else (entries[(y, x)], -1)

        for perm, sign in DERANGEMENTS_4:
            (t0, s0), (t1, s1) = entry(0, perm[0]), entry(1, perm[1])
            (t2, s2), (t3, s3) = entry(2, perm[2]), entry(3, perm[3])
            left: Terms = {}
            _wedge_into(left, t0, t1, s0 * s1)
            right: Terms = {}
            _wedge_into(right, t2, t3, s2 * s3)
            _wedge_into(acc, left, right, sign)
    return _clean(acc), 0


def _chunks(items: List, count: int) -> List[List]:
    count = max(1, min(count, len(items)))
    return [items[i::count] for i in range(count)]


def _quadruple_sum(m: FormMatrix, task: Callable, workers: int, label: str) -> Tuple[SparseForm, Dict[str, int]]:
    quads = list(combinations(range(m.n), 4))
    if not quads:
        return SparseForm.zero(8), {"quadruples": 0, "peak_terms": 0, "terms": 0}
    # interleaved chunks balance the load; the merge order is fixed by chunk index
    chunks = _chunks(quads, workers * 4 if workers > 1 else 1)
    logger.info(f"{label}: {len(quads)} quadruples in {len(chunks)} chunks, {workers} worker(s)")
    results = ordered_map(task, chunks, workers=workers, payload=_upper_terms(m))
    acc: Terms = {}
    peak = 0
    for terms, chunk_peak in results:
        peak = max(peak, chunk_peak, len(terms))
        for k, v in terms.items():
            acc[k] = acc.get(k, 0) + v
    result = SparseForm._raw(8, _clean(acc))
    peak = max(peak, len(result))
    logger.info(f"{label}: {len(result)} terms")
    return result, {"quadruples": len(quads), "peak_terms": peak, "terms": len(result)}


def tau4_with_stats(m: FormMatrix, workers: int = 1) -> Tuple[SparseForm, Dict[str, int]]:
    return _quadruple_sum(m, _tau4_chunk, workers, "tau4")


def tau4(m: FormMatrix, workers: int = 1) -> SparseForm:
    """Σ over quadruples of (ψ_ab∧ψ_cd − ψ_ac∧ψ_bd + ψ_ad∧ψ_bc)²."""
    return tau4_with_stats(m, workers)[0]


def tau4_minor_oracle(m: FormMatrix, workers: int = 1) -> SparseForm:
    """Σ over quadruples of the 4×4 principal minor determinant, by permutation expansion."""
    return _quadruple_sum(m, _minor_chunk, workers, "tau4-oracle")[0]


def pfaffian(m: FormMatrix) -> SparseForm:
    """Pfaffian by expansion along the first row; entries commute as 2-forms."""
    if m.n % 2:
        raise ValueError(f"Pfaffian needs an even size, got {m.n}")
    return _pfaffian(m, tuple(range(m.n)))


def _pfaffian(m: FormMatrix, positions: Tuple[int, ...]) -> SparseForm:
    if not positions:
        return SparseForm.scalar(1)
    first = positions[0]
    total = SparseForm.zero(len(positions))
    for k in range(1, len(positions)):
        rest = positions[1:k] + positions[k + 1:]
        term = wedge(m.entry(first, positions[k]), _pfaffian(m, rest))
        total = total + (term if k % 2 else -term)
    return total


def tau(m: FormMatrix, k: int) -> SparseForm:
    """Σ over principal 2k-minors of Pf²."""
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    acc: Terms = {}
    for positions in combinations(range(m.n), 2 * k):
        _square_into(acc, _pfaffian(m, positions).terms)
    return SparseForm._raw(4 * k, _clean(acc))


# Named constructions

PRIMED = list(range(8, 16)) + list(range(24, 32))
UNPRIMED = list(range(0, 8)) + list(range(16, 24))


def omega() -> SparseForm:
    """Kähler form of 𝔍 = [[0, −Id], [Id, 0]]."""
    return kahler_form_of(multiplication_by_i(32))


def build_psi_C(dim: int = 16) -> FormMatrix:
    """ψ^C = (ψ_αβ)_{1≤α,β≤9} on R^16, or on R^32 through the realified J_αβ."""
    if dim not in (16, 32):
        raise ValueError(f"ψ^C lives on R^16 or R^32, got {dim}")
    upper = {}
    for (a, b), j in build_JC().elements:
        upper[(a - 1, b - 1)] = kahler_form_of(j if dim == 16 else realify(j))
    return FormMatrix(9, upper, first_index=1)


def build_psi_D() -> FormMatrix:
    """ψ^D = (ψ_αβ)_{0≤α,β≤9} on R^32 from the realified J^D."""
    upper = {(a, b): kahler_form_of(realify(j)) for (a, b), j in build_JD().elements}
    return FormMatrix(10, upper, first_index=0)


# Decomposition of τ2(ψ^D)

def _vv_diagonal(mask: int) -> bool:
    """dz_a dz̄_a dz_b dz̄_b with z_a unprimed and z_b primed."""
    holo, anti = mask & 0xFFFF, mask >> 16
    return mask.bit_count() == 4 and holo == anti and (holo & 0xFF).bit_count() == 1


def _one_per_block(mask: int) -> bool:
    """One index in each of dz (unprimed), dz (primed), dz̄ (unprimed), dz̄ (primed), off the diagonal."""
    blocks = all(((mask >> shift) & 0xFF).bit_count() == 1 for shift in (0, 8, 16, 24))
    return blocks and not _vv_diagonal(mask)


def _diagonal_words(coeff: Scalar, pairs: Iterable[Tuple[int, int]]) -> List[Tuple[Scalar, List[int]]]:
    return [(coeff, [dz(a), dzbar(a), dz(b), dzbar(b)]) for a, b in pairs]


@dataclass
class Tau2Decomposition:
    parts: Dict[str, SparseForm]
    checks: List[CheckResult]
    metrics: Dict[str, int] = field(default_factory=dict)

    def report(self) -> IdentityReport:
        return IdentityReport.from_checks("tau2-decomposition", self.checks, metrics=dict(self.metrics))


def tau2_decomposition(m: FormMatrix) -> Tau2Decomposition:
    """
    Splits τ2(ψ^D) = ρ2 + μ2 + ν2 with ρ2 = Σ_{1≤α<β≤8} ψ², μ2 = Σ_γ ψ_γ9²,
    ν2 = Σ_δ ψ_0δ², and checks each step of the reduction to −3ω²: the
    restrictions to V (unprimed) and V' (primed), the diagonal parts μ2', ν2',
    the ψ09² display, the assembly, and the vanishing of the remaining terms.

    ψ09 lives on both V and V', so ν2 is restricted with ψ09² taken out;
    the assembly adds ψ09² back as its own term.
    """
    if m.n != 10 or m.first_index != 0:
        raise ValueError("tau2_decomposition expects ψ^D (10×10, labels 0..9)")
    psi = m.labelled
    half = Fraction(1, 2)

    def square_sum(pairs: Iterable[Tuple[int, int]]) -> SparseForm:
        acc: Terms = {}
        for a, b in pairs:
            _square_into(acc, psi(a, b).terms)
        return SparseForm._raw(4, _clean(acc))

    rho2 = square_sum(combinations(range(1, 9), 2))
    mu2 = square_sum((g, 9) for g in range(1, 9))
    nu2 = square_sum((0, d) for d in range(1, 10))
    w = omega()
    w2 = wedge(w, w)
    w_v, w_vp = restrict(w, PRIMED), restrict(w, UNPRIMED)
    psi09_sq = wedge(psi(0, 9), psi(0, 9))
    nu_rest = nu2 - psi09_sq
    rho_v, rho_vp = restrict(rho2, PRIMED), restrict(rho2, UNPRIMED)

    checks = [
        check("rho2|V = -4(omega|V)^2", rho_v == wedge(w_v, w_v).scale(-4)),
        check("rho2|V' = -4(omega|V')^2", rho_vp == wedge(w_vp, w_vp).scale(-4)),
        check("mu2|V = 0", restrict(mu2, PRIMED).is_zero()),
        check("(nu2 - psi09^2)|V = 0", restrict(nu_rest, PRIMED).is_zero()),
        check("mu2|V' = 0", restrict(mu2, UNPRIMED).is_zero()),
        check("(nu2 - psi09^2)|V' = 0", restrict(nu_rest, UNPRIMED).is_zero()),
    ]

    unprimed, primed = range(0, 8), range(8, 16)
    diagonal = ComplexBladeView.from_words(4, _diagonal_words(half, [(a, b) for a in unprimed for b in primed]))
    mu_c = to_complex_view(mu2)
    mu_p = mu_c.project(_vv_diagonal)
    nu_rest_c = to_complex_view(nu_rest)
    nu_p = nu_rest_c.project(_vv_diagonal)
    checks.append(check("mu2' = 1/2 sum(a abar b' bbar')", mu_p == diagonal))
    checks.append(check("nu2' = 1/2 sum(a abar b' bbar')", nu_p == diagonal))
    checks.append(check("mu2' + nu2' = sum(a abar b' bbar')", mu_p + nu_p == diagonal.scale(2)))

    display = ComplexBladeView.from_words(
        4,
        _diagonal_words(-half, combinations(unprimed, 2))
        + _diagonal_words(-half, combinations(primed, 2))
        + _diagonal_words(half, [(a, b) for a in unprimed for b in primed]),
    )
    checks.append(check("psi09^2 display", to_complex_view(psi09_sq) == display))

    assembly = rho_v + rho_vp + mu_p.to_real() + nu_p.to_real() + psi09_sq
    checks.append(check("assembly = -3 omega^2", assembly == w2.scale(-3)))

    rho_t = rho2 - rho_v - rho_vp
    rho_tc = to_complex_view(rho_t)
    mu_tc = mu_c - mu_p
    nu_tc = nu_rest_c - nu_p
    underlined = mu_tc.project(_one_per_block)
    checks.append(check("rho2~ has one index per block", all(_one_per_block(k) for k in rho_tc.terms)))
    checks.append(check("rho2~ + underline(mu2~) = 1/2 rho2~", rho_tc + underlined == rho_tc.scale(half)))
    remainder = rho_tc + mu_tc + nu_tc
    checks.append(check("rho2~ + mu2~ + nu2~ = 0", len(remainder) == 0, f"{len(remainder)} terms left"))
    total = rho2 + mu2 + nu2
    checks.append(check("rho2 + mu2 + nu2 = tau2", total == tau2(m)))
    checks.append(check("tau2 = -3 omega^2", total == w2.scale(-3)))

    metrics = {
        "rho2_terms": len(rho2),
        "mu2_terms": len(mu2),
        "nu2_terms": len(nu2),
        "half_rho2_tilde_terms": len(rho_tc),
        "mu2_tilde_terms": len(mu_tc),
        "mu2_tilde_underlined_terms": len(underlined),
        "mu2_tilde_rest_terms": len(mu_tc - underlined),
        "nu2_tilde_terms": len(nu_tc),
        "mu2_prime_terms": len(mu_p),
        "nu2_prime_terms": len(nu_p),
    }
    parts = {
        "rho2": rho2, "mu2": mu2, "nu2": nu2,
        "rho2|V": rho_v, "rho2|V'": rho_vp,
        "mu2'": mu_p.to_real(), "nu2'": nu_p.to_real(),
        "psi09^2": psi09_sq,
    }
    return Tau2Decomposition(parts=parts, checks=checks, metrics=metrics)
