#!/usr/bin/env python3
"""
Clifford systems: families of symmetric orthogonal involutions that pairwise
anticommute. Builds the Spin(9) system on R^16, the ten-member system C9 on
R^32 and the Pauli prototype on R^4, and checks their relations and the
compositions of their members.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra_core import (
    I_UNIT,
    ExactMatrix,
    anticommutator,
    herm_inner,
    mat_bracket,
    rank_of_family,
    realify_blocks,
)
from .octonion import unit_right_mult
from .reports import CheckResult, IdentityReport, check
from .workers import ordered_map, shared

logger = logging.getLogger(__name__)

COMPLEX_STRUCTURE = "complex-structure"
INVOLUTION = "involution"


@dataclass
class CliffordSystem:
    """Ordered members P_first..P_last acting on R^dim."""

    label: str
    dim: int
    members: List[ExactMatrix]
    prefix: str = "P"
    first_index: int = 0

    @property
    def labels(self) -> List[int]:
        return list(range(self.first_index, self.first_index + len(self.members)))

    def member(self, label: int) -> ExactMatrix:
        position = label - self.first_index
        if not 0 <= position < len(self.members):
            raise ValueError(f"{self.label} has no member {self.prefix}{label}")
        return self.members[position]

    def name(self, label: int) -> str:
        return f"{self.prefix}{label}"


@dataclass(frozen=True)
class CompositionClass:
    indices: Tuple[int, ...]
    kind: str


def parity_kind(size: int) -> str:
    """Compositions of 2 or 3 members (mod 4) are complex structures, of 0 or 1 involutions."""
    return COMPLEX_STRUCTURE if size % 4 in (2, 3) else INVOLUTION


def build_spin9_system() -> CliffordSystem:
    """I1..I9 on R^16 = O ⊕ O, built from right multiplications."""
    ident = ExactMatrix.identity(8)
    members = [ExactMatrix.block(None, ident, ident, None)]
    for beta in range(2, 9):
        r = unit_right_mult(beta - 1)
        members.append(ExactMatrix.block(None, -r, r, None))
    members.append(ExactMatrix.diag(ident, -ident))
    logger.debug("Built the Spin(9) Clifford system")
    return CliffordSystem(label="spin9", dim=16, members=members, prefix="I", first_index=1)


def build_C9_system() -> CliffordSystem:
    """P0..P9 on R^32; the off-diagonal blocks are the complex structures J_{1,α+1} = I1·I_{α+1}."""
    spin9 = build_spin9_system()
    ident = ExactMatrix.identity(16)
    members = [ExactMatrix.block(None, ident, ident, None)]
    for alpha in range(1, 9):
        j = spin9.member(1) @ spin9.member(alpha + 1)
        members.append(ExactMatrix.block(None, -j, j, None))
    members.append(ExactMatrix.diag(ident, -ident))
    logger.debug("Built the C9 Clifford system")
    return CliffordSystem(label="c9", dim=32, members=members, prefix="P", first_index=0)


def build_pauli_system() -> CliffordSystem:
    """Realified Pauli matrices [[0,1],[1,0]], [[0,i],[−i,0]], diag(1,−1)."""
    pauli = [
        ExactMatrix.from_dense([[0, 1], [1, 0]]),
        ExactMatrix.from_dense([[0, I_UNIT], [-I_UNIT, 0]]),
        ExactMatrix.from_dense([[1, 0], [0, -1]]),
    ]
    members = [realify_blocks(p) for p in pauli]
    return CliffordSystem(label="pauli", dim=4, members=members, prefix="P", first_index=0)


SYSTEM_BUILDERS = {
    "spin9": build_spin9_system,
    "c9": build_C9_system,
    "pauli": build_pauli_system,
}


def build_system(name: str) -> CliffordSystem:
    try:
        return SYSTEM_BUILDERS[name]()
    except KeyError:
        raise ValueError(f"Unknown Clifford system: {name}") from None


def verify_clifford_relations(s: CliffordSystem) -> IdentityReport:
    """Symmetry, involution, orthogonality and pairwise anticommutation of every member."""
    ident = ExactMatrix.identity(s.dim)
    zero = ExactMatrix.zero(s.dim)
    checks: List[CheckResult] = []
    for label, m in zip(s.labels, s.members):
        name = s.name(label)
        checks.append(check(f"symmetric[{name}]", m.is_symmetric()))
        checks.append(check(f"involution[{name}]", m @ m == ident, f"{name}² ≠ Id"))
        checks.append(check(f"orthogonal[{name}]", m.transpose() @ m == ident))
    for (la, a), (lb, b) in combinations(list(zip(s.labels, s.members)), 2):
        checks.append(check(f"anticommute[{s.name(la)},{s.name(lb)}]", anticommutator(a, b) == zero,
                            f"{s.name(la)}{s.name(lb)} + {s.name(lb)}{s.name(la)} ≠ 0"))
    return IdentityReport.from_checks(
        f"clifford-relations[{s.label}]",
        checks,
        metrics={"members": len(s.members), "dim": s.dim},
    )


def composition(s: CliffordSystem, indices: Sequence[int]) -> Tuple[ExactMatrix, CompositionClass]:
    """Ordered product of the selected members, classified by the parity rule."""
    indices = tuple(indices)
    if not indices:
        raise ValueError("A composition needs at least one index")
    if any(b <= a for a, b in zip(indices, indices[1:])):
        raise ValueError(f"Indices must be strictly increasing: {list(indices)}")
    product = s.member(indices[0])
    for label in indices[1:]:
        product = product @ s.member(label)
    return product, CompositionClass(indices=indices, kind=parity_kind(len(indices)))


def classify_matrix(m: ExactMatrix) -> Optional[str]:
    """Actual kind of a matrix: complex structure, involution, or None."""
    ident = ExactMatrix.identity(m.dim)
    square = m @ m
    if m.is_skew() and square == -ident:
        return COMPLEX_STRUCTURE
    if m.is_symmetric() and square == ident:
        return INVOLUTION
    return None


def parity_law_check(s: CliffordSystem, max_size: int = 6) -> IdentityReport:
    """Every composition of up to max_size members has the kind predicted by its size."""
    checks = []
    counted = 0
    for size in range(1, min(max_size, len(s.members)) + 1):
        for indices in combinations(s.labels, size):
            m, cls = composition(s, indices)
            actual = classify_matrix(m)
            counted += 1
            if actual != cls.kind:
                checks.append(check(f"parity{list(indices)}", False, f"expected {cls.kind}, got {actual}"))
    checks.append(check("parity-law", not checks, "some compositions break the parity rule"))
    return IdentityReport.from_checks(f"parity-law[{s.label}]", checks, metrics={"compositions": counted})


def _orthogonal_failures(i: int) -> List[int]:
    mats = shared()
    a = mats[i]
    return [j for j in range(i + 1, len(mats)) if herm_inner(a, mats[j]) != 0]


def orthogonality_scan(s: CliffordSystem, sizes: Sequence[int] = (2, 3, 6), workers: int = 1) -> IdentityReport:
    """
    Enumerates the compositions of the given sizes, checks each is a complex
    structure, checks they are pairwise trace-orthogonal and that their rank
    equals their count.
    """
    for size in sizes:
        if size > len(s.members):
            raise ValueError(f"{s.label} has {len(s.members)} members, cannot compose {size}")
    entries: List[Tuple[Tuple[int, ...], ExactMatrix]] = []
    counts: Dict[str, int] = {}
    for size in sizes:
        subsets = list(combinations(s.labels, size))
        counts[str(size)] = len(subsets)
        for indices in subsets:
            entries.append((indices, composition(s, indices)[0]))
    mats = [m for _, m in entries]
    logger.info(f"Scanning {len(mats)} compositions of {s.label} (sizes {list(sizes)})")

    checks: List[CheckResult] = []
    not_complex = [list(idx) for idx, m in entries if classify_matrix(m) != COMPLEX_STRUCTURE]
    checks.append(check("all-complex-structures", not not_complex, f"not complex: {not_complex[:3]}"))

    rows = ordered_map(_orthogonal_failures, range(len(mats)), workers=workers, payload=mats)
    bad_pairs = [(list(entries[i][0]), list(entries[j][0])) for i, row in enumerate(rows) for j in row]
    checks.append(check("pairwise-orthogonal", not bad_pairs, f"first non-orthogonal pair: {bad_pairs[:1]}"))

    rank = rank_of_family(mats)
    checks.append(check("rank-equals-count", rank == len(mats), f"rank {rank} < {len(mats)}"))
    return IdentityReport.from_checks(
        f"orthogonality-scan[{s.label}]",
        checks,
        metrics={"counts": counts, "total": len(mats), "rank": rank, "non_orthogonal_pairs": len(bad_pairs)},
    )


def unitary_obstruction_check(members: int = 10, complex_dim: int = 16) -> IdentityReport:
    """
    Counts the complex structures produced by compositions of 2, 3 and 6 of
    ten members against dim u(16) = 256, the dimension available to
    complex structures compatible with a fixed one on C^16.
    """
    counts = [comb(members, k) for k in (2, 3, 6)]
    total = sum(counts)
    bound = complex_dim * complex_dim
    checks = [
        check("counts", counts == [45, 120, 210], f"got {counts}"),
        check("bound", bound == 256, f"got {bound}"),
        check("exceeds-bound", total > bound, f"{total} ≤ {bound}"),
    ]
    return IdentityReport.from_checks(
        "unitary-obstruction",
        checks,
        metrics={"counts": counts, "total": total, "bound": bound,
                 "verdict": "obstruction holds" if total > bound else "no obstruction"},
    )


DELTA_TABLE = (1, 2, 4, 4, 8, 8, 8, 8)


def delta(m: int) -> int:
    """δ(m) with δ(8+h) = 16·δ(h)."""
    if m < 1:
        raise ValueError(f"delta is defined for m ≥ 1, got {m}")
    factor = 1
    while m > 8:
        m -= 8
        factor *= 16
    return factor * DELTA_TABLE[m - 1]


def admits_clifford_system(m: int, n: int) -> bool:
    """R^n carries a Clifford system (P0..Pm) iff n = 2k·δ(m) for some k ≥ 1."""
    return n > 0 and n % (2 * delta(m)) == 0


def consecutive_pair_structure(n: int) -> ExactMatrix:
    """𝔎: e_{2k} ↦ e_{2k+1}, e_{2k+1} ↦ −e_{2k}."""
    if n % 2:
        raise ValueError(f"A complex structure needs even dimension, got {n}")
    entries = {}
    for k in range(0, n, 2):
        entries[(k + 1, k)] = 1
        entries[(k, k + 1)] = -1
    return ExactMatrix.from_entries(n, entries)


def multiplication_by_i(n: int) -> ExactMatrix:
    """𝔍 = [[0, −Id], [Id, 0]] on R^n."""
    half = ExactMatrix.identity(n // 2)
    return ExactMatrix.block(None, -half, half, None)


def complex_linearity_split(named: Sequence[Tuple[str, ExactMatrix]], structure: ExactMatrix) -> Dict[str, List[str]]:
    """Partition named matrices into those commuting, anticommuting, or neither with a complex structure."""
    split: Dict[str, List[str]] = {"commuting": [], "anticommuting": [], "neither": []}
    for name, m in named:
        if mat_bracket(m, structure).is_zero():
            split["commuting"].append(name)
        elif anticommutator(m, structure).is_zero():
            split["anticommuting"].append(name)
        else:
            split["neither"].append(name)
    return split


def unitary_members(s: CliffordSystem, structure: Optional[ExactMatrix] = None) -> List[int]:
    """Labels of members commuting with the structure (default 𝔎 on R^dim)."""
    if structure is None:
        structure = consecutive_pair_structure(s.dim)
    return [label for label, m in zip(s.labels, s.members) if mat_bracket(m, structure).is_zero()]


def unitary_members_report() -> IdentityReport:
    """Which members of C9 are complex-linear for 𝔎, and the split of C9 with respect to 𝔍 = P09."""
    c9 = build_C9_system()
    kappa_members = unitary_members(c9)
    failing = [label for label in c9.labels if label not in kappa_members]
    split = complex_linearity_split([(c9.name(l), m) for l, m in zip(c9.labels, c9.members)],
                                    multiplication_by_i(32))
    checks = [
        check("kappa-non-unitary", failing == [6, 7], f"non-unitary members {failing}"),
        check("J-commuting", split["commuting"] == [f"P{a}" for a in range(1, 9)], f"{split['commuting']}"),
        check("J-anticommuting", split["anticommuting"] == ["P0", "P9"], f"{split['anticommuting']}"),
    ]
    return IdentityReport.from_checks(
        "unitary-members[c9]",
        checks,
        metrics={"kappa_unitary": kappa_members, "kappa_non_unitary": failing, "J_split": split},
    )


def delta_table_check() -> IdentityReport:
    """δ(1..8) against the printed table, the period-8 law and the C9 dimension."""
    checks = [check(f"delta({m})", delta(m) == expected, f"got {delta(m)}")
              for m, expected in enumerate(DELTA_TABLE, start=1)]
    checks.append(check("delta(8+h) = 16 delta(h)", all(delta(8 + h) == 16 * delta(h) for h in range(1, 9))))
    checks.append(check("2 delta(9) = 32", 2 * delta(9) == 32, f"got {2 * delta(9)}"))
    checks.append(check("R^32 admits P0..P9", admits_clifford_system(9, 32)))
    checks.append(check("R^16 admits I1..I9", admits_clifford_system(8, 16)))
    checks.append(check("R^16 does not admit ten members", not admits_clifford_system(9, 16)))
    return IdentityReport.from_checks("delta-table", checks, metrics={"table": list(DELTA_TABLE)})
