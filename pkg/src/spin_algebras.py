#!/usr/bin/env python3
"""
Lie-algebra layer: the spin(9) basis J^C, the 84 triple compositions, the
spin(10) basis J^D in the complex picture, the P_αβ basis of 𝔥 ⊂ so(32),
structure constants, and the isomorphism between 𝔥 and spin(10).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Tuple, Union

from .algebra_core import (
    I_UNIT,
    ExactMatrix,
    Scalar,
    SpanSolver,
    herm_inner,
    mat_bracket,
    rank_of_family,
    realify,
    simplify,
)
from .clifford_systems import (
    build_C9_system,
    build_spin9_system,
    complex_linearity_split,
    multiplication_by_i,
)
from .octonion import Octonion, right_mult_matrix
from .reports import CheckResult, IdentityReport, check

logger = logging.getLogger(__name__)

Index = Tuple[int, ...]


@dataclass
class LieBasis:
    """Ordered basis elements keyed by their index pair or triple."""

    label: str
    prefix: str
    elements: List[Tuple[Index, ExactMatrix]]

    @property
    def indices(self) -> List[Index]:
        return [idx for idx, _ in self.elements]

    @property
    def matrices(self) -> List[ExactMatrix]:
        return [m for _, m in self.elements]

    def name(self, idx: Index) -> str:
        return self.prefix + "".join(str(i) for i in idx)

    @property
    def names(self) -> List[str]:
        return [self.name(idx) for idx in self.indices]

    def get(self, *idx: int) -> ExactMatrix:
        for key, m in self.elements:
            if key == tuple(idx):
                return m
        raise KeyError(f"{self.label} has no element {self.name(tuple(idx))}")

    def position(self, *idx: int) -> int:
        return self.indices.index(tuple(idx))

    def __len__(self) -> int:
        return len(self.elements)


@dataclass
class StructureConstants:
    """[e_i, e_j] = Σ_k tensor[(i, j)][k] e_k, stored sparsely."""

    names: List[str]
    tensor: Dict[Tuple[int, int], Dict[int, Scalar]] = field(default_factory=dict)

    def bracket(self, i: int, j: int) -> Dict[int, Scalar]:
        return self.tensor.get((i, j), {})


def build_JC() -> LieBasis:
    """J_αβ = I_α·I_β for 1 ≤ α < β ≤ 9."""
    spin9 = build_spin9_system()
    elements = [((a, b), spin9.member(a) @ spin9.member(b)) for a, b in combinations(range(1, 10), 2)]
    return LieBasis(label="JC", prefix="J", elements=elements)


def build_JC_from_brackets() -> LieBasis:
    """Recovers J_αβ (1 ≤ α < β ≤ 8) as ½[J_β9, J_α9]; only I_α and J_α9 are primitive."""
    spin9 = build_spin9_system()
    j9 = {a: spin9.member(a) @ spin9.member(9) for a in range(1, 9)}
    elements = [((a, b), mat_bracket(j9[b], j9[a]).scale(Fraction(1, 2)))
                for a, b in combinations(range(1, 9), 2)]
    return LieBasis(label="JC-brackets", prefix="J", elements=elements)


def build_J_triples() -> LieBasis:
    """The 84 compositions J_αβγ = I_α·I_β·I_γ."""
    spin9 = build_spin9_system()
    elements = [((a, b, c), spin9.member(a) @ spin9.member(b) @ spin9.member(c))
                for a, b, c in combinations(range(1, 10), 3)]
    return LieBasis(label="J-triples", prefix="J", elements=elements)


def build_JD() -> LieBasis:
    """
    J^C as complex 16×16 matrices plus J_0β = i·I_β for β = 1..9,
    in lexicographic index order.
    """
    spin9 = build_spin9_system()
    jc = {idx: m for idx, m in build_JC().elements}
    elements = []
    for a, b in combinations(range(10), 2):
        if a == 0:
            m = spin9.member(b).scale(I_UNIT)
        else:
            m = jc[(a, b)]
        elements.append(((a, b), m.with_realm("complex-16")))
    return LieBasis(label="JD", prefix="J", elements=elements)


def build_P_basis() -> LieBasis:
    """P_αβ = P_α·P_β for 0 ≤ α < β ≤ 9."""
    c9 = build_C9_system()
    elements = [((a, b), c9.member(a) @ c9.member(b)) for a, b in combinations(range(10), 2)]
    return LieBasis(label="P", prefix="P", elements=elements)


def realified(b: LieBasis) -> LieBasis:
    return LieBasis(label=f"{b.label}-real", prefix=b.prefix,
                    elements=[(idx, realify(m)) for idx, m in b.elements])


def structure_constants(b: LieBasis, solver: Optional[SpanSolver] = None) -> Tuple[StructureConstants, List[str]]:
    """Constants for every ordered pair; also returns the brackets that left the span."""
    solver = solver or SpanSolver(b.matrices)
    mats = b.matrices
    constants = StructureConstants(names=b.names)
    outside: List[str] = []
    for i in range(len(mats)):
        for j in range(len(mats)):
            if i == j:
                continue
            if j < i and (j, i) in constants.tensor:
                constants.tensor[(i, j)] = {k: simplify(-v) for k, v in constants.tensor[(j, i)].items()}
                continue
            coeffs = solver.solve(mat_bracket(mats[i], mats[j]))
            if coeffs is None:
                outside.append(f"[{b.names[i]},{b.names[j]}]")
                continue
            constants.tensor[(i, j)] = {k: v for k, v in enumerate(coeffs) if v}
    return constants, outside


def antisymmetry_failures(constants: StructureConstants, solver_basis: LieBasis) -> List[str]:
    """Recomputes [e_j, e_i] directly and compares with −[e_i, e_j]."""
    solver = SpanSolver(solver_basis.matrices)
    mats = solver_basis.matrices
    failures = []
    for i, j in combinations(range(len(mats)), 2):
        direct = solver.solve(mat_bracket(mats[j], mats[i]))
        expected = {k: simplify(-v) for k, v in constants.bracket(i, j).items()}
        got = {k: v for k, v in enumerate(direct or []) if v}
        if direct is None or got != expected:
            failures.append(f"[{constants.names[j]},{constants.names[i]}]")
    return failures


def _combine(acc: Dict[int, Scalar], coeff: Scalar, vec: Dict[int, Scalar]) -> None:
    for k, v in vec.items():
        acc[k] = acc.get(k, 0) + coeff * v


def jacobi_failures(constants: StructureConstants) -> Tuple[int, List[str]]:
    """Evaluates [[x,y],z] + [[y,z],x] + [[z,x],y] on every basis triple through the constants."""
    n = len(constants.names)
    failures = []
    triples = 0
    for i, j, l in combinations(range(n), 3):
        triples += 1
        acc: Dict[int, Scalar] = {}
        for a, b, c in ((i, j, l), (j, l, i), (l, i, j)):
            for k, ck in constants.bracket(a, b).items():
                if k != c:
                    _combine(acc, ck, constants.bracket(k, c))
        if any(simplify(v) for v in acc.values()):
            failures.append(f"({constants.names[i]},{constants.names[j]},{constants.names[l]})")
    return triples, failures


def bracket_closure_check(b: LieBasis) -> IdentityReport:
    """Every bracket of basis elements lies in their span; the span has dimension = count."""
    rank = rank_of_family(b.matrices)
    checks: List[CheckResult] = [check("independent", rank == len(b), f"rank {rank} < {len(b)}")]
    if rank == len(b):
        constants, outside = structure_constants(b)
        checks.append(check("closed", not outside, f"outside span: {outside[:3]}"))
    logger.info(f"Closure of {b.label}: rank {rank}")
    return IdentityReport.from_checks(f"bracket-closure[{b.label}]", checks, metrics={"dim": rank})


def iso_map(p_index: Index) -> Index:
    """P_αβ ↦ J_{α+1,β+1} for β ≤ 8 and P_α9 ↦ J_{0,α+1}."""
    a, b = p_index
    if b == 9:
        return (0, a + 1)
    return (a + 1, b + 1)


def iso_check() -> IdentityReport:
    """Structure constants of 𝔥 and of realified spin(10) agree exactly under iso_map."""
    p_basis = build_P_basis()
    jd = realified(build_JD())
    p_consts, p_out = structure_constants(p_basis)
    j_consts, j_out = structure_constants(jd)
    perm = [jd.position(*iso_map(idx)) for idx in p_basis.indices]

    mismatches = []
    for (i, j), vec in sorted(p_consts.tensor.items()):
        mapped = {perm[k]: v for k, v in vec.items()}
        if mapped != j_consts.bracket(perm[i], perm[j]):
            mismatches.append(f"[{p_basis.names[i]},{p_basis.names[j]}]")
    p_triples, p_jacobi = jacobi_failures(p_consts)
    _, j_jacobi = jacobi_failures(j_consts)
    checks = [
        check("bijective-map", sorted(perm) == list(range(len(jd))), "map is not a bijection"),
        check("closed-P", not p_out, f"{p_out[:3]}"),
        check("closed-JD", not j_out, f"{j_out[:3]}"),
        check("constants-equal", not mismatches, f"first mismatch {mismatches[:1]}"),
        check("antisymmetric-P", not antisymmetry_failures(p_consts, p_basis)),
        check("antisymmetric-JD", not antisymmetry_failures(j_consts, jd)),
        check("jacobi-P", not p_jacobi, f"{p_jacobi[:3]}"),
        check("jacobi-JD", not j_jacobi, f"{j_jacobi[:3]}"),
    ]
    return IdentityReport.from_checks(
        "iso",
        checks,
        metrics={"pairs": len(p_consts.tensor), "jacobi_triples": p_triples, "mismatches": len(mismatches)},
    )


def so16_decomposition_check() -> IdentityReport:
    """The 36 J_αβ and 84 J_αβγ are mutually orthogonal and span so(16)."""
    jc = build_JC().matrices
    triples = build_J_triples().matrices
    everything = jc + triples
    bad = [(i, j) for i, j in combinations(range(len(everything)), 2)
           if herm_inner(everything[i], everything[j]) != 0]
    ranks = {"pairs": rank_of_family(jc), "triples": rank_of_family(triples), "total": rank_of_family(everything)}
    checks = [
        check("pairs-rank", ranks["pairs"] == 36, f"{ranks['pairs']}"),
        check("triples-rank", ranks["triples"] == 84, f"{ranks['triples']}"),
        check("total-rank", ranks["total"] == 120, f"{ranks['total']}"),
        check("orthogonal", not bad, f"{len(bad)} non-orthogonal pairs"),
    ]
    return IdentityReport.from_checks("so16-decomposition", checks, metrics=ranks)


def clifford_rep_map(r: Union[int, Fraction], v: Octonion) -> ExactMatrix:
    """m(r, v) = i·[[r·Id, R_v̄], [R_v, −r·Id]] on C^16."""
    ident = ExactMatrix.identity(8).scale(r)
    block = ExactMatrix.block(ident, right_mult_matrix(v.conj()), right_mult_matrix(v), -ident)
    return block.scale(I_UNIT).with_realm("complex-16")


def clifford_rep_check() -> IdentityReport:
    """m(r, v)² = −(r² + ‖v‖²)·Id over the basis pairs and a few mixed ones."""
    samples: List[Tuple[Union[int, Fraction], Octonion]] = [(1, Octonion.zero())]
    samples += [(0, Octonion.unit(a)) for a in range(8)]
    samples += [(Fraction(1, 2), Octonion([1, 0, 2, 0, 0, -1, 0, 3])),
                (-3, Octonion([0, Fraction(2, 3), 0, 0, 5, 0, 1, 0]))]
    ident = ExactMatrix.identity(16)
    checks = []
    for r, v in samples:
        m = clifford_rep_map(r, v)
        expected = ident.scale(-(r * r + v.norm()))
        checks.append(check(f"square[r={r},v={v!r}]", m @ m == expected))
    jd = build_JD()
    checks.append(check("m(1,0)=J09", clifford_rep_map(1, Octonion.zero()) == jd.get(0, 9)))
    checks.append(check("m(0,1)=J01", clifford_rep_map(0, Octonion.unit(0)) == jd.get(0, 1)))
    return IdentityReport.from_checks("clifford-rep-map", checks, metrics={"square_sign": "-(r^2+|v|^2)"})


def jd_structure_check() -> IdentityReport:
    """
    Bracket recovery of J_0β, anti-Hermitian trace-free elements, complex
    linearity after realification, and rank additivity of J^C and the J_0β.
    """
    jd = build_JD()
    jc = build_JC()
    half = Fraction(1, 2)
    checks = []
    for beta in range(1, 9):
        recovered = mat_bracket(jd.get(beta, 9), jd.get(0, 9)).scale(half)
        checks.append(check(f"J0{beta}=½[J{beta}9,J09]", recovered == jd.get(0, beta)))
    for idx, m in jd.elements:
        checks.append(check(f"anti-hermitian[{jd.name(idx)}]", m.conj_transpose() == -m))
        checks.append(check(f"trace-free[{jd.name(idx)}]", m.trace() == 0))
    curly_j = multiplication_by_i(32)
    split = complex_linearity_split([(jd.name(idx), realify(m)) for idx, m in jd.elements], curly_j)
    checks.append(check("complex-linear", len(split["commuting"]) == 45, f"{split['anticommuting'] + split['neither']}"))
    rank_jc = rank_of_family(jc.matrices)
    rank_0 = rank_of_family([jd.get(0, b) for b in range(1, 10)])
    rank_all = rank_of_family(jd.matrices)
    checks.append(check("rank-additivity", (rank_jc, rank_0, rank_all) == (36, 9, 45),
                        f"ranks {rank_jc}, {rank_0}, {rank_all}"))
    from_brackets = build_JC_from_brackets()
    checks.append(check("JC-from-brackets", all(m == jc.get(*idx) for idx, m in from_brackets.elements)))
    return IdentityReport.from_checks("jd-structure", checks, metrics={"dim": rank_all})


def p_basis_split_check() -> IdentityReport:
    """Commuting and anticommuting P_αβ with respect to 𝔍 = P09."""
    p_basis = build_P_basis()
    curly_j = multiplication_by_i(32)
    split = complex_linearity_split(list(zip(p_basis.names, p_basis.matrices)), curly_j)
    expected_anti = [f"P0{b}" for b in range(1, 9)] + [f"P{a}9" for a in range(1, 9)]
    checks = [
        check("P09=J", p_basis.get(0, 9) == curly_j),
        check("commuting-count", len(split["commuting"]) == 29, f"{len(split['commuting'])}"),
        check("anticommuting", sorted(split["anticommuting"]) == sorted(expected_anti), f"{split['anticommuting']}"),
        check("no-mixed", not split["neither"], f"{split['neither']}"),
    ]
    return IdentityReport.from_checks("p-basis-split", checks,
                                      metrics={k: len(v) for k, v in split.items()})
