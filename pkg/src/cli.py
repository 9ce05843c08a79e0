#!/usr/bin/env python3
"""
CLI interface for cliffverify
Runs the verification suites, emits tables and forms, and times the τ4 kernel.
"""

import argparse
import hashlib
import json
import logging
import statistics
import sys
import time
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .clifford_systems import (
    SYSTEM_BUILDERS,
    build_C9_system,
    build_system,
    delta_table_check,
    orthogonality_scan,
    parity_law_check,
    unitary_members_report,
    unitary_obstruction_check,
    verify_clifford_relations,
)
from .config import ENV_VARS_HELP, CliffverifyConfig, create_default_config, get_config, print_config
from .exterior_forms import build_psi_C, build_psi_D, form_digest, form_lines, omega, tau4_with_stats, to_complex_view
from .octonion import MUL_TABLE
from .paper_catalog import (
    GOLDEN_TABLES,
    PHI_DIVISOR,
    compute_phi_spin9,
    convention_fingerprint,
    freeze_phi,
    matrix_lines,
    read_hashes,
    verify_form_engine,
    verify_phi_spin10,
    verify_phi_spin9,
    verify_restriction_identity,
    verify_table,
    verify_theorem_tau,
    write_golden_tables,
)
from .reports import BenchResult, IdentityReport, VerificationReport, timed
from .spin_algebras import (
    bracket_closure_check,
    build_J_triples,
    build_JC,
    build_JD,
    build_P_basis,
    clifford_rep_check,
    iso_check,
    jd_structure_check,
    p_basis_split_check,
    so16_decomposition_check,
)

logger = logging.getLogger(__name__)

SUITES = ("clifford", "lie", "forms", "tables", "theorems", "all")
LIE_CHECKS = ("closure", "iso", "so16", "rep", "structure", "split")
EMIT_TARGETS = ("mul-table", "system", "lie-basis", "form", "golden-all")
LIE_BASES = {"JC": build_JC, "J-triples": build_J_triples, "JD": build_JD, "P": build_P_basis}
FORMS = ("psi-C", "psi-D", "omega", "phi9", "phi10")
WORKLOADS = ("tau4-psiD", "tau4-psiC", "orth-scan-375")

Entry = Tuple[str, Callable[[], IdentityReport]]


class UsageError(Exception):
    """Bad combination of arguments detected after parsing."""


class CliffverifyCLI:
    """Command-line interface for the verification suites."""

    def __init__(self, config: Optional[CliffverifyConfig] = None, golden_dir: Optional[str] = None,
                 workers: Optional[int] = None):
        self.config = config or get_config()
        self.golden_dir = Path(golden_dir or self.config.golden.golden_dir)
        self.workers = self.config.compute.workers if workers is None else workers
        if self.workers < 1:
            raise UsageError(f"--workers must be positive, got {self.workers}")

    # Suites

    def clifford_entries(self, system: Optional[str] = None) -> List[Entry]:
        if system is not None:
            return [(f"clifford-relations[{system}]", lambda: verify_clifford_relations(build_system(system)))]
        entries: List[Entry] = [
            (f"clifford-relations[{name}]", lambda name=name: verify_clifford_relations(build_system(name)))
            for name in SYSTEM_BUILDERS
        ]
        entries += [
            ("parity-law[c9]", lambda: parity_law_check(build_C9_system())),
            ("orthogonality-scan[c9]", lambda: orthogonality_scan(build_C9_system(), workers=self.workers)),
            ("unitary-obstruction", unitary_obstruction_check),
            ("delta-table", delta_table_check),
            ("unitary-members[c9]", unitary_members_report),
        ]
        return entries

    def lie_entries(self, checks: Optional[Sequence[str]] = None) -> List[Entry]:
        by_check: Dict[str, List[Entry]] = {
            "closure": [(f"bracket-closure[{label}]", lambda label=label: bracket_closure_check(LIE_BASES[label]()))
                        for label in ("JC", "JD", "P")],
            "iso": [("iso", iso_check)],
            "so16": [("so16-decomposition", so16_decomposition_check)],
            "rep": [("clifford-rep-map", clifford_rep_check)],
            "structure": [("jd-structure", jd_structure_check)],
            "split": [("p-basis-split", p_basis_split_check)],
        }
        selected = checks or LIE_CHECKS
        return [entry for name in selected for entry in by_check[name]]

    def forms_entries(self) -> List[Entry]:
        return [("form-engine", verify_form_engine)]

    def table_entries(self) -> List[Entry]:
        return [(f"table[{name}]", lambda table=table: verify_table(table, self.golden_dir))
                for name, table in GOLDEN_TABLES.items()]

    def theorem_entries(self) -> List[Entry]:
        return [
            ("theorem-tau", verify_theorem_tau),
            ("phi-spin9", lambda: verify_phi_spin9(self.golden_dir, self.workers)),
            ("phi-spin10", lambda: verify_phi_spin10(self.golden_dir, self.workers)),
            ("restriction-identity", lambda: verify_restriction_identity(self.workers)),
        ]

    def suite_entries(self, suite: str, system: Optional[str] = None,
                      checks: Optional[Sequence[str]] = None) -> List[Entry]:
        if suite == "clifford":
            return self.clifford_entries(system)
        if suite == "lie":
            return self.lie_entries(checks)
        if suite == "forms":
            return self.forms_entries()
        if suite == "tables":
            return self.table_entries()
        if suite == "theorems":
            return self.theorem_entries()
        if suite == "all":
            return (self.clifford_entries() + self.lie_entries() + self.forms_entries()
                    + self.table_entries() + self.theorem_entries())
        raise UsageError(f"Unknown suite: {suite}")

    def run_verify(self, suite: str, system: Optional[str] = None, checks: Optional[Sequence[str]] = None,
                   only: Optional[Sequence[str]] = None) -> VerificationReport:
        """Run a suite (or the named entries of it) and collect the reports in catalog order."""
        entries = self.suite_entries(suite, system, checks)
        if only:
            known = {name for name, _ in entries}
            unknown = [name for name in only if name not in known]
            if unknown:
                raise UsageError(f"Unknown check(s) for suite {suite}: {unknown}; available: {sorted(known)}")
            entries = [(name, run) for name, run in entries if name in only]
        items = []
        for name, run in entries:
            logger.info(f"Running {name}")
            report = timed(run)
            report.name = name
            items.append(report)
        return VerificationReport.build(suite, items, __version__, convention_fingerprint())

    # Emission

    def run_emit(self, target: str, name: Optional[str] = None, complex_view: bool = False,
                 with_phi: bool = False) -> List[str]:
        """Serialized output lines for an emit target."""
        if target == "mul-table":
            return [json.dumps(MUL_TABLE.as_json(), indent=2)]
        if target == "system":
            s = build_system(name or "c9")
            return [line for label, m in zip(s.labels, s.members) for line in matrix_lines(m, s.name(label))]
        if target == "lie-basis":
            label = name or "JC"
            if label not in LIE_BASES:
                raise UsageError(f"Unknown Lie basis: {label}; choose from {sorted(LIE_BASES)}")
            basis = LIE_BASES[label]()
            return [line for idx, m in basis.elements for line in matrix_lines(m, basis.name(idx))]
        if target == "form":
            return self._emit_form(name or "omega", complex_view)
        if target == "golden-all":
            written = write_golden_tables(self.golden_dir)
            frozen = freeze_phi(self.golden_dir, self.workers) if with_phi else {}
            return [json.dumps({"golden_dir": str(self.golden_dir), "files": written, "frozen": frozen})]
        raise UsageError(f"Unknown emit target: {target}")

    def _emit_form(self, name: str, complex_view: bool) -> List[str]:
        if name not in FORMS:
            raise UsageError(f"Unknown form: {name}; choose from {list(FORMS)}")
        if name in ("psi-C", "psi-D"):
            m = build_psi_C() if name == "psi-C" else build_psi_D()
            named = [(f"psi{a + m.first_index}{b + m.first_index}", f) for (a, b), f in m.upper_items()]
        elif name == "omega":
            named = [("omega", omega())]
        elif name == "phi9":
            named = [("phi9", compute_phi_spin9(self.workers))]
        else:
            named = [("phi10", tau4_with_stats(build_psi_D(), self.workers)[0])]
        lines: List[str] = []
        for form_name, f in named:
            lines.extend(to_complex_view(f).lines(form_name) if complex_view else form_lines(f, form_name))
        return lines

    # Benchmarks

    def run_bench(self, workload: str, repetitions: int = 3) -> BenchResult:
        """Time a workload; τ4 outputs must match the frozen golden hash, and a missing hash fails."""
        if workload not in WORKLOADS:
            raise UsageError(f"Unknown workload: {workload}")
        if repetitions < 1:
            raise UsageError(f"--repetitions must be positive, got {repetitions}")
        times: List[float] = []
        output_hash = ""
        peak = 0
        metrics: Dict[str, object] = {}
        golden_key = {"tau4-psiD": "phi10", "tau4-psiC": "phi9"}.get(workload)
        for rep in range(repetitions):
            start = time.perf_counter()
            if workload == "orth-scan-375":
                report = orthogonality_scan(build_C9_system(), workers=self.workers)
                elapsed = time.perf_counter() - start
                payload = json.dumps(report.metrics, sort_keys=True)
                output_hash = hashlib.sha256(payload.encode("utf-8")).hexdigest()
                peak = report.metrics["total"]
                metrics = {"rank": report.metrics["rank"], "status": report.status}
            else:
                psi = build_psi_D() if workload == "tau4-psiD" else build_psi_C()
                form, stats = tau4_with_stats(psi, self.workers)
                if workload == "tau4-psiC":
                    form = form.divide_exact(PHI_DIVISOR)
                elapsed = time.perf_counter() - start
                output_hash = form_digest(form, golden_key)
                peak = max(peak, stats["peak_terms"])
                metrics = {"terms": len(form), "quadruples": stats["quadruples"]}
            times.append(elapsed * 1000.0)
            logger.info(f"{workload} repetition {rep + 1}: {times[-1]:.1f} ms")
        golden_hash = read_hashes(self.golden_dir).get(golden_key) if golden_key else None
        if golden_key and golden_hash is None:
            logger.error(f"No frozen {golden_key} hash in {self.golden_dir}; run 'cliffverify emit golden-all --with-phi'")
        return BenchResult(
            workload=workload,
            repetitions=repetitions,
            min_ms=round(min(times), 3),
            median_ms=round(statistics.median(times), 3),
            peak_terms=peak,
            workers=self.workers,
            output_hash=output_hash,
            golden_hash=golden_hash,
            hash_matches=None if golden_key is None else golden_hash == output_hash,
            metrics=metrics,
        )


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser."""
    parser = argparse.ArgumentParser(
        prog="cliffverify",
        description="Exact verification of the Spin(9)/Spin(10) tables and canonical forms",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Run every suite and print a JSON report
  cliffverify verify all

  # One theorem, pretty-printed
  cliffverify verify theorems --only theorem-tau --format text

  # Relations of the ten-member system on R^32
  cliffverify verify clifford --system c9

  # Dump the Kähler form of multiplication by i
  cliffverify emit form --name omega

  # Regenerate the golden directory and freeze the canonical 8-forms
  cliffverify emit golden-all --with-phi --workers 8

  # Time τ4(ψ^D) with 8 workers
  cliffverify bench tau4-psiD --workers 8

  # Show current configuration
  cliffverify config --show
        """
    )
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--workers', '-w', type=int, help='Worker processes for τ4 and scans')
    common.add_argument('--golden-dir', help='Golden table directory (overrides CLIFFVERIFY_GOLDEN_DIR)')
    common.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'], help='Log level (stderr)')

    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    # Verify command
    verify_parser = subparsers.add_parser('verify', parents=[common], help='Run a verification suite')
    verify_parser.add_argument('suite', choices=SUITES, help='Suite to run')
    verify_parser.add_argument('--system', choices=sorted(SYSTEM_BUILDERS), help='Clifford system (clifford suite)')
    verify_parser.add_argument('--check', action='append', choices=LIE_CHECKS, help='Lie check (lie suite)')
    verify_parser.add_argument('--only', action='append', help='Run only the named catalog entry')
    verify_parser.add_argument('--format', '-f', choices=['json', 'text'], default='json', help='Output format')

    # Emit command
    emit_parser = subparsers.add_parser('emit', parents=[common], help='Serialize tables, systems and forms')
    emit_parser.add_argument('target', choices=EMIT_TARGETS, help='What to emit')
    emit_parser.add_argument('--name', '-n', help='System, Lie basis or form name')
    emit_parser.add_argument('--complex', action='store_true', help='Emit forms in dz/dz̄ blades')
    emit_parser.add_argument('--with-phi', action='store_true', help='golden-all: also freeze phi9/phi10')

    # Bench command
    bench_parser = subparsers.add_parser('bench', parents=[common], help='Time a workload')
    bench_parser.add_argument('workload', choices=WORKLOADS, help='Workload to time')
    bench_parser.add_argument('--repetitions', '-r', type=int, default=3, help='Repetitions')

    # Config command
    config_parser = subparsers.add_parser('config', help='Manage configuration')
    config_parser.add_argument('--show', action='store_true', help='Show current config')
    config_parser.add_argument('--create-default', action='store_true', help='Create default config file')

    return parser


def _configure_logging(level: str) -> None:
    logging.basicConfig(
        stream=sys.stderr,
        level=getattr(logging, level.upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI entry point; returns the exit code."""
    parser = create_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return 2

    # Config warnings must already go through the configured handler
    _configure_logging(getattr(args, 'log_level', None) or 'WARNING')

    try:
        if args.command == 'config':
            if args.create_default:
                create_default_config()
            else:
                print_config()
                print(ENV_VARS_HELP)
            return 0

        config = get_config()
        if not args.log_level:
            _configure_logging(config.logging.level)
        cli = CliffverifyCLI(config, golden_dir=args.golden_dir, workers=args.workers)

        if args.command == 'verify':
            report = cli.run_verify(args.suite, system=args.system, checks=args.check, only=args.only)
            if args.format == 'json':
                print(report.model_dump_json(indent=2))
            else:
                print(report.render_text())
            return 0 if report.passed else 1

        if args.command == 'emit':
            for line in cli.run_emit(args.target, name=args.name, complex_view=args.complex,
                                     with_phi=args.with_phi):
                print(line)
            return 0

        if args.command == 'bench':
            result = cli.run_bench(args.workload, args.repetitions)
            print(result.model_dump_json(indent=2))
            return 1 if result.hash_matches is False else 0

    except KeyboardInterrupt:
        print("\n⚠️ Operation cancelled by user", file=sys.stderr)
        return 1
    except UsageError as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return 2

    return 2


def cli_entry_point():
    """Entry point for CLI script."""
    sys.exit(main())


if __name__ == "__main__":
    cli_entry_point()
