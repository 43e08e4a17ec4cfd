"""``psfam`` command line.

Exit codes: 0 success, 2 usage or parse error, 3 file error, 4 domain error.
Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import io
from .baselines import METHODS, MemoryGuardError, check_method_cap, density_sweep, group, write_csv
from .diagonalize import build_circuit
from .measure import AngleCountMismatch, TooManyQubits, apply_cut, build_ansatz_state, expectation
from .partition import MAX_QUBITS, BadFamilyId, build_solution
from .pauli import PauliError, parse

EXIT_USAGE, EXIT_IO, EXIT_DOMAIN = 2, 3, 4


class UsageError(Exception):
    pass


class DomainError(Exception):
    pass


def _qubits(text: str) -> int:
    try:
        m = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 1 <= m <= MAX_QUBITS:
        raise argparse.ArgumentTypeError(f"m must be in [1, {MAX_QUBITS}]")
    return m


def _nonneg_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value >= 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _m_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        a, b = int(lo), int(hi if sep else lo)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None
    if not 1 <= a <= b <= MAX_QUBITS:
        raise argparse.ArgumentTypeError(f"need 1 <= A <= B <= {MAX_QUBITS}")
    return range(a, b + 1)


def _methods(text: str) -> list[str]:
    names = [s.strip() for s in text.split(",") if s.strip()]
    if not names:
        raise argparse.ArgumentTypeError("method list is empty")
    bad = [n for n in names if n not in METHODS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown method(s): {', '.join(bad)}")
    return names


def _cuts(text: str) -> list[float]:
    return [_nonneg_float(s) for s in text.split(",") if s.strip()] or [0.0]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="psfam", description="Pauli string family partitioning.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partition", help="print the generating matrix and every family")
    p.add_argument("--m", type=_qubits, required=True)
    p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("lookup", help="family id and members of one Pauli string")
    p.add_argument("--m", type=_qubits, required=True)
    p.add_argument("--pauli", required=True)

    p = sub.add_parser("circuit", help="post-state rotation circuit of one family")
    p.add_argument("--m", type=_qubits, required=True)
    p.add_argument("--family", type=int, required=True)
    p.add_argument("--format", choices=("qasm3", "json"), default="qasm3")

    p = sub.add_parser("group", help="group the strings of a Hamiltonian file")
    p.add_argument("--input", required=True)
    p.add_argument("--method", choices=METHODS, default="dense")
    p.add_argument("--cut", type=_nonneg_float, default=0.0)

    p = sub.add_parser("expect", help="expectation value of a Hamiltonian")
    p.add_argument("--input", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--state")
    src.add_argument("--ansatz")
    p.add_argument("--mode", choices=("exact", "shots"), default="exact")
    p.add_argument("--shots", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--method", choices=("dense", "qwc", "naive"), default="dense")

    p = sub.add_parser("bench", help="family counts, walltime and memory as CSV")
    p.add_argument("--m-range", type=_m_range, required=True)
    p.add_argument("--methods", type=_methods, default=["dense", "gc", "qwc"])
    p.add_argument("--cuts", type=_cuts, default=[0.0])
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", help="CSV path (default: stdout)")
    return parser


def cmd_partition(args) -> None:
    sol = build_solution(args.m)
    if args.json:
        print(io.dumps(sol.to_json()))
    else:
        print(sol.properties())


def cmd_lookup(args) -> None:
    try:
        p = parse(args.pauli, args.m)
    except PauliError as exc:
        raise UsageError(str(exc)) from None
    sol = build_solution(args.m)
    f = sol.lookup_family(p)
    print(f"family {f}")
    print(",".join(sol.family_strings(f)))


def cmd_circuit(args) -> None:
    sol = build_solution(args.m)
    try:
        circuit = build_circuit(sol, args.family)
    except BadFamilyId as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        print(io.dumps(circuit.to_json()))
    else:
        sys.stdout.write(circuit.to_qasm3())


def cmd_group(args) -> None:
    H = apply_cut(io.read_hamiltonian(args.input), args.cut)
    res = group(H, args.method)
    print(io.dumps({"method": args.method, "n_families": res.n_families, "families": res.family_strings()}))
    print(f"method={args.method} m={H.m} strings={len(H)} families={res.n_families}", file=sys.stderr)


def format_ev(value: float) -> str:
    text = f"{value:.12f}"
    return f"{0.0:.12f}" if float(text) == 0 else text


def cmd_expect(args) -> None:
    if args.mode == "shots":
        if args.shots is None or args.shots < 1:
            raise UsageError("--mode shots needs --shots N with N >= 1")
        if args.seed is None:
            raise UsageError("--mode shots needs an explicit --seed")
    H = io.read_hamiltonian(args.input)
    if args.state:
        psi = io.read_state(args.state)
        if psi.shape[0] != 1 << H.m:
            raise DomainError(f"state has {psi.shape[0]} amplitudes, operator acts on {H.m} qubits")
    else:
        psi = build_ansatz_state(io.read_ansatz(args.ansatz), H.m)
    value = expectation(H, psi, method=args.method, mode=args.mode, shots=args.shots, seed=args.seed)
    print(format_ev(value))


def cmd_bench(args) -> None:
    for m in args.m_range:
        for method in args.methods:
            check_method_cap(method, m)
    rows = []
    for m in args.m_range:
        rows += density_sweep(m, args.seed, args.cuts, args.methods)
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            write_csv(rows, fh)
    else:
        write_csv(rows, sys.stdout)


COMMANDS = {
    "partition": cmd_partition,
    "lookup": cmd_lookup,
    "circuit": cmd_circuit,
    "group": cmd_group,
    "expect": cmd_expect,
    "bench": cmd_bench,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"psfam {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (io.FormatError, OSError) as exc:
        print(f"psfam {args.command}: file error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DomainError, MemoryGuardError, TooManyQubits, AngleCountMismatch, ValueError) as exc:
        print(f"psfam {args.command}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return 0


if __name__ == "__main__":
    sys.exit(main())
