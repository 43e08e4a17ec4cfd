"""Gate lists and their JSON / OpenQASM 3 serializations.

``uy`` is the single-qubit unitary ``(1 + i Y) / sqrt(2)``, which equals
``ry(-pi/2)`` exactly; ``uydg`` is its inverse ``ry(pi/2)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple

CLIFFORD_GATES = frozenset({"cx", "s", "uy", "uydg"})
ALL_GATES = frozenset({"cx", "cz", "s", "h", "uy", "uydg", "ry", "rz"})
_ARITY = {"cx": 2, "cz": 2, "s": 1, "h": 1, "uy": 1, "uydg": 1, "ry": 1, "rz": 1}
_PARAMETRIC = frozenset({"ry", "rz"})


class UnknownGate(ValueError):
    pass


class Gate(NamedTuple):
    name: str
    qubits: tuple[int, ...]
    param: float | None = None


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list on ``m`` qubits; qubit 0 is the leftmost string position."""

    m: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self) -> None:
        for g in self.gates:
            if g.name not in ALL_GATES:
                raise UnknownGate(g.name)
            if len(g.qubits) != _ARITY[g.name]:
                raise ValueError(f"{g.name} acts on {_ARITY[g.name]} qubit(s), got {g.qubits}")
            if any(not 0 <= q < self.m for q in g.qubits):
                raise ValueError(f"qubit index out of range in {g}")
            if len(set(g.qubits)) != len(g.qubits):
                raise ValueError(f"repeated qubit in {g}")
            if (g.param is None) == (g.name in _PARAMETRIC):
                raise ValueError(f"bad parameter for {g}")

    def __len__(self) -> int:
        return len(self.gates)

    def __add__(self, other: Circuit) -> Circuit:
        if other.m != self.m:
            raise ValueError("qubit counts differ")
        return Circuit(self.m, self.gates + other.gates)

    def count(self, name: str | None = None) -> int:
        if name is None:
            return len(self.gates)
        return sum(1 for g in self.gates if g.name == name)

    def depth(self) -> int:
        level = [0] * self.m
        for g in self.gates:
            d = max(level[q] for q in g.qubits) + 1
            for q in g.qubits:
                level[q] = d
        return max(level, default=0)

    def to_json(self) -> list[dict]:
        out = []
        for g in self.gates:
            item: dict = {"gate": g.name, "q": list(g.qubits)}
            if g.param is not None:
                item["theta"] = g.param
            out.append(item)
        return out

    @classmethod
    def from_json(cls, m: int, data: Iterable[dict]) -> Circuit:
        gates = []
        for item in data:
            name = item["gate"]
            if name not in ALL_GATES:
                raise UnknownGate(name)
            gates.append(Gate(name, tuple(int(q) for q in item["q"]), item.get("theta")))
        return cls(m, tuple(gates))

    def to_qasm3(self) -> str:
        lines = ["OPENQASM 3.0;", 'include "stdgates.inc";', f"qubit[{self.m}] q;"]
        for g in self.gates:
            args = ", ".join(f"q[{q}]" for q in g.qubits)
            if g.name == "uy":
                lines.append(f"ry(-pi/2) {args};")
            elif g.name == "uydg":
                lines.append(f"ry(pi/2) {args};")
            elif g.param is not None:
                lines.append(f"{g.name}({g.param!r}) {args};")
            else:
                lines.append(f"{g.name} {args};")
        return "\n".join(lines) + "\n"


_QASM_STMT = re.compile(
    r"^(?P<name>[a-z]+)(?:\((?P<param>[^)]*)\))?\s+(?P<args>q\[\d+\](?:\s*,\s*q\[\d+\])*);$"
)


def _angle(text: str) -> float:
    text = text.replace(" ", "")
    try:
        return float(text)
    except ValueError:
        pass
    match = re.fullmatch(r"(-?)pi(?:/([0-9.]+))?", text)
    if not match:
        raise ValueError(f"unsupported angle expression {text!r}")
    value = math.pi / float(match[2] or 1)
    return -value if match[1] else value


def from_qasm3(text: str) -> Circuit:
    """Parse the subset of OpenQASM 3 written by :meth:`Circuit.to_qasm3`.

    ``ry(-pi/2)`` and ``ry(pi/2)`` are read back as ``uy`` / ``uydg``.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("//")]
    if not lines or lines[0] != "OPENQASM 3.0;":
        raise ValueError("missing OPENQASM 3.0 header")
    m = None
    gates = []
    for ln in lines[1:]:
        if ln.startswith("include "):
            continue
        decl = re.fullmatch(r"qubit\[(\d+)\]\s+q;", ln)
        if decl:
            m = int(decl.group(1))
            continue
        stmt = _QASM_STMT.match(ln)
        if not stmt or m is None:
            raise ValueError(f"cannot parse statement: {ln!r}")
        name, param = stmt["name"], stmt["param"]
        qubits = tuple(int(q) for q in re.findall(r"q\[(\d+)\]", stmt["args"]))
        if name == "ry" and param in ("-pi/2", "pi/2"):
            gates.append(Gate("uy" if param == "-pi/2" else "uydg", qubits))
        elif param is not None:
            gates.append(Gate(name, qubits, _angle(param)))
        else:
            gates.append(Gate(name, qubits))
    if m is None:
        raise ValueError("missing qubit declaration")
    return Circuit(m, tuple(gates))
