"""Graph-coloring baselines and the density / scaling benchmarks.

``greedy_color`` builds the conflict graph (pairs that do not commute under
the chosen relation) as a packed bit matrix and colors it Largest First:
vertices by descending degree, ties by ascending label ``x * 2^m + z``, each
taking the smallest color not used by a neighbor.
"""

from __future__ import annotations

import csv
import os
import time
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .measure import apply_cut, pauli_decompose, random_hermitian, DECOMPOSE_CAP
from .partition import MAX_QUBITS, build_solution, family_table, group_operator, Solution
from .pauli import PauliString, WeightedPauliSum

METHODS = ("dense", "gc", "naive", "qwc")
DEFAULT_MAX_ADJ_BYTES = 2 << 30
GRAPH_MAX_QUBITS = 6  # fully dense gc / qwc benchmarks stop here
CSV_HEADER = ("method", "m", "density_pct", "n_strings", "n_families", "walltime_s", "memory_proxy_bytes")
_CHUNK = 256


class MemoryGuardError(MemoryError):
    pass


@dataclass
class GroupingResult:
    method: str
    families: list[list[PauliString]]
    walltime: float = 0.0
    peak_adjacency_bits: int = 0
    memory_proxy_bytes: int = 0

    @property
    def n_families(self) -> int:
        return len(self.families)

    def family_strings(self) -> list[list[str]]:
        return [[str(p) for p in fam] for fam in self.families]


def max_adjacency_bytes() -> int:
    """Guard for the packed conflict matrix; ``PSFAM_MAX_ADJ_BYTES`` overrides the 2 GiB default."""
    env = os.environ.get("PSFAM_MAX_ADJ_BYTES")
    return int(env) if env else DEFAULT_MAX_ADJ_BYTES


def adjacency_nbytes(n: int) -> int:
    return n * ((n + 7) // 8)


def _conflicts(x: np.ndarray, z: np.ndarray, lo: int, hi: int, relation: str) -> np.ndarray:
    xi, zi = x[lo:hi, None], z[lo:hi, None]
    if relation == "gc":
        odd = (np.bitwise_count(xi & z) + np.bitwise_count(zi & x)) & 1
        return odd.astype(bool)
    overlap = (xi | zi) & (x | z)
    return (overlap & ((xi ^ x) | (zi ^ z))) != 0


def conflict_matrix(
    strings: Sequence[PauliString], relation: str, max_bytes: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Packed conflict rows (``n x ceil(n/8)`` uint8) and vertex degrees."""
    if relation not in ("gc", "qwc"):
        raise ValueError(f"unknown relation {relation!r}")
    n = len(strings)
    limit = max_adjacency_bytes() if max_bytes is None else max_bytes
    if adjacency_nbytes(n) > limit:
        raise MemoryGuardError(
            f"adjacency for {n} strings needs {adjacency_nbytes(n)} bytes, cap is {limit}"
        )
    x = np.fromiter((p.x for p in strings), dtype=np.int64, count=n)
    z = np.fromiter((p.z for p in strings), dtype=np.int64, count=n)
    packed = np.empty((n, (n + 7) // 8), dtype=np.uint8)
    degree = np.empty(n, dtype=np.int64)
    for lo in range(0, n, _CHUNK):
        hi = min(lo + _CHUNK, n)
        rows = _conflicts(x, z, lo, hi, relation)
        degree[lo:hi] = rows.sum(axis=1)
        packed[lo:hi] = np.packbits(rows, axis=1)
    return packed, degree


def greedy_color(
    strings: Sequence[PauliString], relation: str, max_bytes: int | None = None
) -> GroupingResult:
    """Largest First coloring of the non-commutation graph; colors become families."""
    strings = list(strings)
    if not strings:
        raise ValueError("nothing to color")
    m = strings[0].m
    if any(p.m != m for p in strings):
        raise ValueError("strings have inconsistent qubit counts")
    if len(set(strings)) != len(strings):
        raise ValueError("duplicate strings")
    start = time.perf_counter()
    adj, degree = conflict_matrix(strings, relation, max_bytes)
    n, width = adj.shape
    labels = np.fromiter((p.label for p in strings), dtype=np.int64, count=n)
    order = np.lexsort((labels, -degree))

    masks = np.zeros((16, width), dtype=np.uint8)
    members: list[list[int]] = []
    for v in order:
        k = len(members)
        busy = (masks[:k] & adj[v]).any(axis=1)
        free = np.flatnonzero(~busy)
        c = int(free[0]) if free.size else k
        if c == k:
            if k == len(masks):
                masks = np.concatenate([masks, np.zeros_like(masks)])
            members.append([])
        members[c].append(int(v))
        masks[c, v >> 3] |= np.uint8(0x80 >> (v & 7))
    elapsed = time.perf_counter() - start
    return GroupingResult(
        relation,
        [[strings[v] for v in fam] for fam in members],
        elapsed,
        peak_adjacency_bits=adj.size * 8,
        memory_proxy_bytes=adj.nbytes,
    )


def dense_memory_bytes(sol: Solution) -> int:
    """Bytes of the full family table plus the cached solution tables."""
    x, z = family_table(sol)
    return x.nbytes + z.nbytes + sol.table_nbytes()


def group(
    H: WeightedPauliSum | Sequence[PauliString],
    method: str,
    sol: Solution | None = None,
    max_bytes: int | None = None,
) -> GroupingResult:
    """Group the strings of ``H`` with one of ``dense``, ``qwc``, ``gc`` or ``naive``."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if isinstance(H, WeightedPauliSum):
        m, strings = H.m, H.strings()
    else:
        strings = list(H)
        m = strings[0].m if strings else 0
        H = WeightedPauliSum(m, [(1.0, p) for p in strings]) if strings else WeightedPauliSum(1)
    if not strings:
        return GroupingResult(method, [])
    if method == "naive":
        return GroupingResult(method, [[p] for p in strings])
    if method in ("qwc", "gc"):
        return greedy_color(strings, method, max_bytes)
    start = time.perf_counter()
    sol = sol or build_solution(m)
    groups = group_operator(sol, H)
    elapsed = time.perf_counter() - start
    return GroupingResult(method, [[p for _, p in terms] for terms in groups.values()], elapsed)


# -- benchmarks --------------------------------------------------------------


class BenchRow(NamedTuple):
    method: str
    m: int
    density_pct: float
    n_strings: int
    n_families: int
    walltime_s: float
    memory_proxy_bytes: int
    cut: float = 0.0


def check_method_cap(method: str, m: int) -> None:
    """Fully dense graph baselines are capped at ``GRAPH_MAX_QUBITS`` qubits."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if method in ("gc", "qwc") and m > GRAPH_MAX_QUBITS:
        raise MemoryGuardError(f"{method} benchmarks are limited to m <= {GRAPH_MAX_QUBITS}, got m={m}")
    if not 1 <= m <= MAX_QUBITS:
        raise ValueError(f"m must be in [1, {MAX_QUBITS}]")


def random_dense_operator(m: int, seed) -> WeightedPauliSum:
    """Every non-identity string with a seeded standard normal coefficient."""
    rng = np.random.default_rng(seed)
    N = 1 << m
    coeffs = rng.standard_normal((N, N))
    coeffs[0, 0] = 0.0
    terms = [(float(coeffs[x, z]), PauliString(x, z, m)) for x in range(N) for z in range(N) if x or z]
    return WeightedPauliSum(m, terms)


def bench_operator(m: int, seed) -> WeightedPauliSum:
    """Decomposed random Hermitian up to the decomposition cap, random coefficients beyond."""
    if m <= DECOMPOSE_CAP:
        return pauli_decompose(random_hermitian(m, seed))
    return random_dense_operator(m, seed)


def _row(method: str, m: int, cut: float, H: WeightedPauliSum, sol: Solution | None) -> BenchRow:
    total = (1 << (2 * m)) - 1
    res = group(H, method, sol=sol)
    if method == "dense":
        memory = dense_memory_bytes(sol) if sol is not None else 0
    else:
        memory = res.memory_proxy_bytes
    return BenchRow(method, m, 100.0 * len(H) / total, len(H), res.n_families, res.walltime, memory, cut)


def density_sweep(
    m: int, seed, cut_grid: Iterable[float], methods: Sequence[str] = ("dense", "gc", "qwc")
) -> list[BenchRow]:
    """Group one random Hermitian after each cut; rows ordered by (cut, method)."""
    methods = sorted(set(methods))
    for method in methods:
        check_method_cap(method, m)
    H = bench_operator(m, seed)
    sol = build_solution(m) if "dense" in methods else None
    rows = []
    for cut in sorted(set(float(c) for c in cut_grid)):
        Hc = apply_cut(H, cut)
        rows += [_row(method, m, cut, Hc, sol) for method in methods]
    return rows


def quantile_cuts(H: WeightedPauliSum, densities: Iterable[float]) -> list[float]:
    """Tolerances leaving roughly the requested fraction (0..1] of the terms."""
    mags = np.sort(np.abs([c for c, _ in H.terms]))[::-1]
    cuts = []
    for d in densities:
        keep = int(round(d * len(mags)))
        if keep >= len(mags):
            cuts.append(0.0)
        elif keep == 0:
            cuts.append(float("inf"))
        else:
            cuts.append(float(mags[keep - 1]))
    return cuts


def scaling_bench(m_range: Iterable[int], method: str, seed=0, repeats: int = 1) -> list[BenchRow]:
    """Time grouping of a fully dense operator for each ``m``.

    Dense timing covers solution construction plus grouping; the memory proxy
    is solution-table bytes for dense and packed adjacency bytes for gc/qwc.
    """
    rows = []
    for m in m_range:
        check_method_cap(method, m)
        H = random_dense_operator(m, seed)
        best = None
        for _ in range(max(1, repeats)):
            if method == "dense":
                start = time.perf_counter()
                sol = build_solution(m)
                res = group(H, "dense", sol=sol)
                res.walltime = time.perf_counter() - start
                res.memory_proxy_bytes = dense_memory_bytes(sol)
            else:
                res = group(H, method)
            if best is None or res.walltime < best.walltime:
                best = res
        rows.append(BenchRow(method, m, 100.0, len(H), best.n_families, best.walltime, best.memory_proxy_bytes))
    return rows


def sort_rows(rows: Iterable[BenchRow]) -> list[BenchRow]:
    return sorted(rows, key=lambda r: (r.m, r.cut, r.method))


def write_csv(rows: Iterable[BenchRow], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in sort_rows(rows):
        writer.writerow([r.method, r.m, f"{r.density_pct:.6f}", r.n_strings, r.n_families, f"{r.walltime_s:.6g}", r.memory_proxy_bytes])
