"""Grid classification of a two-quantum slice of the feasible region.

Each cell records exact and modified feasibility together with the sign of
flow ``i``'s linear term, which tells whether the ``(.)^+`` term of its
deviation is active.  A midpoint audit then counts pairs of feasible cells
whose midpoint is infeasible, separately for the exact and modified sets.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple

from .bounds import is_feasible_exact, is_feasible_modified
from .errors import GridTooLarge
from .model import SystemSpec

DEFAULT_MAX_CELLS = 10_000_000
DEFAULT_AUDIT_PAIRS = 200_000


@dataclass(frozen=True)
class SweepGrid:
    i: int
    j: int
    lo_i: float
    hi_i: float
    lo_j: float
    hi_j: float
    step: float
    fixed: Optional[Tuple[float, ...]] = None  # quanta for the other flows

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("sweep needs two distinct flows")
        if not self.step > 0:
            raise ValueError(f"step must be positive, got {self.step!r}")
        if not (self.lo_i > 0 and self.lo_j > 0):
            raise ValueError("grid ranges must be positive")

    def axis(self, lo: float, hi: float) -> List[float]:
        if hi < lo:
            return []
        count = math.floor((hi - lo) / self.step + 1e-9) + 1
        return [lo + k * self.step for k in range(count)]

    @property
    def size(self) -> int:
        return len(self.axis(self.lo_i, self.hi_i)) * len(self.axis(self.lo_j, self.hi_j))


class Cell(NamedTuple):
    q_i: float
    q_j: float
    exact_feasible: bool
    modified_feasible: bool
    linear_term_sign: int
    active_branch: str


class Audit(NamedTuple):
    pairs: int
    exact_violations: int
    modified_violations: int
    exhaustive: bool


def parse_grid(text: str, fixed: Optional[Sequence[float]] = None) -> SweepGrid:
    """``"I,J,QI_MIN,QI_MAX,QJ_MIN,QJ_MAX,STEP"`` with 0-based flow indices."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 7:
        raise ValueError("grid must be I,J,QI_MIN,QI_MAX,QJ_MIN,QJ_MAX,STEP")
    i, j = int(parts[0]), int(parts[1])
    lo_i, hi_i, lo_j, hi_j, step = (float(p) for p in parts[2:])
    return SweepGrid(i, j, lo_i, hi_i, lo_j, hi_j, step,
                     None if fixed is None else tuple(float(x) for x in fixed))


def _vector(spec: SystemSpec, grid: SweepGrid, qi: float, qj: float) -> List[float]:
    if spec.n > 2 and (grid.fixed is None or len(grid.fixed) != spec.n):
        raise ValueError(f"sweeping {spec.n} flows needs a full quanta vector for the fixed flows")
    q = list(grid.fixed) if grid.fixed is not None else [1.0] * spec.n
    q[grid.i] = qi
    q[grid.j] = qj
    return q


def classify(spec: SystemSpec, grid: SweepGrid, max_cells: int = DEFAULT_MAX_CELLS) -> List[Cell]:
    if grid.size > max_cells:
        raise GridTooLarge(f"grid has {grid.size} cells, limit is {max_cells}")
    if max(grid.i, grid.j) >= spec.n or min(grid.i, grid.j) < 0:
        raise ValueError(f"flow index out of range for {spec.n} flows")
    flow = spec.flows[grid.i]
    c = spec.capacity
    cells = []
    for qi in grid.axis(grid.lo_i, grid.hi_i):
        for qj in grid.axis(grid.lo_j, grid.hi_j):
            q = _vector(spec, grid, qi, qj)
            k = sum(x for m, x in enumerate(q) if m != grid.i)
            a = qi * (flow.rate - c) / (flow.rate * c) + k / c
            sign = (a > 0) - (a < 0)
            cells.append(Cell(
                qi, qj,
                is_feasible_exact(spec, q),
                is_feasible_modified(spec, q),
                sign,
                "h2" if a > 0 else "h1",
            ))
    return cells


def midpoint_audit(spec: SystemSpec, grid: SweepGrid, cells: Sequence[Cell],
                   max_pairs: int = DEFAULT_AUDIT_PAIRS, seed: int = 0) -> Audit:
    """Count feasible pairs whose midpoint is infeasible.

    All pairs are checked when there are at most ``max_pairs`` of them per
    set; otherwise a seeded random sample of ``max_pairs`` pairs is used.
    """
    counts = []
    exhaustive = True
    pairs_checked = 0
    for key, test in (("exact_feasible", is_feasible_exact),
                      ("modified_feasible", is_feasible_modified)):
        pts = [(c.q_i, c.q_j) for c in cells if getattr(c, key)]
        total = len(pts) * (len(pts) - 1) // 2
        if total <= max_pairs:
            pairs = itertools.combinations(pts, 2)
        else:
            exhaustive = False
            rng = random.Random(seed)
            pairs = (tuple(rng.sample(pts, 2)) for _ in range(max_pairs))
            total = max_pairs
        bad = 0
        for (a_i, a_j), (b_i, b_j) in pairs:
            mid = _vector(spec, grid, 0.5 * (a_i + b_i), 0.5 * (a_j + b_j))
            if not test(spec, mid):
                bad += 1
        counts.append(bad)
        pairs_checked += total
    return Audit(pairs_checked, counts[0], counts[1], exhaustive)


def format_cells(cells: Sequence[Cell], audit: Optional[Audit]) -> str:
    if not cells:
        return ""
    lines = []
    if audit is not None:
        lines.append(
            f"# midpoint audit: pairs={audit.pairs} exact_violations={audit.exact_violations} "
            f"modified_violations={audit.modified_violations} "
            f"mode={'exhaustive' if audit.exhaustive else 'sampled'}"
        )
    lines.append("q_i\tq_j\texact_feasible\tmodified_feasible\tlinear_term_sign\tactive_branch")
    for c in cells:
        lines.append(
            f"{c.q_i!r}\t{c.q_j!r}\t{str(c.exact_feasible).lower()}\t"
            f"{str(c.modified_feasible).lower()}\t{c.linear_term_sign}\t{c.active_branch}"
        )
    return "\n".join(lines) + "\n"
