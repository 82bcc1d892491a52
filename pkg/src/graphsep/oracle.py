"""Dense cross-checks of the stabilizer-side computations.

For a graph-diagonal state (or just a graph, using random weights) and
every bipartition this compares the exact transfer-matrix image with the
graph-basis diagonal of the dense partial transpose, checks that the
dense partial transpose stays diagonal in the graph basis, compares the
exact and dense PPT decisions and the cut rank with the Schmidt rank.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import dense as D
from . import pptmix
from .graphs import Graph, all_bipartitions, cut_rank
from .states import GraphDiagonalState

TOLERANCE = 1e-10


@dataclass
class OracleReport:
    n: int
    max_deviation: float = 0.0
    max_off_diagonal: float = 0.0
    ppt_disagreements: list = field(default_factory=list)
    rank_mismatches: list = field(default_factory=list)
    witness_checks: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.max_deviation < TOLERANCE and self.max_off_diagonal < TOLERANCE
                and not self.ppt_disagreements and not self.rank_mismatches and not self.mismatches
                and all(w["valid"] for w in self.witness_checks))

    def as_dict(self) -> dict:
        return {"n": self.n, "ok": self.ok, "max_deviation": self.max_deviation,
                "max_off_diagonal": self.max_off_diagonal,
                "ppt_disagreements": self.ppt_disagreements, "rank_mismatches": self.rank_mismatches,
                "mismatches": self.mismatches, "witnesses": self.witness_checks}


def random_state(g: Graph, rng: random.Random) -> GraphDiagonalState:
    w = [rng.randint(0, 50) for _ in range(1 << g.n)]
    w[rng.randrange(len(w))] += 1
    total = sum(w)
    return GraphDiagonalState(g, tuple(Fraction(x, total) for x in w))


def crosscheck(target, witnesses=(), seed: int = 0, transfer=None) -> OracleReport:
    """Run the dense comparisons for a state or a graph.

    ``transfer`` replaces :func:`pptmix.transfer_matrix` (a test hook used
    to confirm that tampering is detected).
    """
    if isinstance(target, Graph):
        s = random_state(target, random.Random(seed))
    else:
        s = target
    g = s.graph
    if g.n > D.STATE_MAX_QUBITS:
        raise ValueError(f"dense cross-check is limited to n <= {D.STATE_MAX_QUBITS} (got {g.n})")
    transfer = transfer or pptmix.transfer_matrix
    report = OracleReport(g.n)
    rho = D.state_to_dense(s)
    v = D.graph_basis_matrix(g)
    for m in all_bipartitions(g.n):
        pt = D.partial_transpose(rho, m)
        view = v.T @ pt @ v
        image = transfer(g, m).apply(s.weights)
        dev = max(abs(float(a) - float(view[j, j].real)) for j, a in enumerate(image))
        off = float(abs(view - _diag(view)).max())
        report.max_deviation = max(report.max_deviation, dev)
        report.max_off_diagonal = max(report.max_off_diagonal, off)
        if dev >= TOLERANCE:
            report.mismatches.append(m.label())
        exact_ppt = all(x >= 0 for x in image)
        dense_ppt = D.min_eigenvalue(pt) >= -D.PPT_TOL
        if exact_ppt != dense_ppt:
            report.ppt_disagreements.append(m.label())
        r = cut_rank(g, m)
        if 2 ** r != D.schmidt_rank(g, m):
            report.rank_mismatches.append(m.label())
    for w in witnesses:
        from .witnesses import validate_witness

        rep = validate_witness(w, dense=True)
        report.witness_checks.append({"name": w.name, "valid": rep.valid, "kind": rep.kind,
                                      "max_deviation": rep.max_dense_deviation,
                                      "dense_min_eigenvalue": rep.dense_min_eigenvalue})
        report.max_deviation = max(report.max_deviation, rep.max_dense_deviation or 0.0)
    if math.isnan(report.max_deviation):  # pragma: no cover - defensive
        report.mismatches.append("nan")
    return report


def _diag(a):
    import numpy as np

    return np.diag(np.diag(a))
