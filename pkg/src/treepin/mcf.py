"""Maximal common functions of jointly distributed linear sources.

For two linear functions Y1 = X M1 and Y2 = X M2 of a uniform base vector X,
the finest function computable from either observation alone is itself
linear: X Mg where col(Mg) = col(M1) intersect col(M2).  Its entropy is
dim * log2(q) bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .falinalg import FMatrix, col_space_intersect
from .model import TreePinSource, Wiretapper

__all__ = ["LinearMcf", "mcf_linear", "mcf_edge_wiretap"]


@dataclass(frozen=True)
class LinearMcf:
    """A common function presented by a column basis of its functional."""

    matrix: FMatrix

    @property
    def dim(self) -> int:
        return self.matrix.cols

    @property
    def entropy_bits(self) -> float:
        return self.dim * math.log2(self.matrix.ctx.q)


def mcf_linear(m1: FMatrix, m2: FMatrix) -> LinearMcf:
    """Maximal common function of X m1 and X m2, X uniform."""
    return LinearMcf(col_space_intersect(m1, m2))


def mcf_edge_wiretap(
    source: TreePinSource, wiretapper: Wiretapper, edge_id: int
) -> LinearMcf:
    """Common part of one edge's symbols and the eavesdropper's view."""
    if wiretapper.rows != source.base_dim:
        raise ValueError("wiretap matrix does not match the source dimension")
    selector = source.edge_block_selector(edge_id)
    return mcf_linear(selector, wiretapper.matrix)
