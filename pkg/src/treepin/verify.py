"""Independent checks of a communication scheme against a source model.

Everything here works from the communication matrix, the owner list and the
key columns alone; synthesis byproducts such as the certificate are never
consulted, so these checks are meaningful for hand-written schemes too.

All quantities are ranks over the extension field GF(q**n), i.e. symbol
counts per block of n base realisations.  One symbol dimension corresponds
to n*log2(q) bits per block, or log2(q) bits per realisation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .capacity import capacity_report
from .falinalg import FMatrix, in_col_span, lift, rank
from .model import TreePinSource, Wiretapper
from .scheme import CommScheme

__all__ = [
    "check_perfect_omniscience",
    "check_perfect_alignment",
    "leakage_symbol_dims",
    "leakage_bits_per_realization",
    "check_key_secrecy",
    "VerifyReport",
    "verify_scheme",
]


def _lifted_wiretap(scheme: CommScheme, wiretapper: Wiretapper) -> FMatrix:
    return lift(wiretapper.matrix, scheme.ext_ctx)


def check_perfect_omniscience(
    scheme: CommScheme, source: TreePinSource
) -> dict[int, bool]:
    """Can every node reconstruct the whole block vector from the
    communication plus its own observation?  True per node iff the
    communication columns and the node's coordinate selectors span
    everything."""
    f = scheme.comm_matrix
    d = source.base_dim
    out = {}
    for v in range(source.vertex_count):
        sel = source.node_view(v).selector(scheme.ext_ctx)
        out[v] = rank(f.hstack(sel)) == d
    return out


def check_perfect_alignment(scheme: CommScheme, wiretapper: Wiretapper) -> bool:
    """Does the eavesdropper's view lie inside the communication span?
    When it does, listening to the channel tells the eavesdropper nothing
    it could not already compute."""
    if wiretapper.dim == 0:
        return True
    return in_col_span(scheme.comm_matrix, _lifted_wiretap(scheme, wiretapper))


def leakage_symbol_dims(scheme: CommScheme, wiretapper: Wiretapper) -> int:
    """Extension-field dimensions the communication reveals beyond what the
    eavesdropper already observes: rank([F | W]) - rank(W)."""
    f = scheme.comm_matrix
    if wiretapper.dim == 0:
        return rank(f)
    wl = _lifted_wiretap(scheme, wiretapper)
    return rank(f.hstack(wl)) - wiretapper.dim


def leakage_bits_per_realization(
    scheme: CommScheme, wiretapper: Wiretapper
) -> float:
    return leakage_symbol_dims(scheme, wiretapper) * math.log2(scheme.ext_ctx.q)


def check_key_secrecy(scheme: CommScheme, wiretapper: Wiretapper) -> bool:
    """Is the key independent of communication and wiretap view combined?
    Holds iff the key columns add full extra rank on top of [F | W]."""
    if scheme.key is None:
        return False
    f = scheme.comm_matrix
    joint = (
        f if wiretapper.dim == 0 else f.hstack(_lifted_wiretap(scheme, wiretapper))
    )
    return rank(joint.hstack(scheme.key.matrix)) == rank(joint) + scheme.s


@dataclass(frozen=True)
class VerifyReport:
    omniscient: dict[int, bool]
    aligned: bool
    key_secret: bool
    leakage_dims: int
    optimal_leakage_dims: int
    key_dims: int
    optimal_key_dims: int

    @property
    def leakage_optimal(self) -> bool:
        return self.leakage_dims == self.optimal_leakage_dims

    @property
    def all_pass(self) -> bool:
        return (
            all(self.omniscient.values())
            and self.aligned
            and self.key_secret
            and self.leakage_optimal
        )


def verify_scheme(
    scheme: CommScheme, source: TreePinSource, wiretapper: Wiretapper
) -> VerifyReport:
    """Full audit: omniscience at every node, wiretap alignment, key
    secrecy, and leakage matched against the minimum achievable."""
    report = capacity_report(source, wiretapper)
    return VerifyReport(
        omniscient=check_perfect_omniscience(scheme, source),
        aligned=check_perfect_alignment(scheme, wiretapper),
        key_secret=check_key_secrecy(scheme, wiretapper),
        leakage_dims=leakage_symbol_dims(scheme, wiretapper),
        optimal_leakage_dims=report.rl_dims,
        key_dims=scheme.s if scheme.key is not None else 0,
        optimal_key_dims=report.cw_dims,
    )
