"""Brute-force ground truth for the analytic fast paths.

Everything in this module enumerates the full base-vector space F_q**D and
counts: no sampling, no rank shortcuts.  Hard budgets keep the enumeration
honest; callers that want bigger instances get a BudgetError, not a silently
subsampled answer.

Entropies are assembled from exact integer counts.  For a linear map the
fibers are cosets of the kernel, so every image has the same number of
preimages and the entropy is log2 of an integer; comparing against
``math.log2(q**dim)`` is then a bit-exact float comparison, not a tolerance
check.  Non-uniform label distributions (possible for component labels of
arbitrary pairs) fall back to the exact rational formula
``log2(total) - sum(c*log2 c)/total``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .falinalg import FMatrix

__all__ = [
    "BudgetError",
    "ENTROPY_BUDGET",
    "MCF_BUDGET",
    "entropy_exhaustive",
    "McfExhaustive",
    "mcf_exhaustive",
    "cond_mutual_info_exhaustive",
    "detform_property_check",
    "split_source_property_check",
]


class BudgetError(RuntimeError):
    """The requested enumeration exceeds the hard size cap."""


ENTROPY_BUDGET = 2**18
MCF_BUDGET = 2**14
_DETFORM_BUDGET = 2**16


def _base_code_matrix(m: FMatrix) -> np.ndarray:
    if m.ctx.n != 1:
        raise ValueError(
            "exhaustive oracles work over the base field; expand extension "
            "matrices to base coordinates first"
        )
    return np.array(m.to_code_rows(), dtype=np.int64).reshape(m.rows, m.cols)


def _all_vectors(q: int, dim: int) -> np.ndarray:
    """(q**dim, dim) array of all base vectors, coordinate j = digit j."""
    idx = np.arange(q**dim, dtype=np.int64)
    powers = q ** np.arange(dim, dtype=np.int64)
    return (idx[:, None] // powers[None, :]) % q


def _image_labels(
    vectors: np.ndarray, m: np.ndarray, q: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Map every base vector through m and label the distinct image rows.

    Returns (labels, counts, values): labels[i] in [0, k) identifies the
    image of vector i, counts[j] is the fiber size of value j, values[j]
    is that value's coordinate row.  Rows are packed into single base-q
    integers when they fit in an int64; wider images fall back to row-wise
    uniqueness.
    """
    n, cols = vectors.shape[0], m.shape[1]
    if cols == 0:
        return (
            np.zeros(n, dtype=np.int64),
            np.array([n], dtype=np.int64),
            np.zeros((1, 0), dtype=np.int64),
        )
    img = (vectors @ m) % q
    if q**cols <= 2**62:
        powers = q ** np.arange(cols, dtype=np.int64)
        packed = img @ powers
        uniq, inverse, counts = np.unique(
            packed, return_inverse=True, return_counts=True
        )
        values = (uniq[:, None] // powers[None, :]) % q
    else:
        values, inverse, counts = np.unique(
            img, axis=0, return_inverse=True, return_counts=True
        )
    return inverse.reshape(n), counts, values


def _entropy_from_counts(counts: np.ndarray, total: int) -> float:
    counts = np.asarray(counts, dtype=np.int64)
    if np.all(counts == counts[0]):
        return math.log2(len(counts))
    return math.log2(total) - float(
        sum(int(c) * math.log2(int(c)) for c in counts) / total
    )


def entropy_exhaustive(m: FMatrix, q: int, budget: int = ENTROPY_BUDGET) -> float:
    """Shannon entropy (bits) of X @ m for uniform X, by full enumeration."""
    if m.ctx.q != q:
        raise ValueError("field mismatch")
    total = q**m.rows
    if total > budget:
        raise BudgetError(
            f"entropy enumeration needs {total} vectors, budget is {budget}"
        )
    vectors = _all_vectors(q, m.rows)
    _, counts, _ = _image_labels(vectors, _base_code_matrix(m), q)
    return _entropy_from_counts(counts, total)


@dataclass(frozen=True)
class McfExhaustive:
    """Maximal common function of two observations, by graph components.

    Two observation values are linked when some base vector produces both;
    the common function is the component label.  labels_left / labels_right
    map observed value tuples to component ids 0..n_components-1.
    """

    bits: float
    n_components: int
    labels_left: dict[tuple[int, ...], int]
    labels_right: dict[tuple[int, ...], int]


def mcf_exhaustive(
    m1: FMatrix, m2: FMatrix, q: int, budget: int = MCF_BUDGET
) -> McfExhaustive:
    if m1.rows != m2.rows:
        raise ValueError("observation maps must share the base dimension")
    if m1.ctx.q != q or m2.ctx.q != q:
        raise ValueError("field mismatch")
    total = q**m1.rows
    if total > budget:
        raise BudgetError(
            f"mcf enumeration needs {total} vectors, budget is {budget}"
        )
    vectors = _all_vectors(q, m1.rows)
    left, _, left_values = _image_labels(vectors, _base_code_matrix(m1), q)
    right, _, right_values = _image_labels(vectors, _base_code_matrix(m2), q)

    # union-find over the two (disjoint) value alphabets
    n_left = left_values.shape[0]
    parent = list(range(n_left + right_values.shape[0]))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for lv, rv in zip(left.tolist(), right.tolist()):
        ra, rb = find(lv), find(n_left + rv)
        if ra != rb:
            parent[ra] = rb

    roots: dict[int, int] = {}
    comp_counts: dict[int, int] = {}
    for lv in left.tolist():
        label = roots.setdefault(find(lv), len(roots))
        comp_counts[label] = comp_counts.get(label, 0) + 1
    labels_left = {
        tuple(left_values[v].tolist()): roots[find(v)] for v in range(n_left)
    }
    labels_right = {
        tuple(right_values[v].tolist()): roots[find(n_left + v)]
        for v in range(right_values.shape[0])
    }

    counts = np.array(sorted(comp_counts.values()), dtype=np.int64)
    return McfExhaustive(
        bits=_entropy_from_counts(counts, total),
        n_components=len(roots),
        labels_left=labels_left,
        labels_right=labels_right,
    )


def cond_mutual_info_exhaustive(
    ma: FMatrix,
    mb: FMatrix,
    mc: FMatrix,
    q: int,
    budget: int = ENTROPY_BUDGET,
) -> float:
    """I(X@ma ; X@mb | X@mc) in bits, by full enumeration.

    Image sizes of linear maps are exact powers of q, so the four joint
    entropies are assembled from integer exponents and the result is the
    bit-exact value ``(ea + eb - eab - ec) * log2(q)``.
    """
    if not (ma.rows == mb.rows == mc.rows):
        raise ValueError("observation maps must share the base dimension")
    for m in (ma, mb, mc):
        if m.ctx.q != q:
            raise ValueError("field mismatch")
    total = q**ma.rows
    if total > budget:
        raise BudgetError(
            f"enumeration needs {total} vectors, budget is {budget}"
        )
    vectors = _all_vectors(q, ma.rows)

    def image_exponent(*mats: FMatrix) -> int:
        stacked = mats[0]
        for m in mats[1:]:
            stacked = stacked.hstack(m)
        _, counts, _ = _image_labels(vectors, _base_code_matrix(stacked), q)
        n_values = len(counts)
        e = round(math.log(n_values, q))
        if q**e != n_values:
            raise AssertionError(
                "image of a linear map must have q-power size"
            )
        return e

    ea = image_exponent(ma, mc)
    eb = image_exponent(mb, mc)
    eab = image_exponent(ma, mb, mc)
    ec = image_exponent(mc)
    return (ea + eb - eab - ec) * math.log2(q)


# ---------------------------------------------------------------------------
# Property oracles


def _rank_mod(a: list[list[int]], q: int) -> int:
    """Row rank of an integer matrix mod q, in-place elimination."""
    a = [row[:] for row in a]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] % q), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, q)
        a[r] = [(x * inv) % q for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] % q:
                f = a[i][c]
                a[i] = [(x - f * y) % q for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return r


def _det_mod(a: list[list[int]], q: int) -> int:
    a = [row[:] for row in a]
    n = len(a)
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] % q), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = (-det) % q
        det = (det * a[c][c]) % q
        inv = pow(a[c][c], -1, q)
        for i in range(c + 1, n):
            if a[i][c] % q:
                f = (a[i][c] * inv) % q
                a[i] = [(x - f * y) % q for x, y in zip(a[i], a[c])]
    return det % q


def detform_property_check(
    q: int, s: int, m: int, trials: int, seed: int
) -> bool:
    """Exhaustively test the determinant dichotomy behind randomized
    certificate sampling: for the s x s matrix whose rows are x_i @ A
    (x_i free row vectors of length m, A a fixed m x s coefficient matrix),
    the determinant vanishes at every point iff the columns of A are
    linearly dependent.

    The determinant is multilinear in each x_i, so per-variable degree is
    1 < q and vanishing on all of (F_q**m)**s decides the polynomial
    identity.  Returns True iff no drawn A violates the dichotomy.
    """
    points = q ** (s * m)
    if points > _DETFORM_BUDGET:
        raise BudgetError(
            f"determinant check needs {points} evaluation points, "
            f"budget is {_DETFORM_BUDGET}"
        )
    rng = random.Random(seed)
    grid = _all_vectors(q, s * m).reshape(points, s, m)
    for _ in range(trials):
        a = [[rng.randrange(q) for _ in range(s)] for _ in range(m)]
        an = np.array(a, dtype=np.int64)
        rows = (grid @ an) % q  # (points, s, s)
        vanishes = True
        for p in range(points):
            if _det_mod(rows[p].tolist(), q):
                vanishes = False
                break
        dependent = _rank_mod(a, q) < s
        if vanishes != dependent:
            return False
    return True


def split_source_property_check(
    q: int, dims: tuple[int, int], trials: int, seed: int
) -> bool:
    """Random split-source sanity check: with observations X, Y drawn from
    one coordinate block and Z from a disjoint block, adjoining Z to one or
    both sides changes the common function in the predictable way only:

      components(X ; (Y,Z)) == components(X ; Y)
      components((X,Z) ; (Y,Z)) == components(X ; Y) * |image(Z)|

    Counts are compared as exact integers.  Returns True iff every drawn
    triple satisfies both identities.
    """
    d_shared, d_z = dims
    d = d_shared + d_z
    total = q**d
    if total > MCF_BUDGET:
        raise BudgetError(
            f"split-source check needs {total} vectors, budget is {MCF_BUDGET}"
        )
    from .gfield import make_ext_field

    ctx = make_ext_field(q, 1)
    rng = random.Random(seed)
    vectors = _all_vectors(q, d)

    def random_block(row_lo: int, row_hi: int, cols: int) -> FMatrix:
        grid = [
            [
                rng.randrange(q) if row_lo <= i < row_hi else 0
                for _ in range(cols)
            ]
            for i in range(d)
        ]
        return FMatrix.from_rows(ctx, grid, cols=cols)

    for _ in range(trials):
        mx = random_block(0, d_shared, rng.randint(1, max(1, d_shared)))
        my = random_block(0, d_shared, rng.randint(1, max(1, d_shared)))
        mz = random_block(d_shared, d, rng.randint(1, max(1, d_z)))

        base = mcf_exhaustive(mx, my, q)
        with_z_right = mcf_exhaustive(mx, my.hstack(mz), q)
        with_z_both = mcf_exhaustive(mx.hstack(mz), my.hstack(mz), q)
        _, z_counts, _ = _image_labels(vectors, _base_code_matrix(mz), q)
        z_image = len(z_counts)

        if with_z_right.n_components != base.n_components:
            return False
        if with_z_both.n_components != base.n_components * z_image:
            return False
    return True
