"""Ground-truth partition functions by explicit edge-coloring enumeration.

This is the slow oracle the operator-level engine is checked against.  The
lattice has K rows (bottom to top) and L columns (west to east).  Vertex
(i, j) carries the weight table at ratio rowX[i] / m[j], read as
(west, north | east, south) like in weights.R_SUPPORT.

Row index 0 is the bottom row everywhere in this module; the right-boundary
vectors of the modified partition functions are therefore given bottom-up.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateParameter, TooLarge
from .fieldcore import R1, rat
from .weights import r_matrix

# Practical cap on the number of free internal edges (3**n colorings before
# pruning); 26 keeps the worst accepted case around a minute.
MAX_INTERNAL_EDGES = 26


@dataclass(frozen=True)
class BoundarySpec:
    """Fixed boundary colors: left/right per row (length K, bottom-up),
    bottom/top per column (length L, west-east)."""

    K: int
    L: int
    left: tuple
    right: tuple
    bottom: tuple
    top: tuple

    def __post_init__(self):
        if len(self.left) != self.K or len(self.right) != self.K:
            raise DegenerateParameter("left/right boundary length must be K")
        if len(self.bottom) != self.L or len(self.top) != self.L:
            raise DegenerateParameter("bottom/top boundary length must be L")
        for v in (*self.left, *self.right, *self.bottom, *self.top):
            if v not in (1, 2, 3):
                raise DegenerateParameter("boundary colors live in {1,2,3}")


def dwbc_boundary(L):
    """Square lattice, all 1s entering west/south, all 3s leaving east/north."""
    if L < 1:
        raise DegenerateParameter("lattice size must be >= 1")
    ones, threes = (1,) * L, (3,) * L
    return BoundarySpec(K=L, L=L, left=ones, right=threes, bottom=ones, top=threes)


def f_boundary(L):
    """K = L+1 rows; right boundary (2, 2, 3, ..., 3) bottom-up."""
    if L < 1:
        raise DegenerateParameter("lattice size must be >= 1")
    K = L + 1
    right = (2, 2) + (3,) * (K - 2)
    return BoundarySpec(K=K, L=L, left=(1,) * K, right=right,
                        bottom=(1,) * L, top=(3,) * L)


def fbar_boundary(L):
    """K = L+1 rows; right boundary (3, ..., 3, 2, 2) bottom-up."""
    if L < 1:
        raise DegenerateParameter("lattice size must be >= 1")
    K = L + 1
    right = (3,) * (K - 2) + (2, 2)
    return BoundarySpec(K=K, L=L, left=(1,) * K, right=right,
                        bottom=(1,) * L, top=(3,) * L)


def _enumerate(ctx, bnd, rowX):
    K, L = bnd.K, bnd.L
    if len(rowX) != K:
        raise DegenerateParameter("need one spectral value per row (K=%d)" % K)
    if len(ctx.m) != L:
        raise DegenerateParameter("context has %d columns, boundary wants %d"
                                  % (len(ctx.m), L))
    internal = 2 * K * L - K - L
    if internal > MAX_INTERNAL_EDGES:
        raise TooLarge("%d internal edges exceeds the enumeration cap %d"
                       % (internal, MAX_INTERNAL_EDGES))
    rowX = [rat(x) for x in rowX]
    tables = [[r_matrix(ctx, rowX[i] / ctx.m[j]).entries for j in range(L)]
              for i in range(K)]

    south = list(bnd.bottom)  # running vertical colors, updated in place
    total = [rat(0)]
    count = [0]

    def walk(i, j, west, acc):
        table = tables[i][j]
        s = south[j]
        east_choices = (bnd.right[i],) if j == L - 1 else (1, 2, 3)
        for east in east_choices:
            north = east + s - west  # arrow conservation fixes the top edge
            if not 1 <= north <= 3:
                continue
            if i == K - 1 and north != bnd.top[j]:
                continue
            w = table[(west, north, east, s)]
            if w == 0:
                continue
            nxt = acc * w
            south[j] = north
            if j < L - 1:
                walk(i, j + 1, east, nxt)
            elif i < K - 1:
                walk(i + 1, 0, bnd.left[i + 1], nxt)
            else:
                total[0] = total[0] + nxt
                count[0] += 1
            south[j] = s
        return

    walk(0, 0, bnd.left[0], R1)
    return total[0], count[0]


def partition_bruteforce(ctx, bnd, rowX):
    """Sum of weight products over all admissible colorings."""
    value, _ = _enumerate(ctx, bnd, rowX)
    return value


def count_contributing(ctx, bnd, rowX):
    """Number of colorings whose weight product is nonzero."""
    _, n = _enumerate(ctx, bnd, rowX)
    return n
