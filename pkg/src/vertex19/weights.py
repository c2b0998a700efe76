"""Statistical weights and the 9x9 vertex matrix for both models.

Edge colors live in {1, 2, 3}.  A vertex configuration is read as
(west, north) -> (east, south): the matrix row index is the pair
(west, north), the column index is (east, south), and an entry can only be
nonzero when west + north == east + south (arrow conservation).  Exactly 19
slots survive that rule with the weight names used here.

Every weight is evaluated at the multiplicative argument x = e^{2*lambda};
difference arguments between two rapidities turn into ratios of X values.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ZeroArgument
from .fieldcore import R0, R1, rat, rpow

# The 13 weight names: four named ones plus the central d-block.
WEIGHT_NAMES = (
    "a", "b", "c", "cbar",
    "d11", "d12", "d13",
    "d21", "d22", "d23",
    "d31", "d32", "d33",
)


def dname(alpha, beta):
    return "d%d%d" % (alpha, beta)


def _d_weight(ctx, alpha, beta, x):
    q, z = ctx.q, ctx.zeta
    beta_prime = 4 - beta
    if alpha == beta:
        if alpha == beta_prime:  # the (2,2) center
            return q * (x - 1) * (x - z) + x * (q * q - 1) * (z - 1)
        return (x - 1) * ((x - z) + x * (q * q - 1))
    delta = R1 if alpha == beta_prime else R0
    half = rpow(ctx.p, alpha - beta)  # q**((alpha-beta)/2)
    if alpha < beta:
        return (q * q - 1) * (z * (x - 1) * half - delta * (x - z))
    return x * (q * q - 1) * ((x - 1) * half - delta * (x - z))


def weight(ctx, name, x):
    """Evaluate one named weight at argument x (nonzero)."""
    x = rat(x)
    if x == 0:
        raise ZeroArgument("weight argument must be nonzero")
    q, z = ctx.q, ctx.zeta
    if name == "a":
        return (x - z) * (x - q * q)
    if name == "b":
        return q * (x - 1) * (x - z)
    if name == "c":
        return (1 - q * q) * (x - z)
    if name == "cbar":
        return x * (1 - q * q) * (x - z)
    if len(name) == 3 and name[0] == "d":
        alpha, beta = int(name[1]), int(name[2])
        if 1 <= alpha <= 3 and 1 <= beta <= 3:
            return _d_weight(ctx, alpha, beta, x)
    raise KeyError("unknown weight name %r" % name)


# Placement of the 19 structural entries, keyed (west, north, east, south).
R_SUPPORT = {
    (1, 1, 1, 1): "a",
    (3, 3, 3, 3): "a",
    (1, 2, 1, 2): "b",
    (2, 1, 2, 1): "b",
    (2, 3, 2, 3): "b",
    (3, 2, 3, 2): "b",
    (1, 2, 2, 1): "c",
    (2, 3, 3, 2): "c",
    (2, 1, 1, 2): "cbar",
    (3, 2, 2, 3): "cbar",
    (1, 3, 1, 3): "d11",
    (1, 3, 2, 2): "d12",
    (1, 3, 3, 1): "d13",
    (2, 2, 1, 3): "d21",
    (2, 2, 2, 2): "d22",
    (2, 2, 3, 1): "d23",
    (3, 1, 1, 3): "d31",
    (3, 1, 2, 2): "d32",
    (3, 1, 3, 1): "d33",
}


@dataclass(frozen=True)
class RMatrix:
    """9x9 vertex-weight matrix at a fixed spectral ratio x."""

    x: object
    entries: dict  # (west, north, east, south) -> rational, 19 keys

    def entry(self, west, north, east, south):
        return self.entries.get((west, north, east, south), R0)

    def as_rows(self):
        """Dense 9x9 nested list, row index 3*(west-1)+(north-1)."""
        rows = [[R0] * 9 for _ in range(9)]
        for (w, n, e, s), val in self.entries.items():
            rows[3 * (w - 1) + (n - 1)][3 * (e - 1) + (s - 1)] = val
        return rows

    def support(self):
        return set(self.entries)


def r_matrix(ctx, x):
    """Assemble the 19 nonzero entries at ratio x."""
    x = rat(x)
    if x == 0:
        raise ZeroArgument("r_matrix argument must be nonzero")
    cache = {}
    ent = {}
    for key, name in R_SUPPORT.items():
        if name not in cache:
            cache[name] = weight(ctx, name, x)
        ent[key] = cache[name]
    return RMatrix(x=x, entries=ent)


def check_ice_rule(ctx, x):
    """True iff every entry violating west+north == east+south is zero."""
    rm = r_matrix(ctx, x)
    colors = (1, 2, 3)
    for w in colors:
        for n in colors:
            for e in colors:
                for s in colors:
                    if w + n != e + s and rm.entry(w, n, e, s) != 0:
                        return False
    return True


# ---------------------------------------------------------------------------
# Yang-Baxter check on the 27-dimensional triple tensor product


def _pair_index(a, b):
    return 3 * (a - 1) + (b - 1)


def _embed(rm, leg_i, leg_j):
    """Sparse 27x27 matrix of rm acting on tensor legs (leg_i, leg_j).

    Returned as dict-of-rows {row: {col: value}}; basis index of colors
    (g1, g2, g3) is 9*(g1-1) + 3*(g2-1) + (g3-1).
    """
    strides = {0: 9, 1: 3, 2: 1}
    si, sj = strides[leg_i], strides[leg_j]
    spare = ({0, 1, 2} - {leg_i, leg_j}).pop()
    ss = strides[spare]
    out = {}
    for (w, n, e, s), val in rm.entries.items():
        if val == 0:
            continue
        for g in range(3):
            row = si * (w - 1) + sj * (n - 1) + ss * g
            col = si * (e - 1) + sj * (s - 1) + ss * g
            out.setdefault(row, {})[col] = val
    return out


def _spmul(a, b):
    out = {}
    for i, arow in a.items():
        acc = {}
        for k, av in arow.items():
            brow = b.get(k)
            if not brow:
                continue
            for j, bv in brow.items():
                acc[j] = acc.get(j, R0) + av * bv
        acc = {j: v for j, v in acc.items() if v != 0}
        if acc:
            out[i] = acc
    return out


def ybe_holds(rm12, rm13, rm23):
    """Exact equality of R12.R13.R23 and R23.R13.R12 on the triple product."""
    m12 = _embed(rm12, 0, 1)
    m13 = _embed(rm13, 0, 2)
    m23 = _embed(rm23, 1, 2)
    lhs = _spmul(_spmul(m12, m13), m23)
    rhs = _spmul(_spmul(m23, m13), m12)
    return lhs == rhs


def check_ybe(ctx, x12, x13):
    """Yang-Baxter equation at ratios (x12, x13, x23 = x13/x12), exact."""
    x12, x13 = rat(x12), rat(x13)
    if x12 == 0 or x13 == 0:
        raise ZeroArgument("spectral ratios must be nonzero")
    x23 = x13 / x12
    return ybe_holds(r_matrix(ctx, x12), r_matrix(ctx, x13), r_matrix(ctx, x23))


# ---------------------------------------------------------------------------
# Row-wise products entering the functional-equation coefficients


def big_lambdas(ctx, x):
    """(prod_j a(x/m_j), prod_j d11(x/m_j)) across all columns."""
    x = rat(x)
    if x == 0:
        raise ZeroArgument("argument must be nonzero")
    lam = R1
    lam_bar = R1
    for mj in ctx.m:
        lam = lam * weight(ctx, "a", x / mj)
        lam_bar = lam_bar * weight(ctx, "d11", x / mj)
    return lam, lam_bar


def omegas(ctx, y):
    """(prod_j (y - m_j*zeta), prod_j (y - m_j)); the simple-zero factors."""
    y = rat(y)
    if y == 0:
        raise ZeroArgument("argument must be nonzero")
    om = R1
    om_bar = R1
    for mj in ctx.m:
        om = om * (y - mj * ctx.zeta)
        om_bar = om_bar * (y - mj)
    return om, om_bar
