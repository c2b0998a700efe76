"""Row-operator engine on the quantum space of a length-L chain.

A state vector has 3**L components over the basis e_{b1} x ... x e_{bL} with
site 1 as the most significant base-3 digit.  The row monodromy operator at
spectral value X is the ordered product of single-site vertex matrices at
ratios X/m_j; its (alpha, beta) auxiliary entry acts on the chain.  Entry
names follow the 3x3 auxiliary layout: (1,1)/(2,2)/(3,3) are the diagonal
family, (1,2)/(1,3)/(2,3) the raising family used for the partition
functions, and (2,1)/(3,1)/(3,2) the lowering family that kills the
reference states.

Applied to the all-1 bottom state and the all-3 top state these build the
three boundary partition functions:

    Z  = <top| E(X_L) ... E(X_1) |bottom>
    F  = <top| E(U_{L-1}) ... E(U_1) B(Y2) B(Y1) |bottom>
    Fb = <top| B(Y2) B(Y1) E(U_{L-1}) ... E(U_1) |bottom>

with B the (1,2) entry and E the (1,3) entry; row 1 (the rightmost operator)
is the bottom lattice row.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateParameter, OmegaZero, ZeroArgument
from .fieldcore import R0, R1, rat
from .weights import omegas, r_matrix, weight

COLORS = (1, 2, 3)


def ket_bottom(L):
    """e_1 x ... x e_1 as a column vector (index 0)."""
    v = [R0] * (3 ** L)
    v[0] = R1
    return v


def bra_top(L):
    """e_3 x ... x e_3 as a row vector (index 3**L - 1)."""
    v = [R0] * (3 ** L)
    v[-1] = R1
    return v


def _site_tables(ctx, X):
    X = rat(X)
    if X == 0:
        raise ZeroArgument("spectral value must be nonzero")
    return [r_matrix(ctx, X / mj).entries for mj in ctx.m]


def _site_apply(entries, stride, left, right, vec):
    """One site factor with fixed auxiliary colors (left, right).

    Maps the site's south digit s to north n with weight entry
    (left, n, right, s); other sites ride along untouched.
    """
    out = [R0] * len(vec)
    for idx, val in enumerate(vec):
        if val == 0:
            continue
        s = (idx // stride) % 3
        base = idx - s * stride
        for n in COLORS:
            w = entries.get((left, n, right, s + 1))
            if w is not None and w != 0:
                out[base + (n - 1) * stride] = out[base + (n - 1) * stride] + w * val
    return out


def _site_apply_dual(entries, stride, left, right, row):
    """Row-vector counterpart of _site_apply: (row . O_{left,right})."""
    out = [R0] * len(row)
    for idx, val in enumerate(row):
        if val == 0:
            continue
        n = (idx // stride) % 3
        base = idx - n * stride
        for s in COLORS:
            w = entries.get((left, n + 1, right, s))
            if w is not None and w != 0:
                out[base + (s - 1) * stride] = out[base + (s - 1) * stride] + w * val
    return out


def _vec_add(a, b):
    return [x + y for x, y in zip(a, b)]


def apply_t_entry(ctx, alpha, beta, X, v):
    """Apply the (alpha, beta) monodromy entry at X to a column vector.

    Contracts the auxiliary line site by site from the last site (which
    carries the open right color beta) back to the first (open left color
    alpha).
    """
    L = ctx.L
    if len(v) != 3 ** L:
        raise DegenerateParameter("state vector length must be 3**L")
    tables = _site_tables(ctx, X)
    dim = 3 ** L
    stride = 1  # site L is the least significant digit
    s_by_left = {g: _site_apply(tables[L - 1], stride, g, beta, v) for g in COLORS}
    for j in range(L - 2, 0, -1):
        stride *= 3
        s_by_left = {
            g: _vec_add(
                _vec_add(
                    _site_apply(tables[j], stride, g, 1, s_by_left[1]),
                    _site_apply(tables[j], stride, g, 2, s_by_left[2]),
                ),
                _site_apply(tables[j], stride, g, 3, s_by_left[3]),
            )
            for g in COLORS
        }
    if L == 1:
        return s_by_left[alpha]
    stride *= 3
    assert stride == dim // 3
    out = [R0] * dim
    for d in COLORS:
        out = _vec_add(out, _site_apply(tables[0], stride, alpha, d, s_by_left[d]))
    return out


def apply_t_entry_dual(ctx, alpha, beta, X, row):
    """Row-vector action: returns row . T_{alpha,beta}(X)."""
    L = ctx.L
    if len(row) != 3 ** L:
        raise DegenerateParameter("state vector length must be 3**L")
    tables = _site_tables(ctx, X)
    stride = 3 ** (L - 1)  # site 1 is the most significant digit
    s_by_right = {g: _site_apply_dual(tables[0], stride, alpha, g, row) for g in COLORS}
    for j in range(1, L - 1):
        stride //= 3
        s_by_right = {
            g: _vec_add(
                _vec_add(
                    _site_apply_dual(tables[j], stride, 1, g, s_by_right[1]),
                    _site_apply_dual(tables[j], stride, 2, g, s_by_right[2]),
                ),
                _site_apply_dual(tables[j], stride, 3, g, s_by_right[3]),
            )
            for g in COLORS
        }
    if L == 1:
        return s_by_right[beta]
    out = [R0] * (3 ** L)
    for d in COLORS:
        out = _vec_add(out, _site_apply_dual(tables[L - 1], 1, d, beta, s_by_right[d]))
    return out


# Entry shorthands used throughout: the three operators of the raising family.
def apply_A(ctx, X, v):
    return apply_t_entry(ctx, 1, 1, X, v)


def apply_B(ctx, X, v):
    return apply_t_entry(ctx, 1, 2, X, v)


def apply_E(ctx, X, v):
    return apply_t_entry(ctx, 1, 3, X, v)


def compute_Z(ctx, Xs):
    """All-domain-wall partition function at spectral values Xs (row 1 first)."""
    if len(Xs) != ctx.L:
        raise DegenerateParameter("need exactly L spectral values")
    v = ket_bottom(ctx.L)
    for X in Xs:
        v = apply_E(ctx, X, v)
    return v[-1]


def compute_F(ctx, Us, Y1, Y2):
    """Modified partition function with the two B rows at the bottom."""
    if len(Us) != ctx.L - 1:
        raise DegenerateParameter("need exactly L-1 upper spectral values")
    v = ket_bottom(ctx.L)
    v = apply_B(ctx, Y1, v)
    v = apply_B(ctx, Y2, v)
    for U in Us:
        v = apply_E(ctx, U, v)
    return v[-1]


def compute_Fbar(ctx, Y1, Y2, Us):
    """Modified partition function with the two B rows at the top."""
    if len(Us) != ctx.L - 1:
        raise DegenerateParameter("need exactly L-1 lower spectral values")
    v = ket_bottom(ctx.L)
    for U in Us:
        v = apply_E(ctx, U, v)
    v = apply_B(ctx, Y1, v)
    v = apply_B(ctx, Y2, v)
    return v[-1]


def compute_H(ctx, Us, Y1, Y2):
    """F divided by its forced simple-zero factor in Y1."""
    om, _ = omegas(ctx, Y1)
    if om == 0:
        raise OmegaZero("Y1 hits a forced zero; resample")
    return compute_F(ctx, Us, Y1, Y2) / om


def compute_Hbar(ctx, Y1, Y2, Us):
    """Fbar divided by its forced simple-zero factor in Y2."""
    _, omb = omegas(ctx, Y2)
    if omb == 0:
        raise OmegaZero("Y2 hits a forced zero; resample")
    return compute_Fbar(ctx, Y1, Y2, Us) / omb


# ---------------------------------------------------------------------------
# Exact degree measurement and the structural report


def poly_degree(f, max_deg, avoid=()):
    """Exact degree of a one-variable polynomial function f of degree
    <= max_deg, by Newton interpolation at integer nodes plus one
    verification node.  Nodes in `avoid` are skipped."""
    avoid = {rat(t) for t in avoid}
    nodes = []
    t = 1
    while len(nodes) < max_deg + 2:
        cand = rat(t)
        if cand not in avoid:
            nodes.append(cand)
        t += 1
    pts = nodes[: max_deg + 1]
    coeffs = [f(t) for t in pts]
    for k in range(1, len(pts)):
        for i in range(len(pts) - 1, k - 1, -1):
            coeffs[i] = (coeffs[i] - coeffs[i - 1]) / (pts[i] - pts[i - k])
    deg = -1
    for k, ck in enumerate(coeffs):
        if ck != 0:
            deg = k
    check = nodes[-1]
    acc = R0
    for k in range(len(pts) - 1, -1, -1):
        acc = acc * (check - pts[k]) + coeffs[k]
    if acc != f(check):
        raise ArithmeticError("function is not polynomial within the degree bound")
    return deg


@dataclass(frozen=True)
class StructureItem:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class StructureReport:
    L: int
    items: tuple

    @property
    def passed(self):
        return all(it.passed for it in self.items)

    def item(self, name):
        for it in self.items:
            if it.name == name:
                return it
        raise KeyError(name)


def _permutations(seq):
    import itertools

    return itertools.permutations(seq)


def verify_structure(ctx):
    """Measure the polynomial structure of Z, F and H.

    Covers: degree of Z in its first variable, degrees of F in every slot,
    degree of H in the reduced slot, full permutation symmetry of Z, partial
    symmetry of F, the forced zeros of F and Fbar, and the value of Z at the
    inhomogeneity point.
    """
    L = ctx.L
    if L > 4:
        raise DegenerateParameter("structure checks are bounded at L <= 4")
    dmax = 2 * L - 1
    items = []

    # fixed generic companions for single-variable scans
    spare = [rat(v) for v in (101, 103, 107, 109, 113)]

    zdeg = poly_degree(lambda t: compute_Z(ctx, [t] + spare[: L - 1]), dmax)
    items.append(StructureItem("z_degree_x1", zdeg <= dmax, "measured %d, bound %d" % (zdeg, dmax)))

    us = spare[: L - 1]
    fdeg_y1 = poly_degree(lambda t: compute_F(ctx, us, t, spare[L - 1]), dmax)
    items.append(StructureItem("f_degree_y1", fdeg_y1 <= dmax, "measured %d, bound %d" % (fdeg_y1, dmax)))
    fdeg_y2 = poly_degree(lambda t: compute_F(ctx, us, spare[L - 1], t), dmax)
    items.append(StructureItem("f_degree_y2", fdeg_y2 <= dmax, "measured %d, bound %d" % (fdeg_y2, dmax)))
    for i in range(L - 1):
        def f_u(t, _i=i):
            args = list(us)
            args[_i] = t
            return compute_F(ctx, args, spare[L - 1], spare[L])
        fdeg_u = poly_degree(f_u, dmax)
        items.append(StructureItem("f_degree_u%d" % (i + 1), fdeg_u <= dmax,
                                   "measured %d, bound %d" % (fdeg_u, dmax)))

    om_roots = [mj * ctx.zeta for mj in ctx.m]
    hdeg = poly_degree(lambda t: compute_H(ctx, us, t, spare[L - 1]), dmax, avoid=om_roots)
    items.append(StructureItem("h_degree_y1", hdeg <= L - 1, "measured %d, bound %d" % (hdeg, L - 1)))

    base = [rat(v) for v in (2, 3, 5, 7)][:L]
    z_ref = compute_Z(ctx, base)
    sym_ok = all(compute_Z(ctx, list(perm)) == z_ref for perm in _permutations(base))
    items.append(StructureItem("z_symmetric", sym_ok, "%d orderings" % _count_perms(L)))

    if L >= 3:
        u_base = [rat(v) for v in (2, 3, 5)][: L - 1]
        f_ref = compute_F(ctx, u_base, spare[0], spare[1])
        fsym_ok = all(
            compute_F(ctx, list(perm), spare[0], spare[1]) == f_ref
            for perm in _permutations(u_base)
        )
    else:
        fsym_ok = True
    items.append(StructureItem("f_symmetric_in_u", fsym_ok, "upper-row exchanges"))

    y2 = spare[L - 1]
    f_zero_ok = all(compute_F(ctx, us, mj * ctx.zeta, y2) == 0 for mj in ctx.m)
    items.append(StructureItem("f_zeros_at_zeta_m", f_zero_ok, "all %d columns" % L))
    fb_zero_ok = all(compute_Fbar(ctx, y2, mj, us) == 0 for mj in ctx.m)
    items.append(StructureItem("fbar_zeros_at_m", fb_zero_ok, "all %d columns" % L))

    target = R1
    for mi in ctx.m:
        for mj in ctx.m:
            target = target * weight(ctx, "a", mi / mj)
    init_ok = compute_Z(ctx, list(reversed(ctx.m))) == target
    items.append(StructureItem("initial_condition", init_ok, "Z at the inhomogeneity point"))

    return StructureReport(L=L, items=tuple(items))


def _count_perms(n):
    import math

    return math.factorial(n)


# ---------------------------------------------------------------------------
# Reference-state weights and annihilators


@dataclass(frozen=True)
class SingularReport:
    x: object
    lowering_kills_bottom: dict    # (alpha,beta) -> bool for the lowering family
    bottom_weight_match: dict      # i -> bool against the predicted product
    top_annihilators: tuple        # measured entries with <top|T == 0
    top_weight_match: dict         # i -> bool against the candidate product
    top_weight_values: dict        # i -> measured scalar (or None)

    @property
    def passed(self):
        return (
            all(self.lowering_kills_bottom.values())
            and all(self.bottom_weight_match.values())
            and all(self.top_weight_match.values())
        )


LOWERING_ENTRIES = ((2, 1), (3, 1), (3, 2))
DIAGONAL_ENTRIES = ((1, 1), (2, 2), (3, 3))


def singular_weights_report(ctx, X):
    """Measure how the monodromy entries act on the two reference states.

    Nothing is assumed: annihilators of the top state are measured across all
    nine entries, and the diagonal weights are compared against the products
    (a, b, d33) on the bottom state and (d11, b, a) on the top state.
    """
    X = rat(X)
    if X == 0:
        raise ZeroArgument("spectral value must be nonzero")
    L = ctx.L
    ket = ket_bottom(L)
    bra = bra_top(L)

    prod = {"a": R1, "b": R1, "d33": R1, "d11": R1}
    for mj in ctx.m:
        for nm in prod:
            prod[nm] = prod[nm] * weight(ctx, nm, X / mj)

    lowering = {}
    for (al, be) in LOWERING_ENTRIES:
        out = apply_t_entry(ctx, al, be, X, ket)
        lowering[(al, be)] = all(c == 0 for c in out)

    expected_bottom = {1: prod["a"], 2: prod["b"], 3: prod["d33"]}
    bottom_match = {}
    for i, (al, be) in enumerate(DIAGONAL_ENTRIES, start=1):
        out = apply_t_entry(ctx, al, be, X, ket)
        want = [expected_bottom[i] * c for c in ket]
        bottom_match[i] = out == want

    annihilators = []
    for al in COLORS:
        for be in COLORS:
            out = apply_t_entry_dual(ctx, al, be, X, bra)
            if all(c == 0 for c in out):
                annihilators.append((al, be))

    candidate_top = {1: prod["d11"], 2: prod["b"], 3: prod["a"]}
    top_match = {}
    top_values = {}
    for i, (al, be) in enumerate(DIAGONAL_ENTRIES, start=1):
        out = apply_t_entry_dual(ctx, al, be, X, bra)
        scal = out[-1]
        proportional = out == [scal * c for c in bra]
        top_values[i] = scal if proportional else None
        top_match[i] = proportional and scal == candidate_top[i]

    return SingularReport(
        x=X,
        lowering_kills_bottom=lowering,
        bottom_weight_match=bottom_match,
        top_annihilators=tuple(sorted(annihilators)),
        top_weight_match=top_match,
        top_weight_values=top_values,
    )
