"""Functional-equation solver for the domain-wall partition function.

The two modified partition functions H and Hbar are polynomial in every
variable with known degree bounds, so each is expanded on a finite monomial
grid.  Two homogeneous linear constraints pin the coefficient vectors up to
one overall constant:

  (i)  the value of Z obtained by inserting an auxiliary spectral value into
       the first v-slot must equal the one obtained through the second slot;
  (ii) the reduction line expressing an omega-bar-weighted Hbar through
       omega-weighted H values.

Sampling these at random nondegenerate tuples yields an exact linear system
whose kernel is expected to be one-dimensional.  Solving runs either by
rational elimination or modulo several 30-bit primes with CRT plus rational
reconstruction, cross-checked between primes and verified against the exact
rows afterwards.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from functools import lru_cache

from .algebra import (
    CoeffKind,
    ae_elimination_coeffs,
    ea_elimination_coeffs,
    exchange_coeffs,
)
from .errors import (
    BackendMismatch,
    DegenerateParameter,
    DegenerateSample,
    NonUniqueSolution,
    NormalizationFailure,
)
from .fieldcore import (
    R0,
    R1,
    crt_pair,
    rand_distinct_ints,
    random_prime,
    rat,
    rat_str,
    rational_reconstruction,
    reduce_mod,
)
from .weights import big_lambdas, omegas, weight


@dataclass(frozen=True)
class CoeffSet:
    """The eight scalar prefactors of the two Z equations at an ordered
    pair (X0, X1), and the determinant w of their 2x2 Z-block."""

    x0: object
    x1: object
    omega0: object
    omega1: object
    upsilon0: object
    upsilon1: object
    omegabar0: object
    omegabar1: object
    upsilonbar0: object
    upsilonbar1: object
    w: object


def zh_coeffs(ctx, X0, X1):
    """Evaluate the prefactors at (X0, X1) and check the determinant
    against its closed product form."""
    X0, X1 = rat(X0), rat(X1)
    if X0 == X1:
        raise DegenerateSample("coincident pair")
    u = X1 / X0
    ae = ae_elimination_coeffs(ctx, u)
    ea = ea_elimination_coeffs(ctx, u)
    lam0, lamb0 = big_lambdas(ctx, X0)
    lam1, lamb1 = big_lambdas(ctx, X1)
    om0 = omegas(ctx, X0)[0]
    om1 = omegas(ctx, X1)[0]
    omb0 = omegas(ctx, X0)[1]
    omb1 = omegas(ctx, X1)[1]

    omega0 = ea["e1a0"] * lam0
    omega1 = ea["e0a1"] * lam1
    upsilon0 = ea["b1b0"] * om0
    upsilon1 = ea["b0b1"] * om1
    omegabar0 = ae["a0e1"] * lamb0
    omegabar1 = ae["a1e0"] * lamb1
    upsilonbar0 = ae["b0b1"] * omb0
    upsilonbar1 = ae["b1b0"] * omb1

    w = omega0 * omegabar1 - omega1 * omegabar0

    # independent closed form of the same determinant
    q, z, p = ctx.q, ctx.zeta, ctx.p
    r = X0 / X1
    den = (r - R1) ** 2 * (q ** 2 - z * r)
    qq = q ** 2 - R1
    t1 = ((R1 - q ** 2 * r) ** 2 * (R1 - z * r) ** 2 / den) * lam0 * lamb1 / (p * qq)
    t2 = ((R1 - z * r) ** 2 * (q ** 4 - z ** 2 * r) ** 2 / (z ** 2 * den)) * lam1 * lamb0 / (
        p ** 5 * qq
    )
    if w != t1 - t2:
        raise ArithmeticError("determinant identity violated; weights corrupted")

    return CoeffSet(
        x0=X0,
        x1=X1,
        omega0=omega0,
        omega1=omega1,
        upsilon0=upsilon0,
        upsilon1=upsilon1,
        omegabar0=omegabar0,
        omegabar1=omegabar1,
        upsilonbar0=upsilonbar0,
        upsilonbar1=upsilonbar1,
        w=w,
    )


# ---------------------------------------------------------------------------
# Monomial grids


@lru_cache(maxsize=None)
def _h_keys(L, symmetrize):
    lat_range = range(2 * L)
    if symmetrize:
        lats = itertools.combinations_with_replacement(lat_range, L - 1)
    else:
        lats = itertools.product(lat_range, repeat=L - 1)
    keys = []
    for lat in lats:
        for j in range(L):
            for k in lat_range:
                keys.append(tuple(lat) + (j, k))
    return tuple(keys)


@lru_cache(maxsize=None)
def _hbar_keys(L, symmetrize):
    lat_range = range(2 * L)
    if symmetrize:
        lats = tuple(itertools.combinations_with_replacement(lat_range, L - 1))
    else:
        lats = tuple(itertools.product(lat_range, repeat=L - 1))
    keys = []
    for i in lat_range:
        for j in range(L):
            for lat in lats:
                keys.append((i, j) + tuple(lat))
    return tuple(keys)


@dataclass(frozen=True)
class AnsatzLayout:
    """Monomial grid for H and Hbar at chain length L.

    H carries L-1 lattice slots (degree < 2L each), then the reduced v-slot
    (degree < L), then the other v-slot (degree < 2L); Hbar mirrors this with
    the v-slots in front.  With symmetrize set, the lattice exponents are
    restricted to sorted multisets and each monomial is the symmetric sum
    over the lattice slots.
    """

    L: int
    symmetrize: bool = False

    def h_keys(self):
        return _h_keys(self.L, self.symmetrize)

    def hbar_keys(self):
        return _hbar_keys(self.L, self.symmetrize)

    def unknowns(self):
        return len(self.h_keys()) + len(self.hbar_keys())


def _powers(x, max_exp):
    out = [R1]
    for _ in range(max_exp):
        out.append(out[-1] * x)
    return out


def _lattice_factor(symmetrize, lat_exps, plat):
    if not symmetrize or len(lat_exps) <= 1:
        out = R1
        for i, e in enumerate(lat_exps):
            out = out * plat[i][e]
        return out
    total = R0
    for perm in set(itertools.permutations(lat_exps)):
        term = R1
        for i, e in enumerate(perm):
            term = term * plat[i][e]
        total = total + term
    return total


def h_monomial_vector(layout, S, y1, y2):
    """Values of every H-grid monomial at lattice tuple S and v-pair
    (y1, y2), aligned with layout.h_keys()."""
    L = layout.L
    nlat = L - 1
    plat = [_powers(rat(x), 2 * L - 1) for x in S]
    p1 = _powers(rat(y1), L - 1)
    p2 = _powers(rat(y2), 2 * L - 1)
    out = []
    for key in layout.h_keys():
        lat = key[:nlat]
        out.append(_lattice_factor(layout.symmetrize, lat, plat) * p1[key[nlat]] * p2[key[nlat + 1]])
    return out


def hbar_monomial_vector(layout, y1, y2, S):
    """Values of every Hbar-grid monomial, aligned with layout.hbar_keys()."""
    L = layout.L
    plat = [_powers(rat(x), 2 * L - 1) for x in S]
    p1 = _powers(rat(y1), 2 * L - 1)
    p2 = _powers(rat(y2), L - 1)
    out = []
    for key in layout.hbar_keys():
        lat = key[2:]
        out.append(p1[key[0]] * p2[key[1]] * _lattice_factor(layout.symmetrize, lat, plat))
    return out


def h_eval(layout, phi, S, y1, y2):
    vec = h_monomial_vector(layout, S, y1, y2)
    total = R0
    for key, v in zip(layout.h_keys(), vec):
        c = phi[key]
        if c != 0 and v != 0:
            total = total + c * v
    return total


def hbar_eval(layout, phibar, y1, y2, S):
    vec = hbar_monomial_vector(layout, y1, y2, S)
    total = R0
    for key, v in zip(layout.hbar_keys(), vec):
        c = phibar[key]
        if c != 0 and v != 0:
            total = total + c * v
    return total


# ---------------------------------------------------------------------------
# Z reconstruction from H/Hbar through an auxiliary value


def reconstruct_z_via_pair(ctx, Xs, x_aux, h_fn, hbar_fn, aux_slot="v1"):
    """Z at lattice tuple Xs, expressed through H and Hbar evaluated with the
    auxiliary value x_aux occupying one v-slot.

    h_fn(S, y1, y2) and hbar_fn(y1, y2, S) supply the two functions; passing
    the monodromy-based evaluators here reproduces Z independently of any
    ansatz, which is used as a self-check.
    """
    Xs = [rat(x) for x in Xs]
    x_aux = rat(x_aux)
    lat1 = Xs[0]
    S = Xs[1:]
    if aux_slot == "v1":
        cs = zh_coeffs(ctx, x_aux, lat1)
        if cs.w == 0:
            raise DegenerateSample("singular pair determinant")
        num = (
            cs.upsilon0 * cs.omegabar1 * h_fn(S, x_aux, lat1)
            + cs.upsilon1 * cs.omegabar1 * h_fn(S, lat1, x_aux)
            - cs.upsilonbar0 * cs.omega1 * hbar_fn(lat1, x_aux, S)
            - cs.upsilonbar1 * cs.omega1 * hbar_fn(x_aux, lat1, S)
        )
    elif aux_slot == "v2":
        cs = zh_coeffs(ctx, lat1, x_aux)
        if cs.w == 0:
            raise DegenerateSample("singular pair determinant")
        num = (
            cs.omega0 * cs.upsilonbar1 * hbar_fn(lat1, x_aux, S)
            + cs.omega0 * cs.upsilonbar0 * hbar_fn(x_aux, lat1, S)
            - cs.omegabar0 * cs.upsilon1 * h_fn(S, x_aux, lat1)
            - cs.omegabar0 * cs.upsilon0 * h_fn(S, lat1, x_aux)
        )
    else:
        raise DegenerateParameter("aux_slot must be 'v1' or 'v2'")
    return num / cs.w


def monodromy_h_fns(ctx):
    """The (h_fn, hbar_fn) pair backed by the transfer-row engine."""
    from .monodromy import compute_H, compute_Hbar

    return (
        lambda S, y1, y2: compute_H(ctx, list(S), y1, y2),
        lambda y1, y2, S: compute_Hbar(ctx, y1, y2, list(S)),
    )


# ---------------------------------------------------------------------------
# System assembly


@dataclass
class LinearSystem:
    n_unknowns: int
    rows: list
    backend: str = "rational"
    layout: AnsatzLayout = None
    seed: int = None
    meta: dict = field(default_factory=dict)


def _accumulate(row, offset, scalar, vec):
    if scalar == 0:
        return
    for i, v in enumerate(vec):
        if v != 0:
            row[offset + i] = row[offset + i] + scalar * v


def _rows_for_tuple(ctx, layout, xs):
    """The two equation rows at one spectral tuple (x0, x0b, x1..xL)."""
    L = layout.L
    nH = len(layout.h_keys())
    n = nH + len(layout.hbar_keys())
    x0, x0b = xs[0], xs[1]
    lat = xs[2:]
    lat1 = lat[0]
    S = lat[1:]

    cs1 = zh_coeffs(ctx, x0, lat1)
    cs2 = zh_coeffs(ctx, lat1, x0b)
    if cs1.w == 0 or cs2.w == 0:
        raise DegenerateSample("singular pair determinant")

    row_a = [R0] * n
    # cs2.w * (numerator via first slot) - cs1.w * (numerator via second slot)
    _accumulate(row_a, 0, cs2.w * cs1.upsilon0 * cs1.omegabar1, h_monomial_vector(layout, S, x0, lat1))
    _accumulate(row_a, 0, cs2.w * cs1.upsilon1 * cs1.omegabar1, h_monomial_vector(layout, S, lat1, x0))
    _accumulate(row_a, nH, -cs2.w * cs1.upsilonbar0 * cs1.omega1, hbar_monomial_vector(layout, lat1, x0, S))
    _accumulate(row_a, nH, -cs2.w * cs1.upsilonbar1 * cs1.omega1, hbar_monomial_vector(layout, x0, lat1, S))
    _accumulate(row_a, nH, -cs1.w * cs2.omega0 * cs2.upsilonbar1, hbar_monomial_vector(layout, lat1, x0b, S))
    _accumulate(row_a, nH, -cs1.w * cs2.omega0 * cs2.upsilonbar0, hbar_monomial_vector(layout, x0b, lat1, S))
    _accumulate(row_a, 0, cs1.w * cs2.omegabar0 * cs2.upsilon1, h_monomial_vector(layout, S, x0b, lat1))
    _accumulate(row_a, 0, cs1.w * cs2.omegabar0 * cs2.upsilon0, h_monomial_vector(layout, S, lat1, x0b))

    row_b = [R0] * n
    tup = [x0] + lat
    nn = L - 1
    mids = lat[:-1]
    _accumulate(
        row_b,
        nH,
        omegas(ctx, lat[-1])[1],
        hbar_monomial_vector(layout, x0, lat[-1], mids),
    )
    for j in range(nn + 1):
        mj = exchange_coeffs(ctx, CoeffKind.M, nn, j, None, tup[: nn + 1])
        om_j = omegas(ctx, tup[j])[0]
        for k in range(nn + 2):
            if k == j:
                continue
            njk = exchange_coeffs(ctx, CoeffKind.N, nn, j, k, tup)
            scalar = -mj * njk * om_j
            if scalar == 0:
                continue
            rest = [tup[l] for l in range(nn + 2) if l not in (j, k)]
            _accumulate(row_b, 0, scalar, h_monomial_vector(layout, rest, tup[j], tup[k]))
    return row_a, row_b


def _clear_row(row):
    """Multiply out denominators and strip the content, giving an integer
    row with the same kernel."""
    m = 1
    for x in row:
        d = int(x.denominator)
        m = m * d // math.gcd(m, d)
    ints = [int(x * m) for x in row]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def assemble_system(ctx, L, layout=None, n_samples=None, seed=0, backend="rational"):
    """Sample spectral tuples and emit two denominator-cleared equation rows
    per tuple."""
    if ctx.L != L:
        raise DegenerateParameter("context has L=%d, expected %d" % (ctx.L, L))
    if layout is None:
        layout = AnsatzLayout(L, symmetrize=(L >= 3))
    n = layout.unknowns()
    if n_samples is None:
        n_samples = -(-5 * n // 4)  # 2.5x unknowns over two rows per sample
    rng = random.Random(seed)
    rows = []
    retries = 0
    for _ in range(n_samples):
        for _attempt in range(50):
            xs = rand_distinct_ints(rng, L + 2)
            try:
                row_a, row_b = _rows_for_tuple(ctx, layout, xs)
                break
            except DegenerateSample:
                retries += 1
                continue
        else:
            raise DegenerateSample("no nondegenerate tuple after 50 attempts")
        rows.append(_clear_row(row_a))
        rows.append(_clear_row(row_b))
    maxbits = 0
    for row in rows:
        for v in row:
            if v:
                maxbits = max(maxbits, abs(v).bit_length())
    return LinearSystem(
        n_unknowns=n,
        rows=rows,
        backend=backend,
        layout=layout,
        seed=seed,
        meta={"samples": n_samples, "resample_retries": retries, "max_row_bits": maxbits},
    )


# ---------------------------------------------------------------------------
# Nullspace, rational and prime-field backends


def _nullspace_rational(rows, n):
    pivots = []  # (col, full-RREF row)
    for raw in rows:
        r = [rat(v) for v in raw]
        for c, pv in pivots:
            f = r[c]
            if f != 0:
                r = [a - f * b for a, b in zip(r, pv)]
        lead = next((i for i, v in enumerate(r) if v != 0), None)
        if lead is None:
            continue
        inv = r[lead]
        r = [v / inv for v in r]
        for idx, (c, pv) in enumerate(pivots):
            f = pv[lead]
            if f != 0:
                pivots[idx] = (c, [a - f * b for a, b in zip(pv, r)])
        pivots.append((lead, r))
        if len(pivots) == n:
            break
    pivots.sort()
    pivot_cols = {c for c, _ in pivots}
    basis = []
    for free in range(n):
        if free in pivot_cols:
            continue
        v = [R0] * n
        v[free] = R1
        for c, pv in pivots:
            v[c] = -pv[free]
        basis.append(v)
    return basis


_PRIME_BITS = 20  # residues < 2**20 keep int64 matmul sums below 2**50


def _kernel_mod_p(rows, n, p):
    """(pivot columns, kernel basis) of the row space modulo p.

    Maintains reduced echelon form so each incoming row is cleaned with a
    single matrix product.  Once the rank reaches n-1, the remaining rows
    are only dotted against the candidate kernel vector.
    """
    import numpy as np

    mat = [np.fromiter((int(v) % p for v in row), dtype=np.int64, count=n) for row in rows]
    P = np.zeros((0, n), dtype=np.int64)
    pivcols = []

    def kernel_vector(free):
        v = np.zeros(n, dtype=np.int64)
        v[free] = 1
        if pivcols:
            v[np.array(pivcols)] = (-P[:, free]) % p
        return v

    i = 0
    while i < len(mat):
        r = mat[i]
        i += 1
        if pivcols:
            f = r[pivcols]
            if f.any():
                r = (r - f @ P) % p
        nz = np.nonzero(r)[0]
        if nz.size == 0:
            continue
        lead = int(nz[0])
        r = (r * pow(int(r[lead]), p - 2, p)) % p
        col = P[:, lead]
        if col.any():
            P = (P - np.outer(col, r)) % p
        P = np.vstack([P, r])
        pivcols.append(lead)
        if len(pivcols) == n:
            return tuple(range(n)), []
        if len(pivcols) == n - 1:
            free = (set(range(n)) - set(pivcols)).pop()
            v = kernel_vector(free)
            for j in range(i, len(mat)):
                if int((mat[j] @ v) % p):
                    return tuple(range(n)), []
            return tuple(sorted(pivcols)), [v]
    pivset = set(pivcols)
    basis = [kernel_vector(free) for free in range(n) if free not in pivset]
    return tuple(sorted(pivcols)), basis


def _verify_rational_kernel(rows, vecs, rng):
    """Exact check on a spread subsample of rows, then a full check modulo
    one fresh prime."""
    step = max(1, len(rows) // 25)
    for v in vecs:
        for row in rows[::step]:
            total = R0
            for a, b in zip(row, v):
                if a and b != 0:
                    total = total + a * b
            if total != 0:
                return False
    for _ in range(5):
        p = random_prime(rng, _PRIME_BITS)
        try:
            vres = [[reduce_mod(x, p) for x in v] for v in vecs]
        except ZeroDivisionError:
            continue
        import numpy as np

        for vr in vres:
            va = np.array(vr, dtype=np.int64)
            for row in rows:
                ra = np.array([int(x) % p for x in row], dtype=np.int64)
                if int(((ra * va) % p).sum() % p):
                    return False
        return True
    return False


def _nullspace_modular(sys):
    rows, n = sys.rows, sys.n_unknowns
    rng = random.Random(((sys.seed or 0) * 2654435761 + 1) % (1 << 63))
    used = set()

    def fresh_prime():
        while True:
            p = random_prime(rng, _PRIME_BITS)
            if p not in used:
                used.add(p)
                return p

    stats = sys.meta.setdefault("modular", {})
    mismatches = 0
    for _round in range(3):
        p1, p2 = fresh_prime(), fresh_prime()
        piv1, b1 = _kernel_mod_p(rows, n, p1)
        piv2, b2 = _kernel_mod_p(rows, n, p2)
        if piv1 != piv2 or len(b1) != len(b2):
            mismatches += 1
            continue
        dim = len(b1)
        stats["kernel_dim"] = dim
        if dim == 0:
            stats.update({"primes": [p1, p2], "mismatch_rounds": mismatches})
            return []
        data = [(p1, b1), (p2, b2)]
        while len(data) <= 40:
            combined = [[int(x) for x in vec] for vec in data[0][1]]
            modulus = data[0][0]
            for p, basis in data[1:]:
                for bi, vec in enumerate(basis):
                    combined[bi] = [
                        crt_pair(cr, modulus, int(xr), p)[0]
                        for cr, xr in zip(combined[bi], vec)
                    ]
                modulus *= p
            cand = []
            ok = True
            for vec in combined:
                rv = [rational_reconstruction(x, modulus) for x in vec]
                if any(x is None for x in rv):
                    ok = False
                    break
                cand.append(rv)
            if ok and _verify_rational_kernel(rows, cand, rng):
                stats.update(
                    {
                        "primes": [p for p, _ in data],
                        "mismatch_rounds": mismatches,
                        "crt_primes": len(data),
                    }
                )
                return cand
            p = fresh_prime()
            piv, basis = _kernel_mod_p(rows, n, p)
            if piv != piv1 or len(basis) != dim:
                mismatches += 1
                break
            data.append((p, basis))
        else:
            break
    raise BackendMismatch(
        "prime-field kernels disagree persistently (%d mismatching rounds)" % mismatches
    )


def nullspace(sys):
    """Kernel basis of an assembled system, exact.

    The rational backend is straight reduced-row-echelon elimination; the
    modular backend repeats the elimination modulo independent primes,
    cross-checks pivot structure and kernel dimension, and reconstructs
    rational vectors via CRT, verifying them against the exact rows.
    """
    if sys.backend == "modular":
        return _nullspace_modular(sys)
    return _nullspace_rational(sys.rows, sys.n_unknowns)


# ---------------------------------------------------------------------------
# End-to-end solve


@dataclass
class Solution:
    layout: AnsatzLayout
    phi: dict
    phibar: dict
    kappa: object
    backend: str
    seed: int
    normalized_by: tuple
    meta: dict = field(default_factory=dict)

    def h_fn(self):
        return lambda S, y1, y2: h_eval(self.layout, self.phi, S, y1, y2)

    def hbar_fn(self):
        return lambda y1, y2, S: hbar_eval(self.layout, self.phibar, y1, y2, S)


def reconstruct_z(ctx, sol, Xs, x_aux=None, aux_slot="v1"):
    """kappa-scaled Z at the lattice tuple Xs from a solved coefficient set."""
    if x_aux is None:
        x_aux = _generic_aux(ctx, Xs, aux_slot)
    raw = reconstruct_z_via_pair(ctx, Xs, x_aux, sol.h_fn(), sol.hbar_fn(), aux_slot)
    return sol.kappa * raw


def _generic_aux(ctx, Xs, aux_slot, forbidden=()):
    """First small integer for which the pair coefficients are regular."""
    banned = set(forbidden) | {rat(x) for x in Xs}
    for cand in range(2, 500):
        c = rat(cand)
        if c in banned:
            continue
        try:
            cs = zh_coeffs(ctx, c, rat(Xs[0])) if aux_slot == "v1" else zh_coeffs(
                ctx, rat(Xs[0]), c
            )
        except DegenerateSample:
            continue
        if cs.w != 0:
            return c
    raise DegenerateSample("no regular auxiliary value found")


def solve_zh(ctx, L, backend=None, seed=20260814, n_samples=None, layout=None):
    """Assemble and solve the coefficient system, normalize, and fix kappa.

    The kernel must be one-dimensional; a rank deficit triggers one doubling
    of the sample count before giving up.  The coefficient vector is scaled
    so the all-zero monomial of H has coefficient 1 (falling back to the
    first nonzero coordinate if that entry vanishes), then kappa is chosen
    so the reconstructed Z matches the all-weights-a product at the
    inhomogeneity point.
    """
    if L not in (1, 2, 3):
        raise DegenerateParameter("L must be 1, 2 or 3")
    if ctx.L != L:
        raise DegenerateParameter("context has L=%d, expected %d" % (ctx.L, L))
    if backend is None:
        backend = "rational" if L <= 2 else "modular"

    sys = assemble_system(ctx, L, layout=layout, n_samples=n_samples, seed=seed, backend=backend)
    basis = nullspace(sys)
    doubled = False
    if len(basis) != 1:
        doubled = True
        n0 = sys.meta["samples"]
        sys = assemble_system(
            ctx, L, layout=sys.layout, n_samples=2 * n0, seed=seed + 1, backend=backend
        )
        basis = nullspace(sys)
    if len(basis) != 1:
        raise NonUniqueSolution("kernel dimension %d, expected 1" % len(basis))
    vec = basis[0]

    lay = sys.layout
    h_keys = lay.h_keys()
    hbar_keys = lay.hbar_keys()
    nH = len(h_keys)

    norm_idx = 0
    assert h_keys[0] == tuple([0] * (L + 1)), "constant monomial must come first"
    if vec[norm_idx] == 0:
        norm_idx = next((i for i, v in enumerate(vec) if v != 0), None)
        if norm_idx is None:
            raise NormalizationFailure("kernel vector is zero")
    unit = vec[norm_idx]
    vec = [v / unit for v in vec]
    normalized_by = (h_keys + hbar_keys)[norm_idx]

    phi = dict(zip(h_keys, vec[:nH]))
    phibar = dict(zip(hbar_keys, vec[nH:]))

    sol = Solution(
        layout=lay,
        phi=phi,
        phibar=phibar,
        kappa=R1,
        backend=backend,
        seed=seed,
        normalized_by=normalized_by,
        meta={
            "system": sys.meta,
            "doubled": doubled,
            "normalization_fallback": norm_idx != 0,
        },
    )

    # kappa from the value at the inhomogeneity point
    target = R1
    for mi in ctx.m:
        for mj in ctx.m:
            target = target * weight(ctx, "a", mi / mj)
    m_tuple = list(ctx.m)
    aux = _generic_aux(ctx, m_tuple, "v1")
    z_raw = reconstruct_z_via_pair(ctx, m_tuple, aux, sol.h_fn(), sol.hbar_fn(), "v1")
    if z_raw == 0:
        raise NormalizationFailure("reconstructed Z vanishes at the inhomogeneity point")
    sol.kappa = target / z_raw

    # cross-checks: auxiliary independence and second-slot agreement
    check_rng = random.Random(seed + 7)
    checks = 0
    for _ in range(3):
        pts = rand_distinct_ints(check_rng, L)
        try:
            a1 = _generic_aux(ctx, pts, "v1")
            a2 = _generic_aux(ctx, pts, "v1", forbidden=(a1,))
            a3 = _generic_aux(ctx, pts, "v2")
            z1 = reconstruct_z_via_pair(ctx, pts, a1, sol.h_fn(), sol.hbar_fn(), "v1")
            z2 = reconstruct_z_via_pair(ctx, pts, a2, sol.h_fn(), sol.hbar_fn(), "v1")
            z3 = reconstruct_z_via_pair(ctx, pts, a3, sol.h_fn(), sol.hbar_fn(), "v2")
        except DegenerateSample:
            continue
        if z1 != z2 or z1 != z3:
            raise ArithmeticError("reconstructed Z depends on the auxiliary insertion")
        checks += 1
    sol.meta["cross_checks"] = checks
    return sol


# ---------------------------------------------------------------------------
# Reference-table comparison at L = 2


@dataclass(frozen=True)
class TableEntry:
    block: str  # "phi" or "phibar"
    key: tuple
    expected: object
    got: object

    @property
    def match(self):
        return self.expected == self.got


@dataclass(frozen=True)
class TableReport:
    model: object
    q: object
    entries: tuple

    @property
    def mismatches(self):
        return tuple(e for e in self.entries if not e.match)

    @property
    def passed(self):
        return not self.mismatches

    def as_dict(self):
        return {
            "model": self.model.value,
            "q": rat_str(self.q),
            "total": len(self.entries),
            "mismatch_count": len(self.mismatches),
            "mismatches": [
                {
                    "block": e.block,
                    "key": list(e.key),
                    "expected": rat_str(e.expected),
                    "got": rat_str(e.got),
                }
                for e in self.mismatches
            ],
        }


def compare_tables(ctx, sol):
    """Compare a homogeneous L=2 solution against the stored coefficient
    tables, entry by entry, at the context's q."""
    from .tables_l2 import reference_tables

    if ctx.L != 2 or any(mj != 1 for mj in ctx.m):
        raise DegenerateParameter("table comparison is defined for L=2 with unit inhomogeneities")
    phi_table, phibar_table = reference_tables(ctx.model)
    q = ctx.q
    entries = []
    for key in sorted(phi_table):
        entries.append(
            TableEntry("phi", key, phi_table[key](q), sol.phi[key])
        )
    for key in sorted(phibar_table):
        entries.append(
            TableEntry("phibar", key, phibar_table[key](q), sol.phibar[key])
        )
    return TableReport(model=ctx.model, q=q, entries=tuple(entries))
