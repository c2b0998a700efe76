"""Exchange relations among the monodromy entries A, B, E.

Each relation is encoded as a finite sum of scalar-weighted operator words
that must vanish identically on the chain space.  Words are evaluated in
exact arithmetic, either as full 3**L x 3**L matrices (L <= 3) or against a
fixed set of probe vectors (L = 4).

Scalar coefficients are ratios of local weights at the ratio of the two
spectral values involved; any vanishing denominator raises DegenerateSample
so callers can resample.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from .errors import DegenerateParameter, DegenerateSample, OmegaZero
from .fieldcore import R0, R1, rand_distinct_ints, rat, rat_str
from .monodromy import apply_t_entry, compute_H, compute_Hbar, compute_Z
from .weights import omegas, weight


class RelationId(Enum):
    # quadratic exchange rules, ordered as commuting the left factor through
    AA_COMMUTE = "aa_commute"
    A_PAST_B = "a_past_b"
    A_PAST_E = "a_past_e"
    B_PAST_A = "b_past_a"
    BB_TO_AE = "bb_to_ae"
    B_PAST_E = "b_past_e"
    E_PAST_A = "e_past_a"
    E_PAST_B = "e_past_b"
    EE_COMMUTE = "ee_commute"
    # eliminations of mixed words in favour of B-words, and their chain forms
    AE_TO_BB = "ae_to_bb"
    EA_TO_BB = "ea_to_bb"
    AE_TO_BB_CHAIN = "ae_to_bb_chain"
    EA_TO_BB_CHAIN = "ea_to_bb_chain"
    # reorderings of two B's through a product of E's
    BB_LEFT_TO_RIGHT = "bb_left_to_right"
    BB_RIGHT_TO_LEFT = "bb_right_to_left"
    # functional equations tying Z, H, Hbar together
    PHI_Z_H = "phi_z_h"
    PHI_Z_HBAR = "phi_z_hbar"
    PHI_H_HBAR = "phi_h_hbar"


NINE_RELATIONS = (
    RelationId.AA_COMMUTE,
    RelationId.A_PAST_B,
    RelationId.A_PAST_E,
    RelationId.B_PAST_A,
    RelationId.BB_TO_AE,
    RelationId.B_PAST_E,
    RelationId.E_PAST_A,
    RelationId.E_PAST_B,
    RelationId.EE_COMMUTE,
)

HIGHER_RELATIONS = (
    RelationId.AE_TO_BB,
    RelationId.EA_TO_BB,
    RelationId.AE_TO_BB_CHAIN,
    RelationId.EA_TO_BB_CHAIN,
    RelationId.BB_LEFT_TO_RIGHT,
    RelationId.BB_RIGHT_TO_LEFT,
)


@dataclass(frozen=True)
class RelationResidual:
    relation: RelationId
    operator_norm_zero: bool
    sample: tuple
    note: str = ""

    def as_dict(self):
        return {
            "relation": self.relation.value,
            "operator_norm_zero": self.operator_norm_zero,
            "sample": [rat_str(x) for x in self.sample],
            "note": self.note,
        }


_ENTRY = {"A": (1, 1), "B": (1, 2), "E": (1, 3)}


def _ratio(ctx, num, den, u):
    d = weight(ctx, den, u)
    if d == 0:
        raise DegenerateSample("weight %s vanishes at ratio %s" % (den, rat_str(u)))
    return weight(ctx, num, u) / d


def ae_elimination_coeffs(ctx, u):
    """Coefficients of the A..E elimination at the ordered pair (0, 1),
    argument u = X1/X0.  Keys name the operator word each one multiplies."""
    d11d12 = _ratio(ctx, "d11", "d12", u)
    d31d32 = _ratio(ctx, "d31", "d32", u)
    a_d32 = _ratio(ctx, "a", "d32", u)
    d21d32 = _ratio(ctx, "d21", "d32", u)
    d22d32 = _ratio(ctx, "d22", "d32", u)
    return {
        "a0e1": d11d12 - d31d32,
        "a1e0": a_d32,
        "b0b1": d21d32 - d22d32 * d11d12,
        "b1b0": a_d32 * d11d12,
    }


def ea_elimination_coeffs(ctx, u):
    """Coefficients of the E..A elimination at the ordered pair (0, 1),
    argument u = X1/X0."""
    a_d33 = _ratio(ctx, "a", "d33", u)
    d12d32 = _ratio(ctx, "d12", "d32", u)
    d13d33 = _ratio(ctx, "d13", "d33", u)
    a_d32 = _ratio(ctx, "a", "d32", u)
    d23d33 = _ratio(ctx, "d23", "d33", u)
    d22d32 = _ratio(ctx, "d22", "d32", u)
    return {
        "e1a0": a_d33,
        "e0a1": d12d32 - d13d33,
        "b1b0": a_d32,
        "b0b1": d23d33 - d22d32,
    }


# ---------------------------------------------------------------------------
# Six-vertex-style reordering coefficients


class CoeffKind(Enum):
    M = "M"
    N = "N"
    MBAR = "Mbar"
    NBAR = "Nbar"


def _ab(ctx, u):
    b = weight(ctx, "b", u)
    if b == 0:
        raise DegenerateSample("b vanishes at ratio %s" % rat_str(u))
    return weight(ctx, "a", u) / b


def _over_b(ctx, name, u):
    b = weight(ctx, "b", u)
    if b == 0:
        raise DegenerateSample("b vanishes at ratio %s" % rat_str(u))
    return weight(ctx, name, u) / b


def exchange_coeffs(ctx, kind, n, j, k, Xs):
    """Scalar coefficients for commuting two B's through a string of n E's.

    Indices follow the tuple (X_0, ..., X_{n+1}); the plain kinds move the
    pair from the left of the string to the right, the barred kinds the
    other way.  M/Mbar need entries 0..n of Xs, N/Nbar all n+2.
    """
    kind = CoeffKind(kind) if not isinstance(kind, CoeffKind) else kind
    xs = [rat(x) for x in Xs]
    if not 0 <= j <= n:
        raise DegenerateParameter("j out of range")
    if kind in (CoeffKind.M, CoeffKind.MBAR):
        if len(xs) < n + 1:
            raise DegenerateParameter("need n+1 spectral values")
    else:
        if len(xs) < n + 2:
            raise DegenerateParameter("need n+2 spectral values")
        if not (0 <= k <= n + 1 and k != j):
            raise DegenerateParameter("k out of range")

    if kind is CoeffKind.M:
        if j == 0:
            out = R1
            for l in range(1, n + 1):
                out = out * _ab(ctx, xs[l] / xs[0])
            return out
        out = -_over_b(ctx, "c", xs[j] / xs[0])
        for l in range(1, n + 1):
            if l != j:
                out = out * _ab(ctx, xs[l] / xs[j])
        return out

    if kind is CoeffKind.N:
        if k == n + 1:
            out = R1
            for l in range(0, n + 1):
                if l != j:
                    out = out * _ab(ctx, xs[l] / xs[n + 1])
            return out
        out = -_over_b(ctx, "c", xs[k] / xs[n + 1])
        for l in range(0, n + 1):
            if l != j and l != k:
                out = out * _ab(ctx, xs[l] / xs[k])
        return out

    if kind is CoeffKind.MBAR:
        if j == 0:
            out = R1
            for l in range(1, n + 1):
                out = out * _ab(ctx, xs[0] / xs[l])
            return out
        out = -_over_b(ctx, "cbar", xs[0] / xs[j])
        for l in range(1, n + 1):
            if l != j:
                out = out * _ab(ctx, xs[j] / xs[l])
        return out

    if k == n + 1:
        out = R1
        for l in range(0, n + 1):
            if l != j:
                out = out * _ab(ctx, xs[n + 1] / xs[l])
        return out
    out = -_over_b(ctx, "cbar", xs[n + 1] / xs[k])
    for l in range(0, n + 1):
        if l != j and l != k:
            out = out * _ab(ctx, xs[k] / xs[l])
    return out


# ---------------------------------------------------------------------------
# Word evaluation


def _word_apply(ctx, ops, v):
    for name, X in reversed(ops):
        al, be = _ENTRY[name]
        v = apply_t_entry(ctx, al, be, X, v)
    return v


def _entry_matrix(ctx, name, X):
    dim = 3 ** ctx.L
    al, be = _ENTRY[name]
    cols = []
    for col in range(dim):
        e = [R0] * dim
        e[col] = R1
        cols.append(apply_t_entry(ctx, al, be, X, e))
    return [[cols[c][r] for c in range(dim)] for r in range(dim)]


def _mat_mul(A, B):
    n = len(A)
    p = len(B[0])
    out = [[R0] * p for _ in range(n)]
    for i, arow in enumerate(A):
        orow = out[i]
        for k2, aik in enumerate(arow):
            if aik == 0:
                continue
            brow = B[k2]
            for j2, bkj in enumerate(brow):
                if bkj != 0:
                    orow[j2] = orow[j2] + aik * bkj
    return out


def _probe_vectors(dim, count=5):
    rng = random.Random(0x5EED)
    return [[rat(rng.randint(1, 9)) for _ in range(dim)] for _ in range(count)]


def _terms_vanish(ctx, terms):
    dim = 3 ** ctx.L
    if ctx.L <= 3:
        cache = {}

        def mat(op):
            if op not in cache:
                cache[op] = _entry_matrix(ctx, op[0], op[1])
            return cache[op]

        total = [[R0] * dim for _ in range(dim)]
        for coeff, ops in terms:
            if coeff == 0:
                continue
            prod = mat(ops[0])
            for op in ops[1:]:
                prod = _mat_mul(prod, mat(op))
            for i in range(dim):
                trow = total[i]
                prow = prod[i]
                for j in range(dim):
                    if prow[j] != 0:
                        trow[j] = trow[j] + coeff * prow[j]
        return all(x == 0 for row in total for x in row)

    for v in _probe_vectors(dim):
        acc = [R0] * dim
        for coeff, ops in terms:
            if coeff == 0:
                continue
            w = _word_apply(ctx, ops, v)
            acc = [x + coeff * y for x, y in zip(acc, w)]
        if any(x != 0 for x in acc):
            return False
    return True


# ---------------------------------------------------------------------------
# Relation -> term lists


def _nine_terms(ctx, rel, X1, X2):
    u = X2 / X1
    A1, A2 = ("A", X1), ("A", X2)
    B1, B2 = ("B", X1), ("B", X2)
    E1, E2 = ("E", X1), ("E", X2)
    r = lambda nm, dn: _ratio(ctx, nm, dn, u)
    if rel is RelationId.AA_COMMUTE:
        return [(R1, [A1, A2]), (-R1, [A2, A1])]
    if rel is RelationId.A_PAST_B:
        return [(R1, [A1, B2]), (-r("a", "b"), [B2, A1]), (r("c", "b"), [B1, A2])]
    if rel is RelationId.A_PAST_E:
        return [
            (R1, [A1, E2]),
            (-r("a", "d33"), [E2, A1]),
            (r("d13", "d33"), [E1, A2]),
            (r("d23", "d33"), [B1, B2]),
        ]
    if rel is RelationId.B_PAST_A:
        return [(R1, [B1, A2]), (-r("a", "b"), [A2, B1]), (r("cbar", "b"), [A1, B2])]
    if rel is RelationId.BB_TO_AE:
        return [
            (R1, [B1, B2]),
            (-r("a", "d21"), [A2, E1]),
            (r("d31", "d21"), [A1, E2]),
            (r("d11", "d21"), [E1, A2]),
        ]
    if rel is RelationId.B_PAST_E:
        return [(R1, [B1, E2]), (-r("a", "b"), [E2, B1]), (r("c", "b"), [E1, B2])]
    if rel is RelationId.E_PAST_A:
        return [
            (R1, [E1, A2]),
            (-r("a", "d12"), [B2, B1]),
            (r("d22", "d12"), [B1, B2]),
            (r("d32", "d12"), [A1, E2]),
        ]
    if rel is RelationId.E_PAST_B:
        return [(R1, [E1, B2]), (-r("a", "b"), [B2, E1]), (r("cbar", "b"), [B1, E2])]
    if rel is RelationId.EE_COMMUTE:
        return [(R1, [E1, E2]), (-R1, [E2, E1])]
    raise DegenerateParameter("not a two-point relation: %s" % rel)


def _ae_terms(ctx, X0, X1):
    cs = ae_elimination_coeffs(ctx, X1 / X0)
    return [
        (cs["a0e1"], [("A", X0), ("E", X1)]),
        (cs["a1e0"], [("A", X1), ("E", X0)]),
        (-cs["b0b1"], [("B", X0), ("B", X1)]),
        (-cs["b1b0"], [("B", X1), ("B", X0)]),
    ]


def _ea_terms(ctx, X0, X1):
    cs = ea_elimination_coeffs(ctx, X1 / X0)
    return [
        (cs["e1a0"], [("E", X1), ("A", X0)]),
        (cs["e0a1"], [("E", X0), ("A", X1)]),
        (-cs["b1b0"], [("B", X1), ("B", X0)]),
        (-cs["b0b1"], [("B", X0), ("B", X1)]),
    ]


def _ae_chain_terms(ctx, xs):
    cs = ae_elimination_coeffs(ctx, xs[1] / xs[0])
    tail = [("E", x) for x in xs[2:]]
    return [
        (cs["a0e1"], [("A", xs[0])] + [("E", x) for x in xs[1:]]),
        (cs["a1e0"], [("A", xs[1]), ("E", xs[0])] + tail),
        (-cs["b0b1"], [("B", xs[0]), ("B", xs[1])] + tail),
        (-cs["b1b0"], [("B", xs[1]), ("B", xs[0])] + tail),
    ]


def _ea_chain_terms(ctx, xs):
    cs = ea_elimination_coeffs(ctx, xs[1] / xs[0])
    tail = [("E", x) for x in xs[2:]]
    return [
        (cs["e1a0"], [("E", x) for x in xs[1:]] + [("A", xs[0])]),
        (cs["e0a1"], [("E", xs[0])] + tail + [("A", xs[1])]),
        (-cs["b0b1"], tail + [("B", xs[0]), ("B", xs[1])]),
        (-cs["b1b0"], tail + [("B", xs[1]), ("B", xs[0])]),
    ]


def _bb_left_to_right_terms(ctx, n, xs):
    lhs = [("B", xs[n + 1]), ("B", xs[0])] + [("E", xs[l]) for l in range(1, n + 1)]
    terms = [(R1, lhs)]
    for j in range(0, n + 1):
        mj = exchange_coeffs(ctx, CoeffKind.M, n, j, None, xs[: n + 1])
        for k in range(0, n + 2):
            if k == j:
                continue
            njk = exchange_coeffs(ctx, CoeffKind.N, n, j, k, xs)
            word = [("E", xs[l]) for l in range(0, n + 2) if l not in (j, k)]
            word += [("B", xs[k]), ("B", xs[j])]
            terms.append((-mj * njk, word))
    return terms


def _bb_right_to_left_terms(ctx, n, xs):
    lhs = [("E", xs[l]) for l in range(1, n + 1)] + [("B", xs[0]), ("B", xs[n + 1])]
    terms = [(R1, lhs)]
    for j in range(0, n + 1):
        mj = exchange_coeffs(ctx, CoeffKind.MBAR, n, j, None, xs[: n + 1])
        for k in range(0, n + 2):
            if k == j:
                continue
            njk = exchange_coeffs(ctx, CoeffKind.NBAR, n, j, k, xs)
            word = [("B", xs[j]), ("B", xs[k])]
            word += [("E", xs[l]) for l in range(0, n + 2) if l not in (j, k)]
            terms.append((-mj * njk, word))
    return terms


def _relation_terms(ctx, rel, L, params):
    xs = [rat(x) for x in params]
    if any(x == 0 for x in xs):
        raise DegenerateSample("zero spectral value")
    if rel in NINE_RELATIONS:
        if len(xs) != 2:
            raise DegenerateParameter("two spectral values expected")
        return _nine_terms(ctx, rel, xs[0], xs[1])
    if rel is RelationId.AE_TO_BB or rel is RelationId.EA_TO_BB:
        if len(xs) != 2:
            raise DegenerateParameter("two spectral values expected")
        fn = _ae_terms if rel is RelationId.AE_TO_BB else _ea_terms
        return fn(ctx, xs[0], xs[1])
    if rel is RelationId.AE_TO_BB_CHAIN or rel is RelationId.EA_TO_BB_CHAIN:
        count = (L if L is not None else ctx.L) + 1
        if len(xs) != count:
            raise DegenerateParameter("chain relation expects L+1 spectral values")
        fn = _ae_chain_terms if rel is RelationId.AE_TO_BB_CHAIN else _ea_chain_terms
        return fn(ctx, xs)
    if rel is RelationId.BB_LEFT_TO_RIGHT or rel is RelationId.BB_RIGHT_TO_LEFT:
        n = L if L is not None else len(xs) - 2
        if len(xs) != n + 2:
            raise DegenerateParameter("reordering of order n expects n+2 spectral values")
        fn = (
            _bb_left_to_right_terms
            if rel is RelationId.BB_LEFT_TO_RIGHT
            else _bb_right_to_left_terms
        )
        return fn(ctx, n, xs)
    raise DegenerateParameter(
        "relation %s is checked by verify_phi_lemmas" % rel.value
    )


def verify_relation(ctx, rel, L=None, params=None):
    """Check one operator relation at an explicit parameter tuple.

    For the chain forms L is the number of E-factors involved; for the
    B-reordering forms it is the order n of the E-string.
    """
    if isinstance(rel, str):
        rel = RelationId(rel)
    if params is None:
        raise DegenerateParameter("params required; use sample_relation for RNG draws")
    if ctx.L > 4:
        raise DegenerateParameter("operator checks are bounded at L <= 4")
    terms = _relation_terms(ctx, rel, L, params)
    zero = _terms_vanish(ctx, terms)
    note = "matrix" if ctx.L <= 3 else "probe"
    return RelationResidual(rel, zero, tuple(rat(x) for x in params), note)


def relation_param_count(rel, L):
    if rel in NINE_RELATIONS or rel in (RelationId.AE_TO_BB, RelationId.EA_TO_BB):
        return 2
    if rel in (RelationId.AE_TO_BB_CHAIN, RelationId.EA_TO_BB_CHAIN):
        return L + 1
    if rel in (RelationId.BB_LEFT_TO_RIGHT, RelationId.BB_RIGHT_TO_LEFT):
        return L + 2
    if rel in (RelationId.PHI_Z_H, RelationId.PHI_Z_HBAR, RelationId.PHI_H_HBAR):
        return L + 1
    raise DegenerateParameter("unknown relation")


def sample_relation(ctx, rel, L, rng, attempts=50):
    """Draw a nondegenerate parameter tuple and check the relation on it."""
    if isinstance(rel, str):
        rel = RelationId(rel)
    count = relation_param_count(rel, L if L is not None else ctx.L)
    for _ in range(attempts):
        xs = rand_distinct_ints(rng, count)
        try:
            return verify_relation(ctx, rel, L, tuple(xs))
        except DegenerateSample:
            continue
    raise DegenerateSample("no nondegenerate sample after %d attempts" % attempts)


# ---------------------------------------------------------------------------
# Functional equations for Z, H, Hbar


def _hhb_line2_rhs(ctx, tup):
    """Right side of the second reduction line at the full tuple
    (X_0, ..., X_L): sum of M*N weighted, omega-weighted H values."""
    n = len(tup) - 2
    total = R0
    for j in range(0, n + 1):
        mj = exchange_coeffs(ctx, CoeffKind.M, n, j, None, tup[: n + 1])
        om_j = omegas(ctx, tup[j])[0]
        for k in range(0, n + 2):
            if k == j:
                continue
            njk = exchange_coeffs(ctx, CoeffKind.N, n, j, k, tup)
            rest = [tup[l] for l in range(0, n + 2) if l not in (j, k)]
            total = total + mj * njk * om_j * compute_H(ctx, rest, tup[j], tup[k])
    return total


def verify_phi_lemmas(ctx, L, params):
    """Check the three functional equations at one spectral tuple.

    params is (X_0, X_1, ..., X_L) with X_0 the auxiliary value.  Returns a
    tuple of residuals: the Z-to-H equation, the Z-to-Hbar equation, both
    reduction lines between H and Hbar, and the derivation of line 1 by
    substituting line 2 (their mutual redundancy).
    """
    from .zhsolver import zh_coeffs

    if ctx.L != L:
        raise DegenerateParameter("context has L=%d, expected %d" % (ctx.L, L))
    xs = [rat(x) for x in params]
    if len(xs) != L + 1:
        raise DegenerateParameter("expected L+1 spectral values")
    if len(set(xs)) != len(xs):
        raise DegenerateSample("coincident spectral values")
    sample = tuple(xs)
    out = []

    cs = zh_coeffs(ctx, xs[0], xs[1])
    x_full = xs[1:]
    x_drop1 = xs[2:]
    x_repl1 = [xs[0]] + xs[2:]
    z_a = compute_Z(ctx, x_full)
    z_b = compute_Z(ctx, x_repl1)

    lhs = cs.omega0 * z_a + cs.omega1 * z_b
    rhs = cs.upsilon0 * compute_H(ctx, x_drop1, xs[0], xs[1]) + cs.upsilon1 * compute_H(
        ctx, x_drop1, xs[1], xs[0]
    )
    out.append(RelationResidual(RelationId.PHI_Z_H, lhs == rhs, sample, "matrixfree"))

    lhs = cs.omegabar0 * z_a + cs.omegabar1 * z_b
    rhs = cs.upsilonbar0 * compute_Hbar(ctx, xs[1], xs[0], x_drop1) + cs.upsilonbar1 * compute_Hbar(
        ctx, xs[0], xs[1], x_drop1
    )
    out.append(RelationResidual(RelationId.PHI_Z_HBAR, lhs == rhs, sample, "matrixfree"))

    # reduction lines at the full tuple; n = L - 1
    n = L - 1
    mids = xs[1:L]

    lhs1 = omegas(ctx, xs[L])[0] * compute_H(ctx, mids, xs[L], xs[0])
    rhs1 = R0
    barred = {}
    for j in range(0, n + 1):
        mbj = exchange_coeffs(ctx, CoeffKind.MBAR, n, j, None, xs[: n + 1])
        omb_j = omegas(ctx, xs[j])[1]
        for k in range(0, n + 2):
            if k == j:
                continue
            nbjk = exchange_coeffs(ctx, CoeffKind.NBAR, n, j, k, xs)
            barred[(j, k)] = mbj * nbjk
            rest = [xs[l] for l in range(0, n + 2) if l not in (j, k)]
            rhs1 = rhs1 + mbj * nbjk * omb_j * compute_Hbar(ctx, xs[k], xs[j], rest)
    out.append(RelationResidual(RelationId.PHI_H_HBAR, lhs1 == rhs1, sample, "line1"))

    lhs2 = omegas(ctx, xs[L])[1] * compute_Hbar(ctx, xs[0], xs[L], mids)
    rhs2 = _hhb_line2_rhs(ctx, xs)
    out.append(RelationResidual(RelationId.PHI_H_HBAR, lhs2 == rhs2, sample, "line2"))

    # line 1 with every Hbar term replaced through line 2 at the permuted
    # tuple (X_k, rest..., X_j); equality shows the two lines carry the same
    # information rather than two independent constraints
    rhs1_sub = R0
    for j in range(0, n + 1):
        for k in range(0, n + 2):
            if k == j:
                continue
            rest = [xs[l] for l in range(0, n + 2) if l not in (j, k)]
            rhs1_sub = rhs1_sub + barred[(j, k)] * _hhb_line2_rhs(
                ctx, [xs[k]] + rest + [xs[j]]
            )
    out.append(
        RelationResidual(RelationId.PHI_H_HBAR, lhs1 == rhs1_sub, sample, "line1-via-line2")
    )
    return tuple(out)


def sample_phi_lemmas(ctx, L, rng, attempts=50):
    for _ in range(attempts):
        xs = rand_distinct_ints(rng, L + 1)
        try:
            return verify_phi_lemmas(ctx, L, tuple(xs))
        except (DegenerateSample, OmegaZero):
            continue
    raise DegenerateSample("no nondegenerate sample after %d attempts" % attempts)
