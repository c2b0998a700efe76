import itertools
import random

import pytest

from vertex19.errors import (
    DegenerateParameter,
    DegenerateSample,
    NonUniqueSolution,
)
from vertex19.fieldcore import make_context, random_prime, rat
from vertex19.monodromy import compute_Z
from vertex19.weights import big_lambdas, weight
from vertex19.zhsolver import (
    AnsatzLayout,
    LinearSystem,
    _kernel_mod_p,
    _nullspace_rational,
    assemble_system,
    compare_tables,
    h_monomial_vector,
    monodromy_h_fns,
    nullspace,
    reconstruct_z,
    reconstruct_z_via_pair,
    solve_zh,
    zh_coeffs,
)


@pytest.fixture(params=["ik", "fz"])
def ctx2(request):
    return make_context(request.param, rat(2), (rat(2), rat(5)))


@pytest.fixture(scope="module")
def sol_hom():
    out = {}
    for model in ("ik", "fz"):
        c = make_context(model, rat(3, 2), (rat(1), rat(1)))
        out[model] = (c, solve_zh(c, 2))
    return out


def _det_closed_form(ctx, X0, X1):
    # frozen copy of the product form of the 2x2 determinant
    q, z, p = ctx.q, ctx.zeta, ctx.p
    r = X0 / X1
    lam0, lamb0 = big_lambdas(ctx, X0)
    lam1, lamb1 = big_lambdas(ctx, X1)
    den = (r - 1) ** 2 * (q ** 2 - z * r)
    qq = q ** 2 - rat(1)
    t1 = ((1 - q ** 2 * r) ** 2 * (1 - z * r) ** 2 / den) * lam0 * lamb1 / (p * qq)
    t2 = ((1 - z * r) ** 2 * (q ** 4 - z ** 2 * r) ** 2 / (z ** 2 * den)) * (
        lam1 * lamb0 / (p ** 5 * qq)
    )
    return t1 - t2


def test_determinant_is_2x2_minor_and_matches_product_form(ctx2):
    rng = random.Random(3)
    hits = 0
    while hits < 8:
        X0, X1 = rat(rng.randint(2, 60)), rat(rng.randint(2, 60))
        try:
            cs = zh_coeffs(ctx2, X0, X1)
        except DegenerateSample:
            continue
        hits += 1
        assert cs.w == cs.omega0 * cs.omegabar1 - cs.omega1 * cs.omegabar0
        assert cs.w == _det_closed_form(ctx2, X0, X1)


def test_zh_coeffs_rejects_coincident_pair(ctx2):
    with pytest.raises(DegenerateSample):
        zh_coeffs(ctx2, rat(3), rat(3))


def test_zh_coeffs_rejects_d33_pole():
    # X0/X1 = q^2/zeta makes the d33 denominator vanish
    ctx = make_context("ik", rat(2), (rat(1),))
    r = ctx.q ** 2 / ctx.zeta
    with pytest.raises(DegenerateSample):
        zh_coeffs(ctx, r * rat(4), rat(4))


def test_upsilons_vanish_at_product_roots():
    ctx = make_context("ik", rat(2), (rat(2), rat(3)))
    cs = zh_coeffs(ctx, ctx.zeta * rat(2), rat(7))
    assert cs.upsilon0 == 0
    cs = zh_coeffs(ctx, rat(2), rat(7))
    assert cs.upsilonbar0 == 0


def test_layout_counts_and_key_order():
    for L, expect in ((1, 4), (2, 64)):
        lay = AnsatzLayout(L)
        assert lay.unknowns() == expect
        assert len(lay.h_keys()) == expect // 2
        assert lay.h_keys()[0] == tuple([0] * (L + 1))
        assert lay.hbar_keys()[0] == tuple([0] * (L + 1))
    lay3 = AnsatzLayout(3, symmetrize=True)
    assert lay3.unknowns() == 756
    assert len(lay3.h_keys()) == 378


def test_layout_exponent_ranges():
    lay = AnsatzLayout(2)
    h = lay.h_keys()
    assert max(k[0] for k in h) == 3  # lattice slot runs to 2L-1
    assert max(k[1] for k in h) == 1  # first inserted slot to L-1
    assert max(k[2] for k in h) == 3  # second inserted slot to 2L-1
    hb = lay.hbar_keys()
    assert max(k[0] for k in hb) == 3
    assert max(k[1] for k in hb) == 1
    assert max(k[2] for k in hb) == 3


def test_symmetrized_monomials_match_manual_sum():
    lay = AnsatzLayout(3, symmetrize=True)
    S = (rat(2), rat(5))
    y1, y2 = rat(3), rat(7)
    vec = h_monomial_vector(lay, S, y1, y2)
    for key, got in zip(lay.h_keys(), vec):
        lat, v1, v2 = key[:2], key[2], key[3]
        manual = sum(
            S[0] ** a * S[1] ** b for a, b in set(itertools.permutations(lat))
        )
        assert got == manual * y1 ** v1 * y2 ** v2


def test_reconstruction_from_monodromy_values(ctx2):
    Xs = (rat(3), rat(7))
    h_fn, hbar_fn = monodromy_h_fns(ctx2)
    z = compute_Z(ctx2, Xs)
    for slot in ("v1", "v2"):
        got = reconstruct_z_via_pair(ctx2, Xs, rat(11), h_fn, hbar_fn, aux_slot=slot)
        assert got == z, slot


def test_true_vector_annihilates_assembled_rows():
    ctx = make_context("ik", rat(2), (rat(3),))
    sys = assemble_system(ctx, 1, seed=1)
    truth = [rat(1), rat(-1, 3), ctx.zeta, rat(-1, 3)]
    assert sys.n_unknowns == 4
    for row in sys.rows:
        assert sum(a * b for a, b in zip(row, truth)) == 0


def test_assembled_rows_are_reduced_integers():
    ctx = make_context("fz", rat(2), (rat(2), rat(5)))
    sys = assemble_system(ctx, 2, n_samples=4, seed=2)
    import math

    for row in sys.rows:
        assert all(isinstance(v, int) for v in row)
        nz = [abs(v) for v in row if v]
        assert nz and math.gcd(*nz) == 1
    assert sys.meta["max_row_bits"] > 0


def test_nullspace_edge_cases():
    eye = LinearSystem(3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert nullspace(eye) == []
    zero = LinearSystem(3, [[0, 0, 0]])
    basis = nullspace(zero)
    assert len(basis) == 3
    for i, v in enumerate(basis):
        assert v[i] == 1 and sum(1 for x in v if x != 0) == 1
    small = LinearSystem(3, [[1, -2, 0], [0, 0, 1]])
    basis = nullspace(small)
    assert basis == [[rat(2), rat(1), rat(0)]]


def _normalize(vec):
    unit = next(v for v in vec if v != 0)
    return [v / unit for v in vec]


def test_modular_backend_matches_rational():
    for model, L in (("ik", 1), ("fz", 2)):
        ms = tuple(rat(v) for v in range(2, 2 + L))
        ctx = make_context(model, rat(2), ms)
        sys_r = assemble_system(ctx, L, seed=5, backend="rational")
        sys_m = assemble_system(ctx, L, seed=5, backend="modular")
        assert sys_r.rows == sys_m.rows
        b_r = nullspace(sys_r)
        b_m = nullspace(sys_m)
        assert len(b_r) == len(b_m) == 1
        assert _normalize(b_r[0]) == _normalize(b_m[0])
        stats = sys_m.meta["modular"]
        assert stats["kernel_dim"] == 1
        assert len(stats["primes"]) >= 2


def test_kernel_mod_p_agrees_with_rational_on_underdetermined_block():
    ctx = make_context("ik", rat(3, 2), (rat(1), rat(1)))
    sys = assemble_system(ctx, 2, n_samples=20, seed=7)
    rows = sys.rows[:30]
    rational = _nullspace_rational(rows, sys.n_unknowns)
    rng = random.Random(9)
    for _ in range(2):
        p = random_prime(rng, 20)
        piv, basis = _kernel_mod_p(rows, sys.n_unknowns, p)
        assert len(basis) == len(rational)
        assert len(piv) == sys.n_unknowns - len(rational)


@pytest.mark.parametrize("model", ["ik", "fz"])
def test_solve_smallest_case_closed_form(model):
    m1 = rat(3)
    ctx = make_context(model, rat(2), (m1,))
    sol = solve_zh(ctx, 1)
    assert sol.normalized_by == (0, 0)
    assert sol.phi == {(0, 0): rat(1), (0, 1): -1 / m1}
    assert sol.phibar == {(0, 0): ctx.zeta, (1, 0): -1 / m1}
    for X in (rat(5), rat(7, 2)):
        assert reconstruct_z(ctx, sol, (X,)) == weight(ctx, "d13", X / m1)


def test_solve_l2_reproduces_stored_tables(sol_hom):
    for model, (ctx, sol) in sol_hom.items():
        report = compare_tables(ctx, sol)
        assert report.passed, report.mismatches
        assert len(report.entries) == 64
        zeros = sum(1 for e in report.entries if e.expected == 0)
        assert zeros == (16 if model == "fz" else 0)


def test_compare_tables_needs_homogeneous_context():
    ctx = make_context("ik", rat(2), (rat(2), rat(5)))
    sol = solve_zh(ctx, 2)
    with pytest.raises(DegenerateParameter):
        compare_tables(ctx, sol)
    # while we have the solution: reconstruction at fresh points, both slots
    for pts in ((rat(3), rat(7)), (rat(11), rat(4))):
        z = compute_Z(ctx, pts)
        assert reconstruct_z(ctx, sol, pts, aux_slot="v1") == z
        assert reconstruct_z(ctx, sol, pts, aux_slot="v2") == z
    assert sol.meta["cross_checks"] >= 1
    assert not sol.meta["doubled"]


def test_solve_rejects_bad_sizes():
    ctx = make_context("ik", rat(2), (rat(2),))
    with pytest.raises(DegenerateParameter):
        solve_zh(ctx, 4)
    with pytest.raises(DegenerateParameter):
        solve_zh(ctx, 2)


def test_solve_underdetermined_raises():
    ctx = make_context("ik", rat(3, 2), (rat(1), rat(1)))
    with pytest.raises(NonUniqueSolution):
        solve_zh(ctx, 2, n_samples=3)


def test_reported_solution_normalization(sol_hom):
    for model, (ctx, sol) in sol_hom.items():
        assert sol.phi[(0, 0, 0)] == 1
        assert sol.kappa != 0
        assert not sol.meta["normalization_fallback"]
