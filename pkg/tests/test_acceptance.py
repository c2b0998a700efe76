"""End-to-end acceptance gate.

Each test covers one advertised guarantee of the package, prints a single
pass/fail line, and asserts the documented runtime budget.  Runtimes are
generous: the measured totals are far below every limit on commodity
hardware, so a budget trip signals a real regression.
"""

import random
import time

from vertex19 import algebra, bruteforce, monodromy
from vertex19.errors import DegenerateSample
from vertex19.fieldcore import make_context, rand_distinct_ints, rand_rational, rat
from vertex19.weights import big_lambdas, check_ybe
from vertex19.zhsolver import compare_tables, reconstruct_z, solve_zh, zh_coeffs

MODELS = ("ik", "fz")


class _Budget:
    def __init__(self, name, seconds):
        self.name = name
        self.seconds = seconds

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.t0
        state = "FAIL" if exc_type else "PASS"
        print("%s: %s (%.2fs, budget %ds)" % (self.name, state, elapsed, self.seconds))
        if exc_type is None:
            assert elapsed < self.seconds, "budget exceeded: %.2fs" % elapsed


def _ctx(model, L, p=rat(3, 2), rng=None, homogeneous=False):
    if homogeneous:
        ms = (rat(1),) * L
    else:
        ms = tuple(rand_distinct_ints(rng or random.Random(L), L))
    return make_context(model, p, ms)


def test_criterion_1_yang_baxter_exact():
    with _Budget("criterion 1: Yang-Baxter, 20 seeded samples per model", 1):
        rng = random.Random(19)
        for model in MODELS:
            done = 0
            while done < 20:
                p = rand_rational(rng, 2, 9)
                x12 = rand_rational(rng, 2, 19)
                x13 = rand_rational(rng, 2, 19)
                if x12 == x13:
                    continue
                ctx = make_context(model, p, (rat(1),))
                assert check_ybe(ctx, x12, x13), (model, p, x12, x13)
                done += 1


def test_criterion_2_nine_exchange_relations():
    with _Budget("criterion 2: nine exchange relations, L in {1,2,3}, 5 samples", 30):
        for model in MODELS:
            for L in (1, 2, 3):
                rng = random.Random(100 * L + (model == "fz"))
                ctx = _ctx(model, L, rng=rng)
                for rel in algebra.NINE_RELATIONS:
                    for _ in range(5):
                        res = algebra.sample_relation(ctx, rel, L, rng)
                        assert res.operator_norm_zero, (model, L, res.as_dict())


def test_criterion_3_higher_order_relations():
    with _Budget("criterion 3: elimination, chain and reordering relations", 60):
        for model in MODELS:
            rng = random.Random(3 if model == "ik" else 4)
            for L in (1, 2):
                ctx = _ctx(model, L, rng=rng)
                for rel in (algebra.RelationId.AE_TO_BB, algebra.RelationId.EA_TO_BB):
                    res = algebra.sample_relation(ctx, rel, L, rng)
                    assert res.operator_norm_zero, (model, L, rel)
            for L in (2, 3):
                ctx = _ctx(model, L, rng=rng)
                for rel in (
                    algebra.RelationId.AE_TO_BB_CHAIN,
                    algebra.RelationId.EA_TO_BB_CHAIN,
                ):
                    res = algebra.sample_relation(ctx, rel, L, rng)
                    assert res.operator_norm_zero, (model, L, rel)
            ctx = _ctx(model, 2, rng=rng)
            for n in (1, 2):
                for rel in (
                    algebra.RelationId.BB_LEFT_TO_RIGHT,
                    algebra.RelationId.BB_RIGHT_TO_LEFT,
                ):
                    res = algebra.sample_relation(ctx, rel, n, rng)
                    assert res.operator_norm_zero, (model, n, rel)


def test_criterion_4_enumeration_vs_transfer_rows():
    with _Budget("criterion 4: enumeration vs transfer rows, 10 points each", 60):
        for model in MODELS:
            for L in (1, 2, 3):
                rng = random.Random(40 + L)
                ctx = _ctx(model, L, rng=rng)
                zb = bruteforce.dwbc_boundary(L)
                fb = bruteforce.f_boundary(L)
                fbb = bruteforce.fbar_boundary(L)
                for _ in range(10):
                    xs = rand_distinct_ints(rng, L)
                    assert monodromy.compute_Z(ctx, xs) == bruteforce.partition_bruteforce(
                        ctx, zb, xs
                    )
                    ys = rand_distinct_ints(rng, L + 1)
                    s, y1, y2 = ys[2:], ys[0], ys[1]
                    assert monodromy.compute_F(ctx, s, y1, y2) == bruteforce.partition_bruteforce(
                        ctx, fb, ys
                    )
                    assert monodromy.compute_Fbar(
                        ctx, y1, y2, s
                    ) == bruteforce.partition_bruteforce(ctx, fbb, list(s) + [y1, y2])


def test_criterion_5_structural_lemmas():
    with _Budget("criterion 5: degrees, zeros, symmetry, initial condition", 120):
        for model in MODELS:
            for L in (1, 2, 3, 4):
                ctx = _ctx(model, L, rng=random.Random(50 + L))
                report = monodromy.verify_structure(ctx)
                assert report.passed, (model, L, [i.name for i in report.items if not i.passed])


def test_criterion_6_reference_table_reproduction():
    for p in (rat(2), rat(3), rat(3, 2), rat(5, 2), rat(4, 3)):
        with _Budget("criterion 6: stored tables at p=%s, both models" % p, 120):
            for model in MODELS:
                ctx = make_context(model, p, (rat(1), rat(1)))
                sol = solve_zh(ctx, 2)
                report = compare_tables(ctx, sol)
                assert report.passed, report.mismatches
                assert len(report.entries) == 64
                zeros = [e for e in report.entries if e.expected == 0]
                assert len(zeros) == (16 if model == "fz" else 0)
                assert all(e.got == 0 for e in zeros)


def test_criterion_7_l3_solution_consistency():
    with _Budget("criterion 7: L=3 kernel dimension and reconstruction", 900):
        for model in MODELS:
            ctx = make_context(model, rat(3, 2), (rat(2), rat(3), rat(5)))
            sol = solve_zh(ctx, 3)
            assert sol.backend == "modular"
            stats = sol.meta["system"]["modular"]
            assert stats["kernel_dim"] == 1
            assert len(stats["primes"]) >= 2
            rng = random.Random(7)
            done = 0
            while done < 10:
                pts = rand_distinct_ints(rng, 3)
                try:
                    zr = reconstruct_z(ctx, sol, pts)
                except DegenerateSample:
                    continue
                assert zr == monodromy.compute_Z(ctx, pts), (model, pts)
                done += 1


def test_criterion_8_determinant_closed_form():
    with _Budget("criterion 8: pair determinant closed form, 50 samples", 1):
        for model in MODELS:
            rng = random.Random(8)
            ctx = _ctx(model, 2, rng=rng)
            done = 0
            while done < 50:
                x0, x1 = rand_rational(rng, 2, 30), rand_rational(rng, 2, 30)
                try:
                    cs = zh_coeffs(ctx, x0, x1)  # raises if the forms disagree
                except DegenerateSample:
                    continue
                done += 1
                q, z, p = ctx.q, ctx.zeta, ctx.p
                r = x0 / x1
                lam0, lamb0 = big_lambdas(ctx, x0)
                lam1, lamb1 = big_lambdas(ctx, x1)
                den = (r - 1) ** 2 * (q ** 2 - z * r)
                t1 = ((1 - q ** 2 * r) ** 2 * (1 - z * r) ** 2 / den) * (
                    lam0 * lamb1 / (p * (q ** 2 - 1))
                )
                t2 = ((1 - z * r) ** 2 * (q ** 4 - z ** 2 * r) ** 2 / (z ** 2 * den)) * (
                    lam1 * lamb0 / (p ** 5 * (q ** 2 - 1))
                )
                assert cs.w == t1 - t2


def test_criterion_9_functional_equation_closure():
    with _Budget("criterion 9: Z-H functional equations and redundancy", 120):
        for model in MODELS:
            for L in (1, 2, 3):
                rng = random.Random(90 + L)
                ctx = _ctx(model, L, rng=rng)
                residuals = algebra.sample_phi_lemmas(ctx, L, rng)
                assert [r.note for r in residuals] == [
                    "matrixfree",
                    "matrixfree",
                    "line1",
                    "line2",
                    "line1-via-line2",
                ]
                for r in residuals:
                    assert r.operator_norm_zero, (model, L, r.note)
