import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vertex19.errors import ZeroArgument
from vertex19.fieldcore import make_context, rat
from vertex19.monodromy import poly_degree
from vertex19.weights import (
    R_SUPPORT,
    RMatrix,
    WEIGHT_NAMES,
    big_lambdas,
    check_ice_rule,
    check_ybe,
    dname,
    omegas,
    r_matrix,
    weight,
    ybe_holds,
)

# Hand-evaluated weights at p=2 (q=4), x=3.  Worked out directly from the
# factorized forms before the module existed; frozen here as the oracle.
IK_AT_3 = {
    "a": -871,
    "b": 536,
    "c": -1005,
    "cbar": -3015,
    "d11": 224,
    "d12": -960,
    "d13": -1485,
    "d21": 180,
    "d22": -2389,
    "d23": -960,
    "d31": -2655,
    "d32": 180,
    "d33": 224,
}
FZ_AT_3 = {
    "a": 13,
    "b": -8,
    "c": 15,
    "cbar": 45,
    "d11": 88,
    "d12": 60,
    "d13": 45,
    "d21": 180,
    "d22": 127,
    "d23": 60,
    "d31": 405,
    "d32": 180,
    "d33": 88,
}


@pytest.mark.parametrize(
    "model,oracle", [("ik", IK_AT_3), ("fz", FZ_AT_3)], ids=["ik", "fz"]
)
def test_weight_oracle_values(model, oracle):
    ctx = make_context(model, rat(2), (rat(1),))
    for name, expected in oracle.items():
        assert weight(ctx, name, rat(3)) == expected, name


def test_weight_rejects_bad_input():
    ctx = make_context("ik", rat(2), (rat(1),))
    with pytest.raises(ZeroArgument):
        weight(ctx, "a", rat(0))
    with pytest.raises(KeyError):
        weight(ctx, "nope", rat(3))
    assert dname(1, 3) == "d13"
    assert set(WEIGHT_NAMES) == set(IK_AT_3)


@pytest.mark.parametrize("model", ["ik", "fz"])
def test_cbar_is_x_times_c(model):
    ctx = make_context(model, rat(5, 3), (rat(1),))
    for xi in (rat(2), rat(7, 2), rat(-3)):
        assert weight(ctx, "cbar", xi) == xi * weight(ctx, "c", xi)


@pytest.mark.parametrize("model", ["ik", "fz"])
def test_weight_degrees(model):
    ctx = make_context(model, rat(3, 2), (rat(1),))
    deg2 = ("a", "b", "cbar", "d11", "d21", "d22", "d31", "d32", "d33")
    deg1 = ("c", "d12", "d13", "d23")
    for name in deg2:
        assert poly_degree(lambda x, n=name: weight(ctx, n, x), 2) == 2, name
    for name in deg1:
        assert poly_degree(lambda x, n=name: weight(ctx, n, x), 2) <= 1, name


@pytest.mark.parametrize("model", ["ik", "fz"])
def test_r_matrix_support_and_ice_rule(model):
    ctx = make_context(model, rat(2), (rat(1),))
    rm = r_matrix(ctx, rat(3))
    assert len(R_SUPPORT) == 19
    assert set(rm.entries) == set(R_SUPPORT)
    for (w, n, e, s) in rm.entries:
        assert w + n == e + s
    assert check_ice_rule(ctx, rat(3))


@pytest.mark.parametrize("model", ["ik", "fz"])
def test_r_at_one_is_scaled_permutation(model):
    ctx = make_context(model, rat(5, 2), (rat(1),))
    rm = r_matrix(ctx, rat(1))
    a1 = (1 - ctx.zeta) * (1 - ctx.q ** 2)
    for (w, n, e, s), val in rm.entries.items():
        if (e, s) == (n, w):
            assert val == a1
        else:
            assert val == 0


def test_ybe_detects_mutation():
    ctx = make_context("ik", rat(2), (rat(1),))
    x12, x13 = rat(3), rat(5)
    rm12 = r_matrix(ctx, x12)
    rm13 = r_matrix(ctx, x13)
    rm23 = r_matrix(ctx, x13 / x12)
    assert ybe_holds(rm12, rm13, rm23)
    broken = dict(rm13.entries)
    broken[(1, 2, 2, 1)] = broken[(1, 2, 2, 1)] + 1
    assert not ybe_holds(rm12, RMatrix(x=rm13.x, entries=broken), rm23)


@settings(max_examples=25, deadline=None)
@given(
    model=st.sampled_from(["ik", "fz"]),
    pn=st.integers(min_value=2, max_value=9),
    pd=st.integers(min_value=1, max_value=9),
    a=st.integers(min_value=2, max_value=30),
    b=st.integers(min_value=2, max_value=30),
)
def test_ybe_property(model, pn, pd, a, b):
    p = rat(pn, pd)
    if p == 1:
        return
    ctx = make_context(model, p, (rat(1),))
    assert check_ybe(ctx, rat(a, 2), rat(b, 3))


def test_big_lambdas_and_omegas():
    ctx = make_context("ik", rat(2), (rat(2), rat(3)))
    x = rat(5)
    lam, lamb = big_lambdas(ctx, x)
    assert lam == weight(ctx, "a", rat(5, 2)) * weight(ctx, "a", rat(5, 3))
    assert lamb == weight(ctx, "d11", rat(5, 2)) * weight(ctx, "d11", rat(5, 3))
    om, omb = omegas(ctx, x)
    assert om == (x - 2 * ctx.zeta) * (x - 3 * ctx.zeta)
    assert omb == (x - 2) * (x - 3)
    with pytest.raises(ZeroArgument):
        big_lambdas(ctx, rat(0))
    with pytest.raises(ZeroArgument):
        omegas(ctx, rat(0))
