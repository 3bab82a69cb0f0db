import pytest
from hypothesis import given, settings, strategies as st

from loopchains.signkoszul import (
    ConstraintError,
    SignParams,
    bullet_exponent,
    dagger_exponent,
    homotopy_identity_check,
    koszul_permutation_sign,
    maltese_exponent,
    sign_exponent,
    sign_value,
    sweep_identity,
)


def test_dagger_example():
    p = SignParams(degrees=(0, 1, 2))
    assert sign_exponent("dagger", p) == 8
    assert sign_value("dagger", p) == 0


def test_maltese_example():
    p = SignParams(degrees=(0, 1), i=1, j=2)
    assert sign_exponent("maltese", p) == 3
    assert sign_value("maltese", p) == 1


def test_flat_example_degree_independent():
    # (d2+1) gets even and d1+1 gets even, so the parity is 0 outright
    for deg in (-3, 0, 5):
        p = SignParams(degrees=(deg,), d1=1, d2=1)
        assert sign_value("flat", p) == 0


def test_constraint_errors_name_the_constraint():
    with pytest.raises(ConstraintError, match="i >= 1"):
        maltese_exponent((0, 1), 0, 1)
    with pytest.raises(ConstraintError, match="j <= d"):
        maltese_exponent((0, 1), 1, 3)
    with pytest.raises(ConstraintError, match="r >= 0"):
        sign_value("diamond", SignParams(degrees=(0, 1), d1=1, r=-1))
    with pytest.raises(ConstraintError, match="requires parameter"):
        sign_value("sharp", SignParams(degrees=(0,)))
    with pytest.raises(ConstraintError, match="unknown sign kind"):
        sign_value("clubs", SignParams(degrees=()))


degree_tuples = st.lists(st.integers(min_value=-3, max_value=3),
                         min_size=1, max_size=6).map(tuple)


@settings(max_examples=80, deadline=None)
@given(degree_tuples, st.data())
def test_parity_only_and_integer_then_mod2(degrees, data):
    d = len(degrees)
    kind = data.draw(st.sampled_from(
        ["dagger", "maltese", "flat", "sharp", "diamond", "bullet"]))
    if kind == "dagger":
        p = SignParams(degrees=degrees)
    elif kind in ("maltese", "bullet"):
        j = data.draw(st.integers(min_value=0, max_value=d))
        lo = 1 if kind == "maltese" else 0
        i = data.draw(st.integers(min_value=lo, max_value=max(lo, j)))
        if kind == "maltese" and j == 0:
            j = 1
        p = SignParams(degrees=degrees, i=min(i, j), j=j)
    elif kind == "flat":
        d1 = data.draw(st.integers(min_value=1, max_value=d))
        p = SignParams(degrees=degrees, d1=d1, d2=data.draw(
            st.integers(min_value=1, max_value=4)))
    elif kind == "sharp":
        d2 = data.draw(st.integers(min_value=1, max_value=d))
        p = SignParams(degrees=degrees, k=data.draw(
            st.integers(min_value=0, max_value=d - d2)), d2=d2)
    else:
        d1 = data.draw(st.integers(min_value=0, max_value=d))
        p = SignParams(degrees=degrees, d1=d1, r=data.draw(
            st.integers(min_value=0, max_value=d - d1)))
    value = sign_value(kind, p)
    assert value in (0, 1)
    assert value == sign_exponent(kind, p) % 2


@settings(max_examples=60, deadline=None)
@given(degree_tuples, st.integers(min_value=0, max_value=6))
def test_bullet_at_i_zero_is_trailing_maltese(degrees, j):
    d = len(degrees)
    j = min(j, d)
    expected = maltese_exponent(degrees, j + 1, d - 1) if j + 1 <= d - 1 else 0
    assert bullet_exponent(degrees, 0, j) % 2 == expected % 2


def test_koszul_basics():
    assert koszul_permutation_sign((0, 0), (0, 1)) == 0
    # two even letters have odd reduced degree: transposing them flips sign
    assert koszul_permutation_sign((0, 0), (1, 0)) == 1
    # an odd letter (reduced degree even) transposes freely
    assert koszul_permutation_sign((1, 0), (1, 0)) == 0
    with pytest.raises(ConstraintError):
        koszul_permutation_sign((0, 0), (0, 0))


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=6), st.data())
def test_koszul_composition_is_additive(n, data):
    degrees = tuple(data.draw(
        st.lists(st.integers(min_value=-3, max_value=3), min_size=n,
                 max_size=n)))
    p = tuple(data.draw(st.permutations(range(n))))
    q = tuple(data.draw(st.permutations(range(n))))
    after_p = tuple(degrees[p[t]] for t in range(n))
    composite = tuple(p[q[t]] for t in range(n))
    assert koszul_permutation_sign(degrees, composite) == (
        koszul_permutation_sign(degrees, p)
        + koszul_permutation_sign(after_p, q)) % 2


def test_identity_interior_example_holds():
    report = homotopy_identity_check((0, 1, -1), 1, 0)
    assert report.equal


def test_identity_boundary_example_fails():
    # arity one, empty inner block, full rotation: a known boundary case
    report = homotopy_identity_check((0,), 0, 1)
    assert not report.equal


def test_identity_domain_errors():
    with pytest.raises(ConstraintError, match="r <= d2"):
        homotopy_identity_check((0, 0), 1, 2)
    with pytest.raises(ConstraintError, match="0 <= d1"):
        homotopy_identity_check((0, 0), 3, 0)


def test_sweep_frozen_counts():
    sweep = sweep_identity(d_max=4, degree_window=(-2, 2))
    assert sweep.total == 10790
    assert len(sweep.failures) == 2226
    assert sweep.interior_total == 7080
    assert sweep.interior_failures == 0
    assert sweep.all_failures_on_boundary
    assert sweep.failing_combos == (
        (1, 0, 1), (1, 1, 0), (2, 0, 2), (2, 1, 1), (2, 2, 0),
        (3, 0, 3), (3, 1, 2), (3, 2, 1), (3, 3, 0),
        (4, 0, 4), (4, 1, 3), (4, 2, 2), (4, 3, 1), (4, 4, 0))
