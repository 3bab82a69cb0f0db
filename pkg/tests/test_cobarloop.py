import pathlib
from random import Random

import pytest
from hypothesis import given, settings, strategies as st

from loopchains.cobarloop import (
    BoundaryUndefinedError, LoopAlgebra, TruncationError, UNIT_LETTER,
    adams_T, based_loop_complex, degenerate_path, dga_differential,
    format_cyclic_word, format_letter, format_word, letter_degree,
    letter_weight, loop_words, make_tau, mu2, pi2_boundary, pi2_vanishes,
    t_residual, tau_boundary, verify_T_chain_map, word_boundary, word_degree,
    word_weight,
)
from loopchains.conventions import DEFAULT
from loopchains.exactalg import validate_complex
from loopchains.hochschild import hochschild_b
from loopchains.simpcx import SimplicialComplex, collapse, load_complex

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

T12 = ("tau", (1, 2))
T13 = ("tau", (1, 3))
T23 = ("tau", (2, 3))
T123 = ("tau", (1, 2, 3))


def _load(name):
    return collapse(load_complex(FIXTURES / name))


@pytest.fixture(scope="module")
def circle():
    return _load("s1_3.json")


@pytest.fixture(scope="module")
def sphere2():
    return _load("boundary_delta3.json")


@pytest.fixture(scope="module")
def torus():
    return _load("torus_7.json")


@pytest.fixture(scope="module")
def ball3():
    solid = SimplicialComplex(name="solid 3-simplex", vertices=(0, 1, 2, 3),
                              facets=((0, 1, 2, 3),))
    return collapse(solid)


# -- letters ------------------------------------------------------------------

def test_degenerate_path_is_cyclic_by_default():
    assert degenerate_path((1,))
    assert degenerate_path((1, 1))
    assert degenerate_path((1, 2, 1))          # wraps around
    assert not degenerate_path((1, 2, 1), "linear")
    assert not degenerate_path((1, 2, 3))
    assert degenerate_path(())  # nowhere to go


def test_make_tau_cases(sphere2):
    assert make_tau(sphere2, (0, 1)) == UNIT_LETTER   # spanning-tree edge
    assert make_tau(sphere2, (1, 2)) == ("tau", (1, 2))
    assert make_tau(sphere2, (1, 1)) is None
    assert make_tau(sphere2, (1, 2, 1)) is None
    assert make_tau(sphere2, (1,)) is None


def test_letter_degrees_and_weights():
    assert letter_degree(UNIT_LETTER) == 0
    assert letter_weight(UNIT_LETTER) == 0
    assert letter_degree(T12) == 0 and letter_weight(T12) == 1
    assert letter_degree(T123) == -1 and letter_weight(T123) == 2
    p = ("pi2", (1, 2), (2, 1))
    assert letter_degree(p) == -1 and letter_weight(p) == 1
    p = ("pi2", (0, 1, 2), (2, 1, 0))
    assert letter_degree(p) == -3 and letter_weight(p) == 3
    q = ("pi3", (0, 1), (1, 2), (2, 1, 0))
    assert letter_degree(q) == -2 and letter_weight(q) == 3


def test_word_degree_weight():
    assert word_degree(()) == 0 and word_weight(()) == 0
    assert word_degree((T12, T123)) == -1
    assert word_weight((T12, T123)) == 3


def test_product_is_in_path_order_with_a_degree_sign():
    assert mu2((T123,), (T12,)) == (1, (T12, T123))
    assert mu2((T12,), (T123,)) == (-1, (T123, T12))
    assert mu2((), (T12,)) == (1, (T12,))
    assert mu2((T12,), ()) == (1, (T12,))


# -- boundaries ---------------------------------------------------------------

def test_circle_edge_is_a_cycle(circle):
    assert tau_boundary(circle, (1, 2)) == {}


def test_triangle_boundary_census(sphere2):
    # one interior face and one splitting, in path order
    assert tau_boundary(sphere2, (1, 2, 3)) == {
        ((T13),): -1,
        (T12, T23): 1,
    } or tau_boundary(sphere2, (1, 2, 3)) == {
        (T13,): -1,
        (T12, T23): 1,
    }


def test_tetrahedron_boundary_census(ball3):
    t = lambda *seq: ("tau", tuple(seq))
    assert tau_boundary(ball3, (0, 1, 2, 3)) == {
        (t(0, 2, 3),): -1,
        (t(0, 1, 3),): 1,
        (t(1, 2, 3),): 1,                    # split through the tree edge 01
        (t(0, 1, 2), t(2, 3)): -1,           # split at 2, path order
    }


def test_antipath_product_reverses_the_split_term(ball3):
    t = lambda *seq: ("tau", tuple(seq))
    anti = DEFAULT.flip("mu2_order")
    assert tau_boundary(ball3, (0, 1, 2, 3), anti) == {
        (t(0, 2, 3),): -1,
        (t(0, 1, 3),): 1,
        (t(1, 2, 3),): 1,
        (t(2, 3), t(0, 1, 2)): -1,
    }


def test_word_boundary_leibniz_example(sphere2):
    assert word_boundary(sphere2, (T12, T123)) == {
        (T12, T13): -1,
        (T12, T12, T23): 1,
    }
    red = DEFAULT.flip("leibniz_prefix")
    assert word_boundary(sphere2, (T12, T123), red) == {
        (T12, T13): 1,
        (T12, T12, T23): -1,
    }


def test_reduced_prefix_breaks_the_square():
    # frozen witness: with reduced-degree prefix signs the differential
    # no longer squares to zero
    sphere2 = _load("boundary_delta3.json")
    red = DEFAULT.flip("leibniz_prefix")
    dd = dga_differential(sphere2, word_boundary(sphere2, (T123, T123), red), red)
    assert dd == {
        (T12, T23, T12, T23): 2,
        (T12, T23, T13): -2,
    }
    assert not validate_complex(based_loop_complex(sphere2, 4, red).complex).ok


def test_corner_letters_have_no_boundary(sphere2):
    q = ("pi3", (0, 1), (1, 2), (2, 1, 0))
    with pytest.raises(BoundaryUndefinedError, match="corner"):
        dga_differential(sphere2, {(q,): 1})


def test_pi2_vanishing_on_tree_paths(sphere2):
    assert pi2_vanishes(sphere2, (0, 1), (1, 0))
    assert not pi2_vanishes(sphere2, (1, 2), (2, 1))


def test_pi2_boundary_produces_corners(ball3):
    out = pi2_boundary(ball3, (0, 1, 2), (2, 1, 0))
    corners = sorted({l for w in out for l in w if l[0] == "pi3"})
    assert corners == [
        ("pi3", (0, 1), (1, 2), (2, 1, 0)),
        ("pi3", (0, 1, 2), (2, 1), (1, 0)),
    ]


# -- letter census of the collapsed models ------------------------------------

def test_letter_censuses(circle, sphere2, torus):
    assert LoopAlgebra(circle).letters() == [T12]
    by_deg = {}
    for letter in LoopAlgebra(sphere2).letters():
        by_deg[letter_degree(letter)] = by_deg.get(letter_degree(letter), 0) + 1
    assert by_deg == {0: 3, -1: 4}
    by_deg = {}
    for letter in LoopAlgebra(torus).letters():
        by_deg[letter_degree(letter)] = by_deg.get(letter_degree(letter), 0) + 1
    assert by_deg == {0: 15, -1: 14}


# -- the materialized complex --------------------------------------------------

def test_circle_loop_words_count(circle):
    assert len(loop_words(circle, 6)) == 7  # unit plus six powers


def test_sphere_complex_is_a_complex(sphere2):
    model = based_loop_complex(sphere2, 4)
    assert model.word_count() == 273
    assert {n: model.complex.dim(n) for n in sorted(model.complex.dims)} == {
        -2: 16, -1: 136, 0: 121}
    assert validate_complex(model.complex).ok


@settings(deadline=None, max_examples=60)
@given(st.integers(0, 10_000))
def test_differential_properties_on_random_words(seed):
    sphere2 = _load("boundary_delta3.json")
    letters = LoopAlgebra(sphere2).letters()
    rng = Random(seed)
    word = tuple(rng.choice(letters) for _ in range(rng.randint(1, 3)))
    n, w = word_degree(word), word_weight(word)
    vec = word_boundary(sphere2, word)
    for out in vec:
        assert word_degree(out) == n + 1
        assert word_weight(out) <= w
    assert dga_differential(sphere2, vec) == {}


# -- the comparison map --------------------------------------------------------

def test_comparison_map_on_an_edge(circle):
    assert adams_T(circle, (1, 2)) == {
        ((("tau", (2, 1)),), (("tau", (1, 2)),)): -1,
        ((("pi2", (1, 2), (2, 1)),),): 1,
        ((("pi2", (2, 1), (1, 2)),),): -1,
    }


def test_comparison_map_triangle_census(sphere2):
    image = adams_T(sphere2, (1, 2, 3))
    by_slots = {}
    for ccword in image:
        by_slots[len(ccword)] = by_slots.get(len(ccword), 0) + 1
    assert by_slots == {1: 6, 2: 3, 3: 1}


def test_unnormalized_image_keeps_unit_slots(sphere2):
    raw = adams_T(sphere2, (0, 1, 2), normalize=False)
    cooked = adams_T(sphere2, (0, 1, 2), normalize=True)
    dropped = [cw for cw in raw if any(entry == () for entry in cw[1:])]
    assert len(raw) == 10 and len(cooked) == 8 and len(dropped) == 2
    assert ((), (("tau", (0, 1, 2)),)) in cooked  # unit in the marked slot is fine


def test_comparison_map_is_a_chain_map(circle, sphere2, ball3, torus):
    for cc, census_size in ((circle, 0), (sphere2, 12), (ball3, 24), (torus, 42)):
        v = verify_T_chain_map(cc)
        assert v.ok, (cc.source.name, v.residuals)
        assert len(v.corner_census) == census_size
        assert v.corners_balanced


def test_comparison_map_works_unnormalized_too(sphere2):
    assert verify_T_chain_map(sphere2, normalize=False).ok


def test_weight_cap_must_hold_the_image(sphere2):
    with pytest.raises(TruncationError, match="weight cap 2"):
        verify_T_chain_map(sphere2, max_weight=2)
    assert verify_T_chain_map(sphere2, max_weight=3).ok


def test_cyclic_square_of_the_circle_generator(circle):
    assert hochschild_b(LoopAlgebra(circle), ((T12,), (T12,))) == {}


# -- every sign convention is load-bearing -------------------------------------

def test_word_sign_flip_breaks_the_sphere(sphere2):
    assert not verify_T_chain_map(sphere2, DEFAULT.flip("t_word_sign")).ok


def test_pair_sign_flip_breaks_the_sphere(sphere2):
    assert not verify_T_chain_map(sphere2, DEFAULT.flip("t_pair2_sign")).ok


def test_linear_degeneracy_breaks_the_sphere(sphere2):
    assert not verify_T_chain_map(sphere2, DEFAULT.flip("tau_degeneracy")).ok


def test_subscript_arity_breaks_the_sphere(sphere2):
    assert not verify_T_chain_map(sphere2, DEFAULT.flip("hochschild_arity")).ok


def test_bsplit_flip_needs_a_three_dimensional_witness(sphere2, ball3):
    # the two exponents agree in parity on every cell of the 2-sphere, so
    # the flip is invisible there; the solid simplex catches it
    flipped = DEFAULT.flip("pi2_bsplit_sign")
    assert verify_T_chain_map(sphere2, flipped).ok
    assert not verify_T_chain_map(ball3, flipped).ok


# -- formatting ----------------------------------------------------------------

def test_formatting():
    assert format_letter(UNIT_LETTER) == "1"
    assert format_letter(T12) == "t[1,2]"
    assert format_letter(("pi2", (1, 2), (2, 1))) == "p[1,2|2,1]"
    assert format_letter(("pi3", (0, 1), (1, 2), (2, 1, 0))) == "q[0,1|1,2|2,1,0]"
    assert format_word(()) == "1"
    assert format_word((T12, T123)) == "t[1,2]*t[1,2,3]"
    assert format_cyclic_word(((T12,), ())) == "(t[1,2] ; 1)"
