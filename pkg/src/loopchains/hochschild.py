"""Cyclic bar complex of a differential graded algebra.

Words are tuples (a_d, ..., a_1), stored leftmost-first with 1-based
index arithmetic throughout (a_i is word[d - i]).  The leftmost entry
a_d is the special slot: it may hold the unit, while a word with a unit
in any other slot is degenerate and treated as zero.  The differential
keeps that subspace invariant, so dropping degenerate output words (the
default) is the quotient differential of the normalized complex.

Degrees.  An entry of ordinary degree g contributes its reduced degree
g + 1 to all sign bookkeeping.  A word's degree is

    sum_i |a_i| - (d - 1),

which the differential raises by exactly one: inner products merge two
slots (d drops by one), and the per-slot differential raises a slot
degree by one.  A word's weight is the sum of the entry weights and is
never increased by the differential, so weight caps give honest
subcomplexes.

Algebra interface.  Any object with

    degree(x) -> int            weight(x) -> int
    is_unit(x) -> bool          unit() -> element or None
    mu1(x) -> {element: coeff}  mu2(x2, x1) -> {element: coeff}
    basis(max_weight) -> iterable of elements (units excluded)

works: the based-loop algebras built elsewhere in this package and the
finite table algebras below both do.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from random import Random

from .exactalg import FreeComplex, HomologySummary, IntMatrix, homology as _homology


def _reduced(degree: int) -> int:
    return (degree + 1) % 2


def word_degree(algebra, word) -> int:
    return sum(algebra.degree(x) for x in word) - (len(word) - 1)


def cc_degree(algebra, word) -> int:
    """Bookkeeping degree: the special entry keeps its degree, every
    other entry is shifted up by one.  Sign exponents read this mod 2.
    It differs from word_degree (the complex grading) by 2(d - 1), so
    the two agree in parity but only word_degree is raised by exactly
    one by the differential."""
    if not word:
        raise ValueError("the empty word has no degree")
    return algebra.degree(word[0]) + sum(algebra.degree(x) + 1
                                         for x in word[1:])


def word_weight(algebra, word) -> int:
    return sum(algebra.weight(x) for x in word)


def is_degenerate(algebra, word) -> bool:
    """Unit in a non-special slot (any position but the leftmost)."""
    return any(algebra.is_unit(x) for x in word[1:])


def _add(dst, key, coeff):
    if coeff:
        dst[key] = dst.get(key, 0) + coeff
        if dst[key] == 0:
            del dst[key]


def hochschild_b(algebra, word, coeff=1, *, arity="argument_count",
                 normalize=True):
    """The cyclic bar differential of a single word, as {word: coeff}.

    Two families of terms.  Inner terms apply mu1 to one slot or mu2 to
    two adjacent slots strictly inside the word.  Wrap terms close the
    word up cyclically: the special slot is multiplied with a run of
    slots taken from the right end, and the slots it jumped over move to
    the front.  Sign exponents are sums of reduced degrees (maltese
    runs) and the wrap correction described in signkoszul.

    ``arity`` selects how the wrapped product's arity is read: from its
    argument count (certified) or from the printed subscript, which is
    one lower and silently kills every wrap term of a two-product
    algebra.  The latter is kept only so the resolution harness can
    demonstrate that it fails.
    """
    out = {}
    d = len(word)
    a = lambda i: word[d - i]  # 1-based from the right

    def mal(lo, hi):
        if lo > hi:
            return 0
        return sum(_reduced(algebra.degree(a(t))) for t in range(lo, hi + 1))

    def emit(prefix_word, vector, suffix_word, sgn):
        for element, c in vector.items():
            w = prefix_word + (element,) + suffix_word
            if normalize and is_degenerate(algebra, w):
                continue
            _add(out, w, coeff * sgn * c)

    # inner terms: mu_j eats slots i+1 .. i+j, 1 <= i+j < d
    for i in range(0, d):
        for j in (1, 2):
            if not 1 <= i + j < d:
                continue
            sgn = (-1) ** (mal(1, i) % 2)
            prefix = word[:d - i - j]
            suffix = word[d - i:]
            if j == 1:
                emit(prefix, algebra.mu1(a(i + 1)), suffix, sgn)
            else:
                emit(prefix, algebra.mu2(a(i + 2), a(i + 1)), suffix, sgn)

    # wrap terms: the product swallows a_d together with a_i..a_1, and
    # the skipped slots a_{i+j}..a_{i+1} become the tail of the output
    for i in range(0, d):
        for j in range(0, d):
            if i + j >= d:
                continue
            argc = d - j  # a_i..a_1 plus a_d..a_{i+j+1}
            m = argc if arity == "argument_count" else argc - 1
            if m > 2:
                continue
            bullet = mal(1, i) * (1 + mal(i + 1, d)) + mal(i + j + 1, d - 1)
            sgn = (-1) ** ((bullet + mal(i + 1, i + j) + 1) % 2)
            tail = tuple(a(t) for t in range(i + j, i, -1))
            if m == 1:
                if not (i == 0 and argc == 1):
                    continue
                emit((), algebra.mu1(a(d)), tail, sgn)
            elif m == 2:
                if argc != 2:
                    continue
                if i == 0:
                    product = algebra.mu2(a(d), a(d - 1))
                elif i == 1:
                    product = algebra.mu2(a(1), a(d))
                else:
                    continue
                emit((), product, tail, sgn)
    return out


def hochschild_b_vector(algebra, vector, **kw):
    out = {}
    for word, c in vector.items():
        for w, cc in hochschild_b(algebra, word, c, **kw).items():
            _add(out, w, cc)
    return out


# -- finite table algebras ---------------------------------------------------

class TableDGA:
    """A dga given by explicit finite tables.

    ``product`` maps (x, y) to {element: coeff} for the underlying
    associative product x.y; ``differential`` maps x to {element: coeff}
    and satisfies the ordinary Leibniz rule.  mu2 exposes the pairing
    with the loop-composition twist: mu2(x2, x1) = (-1)^|x1| x1.x2, the
    same pattern the based-loop algebra uses, so the cyclic bar
    machinery treats both uniformly.
    """

    def __init__(self, degrees: dict, product: dict, differential: dict,
                 weights: dict | None = None):
        self.degrees = dict(degrees)
        self.product = {k: dict(v) for k, v in product.items() if v}
        self.differential = {k: dict(v) for k, v in differential.items() if v}
        self.weights = dict(weights) if weights else {x: 1 for x in degrees}

    def degree(self, x) -> int:
        return self.degrees[x]

    def weight(self, x) -> int:
        return self.weights[x]

    def is_unit(self, x) -> bool:
        return False  # non-unital by construction

    def unit(self):
        return None

    def basis(self, max_weight=None):
        return [x for x in sorted(self.degrees)
                if max_weight is None or self.weights[x] <= max_weight]

    def mu1(self, x) -> dict:
        return dict(self.differential.get(x, {}))

    def mu2(self, x2, x1) -> dict:
        sign = (-1) ** (self.degrees[x1] % 2)
        return {z: sign * c for z, c in self.product.get((x1, x2), {}).items()}

    def selfcheck(self):
        """Associativity, Leibniz and d.d = 0, checked exhaustively."""
        basis = self.basis()

        def bilinear(vec, y, left):
            out = {}
            for x, c in vec.items():
                pair = (x, y) if left else (y, x)
                for z, cc in self.product.get(pair, {}).items():
                    _add(out, z, c * cc)
            return out

        for x in basis:
            dd = {}
            for y, c in self.differential.get(x, {}).items():
                for z, cc in self.differential.get(y, {}).items():
                    _add(dd, z, c * cc)
            if dd:
                raise AssertionError(f"d.d != 0 at {x}")
        for x in basis:
            for y in basis:
                dxy = {}
                for z, c in self.product.get((x, y), {}).items():
                    for w, cc in self.differential.get(z, {}).items():
                        _add(dxy, w, c * cc)
                rhs = {}
                for w, cc in bilinear(self.differential.get(x, {}), y, True).items():
                    _add(rhs, w, cc)
                sx = (-1) ** (self.degrees[x] % 2)
                for w, cc in bilinear(self.differential.get(y, {}), x, False).items():
                    _add(rhs, w, sx * cc)
                if dxy != rhs:
                    raise AssertionError(f"Leibniz fails at ({x}, {y})")
        for x in basis:
            for y in basis:
                for z in basis:
                    lhs = bilinear(self.product.get((x, y), {}), z, True)
                    rhs = bilinear({w: c for w, c in self.product.get((y, z), {}).items()},
                                   x, False)
                    if lhs != rhs:
                        raise AssertionError(f"associativity fails at ({x},{y},{z})")
        return True


def random_dga(seed: int, max_generators: int = 5) -> TableDGA:
    """A random layered quiver dga: exact by construction.

    Vertices sit on a line; short edges (one step) carry random degrees
    and no differential, long edges differentiate into the sum of the
    two-step paths they cover, with degrees chosen so the differential
    raises degree by one.  Products concatenate composable paths and
    vanish otherwise, so associativity is automatic; Leibniz holds
    because the differential only feeds on differential-free edges.
    Generators are the edges; paths of length >= 2 are represented as
    product outputs among the generators when they happen to be edges,
    otherwise the product is zero (a length cap, itself associative).
    """
    rng = Random(seed)
    v = rng.choice((3, 4))
    gens = {}
    degrees = {}
    # short edges i -> i+1
    for i in range(v - 1):
        name = f"e{i}{i + 1}"
        gens[name] = (i, i + 1)
        degrees[name] = rng.randint(-2, 1)
    # a few long edges i -> i+2
    for i in range(v - 2):
        if len(gens) >= max_generators:
            break
        name = f"e{i}{i + 2}"
        gens[name] = (i, i + 2)
        a = degrees[f"e{i}{i + 1}"]
        b = degrees[f"e{i + 1}{i + 2}"]
        degrees[name] = a + b - 1  # so the two-step path is one higher
    product = {}
    differential = {}
    for i in range(v - 2):
        long = f"e{i}{i + 2}"
        if long not in gens:
            continue
        lam = rng.choice((-2, -1, 1, 2))
        # d(long) = lam * (short_i . short_{i+1}): realized by making the
        # two-step product land on a fresh degree-matched target
        target = f"p{i}{i + 2}"
        degrees[target] = degrees[f"e{i}{i + 1}"] + degrees[f"e{i + 1}{i + 2}"]
        product[(f"e{i}{i + 1}", f"e{i + 1}{i + 2}")] = {target: 1}
        differential[long] = {target: lam}
    return TableDGA(degrees, product, differential)


# -- morphisms and their cyclic extension ------------------------------------

class Morphism:
    """A multilinear morphism between two algebras.

    components[n] evaluates the n-ary piece on (x_n, ..., x_1), listed
    descending like mu arguments, and returns {element: coeff} in the
    target.  Missing components are zero.
    """

    def __init__(self, source, target, components: dict):
        self.source = source
        self.target = target
        self.components = dict(components)

    def apply(self, n: int, args) -> dict:
        fn = self.components.get(n)
        if fn is None:
            return {}
        return fn(tuple(args))


def identity_morphism(algebra) -> Morphism:
    return Morphism(algebra, algebra, {1: lambda args: {args[0]: 1}})


def strict_morphism(source, target, image: dict) -> Morphism:
    """F with only a linear part, given by a basis-element map."""
    def one(args):
        return dict(image.get(args[0], {}))
    return Morphism(source, target, {1: one})


def cc_of_morphism(morphism: Morphism, word, coeff=1, *, normalize=True) -> dict:
    """Extension of a morphism to cyclic bar words.

    Division points 0 <= s_1 < ... < s_k <= d-1 cut the word into k
    blocks.  The special output slot collects the wrapped block
    (a_{s_1}, ..., a_1, a_d, ..., a_{s_k + 1}); the remaining blocks
    follow in descending order.  The sign is the wrap exponent of the
    jump, a bullet run over the source degrees.
    """
    algebra = morphism.source
    out = {}
    d = len(word)
    a = lambda i: word[d - i]

    def mal(lo, hi):
        if lo > hi:
            return 0
        return sum(_reduced(algebra.degree(a(t))) for t in range(lo, hi + 1))

    for k in range(1, d + 1):
        for s in combinations(range(0, d), k):
            s1, sk = s[0], s[-1]
            bullet = mal(1, s1) * (1 + mal(s1 + 1, d)) + mal(sk + 1, d - 1)
            sgn = (-1) ** (bullet % 2)
            wrap_args = tuple(a(t) for t in range(s1, 0, -1)) + \
                tuple(a(t) for t in range(d, sk, -1))
            blocks = [morphism.apply(len(wrap_args), wrap_args)]
            for t in range(k - 1, 0, -1):
                args = tuple(a(x) for x in range(s[t], s[t - 1], -1))
                blocks.append(morphism.apply(len(args), args))
            # expand the tensor product of block vectors
            partial = [((), coeff * sgn)]
            for block in blocks:
                if not block:
                    partial = []
                    break
                partial = [(entries + (e,), c * cc)
                           for entries, c in partial
                           for e, cc in block.items()]
            for entries, c in partial:
                if normalize and is_degenerate(morphism.target, entries):
                    continue
                _add(out, entries, c)
    return out


def cc_of_morphism_vector(morphism: Morphism, vector, **kw) -> dict:
    out = {}
    for word, c in vector.items():
        for w, cc in cc_of_morphism(morphism, word, c, **kw).items():
            _add(out, w, cc)
    return out


# -- truncated homology -------------------------------------------------------

@dataclass(frozen=True)
class TruncatedHomology:
    degree: int
    max_weight: int
    summary: HomologySummary
    stabilized: bool


def cyclic_words(algebra, max_weight: int, degree: int | None = None):
    """All normalized words of weight <= max_weight (and given degree).

    The special slot ranges over the basis and, when the algebra has
    one, the unit; the other slots exclude the unit.  Non-unit elements
    all have weight >= 1, so words are finite in number.
    """
    basis = list(algebra.basis(max_weight))
    if any(algebra.weight(x) < 1 for x in basis):
        raise ValueError("non-unit basis elements must have weight >= 1")
    unit = algebra.unit()
    specials = basis + ([unit] if unit is not None else [])
    words = []

    def grow(word, remaining):
        words.append(word)
        for x in basis:
            w = algebra.weight(x)
            if w <= remaining:
                grow(word + (x,), remaining - w)

    for first in specials:
        grow((first,), max_weight - algebra.weight(first))
    if degree is None:
        return sorted(words, key=_word_sort_key)
    return sorted((w for w in words if word_degree(algebra, w) == degree),
                  key=_word_sort_key)


def _word_sort_key(word):
    return (len(word), tuple(repr(x) for x in word))


def _graded_complex(algebra, degree: int, max_weight: int, arity):
    """Three-term complex around the requested degree, weight-capped."""
    layers = {}
    for n in (degree - 1, degree, degree + 1):
        layers[n] = cyclic_words(algebra, max_weight, degree=n)
    index = {n: {w: i for i, w in enumerate(ws)} for n, ws in layers.items()}
    dims = {n: len(ws) for n, ws in layers.items()}
    diffs = {}
    for n in (degree - 1, degree):
        m = IntMatrix(dims[n + 1], dims[n])
        for j, w in enumerate(layers[n]):
            for out, c in hochschild_b(algebra, w, arity=arity).items():
                if word_weight(algebra, out) > max_weight:
                    raise ValueError(
                        "weight is not closed under the differential: "
                        f"{w!r} -> {out!r} raises it past {max_weight}")
                row = index[n + 1].get(out)
                if row is None:
                    raise ValueError(
                        f"differential left the graded basis at {out!r}")
                m[row, j] = c
        diffs[n] = m
    return FreeComplex(dims, diffs)


def hh_truncated(algebra, degree: int, max_weight: int, *,
                 arity="argument_count") -> TruncatedHomology:
    """Homology of the weight-capped cyclic bar complex in one degree.

    The weight cap is a subcomplex, so this is the honest homology of a
    finite complex, not an approximation with leakage.  ``stabilized``
    records whether dropping the cap by one leaves the answer unchanged,
    a cheap signal that the cap has stopped biting.
    """
    summary = _hh_at(algebra, degree, max_weight, arity)
    if max_weight >= 1:
        previous = _hh_at(algebra, degree, max_weight - 1, arity)
        stabilized = (previous.rank, previous.torsion) == \
            (summary.rank, summary.torsion)
    else:
        stabilized = False
    return TruncatedHomology(degree=degree, max_weight=max_weight,
                             summary=summary, stabilized=stabilized)


def _hh_at(algebra, degree: int, max_weight: int, arity) -> HomologySummary:
    complex_ = _graded_complex(algebra, degree, max_weight, arity)
    summaries = _homology(complex_)
    return summaries.get(degree, HomologySummary(degree, 0, ()))
