"""Based-loop chains of a collapsed complex, and the comparison map into
the cyclic bar complex.

The loop algebra is generated by letters over vertex paths:

    ("tau", seq)        a path running through the vertices of a cell,
                        degree -(len(seq) - 2), weight len(seq) - 1
    ("pi2", A, B)       a pair of paths crossing a cell, with the
                        basepoint reached inside; degree -k for the
                        covered dimension k, weight k
    ("pi3", A, B, C)    corner terms produced by pair boundaries; they
                        are never differentiated again

A word is a unit-free tuple of letters; the empty word is the unit.
Words multiply by concatenation with the loop-composition twist
(mu2(x2, x1) = (-1)^|x1| x1.x2 under the certified ordering).  A path
that is degenerate (two cyclically adjacent vertices equal) gives the
zero letter; a path that is exactly a spanning-tree edge gives the unit.

Every sign and ordering choice is read off the Conventions value passed
in, so the resolution harness can flip entries one at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .conventions import Conventions, DEFAULT
from .exactalg import FreeComplex
from .hochschild import hochschild_b
from .simpcx import CollapsedComplex

UNIT_LETTER = ("unit",)


class BoundaryUndefinedError(ValueError):
    """Raised when a corner (pi3) letter is differentiated."""


class TruncationError(ValueError):
    def __init__(self, max_weight: int, cells):
        self.max_weight = max_weight
        self.cells = tuple(cells)
        listed = ", ".join(str(c) for c in self.cells)
        super().__init__(
            f"weight cap {max_weight} cannot hold the comparison map's "
            f"image: cells {listed} produce words up to weight "
            f"dimension + 1")


# -- letters and words --------------------------------------------------------

def degenerate_path(seq, mode: str = "cyclic") -> bool:
    n = len(seq)
    if n == 0:
        return True
    pairs = range(n) if mode == "cyclic" else range(n - 1)
    return any(seq[i] == seq[(i + 1) % n] for i in pairs)


def make_tau(cc: CollapsedComplex, seq, conv: Conventions = DEFAULT):
    """The tau letter of a vertex path: None if degenerate, the unit
    letter if the path is a collapsed tree edge."""
    seq = tuple(seq)
    if degenerate_path(seq, conv.tau_degeneracy):
        return None
    if cc.is_tree_edge(seq):
        return UNIT_LETTER
    return ("tau", seq)


def letter_degree(letter) -> int:
    kind = letter[0]
    if kind == "unit":
        return 0
    if kind == "tau":
        return -(len(letter[1]) - 2)
    if kind == "pi2":
        return -((len(letter[1]) - 1) + (len(letter[2]) - 1) - 1)
    if kind == "pi3":
        return -(sum(len(v) - 1 for v in letter[1:]) - 2)
    raise ValueError(f"unknown letter kind {kind!r}")


def letter_weight(letter) -> int:
    kind = letter[0]
    if kind == "unit":
        return 0
    if kind == "tau":
        return len(letter[1]) - 1
    if kind == "pi2":
        return (len(letter[1]) - 1) + (len(letter[2]) - 1) - 1
    if kind == "pi3":
        return sum(len(v) - 1 for v in letter[1:]) - 1
    raise ValueError(f"unknown letter kind {kind!r}")


def word_degree(word) -> int:
    return sum(letter_degree(l) for l in word)


def word_weight(word) -> int:
    return sum(letter_weight(l) for l in word)


def normalize_word(letters):
    return tuple(l for l in letters if l[0] != "unit")


def mu2(x2, x1, conv: Conventions = DEFAULT):
    """(sign, product word).  The sign is the loop-composition twist
    (-1)^|x1|; the ordering is the convention under test."""
    sign = (-1) ** (word_degree(x1) % 2)
    if conv.mu2_order == "path":
        return sign, normalize_word(x1 + x2)
    return sign, normalize_word(x2 + x1)


def _add(dst, key, c):
    if c:
        dst[key] = dst.get(key, 0) + c
        if dst[key] == 0:
            del dst[key]


# -- boundaries ---------------------------------------------------------------

def tau_boundary(cc, seq, conv: Conventions = DEFAULT) -> dict:
    """Inner faces with alternating signs, then splits into two subpaths
    multiplied together.  Degenerate pieces drop; tree-edge pieces turn
    into units and disappear from the word."""
    out = {}
    seq = tuple(seq)
    k = len(seq) - 1
    for j in range(1, k):
        t = make_tau(cc, seq[:j] + seq[j + 1:], conv)
        if t is not None:
            _add(out, normalize_word((t,)), (-1) ** j)
    for r in range(1, k):
        t1 = make_tau(cc, seq[:r + 1], conv)
        t2 = make_tau(cc, seq[r:], conv)
        if t1 is not None and t2 is not None:
            s, w = mu2((t2,), (t1,), conv)
            _add(out, w, s)
    return out


def pi2_vanishes(cc, A, B) -> bool:
    # the supporting cell is a collapsed tree edge
    return (len(A) - 1 + len(B) - 1 - 1 == 1
            and cc.is_tree_edge(tuple(sorted(set(A)))))


def pi2_boundary(cc, A, B, conv: Conventions = DEFAULT) -> dict:
    """Boundary of a pair letter: the basepoint face (unit word, only in
    the edge case), the two-path product face, inner faces of either
    path, and splits of either path into corner letters."""
    out = {}
    A, B = tuple(A), tuple(B)
    alpha, beta = len(A) - 1, len(B) - 1
    k = alpha + beta - 1
    if k == 1:
        _add(out, (), 1)
    tA = make_tau(cc, A, conv)
    tB = make_tau(cc, B, conv)
    if tA is not None and tB is not None:
        s, w = mu2((tB,), (tA,), conv)
        _add(out, w, s * (-1) ** beta)
    for p in range(1, alpha):
        sub = A[:p] + A[p + 1:]
        if not degenerate_path(sub, conv.tau_degeneracy) \
                and not pi2_vanishes(cc, sub, B):
            _add(out, (("pi2", sub, B),), (-1) ** p)
    for p in range(1, beta):
        sub = B[:p] + B[p + 1:]
        if not degenerate_path(sub, conv.tau_degeneracy) \
                and not pi2_vanishes(cc, A, sub):
            _add(out, (("pi2", A, sub),), (-1) ** (alpha + p + 1))
    for p in range(1, alpha):
        _add(out, (("pi3", A[:p + 1], A[p:], B),), (-1) ** (p + 1))
    for p in range(1, beta):
        if conv.pi2_bsplit_sign == "geometric":
            sgn = (-1) ** (alpha + p)
        else:  # the published exponent
            sgn = (-1) ** (p + 1)
        _add(out, (("pi3", A, B[:p + 1], B[p:]),), sgn)
    return out


def letter_boundary(cc, letter, conv: Conventions = DEFAULT) -> dict:
    kind = letter[0]
    if kind == "tau":
        return tau_boundary(cc, letter[1], conv)
    if kind == "pi2":
        return pi2_boundary(cc, letter[1], letter[2], conv)
    if kind == "unit":
        return {}
    if kind == "pi3":
        raise BoundaryUndefinedError(
            "corner (pi3) letters have no boundary here: they only occur "
            "as terminal output terms")
    raise ValueError(f"unknown letter kind {kind!r}")


def word_boundary(cc, word, conv: Conventions = DEFAULT) -> dict:
    """Leibniz extension of the letter boundary to words."""
    out = {}
    for i, letter in enumerate(word):
        prefix = word[:i]
        exponent = word_degree(prefix)
        if conv.leibniz_prefix == "reduced":
            exponent += len(prefix)
        sgn = (-1) ** (exponent % 2)
        for t, c in letter_boundary(cc, letter, conv).items():
            _add(out, normalize_word(word[:i] + t + word[i + 1:]), sgn * c)
    return out


def dga_differential(cc, vector, conv: Conventions = DEFAULT) -> dict:
    """The differential on a vector (or single word) of the loop dga."""
    if isinstance(vector, tuple):
        vector = {vector: 1}
    out = {}
    for word, c in vector.items():
        for w, cc2 in word_boundary(cc, word, conv).items():
            _add(out, w, c * cc2)
    return out


# -- the loop dga as a hochschild algebra -------------------------------------

class LoopAlgebra:
    """The based-loop dga of a collapsed complex, in the interface the
    cyclic bar machinery expects.  Elements are words; the basis words
    are built from tau letters only (pair and corner letters occur in
    comparison-map images, and mu1 handles them, but they are not part
    of the algebra's own basis)."""

    def __init__(self, cc: CollapsedComplex, conv: Conventions = DEFAULT):
        self.cc = cc
        self.conv = conv

    def degree(self, word) -> int:
        return word_degree(word)

    def weight(self, word) -> int:
        return word_weight(word)

    def is_unit(self, word) -> bool:
        return word == ()

    def unit(self):
        return ()

    def mu1(self, word) -> dict:
        return word_boundary(self.cc, word, self.conv)

    def mu2(self, x2, x1) -> dict:
        s, w = mu2(x2, x1, self.conv)
        return {w: s}

    def letters(self):
        out = []
        top = self.cc.source.dimension()
        for dim in range(1, top + 1):
            for cell in self.cc.cells(dim=dim):
                out.append(("tau", cell))
        return out

    def basis(self, max_weight: int):
        """All nonempty tau words of weight <= max_weight, sorted."""
        letters = self.letters()
        words = []

        def grow(word, remaining):
            if word:
                words.append(word)
            for letter in letters:
                w = letter_weight(letter)
                if w <= remaining:
                    grow(word + (letter,), remaining - w)

        grow((), max_weight)
        return sorted(words)


# -- the loop complex, materialized -------------------------------------------

@dataclass(frozen=True)
class LoopComplexModel:
    complex: FreeComplex
    words_by_degree: dict  # degree -> sorted list of words
    max_weight: int

    def word_count(self) -> int:
        return sum(len(ws) for ws in self.words_by_degree.values())


def loop_words(cc, max_weight: int, conv: Conventions = DEFAULT):
    """Every word of the weight-capped loop dga, the unit included."""
    return [()] + LoopAlgebra(cc, conv).basis(max_weight)


def based_loop_complex(cc, max_weight: int,
                       conv: Conventions = DEFAULT) -> LoopComplexModel:
    """The weight-capped loop complex as an integer chain complex.

    The differential never raises weight, so the cap is a subcomplex and
    the complex is exact data, not an approximation.  Degrees are
    cohomological and nonpositive.
    """
    by_degree = {}
    for word in loop_words(cc, max_weight, conv):
        by_degree.setdefault(word_degree(word), []).append(word)
    for ws in by_degree.values():
        ws.sort()
    index = {n: {w: i for i, w in enumerate(ws)} for n, ws in by_degree.items()}
    dims = {n: len(ws) for n, ws in by_degree.items()}
    diffs = {}
    from .exactalg import IntMatrix
    for n, ws in sorted(by_degree.items()):
        if n + 1 not in dims:
            continue
        m = IntMatrix(dims[n + 1], dims[n])
        for j, w in enumerate(ws):
            for out, c in word_boundary(cc, w, conv).items():
                if word_weight(out) > max_weight:
                    raise AssertionError("differential raised weight")
                m[index[n + 1][out], j] = c
        if not m.is_zero():
            diffs[n] = m
    return LoopComplexModel(complex=FreeComplex(dims, diffs),
                            words_by_degree=by_degree, max_weight=max_weight)


# -- the comparison map into the cyclic bar complex ---------------------------

def _word_term_sign(conv, d, j1, jd, k) -> int:
    e = d + j1 * (k + 1) + jd
    if conv.t_word_sign == "corrected":
        e += k + 1
    return (-1) ** (e % 2)


def _pair_first_sign(j1, j2, k) -> int:
    return (-1) ** ((j1 * (k + 1) + j2 + 1) % 2)


def _pair_second_sign(conv, j1, j2, k) -> int:
    e = j1 + j2 * (k + 1) + k
    if conv.t_pair2_sign == "printed":
        e += 1
    return (-1) ** (e % 2)


def adams_T(cc, cell, conv: Conventions = DEFAULT, *,
            normalize: bool = True) -> dict:
    """Image of a cell in the cyclic bar complex of the loop dga.

    Word terms: for each division 0 <= j_1 < ... < j_d <= k of the
    cell's vertex list, the slots are the runs between consecutive
    division points, the last slot wrapping around through the end and
    the start; the output entry order is slots reversed, the wrap slot
    leftmost (special).  A degenerate slot path kills the term; a
    tree-edge slot becomes the unit word and stays as an entry.

    Pair terms: for each j_1 < j_2 both orientations of the cut pair of
    paths occur as single-entry words, when the pair is not supported on
    a collapsed edge.

    With normalize=True (the default) output words that are degenerate
    in the cyclic bar sense (unit entry outside the special slot) are
    dropped; the map is then valued in the normalized complex.
    """
    out = {}
    u = tuple(cell)
    k = len(u) - 1
    for d in range(1, k + 2):
        for js in combinations(range(k + 1), d):
            letters = []
            ok = True
            for i in range(1, d + 1):
                if i < d:
                    seq = u[js[i - 1]:js[i] + 1]
                else:
                    seq = u[js[d - 1]:] + u[:js[0] + 1]
                letter = make_tau(cc, seq, conv)
                if letter is None:
                    ok = False
                    break
                letters.append(letter)
            if not ok:
                continue
            ccw = tuple(normalize_word((letters[i],))
                        for i in range(d - 1, -1, -1))
            if normalize and any(e == () for e in ccw[1:]):
                continue
            _add(out, ccw, _word_term_sign(conv, d, js[0], js[d - 1], k))
    for j1, j2 in combinations(range(k + 1), 2):
        u1 = u[j1:j2 + 1]
        u2 = u[j2:] + u[:j1 + 1]
        if degenerate_path(u1, conv.tau_degeneracy) \
                or degenerate_path(u2, conv.tau_degeneracy):
            continue
        if not pi2_vanishes(cc, u1, u2):
            _add(out, ((("pi2", u1, u2),),), _pair_first_sign(j1, j2, k))
        if not pi2_vanishes(cc, u2, u1):
            _add(out, ((("pi2", u2, u1),),), _pair_second_sign(conv, j1, j2, k))
    return out


@dataclass(frozen=True)
class TVerification:
    ok: bool
    cells: tuple
    residuals: dict      # cell -> residual vector, nonzero entries only
    corner_census: dict  # pi3-bearing word -> (plus count, minus count)

    @property
    def corners_balanced(self) -> bool:
        return all(p == m for p, m in self.corner_census.values())


def t_residual(cc, cell, conv: Conventions = DEFAULT, *,
               normalize: bool = True, census: dict | None = None) -> dict:
    """b(T(cell)) - T(cellular boundary of cell); zero iff T is a chain
    map at this cell.  When a census dict is passed, every corner-letter
    word produced by the bar differential is tallied there with its sign
    before any cancellation."""
    algebra = LoopAlgebra(cc, conv)
    out = {}
    for w, c in adams_T(cc, cell, conv, normalize=normalize).items():
        for t, c2 in hochschild_b(algebra, w, c,
                                  arity=conv.hochschild_arity,
                                  normalize=normalize).items():
            if census is not None and _has_corner(t):
                plus, minus = census.get(t, (0, 0))
                if c2 > 0:
                    census[t] = (plus + c2, minus)
                else:
                    census[t] = (plus, minus - c2)
            _add(out, t, c2)
    for face, cf in cc.boundary(cell).items():
        for w, c in adams_T(cc, face, conv, normalize=normalize).items():
            _add(out, w, -cf * c)
    return out


def _has_corner(ccword) -> bool:
    return any(letter[0] == "pi3" for entry in ccword for letter in entry)


def verify_T_chain_map(cc, conv: Conventions = DEFAULT, *,
                       max_weight: int | None = None,
                       normalize: bool = True) -> TVerification:
    """Residual of the comparison map on every surviving positive cell.

    The image of a k-cell reaches weight k + 1, so a weight cap below
    that cannot even hold the map's values: that is a truncation error,
    not a verification failure.
    """
    cells = []
    top = cc.source.dimension()
    for dim in range(1, top + 1):
        cells.extend(cc.cells(dim=dim))
    if max_weight is not None:
        overflow = [c for c in cells if len(c) > max_weight]
        if overflow:
            raise TruncationError(max_weight, overflow)
    residuals = {}
    census = {}
    for cell in cells:
        r = t_residual(cc, cell, conv, normalize=normalize, census=census)
        if r:
            residuals[cell] = r
    ok = not residuals and all(p == m for p, m in census.values())
    return TVerification(ok=ok, cells=tuple(cells), residuals=residuals,
                         corner_census=census)


# -- rendering ----------------------------------------------------------------

def format_letter(letter) -> str:
    kind = letter[0]
    if kind == "unit":
        return "1"
    body = "|".join(",".join(str(v) for v in seq) for seq in letter[1:])
    return {"tau": "t", "pi2": "p", "pi3": "q"}[kind] + "[" + body + "]"


def format_word(word) -> str:
    if not word:
        return "1"
    return "*".join(format_letter(l) for l in word)


def format_cyclic_word(ccword) -> str:
    return "(" + " ; ".join(format_word(w) for w in ccword) + ")"
