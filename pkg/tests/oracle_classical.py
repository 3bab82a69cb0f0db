"""Independent cross-check operators, written from the classical
formulas rather than from this package's sign bookkeeping.

classical_cyclic_b is the textbook cyclic bar differential for an
algebra concentrated in degree zero, in Loday-style storage
(a0, a1, ..., an) with faces left to right:

    b = sum_{i<n} (-1)^i (..., a_i a_{i+1}, ...) + (-1)^n (a_n a0, ...)

The package stores words as (a_d, ..., a_1) with the bar part displayed
in descending order, multiplies with the loop-composition twist, and
differs from the classical operator by one global sign.  The recorded
dictionary, exact in degree zero where the twist is invisible:

    package_b(w) = - rev(classical_b(rev(w)))

where rev keeps the special (leftmost) entry and reverses the rest.
"""


def rev(word):
    return (word[0],) + tuple(reversed(word[1:]))


def classical_cyclic_b(dga, lword):
    out = {}
    n = len(lword) - 1

    def add(k, c):
        if c:
            out[k] = out.get(k, 0) + c
            if out[k] == 0:
                del out[k]

    for i in range(n):
        for z, c in dga.product.get((lword[i], lword[i + 1]), {}).items():
            add(lword[:i] + (z,) + lword[i + 2:], c * (-1) ** i)
    if n >= 1:
        for z, c in dga.product.get((lword[n], lword[0]), {}).items():
            add((z,) + lword[1:n], c * (-1) ** n)
    return out


def classical_b_squared(dga, lword):
    out = {}
    for w, c in classical_cyclic_b(dga, lword).items():
        for w2, c2 in classical_cyclic_b(dga, w).items():
            out[w2] = out.get(w2, 0) + c * c2
            if out[w2] == 0:
                del out[w2]
    return out
