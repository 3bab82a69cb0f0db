"""String-rewriting oracle for loop classes of a collapsed complex.

The edge-path group of a connected simplicial complex is generated by
its non-tree edges, one generator per oriented crossing, subject to one
relation per triangle (a, b, c):

    g_ab g_bc = g_ac        (tree edges contribute the empty string)

This is classical combinatorial group theory, independent of any chain
machinery, and for the complexes used in tests the oriented rules below
are length-reducing, so exhaustive rewriting terminates.  Words here are
strings of generator symbols; only positive words are needed because the
tests ask whether monoid words reduce to the unit or stay distinct.
"""


def edge_generators(cc):
    """Non-tree edges of the collapsed complex, as symbols."""
    return {edge: f"g{edge[0]}_{edge[1]}" for edge in cc.cells(dim=1)}


def triangle_rules(cc):
    """Rewriting rules from the triangle relations, oriented so the
    left side is never shorter than the right."""
    gens = edge_generators(cc)

    def path(edge):
        return (gens[edge],) if edge in gens else ()

    rules = []
    for a, b, c in cc.cells(dim=2):
        lhs = path((a, b)) + path((b, c))
        rhs = path((a, c))
        if len(lhs) < len(rhs):
            lhs, rhs = rhs, lhs
        if lhs != rhs:
            rules.append((lhs, rhs))
    return rules


def rewrite(word, rules, max_steps=10000):
    """Leftmost, longest-rule-first reduction to a fixpoint."""
    ordered = sorted(rules, key=lambda r: -len(r[0]))
    word = tuple(word)
    for _ in range(max_steps):
        changed = False
        for lhs, rhs in ordered:
            n = len(lhs)
            for i in range(len(word) - n + 1):
                if word[i:i + n] == lhs:
                    word = word[:i] + rhs + word[i + n:]
                    changed = True
                    break
            if changed:
                break
        if not changed:
            return word
    raise RuntimeError("rewriting did not terminate")


def normal_forms(cc, max_length):
    """Normal forms of every generator word of length <= max_length."""
    gens = sorted(edge_generators(cc).values())
    rules = triangle_rules(cc)
    forms = set()
    words = [()]
    for _ in range(max_length):
        words = [w + (g,) for w in words for g in gens]
        for w in words:
            forms.add(rewrite(w, rules))
    forms.add(())
    return forms
