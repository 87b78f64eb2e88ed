"""Independent reference computations used by the tests.

None of these go through the code paths they check: free reduction is done by
string rewriting, homology by sympy, signatures by floating-point eigenvalues,
hom counts by brute-force enumeration.
"""
import itertools
import re
import string

import numpy as np
import sympy
from sympy.matrices.normalforms import invariant_factors

LOWER = string.ascii_lowercase


def word_to_str(w):
    return "".join(LOWER[g] if s == 1 else LOWER[g].upper() for g, s in w)


def str_to_word(text):
    return tuple((LOWER.index(c.lower()), 1 if c.islower() else -1) for c in text)


_CANCEL = re.compile("|".join(f"{c}{c.upper()}|{c.upper()}{c}" for c in LOWER))


def string_reduce(text):
    while True:
        new = _CANCEL.sub("", text)
        if new == text:
            return text
        text = new


def string_substitute(text, images):
    """Substitute ``images[g]`` (strings) for each letter, inverting for capitals."""
    out = []
    for c in text:
        im = images[LOWER.index(c.lower())]
        out.append(im if c.islower() else im[::-1].swapcase())
    return "".join(out)


def exponent_rows(relators, n):
    rows = []
    for r in relators:
        row = [0] * n
        for g, s in r:
            row[g] += s
        rows.append(row)
    return rows


def coker_invariants(rows, ncols):
    """(free_rank, torsion) of Z^ncols / rowspace via sympy."""
    if not rows:
        return ncols, []
    m = sympy.Matrix(rows)
    inv = [abs(int(x)) for x in invariant_factors(m, domain=sympy.ZZ)]
    nonzero = [x for x in inv if x]
    return ncols - len(nonzero), [x for x in nonzero if x > 1]


def numeric_signature(rows):
    if not rows:
        return 0
    a = np.array(rows, dtype=float)
    ev = np.linalg.eigvalsh(a)
    tol = 1e-8 * max(1.0, np.abs(ev).max())
    return int((ev > tol).sum() - (ev < -tol).sum())


def rational_kernel_signature(link_rows, handles, dots):
    """Signature of the 2-handle block restricted to ker(boundary), via a rational nullspace."""
    if not handles:
        return 0
    L = sympy.Matrix(link_rows)
    block = L.extract(handles, handles)
    if dots:
        bt = L.extract(dots, handles)
        basis = bt.nullspace()
    else:
        basis = [sympy.eye(len(handles))[:, k] for k in range(len(handles))]
    if not basis:
        return 0
    k = sympy.Matrix.hstack(*basis)
    q = k.T * block * k
    return numeric_signature([[float(x) for x in q.row(i)] for i in range(q.rows)])


def brute_force_homs(n_gens, relators, mult, inv, identity):
    """Count assignments by trying all of them."""
    order = len(mult)
    count = 0
    for vals in itertools.product(range(order), repeat=n_gens):
        ok = True
        for r in relators:
            x = identity
            for g, s in r:
                v = vals[g] if s == 1 else inv[vals[g]]
                x = mult[x][v]
            if x != identity:
                ok = False
                break
        count += ok
    return count


def vectorized_homs(n_gens, relators, mult, inv, identity):
    """Brute force over all |G|^n assignments with numpy table lookups."""
    order = len(mult)
    mult = np.asarray(mult, dtype=np.int8)
    inv = np.asarray(inv, dtype=np.int8)
    grids = np.indices((order,) * n_gens, dtype=np.int8).reshape(n_gens, -1)
    alive = np.ones(grids.shape[1], dtype=bool)
    for r in relators:
        x = np.full(grids.shape[1], identity, dtype=np.int8)
        for g, s in r:
            v = grids[g] if s == 1 else inv[grids[g]]
            x = mult[x, v]
        alive &= x == identity
    return int(alive.sum())


def s3_table():
    perms = sorted(itertools.permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    mult = [[idx[tuple(p[q[k]] for k in range(3))] for q in perms] for p in perms]
    inv = [idx[tuple(sorted(range(3), key=lambda k: p[k]))] for p in perms]
    return mult, inv, idx[(0, 1, 2)]


def cyclic_table(n):
    return [[(a + b) % n for b in range(n)] for a in range(n)], [(-a) % n for a in range(n)], 0


def bundle_h1_oracle(fiber_genus, base_genus, monodromy_images):
    """H1 of a surface bundle with trivial base lift: Z^{2h} + coinvariants of the monodromy.

    ``monodromy_images[j][i]`` is the image word of fiber generator ``i`` under
    monodromy ``j``.
    """
    nf = 2 * fiber_genus
    rows = []
    for images in monodromy_images:
        a = [[0] * nf for _ in range(nf)]      # column i = abelianized image of e_i
        for i, im in enumerate(images):
            for g, s in im:
                a[g][i] += s
        for i in range(nf):
            rows.append([a[r][i] - (r == i) for r in range(nf)])
    free, tors = coker_invariants(rows, nf) if rows else (nf, [])
    return free + 2 * base_genus, tors
