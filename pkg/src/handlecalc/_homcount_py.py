"""Pure-Python enumeration kernel; mirrors ``_homcount.pyx`` exactly."""


def count_assignments(n, nvars, mult, inv, identity, rel_offsets, rel_letters,
                      due_offsets, due_rels):
    """Count assignments of ``nvars`` variables in a group of order ``n``.

    Variables are assigned in order 0..nvars-1.  Relator ``r`` is the letter
    range ``rel_letters[rel_offsets[r]:rel_offsets[r+1]]``, each letter encoded
    as ``2*var + (1 if inverted)``.  Relators listed in
    ``due_rels[due_offsets[d]:due_offsets[d+1]]`` are checked once variable
    ``d`` is set.
    """
    if nvars == 0:
        return 1
    due = [
        [rel_letters[rel_offsets[r]:rel_offsets[r + 1]]
         for r in due_rels[due_offsets[d]:due_offsets[d + 1]]]
        for d in range(nvars)
    ]
    val = [-1] * nvars
    total = 0
    depth = 0
    last = nvars - 1
    while depth >= 0:
        val[depth] += 1
        if val[depth] >= n:
            depth -= 1
            continue
        ok = True
        for letters in due[depth]:
            x = identity
            for code in letters:
                e = val[code >> 1]
                if code & 1:
                    e = inv[e]
                x = mult[x * n + e]
            if x != identity:
                ok = False
                break
        if not ok:
            continue
        if depth == last:
            total += 1
        else:
            depth += 1
            val[depth] = -1
    return total
