"""Pure-Python integer kernels.  ``_kernels.pyx`` mirrors this file line for line.

A *composite map* ``fmap`` is the joint local operation of all parties as a
table: ``fmap[i]`` is the joint O-value the parties emit on joint input ``i``.
The fixed points of the loop are the ``i`` with ``table[fmap[i]] == i``.
"""

IMPLEMENTATION = "python"


def fixed_point_count(table, fmap):
    count = 0
    for i in range(len(fmap)):
        if table[fmap[i]] == i:
            count += 1
    return count


def first_violation(table, fmaps):
    """Index of the first composite map without a unique fixed point, or -1."""
    D = len(table)
    for k, fm in enumerate(fmaps):
        count = 0
        for i in range(D):
            if table[fm[i]] == i:
                count += 1
                if count == 2:
                    break
        if count != 1:
            return k
    return -1


def scan_tables(D, fmaps, first_lo, first_hi):
    """Every table with a unique fixed point under all ``fmaps``.

    Tables are visited as a base-``D`` counter, position 0 most significant,
    restricted to ``first_lo <= table[0] < first_hi``.  When a map fails, the
    verdict depends only on the positions read so far, so the counter jumps
    past every table agreeing on them.
    """
    found = []
    if first_lo >= first_hi:
        return found
    t = [0] * D
    t[0] = first_lo
    nmaps = len(fmaps)
    while True:
        fail_pos = -1
        for k in range(nmaps):
            fm = fmaps[k]
            count = 0
            maxpos = 0
            for i in range(D):
                p = fm[i]
                if p > maxpos:
                    maxpos = p
                if t[p] == i:
                    count += 1
                    if count == 2:
                        break
            if count != 1:
                fail_pos = maxpos
                break
        if fail_pos < 0:
            found.append(tuple(t))
            fail_pos = D - 1
        for q in range(fail_pos + 1, D):
            t[q] = 0
        p = fail_pos
        while p > 0:
            t[p] += 1
            if t[p] < D:
                break
            t[p] = 0
            p -= 1
        if p == 0:
            t[0] += 1
            if t[0] >= first_hi:
                return found
