"""Independent brute-force references used by the tests.

Nothing here imports the package under test; inputs are plain Fractions or
complex numbers so that a bug in the library cannot hide in its own oracle.
"""

from fractions import Fraction
from itertools import combinations


def zero_sum_subsets(values):
    """All nonempty proper index subsets (1-based, sorted) with zero sum."""
    d = len(values)
    out = []
    for k in range(1, d):
        for combo in combinations(range(d), k):
            if sum((values[i] for i in combo), 0) == 0:
                out.append(tuple(i + 1 for i in combo))
    return sorted(out)


def set_partitions(items):
    """Every set partition of ``items`` (a list), as lists of lists."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def zero_sum_partitions(values):
    """Partitions of {1..d} into at least two zero-sum blocks, canonical order."""
    d = len(values)
    out = []
    for p in set_partitions(list(range(1, d + 1))):
        if len(p) < 2:
            continue
        if all(sum((values[i - 1] for i in b), 0) == 0 for b in p):
            out.append(sorted(sorted(b) for b in p))
    return sorted(out)


def refines(finer, coarser):
    return all(any(set(b) <= set(c) for c in coarser) for b in finer)


def complex_det(rows):
    """Determinant by Laplace expansion (fine for the sizes used)."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * complex_det(minor)
    return total


def equal_classes(values):
    classes = {}
    for i, v in enumerate(values, start=1):
        classes.setdefault(v, []).append(i)
    return sorted(tuple(c) for c in classes.values())


def as_fractions(values):
    return [Fraction(v) for v in values]
