"""Exact Gaussian elimination over any field whose elements support
``+ - * /`` and truthiness (Fractions, RatFunc)."""

from fractions import Fraction


def rref(rows, ncols=None):
    """Reduced row echelon form.  Returns (matrix, pivot_columns)."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    n = ncols if ncols is not None else len(m[0])
    pivots = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        row = m[r]
        for j in range(c, n):
            if row[j]:
                row[j] = row[j] * inv
        for i in range(len(m)):
            if i != r:
                f = m[i][c]
                if f:
                    other = m[i]
                    for j in range(c, n):
                        if row[j]:
                            other[j] = other[j] - f * row[j]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows, ncols, zero=Fraction(0), one=Fraction(1)):
    """Basis of {v : rows @ v = 0}, one basis vector per free column."""
    if not rows:
        return [[one if i == j else zero for i in range(ncols)] for j in range(ncols)]
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for i, p in enumerate(piv):
            if red[i][f]:
                v[p] = -red[i][f]
        basis.append(v)
    return basis


def rank(rows, ncols=None):
    return len(rref(rows, ncols)[1])


def solve(rows, rhs, ncols, zero=Fraction(0)):
    """One solution of rows @ v = rhs, or None if inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, piv = rref(aug, ncols + 1)
    if ncols in piv:
        return None
    v = [zero] * ncols
    for i, p in enumerate(piv):
        v[p] = red[i][ncols]
    return v


def det(rows):
    m = [list(r) for r in rows]
    n = len(m)
    sign = 1
    acc = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        acc *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] * inv
            if f:
                for j in range(c, n):
                    m[i][j] -= f * m[c][j]
    return acc * sign


def mat_vec(rows, v):
    return [sum((a * b for a, b in zip(r, v) if a and b), Fraction(0)) for r in rows]
