"""Small dense matrices over F_{p^2}, stored as tuples of rows."""

from .qfield import sigma_bar


def zeros(field, n, m=None):
    m = n if m is None else m
    return tuple(tuple(field.zero for _ in range(m)) for _ in range(n))


def identity(field, n):
    return tuple(tuple(field.one if i == j else field.zero for j in range(n)) for i in range(n))


def from_ints(field, rows):
    return tuple(tuple(field(x) if isinstance(x, int) else x for x in row) for row in rows)


def matmul(a, b):
    cols = list(zip(*b))
    field = a[0][0].field
    out = []
    for row in a:
        out_row = []
        for col in cols:
            acc = field.zero
            for x, y in zip(row, col):
                if x and y:
                    acc = acc + x * y
            out_row.append(acc)
        out.append(tuple(out_row))
    return tuple(out)


def matvec(a, v):
    field = a[0][0].field
    out = []
    for row in a:
        acc = field.zero
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return tuple(out)


def transpose(a):
    return tuple(zip(*a))


def frob(a):
    """Entrywise p-th power."""
    return tuple(tuple(sigma_bar(x) for x in row) for row in a)


def scale(c, a):
    return tuple(tuple(c * x for x in row) for row in a)


def is_zero(a):
    return not any(x for row in a for x in row)


def submatrix(a, rows, cols):
    return tuple(tuple(a[i][j] for j in cols) for i in rows)


def _echelon(a):
    """Row echelon form and pivot columns."""
    m = [list(r) for r in a]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(a):
    if not a or not a[0]:
        return 0
    return len(_echelon(a)[1])


def kernel(a):
    """Basis of the null space {x : a x = 0}."""
    field = a[0][0].field
    m, pivots = _echelon(a)
    n = len(a[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [field.zero] * n
        x[f] = field.one
        for row, c in zip(m, pivots):
            x[c] = -row[f]
        basis.append(tuple(x))
    return basis


def inverse(a):
    field = a[0][0].field
    n = len(a)
    aug = [list(row) + list(e) for row, e in zip(a, identity(field, n))]
    m, pivots = _echelon(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(row[n:]) for row in m[:n])


def column_span_equal(a, b):
    ra, rb = rank(a), rank(b)
    joined = tuple(tuple(x) + tuple(y) for x, y in zip(a, b))
    return ra == rb == rank(joined)
