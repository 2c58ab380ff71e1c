"""Exact linear algebra over Q(q).

Rows are cleared of denominators and eliminated fraction-free (two-term
Bareiss updates with exact Laurent division by the previous pivot), with
pivots chosen among the lowest-degree candidates.  Back substitution
returns ScalarQ coordinates.  Everything is deterministic.
"""

from __future__ import annotations

from .scalars import LaurentQ, ScalarQ, S_ONE, S_ZERO, _L_ONE, _dgcd


__all__ = [
    "solve_linear",
    "column_rank_profile",
    "invert_matrix",
    "solve_square_multi",
    "mat_vec",
    "mat_mul",
]


def _laurent_lcm(a: LaurentQ, b: LaurentQ) -> LaurentQ:
    if a.is_one():
        return b
    if b.is_one():
        return a
    prod = a * b
    da, _ = a._dense()
    db, _ = b._dense()
    g = LaurentQ._from_dense(_dgcd(da, db))
    return prod.exact_div(g)


def _clear_rows(rows: list[list[ScalarQ]]) -> list[list[LaurentQ]]:
    out = []
    for row in rows:
        den = _L_ONE
        for x in row:
            if x.num.c and not x.den.is_one():
                den = _laurent_lcm(den, x.den)
        if den.is_one():
            out.append([x.num for x in row])
        else:
            cleared = []
            for x in row:
                if not x.num.c:
                    cleared.append(x.num)
                elif x.den.is_one():
                    cleared.append(x.num * den)
                else:
                    cleared.append(x.num * den.exact_div(x.den))
            out.append(cleared)
    return out


def _span(x: LaurentQ) -> tuple[int, int]:
    return (x.max_exp() - x.min_exp(), len(x.c))


def _echelon(rows: list[list[LaurentQ]]) -> list[tuple[int, int]]:
    """Fraction-free row echelon, in place; returns the pivot positions."""
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    pivots: list[tuple[int, int]] = []
    prev = _L_ONE
    pr = 0
    for c in range(nc):
        if pr >= nr:
            break
        best = None
        for r in range(pr, nr):
            e = rows[r][c]
            if e.c:
                s = _span(e)
                if best is None or s < best[0]:
                    best = (s, r)
        if best is None:
            continue
        r0 = best[1]
        if r0 != pr:
            rows[pr], rows[r0] = rows[r0], rows[pr]
        piv = rows[pr][c]
        prow = rows[pr]
        one_prev = prev.is_one()
        for r in range(pr + 1, nr):
            row = rows[r]
            m = row[c]
            if m.c:
                for k in range(c, nc):
                    val = piv * row[k] - m * prow[k]
                    row[k] = val.exact_div(prev) if not one_prev and val.c else val
            else:
                for k in range(c + 1, nc):
                    if row[k].c:
                        val = piv * row[k]
                        row[k] = val.exact_div(prev) if not one_prev else val
        pivots.append((pr, c))
        prev = piv
        pr += 1
    return pivots


def column_rank_profile(rows: list[list[ScalarQ]]) -> list[int]:
    """Indices of the lexicographically first maximal independent column set."""
    if not rows or not rows[0]:
        return []
    work = _clear_rows(rows)
    return [c for _, c in _echelon(work)]


def solve_linear(
    rows: list[list[ScalarQ]], rhs: list[ScalarQ]
) -> tuple[list[ScalarQ], list[list[ScalarQ]]] | None:
    """Solve A x = b exactly.

    Returns (particular solution, nullspace basis) or None when inconsistent.
    The nullspace basis has one vector per free column, in column order.
    """
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    if len(rhs) != nr:
        raise ValueError("rhs length mismatch")
    aug = _clear_rows([row + [b] for row, b in zip(rows, rhs)])
    if not aug:
        return [], []
    pivots = _echelon(aug)
    if any(c == nc for _, c in pivots):
        return None
    pivot_cols = [c for _, c in pivots]
    free_cols = [c for c in range(nc) if c not in pivot_cols]

    def back_substitute(values: dict[int, ScalarQ], with_rhs: bool) -> list[ScalarQ]:
        x = [S_ZERO] * nc
        for c, v in values.items():
            x[c] = v
        for (r, c) in reversed(pivots):
            row = aug[r]
            acc = row[nc].to_scalar() if with_rhs else S_ZERO
            for k in range(c + 1, nc):
                if row[k].c and x[k].num.c:
                    acc = acc - row[k].to_scalar() * x[k]
            x[c] = acc / row[c].to_scalar()
        return x

    particular = back_substitute({}, True)
    nullspace = [
        back_substitute({f: S_ONE}, False) for f in free_cols
    ]
    return particular, nullspace


def invert_matrix(rows: list[list[ScalarQ]]) -> list[list[ScalarQ]]:
    """Inverse of a square invertible matrix over Q(q)."""
    n = len(rows)
    aug = _clear_rows(
        [row + [S_ONE if r == c else S_ZERO for c in range(n)] for r, row in enumerate(rows)]
    )
    pivots = _echelon(aug)
    if len(pivots) != n or any(c >= n for _, c in pivots):
        raise ValueError("matrix is singular")
    # back substitution for each rhs column
    inv_cols: list[list[ScalarQ]] = []
    for j in range(n):
        x = [S_ZERO] * n
        for (r, c) in reversed(pivots):
            row = aug[r]
            acc = row[n + j].to_scalar()
            for k in range(c + 1, n):
                if row[k].c and x[k].num.c:
                    acc = acc - row[k].to_scalar() * x[k]
            x[c] = acc / row[c].to_scalar()
        inv_cols.append(x)
    return [[inv_cols[j][i] for j in range(n)] for i in range(n)]


def solve_square_multi(
    rows: list[list[ScalarQ]], rhs_cols: list[list[ScalarQ]]
) -> list[list[ScalarQ]]:
    """Solve A X = B for square invertible A, with B given as columns.

    Returns the solution columns; raises ValueError when A is singular.
    One elimination is shared by all right-hand sides.
    """
    n = len(rows)
    aug = _clear_rows(
        [row + [col[r] for col in rhs_cols] for r, row in enumerate(rows)]
    )
    pivots = _echelon(aug)
    if len(pivots) != n or any(c >= n for _, c in pivots):
        raise ValueError("matrix is singular")
    out: list[list[ScalarQ]] = []
    for j in range(len(rhs_cols)):
        x = [S_ZERO] * n
        for (r, c) in reversed(pivots):
            row = aug[r]
            acc = row[n + j].to_scalar()
            for k in range(c + 1, n):
                if row[k].c and x[k].num.c:
                    acc = acc - row[k].to_scalar() * x[k]
            x[c] = acc / row[c].to_scalar()
        out.append(x)
    return out


def mat_vec(m: list[list[ScalarQ]], v: list[ScalarQ]) -> list[ScalarQ]:
    out = []
    for row in m:
        acc = S_ZERO
        for a, b in zip(row, v):
            if a.num.c and b.num.c:
                acc = acc + a * b
        out.append(acc)
    return out


def mat_mul(a: list[list[ScalarQ]], b: list[list[ScalarQ]]) -> list[list[ScalarQ]]:
    if not a or not b:
        return []
    nc = len(b[0])
    out = []
    for row in a:
        new = []
        for j in range(nc):
            acc = S_ZERO
            for k, x in enumerate(row):
                if x.num.c and b[k][j].num.c:
                    acc = acc + x * b[k][j]
            new.append(acc)
        out.append(new)
    return out
