"""Dense linear algebra over GF(2^m): dot products, Gaussian elimination.

Matrices are lists of row lists of ints.  Everything here is desk-scale
(dimensions of a few dozen), so plain Python loops with local table
bindings are fast enough.
"""

from __future__ import annotations

from .field import Field

__all__ = ["gf_dot", "mat_mul", "mat_vec", "transpose", "identity", "rank", "invert", "solve"]


class SingularMatrix(ValueError):
    pass


def gf_dot(field: Field, xs, ys) -> int:
    exp, log = field.exp, field.log
    acc = 0
    for x, y in zip(xs, ys):
        if x and y:
            acc ^= exp[log[x] + log[y]]
    return acc


def mat_vec(field: Field, a, v) -> list[int]:
    return [gf_dot(field, row, v) for row in a]


def mat_mul(field: Field, a, b) -> list[list[int]]:
    bt = transpose(b)
    return [[gf_dot(field, row, col) for col in bt] for row in a]


def transpose(a) -> list[list[int]]:
    return [list(col) for col in zip(*a)]


def identity(size: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(size)] for i in range(size)]


def _eliminate(field: Field, aug: list[list[int]], cols: int) -> int:
    """Row-reduce ``aug`` in place over its first ``cols`` columns; return rank."""
    exp, log = field.exp, field.log
    q1 = field.order - 1
    rank_ = 0
    rows = len(aug)
    width = len(aug[0]) if rows else 0
    for col in range(cols):
        pivot = next((r for r in range(rank_, rows) if aug[r][col]), None)
        if pivot is None:
            continue
        aug[rank_], aug[pivot] = aug[pivot], aug[rank_]
        prow = aug[rank_]
        pinv = exp[q1 - log[prow[col]]]
        if prow[col] != 1:
            lp = log[pinv]
            for j in range(col, width):
                if prow[j]:
                    prow[j] = exp[log[prow[j]] + lp]
        for r in range(rows):
            if r != rank_ and aug[r][col]:
                lf = log[aug[r][col]]
                row = aug[r]
                for j in range(col, width):
                    if prow[j]:
                        row[j] ^= exp[log[prow[j]] + lf]
        rank_ += 1
        if rank_ == rows:
            break
    return rank_


def rank(field: Field, a) -> int:
    work = [list(row) for row in a]
    if not work:
        return 0
    return _eliminate(field, work, len(work[0]))


def invert(field: Field, a) -> list[list[int]]:
    size = len(a)
    aug = [list(row) + ident_row for row, ident_row in zip(a, identity(size))]
    if _eliminate(field, aug, size) != size:
        raise SingularMatrix(f"{size}x{size} matrix is singular")
    return [row[size:] for row in aug]


def solve(field: Field, a, b) -> list[int]:
    """Solve the square system a @ x = b; raises SingularMatrix otherwise."""
    size = len(a)
    aug = [list(row) + [bv] for row, bv in zip(a, b)]
    if _eliminate(field, aug, size) != size:
        raise SingularMatrix(f"{size}x{size} system is singular")
    return [row[size] for row in aug]
