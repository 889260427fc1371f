"""Small exact integer linear algebra: Smith normal form and A x = b over Z."""

from typing import List, Optional, Tuple

Matrix = List[List[int]]


def _identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(A: Matrix) -> Tuple[Matrix, Matrix, Matrix]:
    """Return (U, S, V) with U*A*V = S diagonal and U, V unimodular."""
    S = [row[:] for row in A]
    m = len(S)
    n = len(S[0]) if m else 0
    U, V = _identity(m), _identity(n)

    def row_op(i, j, q):  # row_i -= q * row_j
        for k in range(n):
            S[i][k] -= q * S[j][k]
        for k in range(m):
            U[i][k] -= q * U[j][k]

    def col_op(i, j, q):  # col_i -= q * col_j
        for k in range(m):
            S[k][i] -= q * S[k][j]
        for k in range(n):
            V[k][i] -= q * V[k][j]

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for k in range(m):
            S[k][i], S[k][j] = S[k][j], S[k][i]
        for k in range(n):
            V[k][i], V[k][j] = V[k][j], V[k][i]

    t = 0
    while t < min(m, n):
        # find a pivot
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if S[i][j]:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            # clear column t
            done = True
            for i in range(t + 1, m):
                if S[i][t]:
                    if S[i][t] % S[t][t] == 0:
                        row_op(i, t, S[i][t] // S[t][t])
                    else:
                        q = S[i][t] // S[t][t]
                        row_op(i, t, q)
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if S[t][j]:
                    if S[t][j] % S[t][t] == 0:
                        col_op(j, t, S[t][j] // S[t][t])
                    else:
                        q = S[t][j] // S[t][t]
                        col_op(j, t, q)
                        swap_cols(t, j)
                        done = False
            if done and all(S[i][t] == 0 for i in range(t + 1, m)) \
                    and all(S[t][j] == 0 for j in range(t + 1, n)):
                break
        t += 1
    return U, S, V


def solve_int_linear(A: Matrix, b: List[int]) -> Optional[List[int]]:
    """One integer solution x of A x = b, or None if none exists."""
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0 or n == 0:
        if all(v == 0 for v in b):
            return [0] * n
        return None
    U, S, V = smith_normal_form(A)
    c = [sum(U[i][k] * b[k] for k in range(m)) for i in range(m)]
    y = [0] * n
    for i in range(m):
        d = S[i][i] if i < n else 0
        if d:
            if c[i] % d:
                return None
            y[i] = c[i] // d
        elif c[i]:
            return None
    return [sum(V[i][k] * y[k] for k in range(n)) for i in range(n)]
