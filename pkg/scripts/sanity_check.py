# Development scratch: validate the glue construction against the
# transcribed basis fixture before committing to the design.
from fractions import Fraction
from pathlib import Path


def read_matrix(path):
    lines = Path(path).read_text().splitlines()
    r, c = map(int, lines[0].split())
    return [[int(x) for x in lines[1 + i].split()] for i in range(r)]


def legendre19(x):
    x %= 19
    if x == 0:
        return 0
    return 1 if pow(x, 9, 19) == 1 else -1


# coordinate order (1,2,...,18,0,inf): index k holds field element k+1 for
# k<18, index 18 holds 0, index 19 holds infinity
FIELD_AT = list(range(1, 19)) + [0]


def gqr_rows(n, a, b, d, s, t, e):
    rows = []
    for i in FIELD_AT:  # u_1..u_18, u_0
        row = []
        for j in FIELD_AT:
            if i == j:
                row.append(d % n)
            elif legendre19(i - j) == 1:
                row.append(s % n)
            else:
                row.append(t % n)
        row.append(e % n)
        rows.append(row)
    rows.append([a % n] * 19 + [b % n])  # u_inf
    return rows


def hnf(mat):
    # smallest-pivot rotation keeps entries small during elimination
    m = [row[:] for row in mat]
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        while True:
            piv, best = None, None
            for i in range(r, rows):
                v = abs(m[i][c])
                if v and (best is None or v < best):
                    piv, best = i, v
            if piv is None:
                break
            m[r], m[piv] = m[piv], m[r]
            done = True
            for i in range(r + 1, rows):
                if m[i][c]:
                    q = m[i][c] // m[r][c]
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
                    if m[i][c]:
                        done = False
            if done:
                break
        if r >= rows or m[r][c] == 0:
            continue
        if m[r][c] < 0:
            m[r] = [-x for x in m[r]]
        for i in range(r):
            q = m[i][c] // m[r][c]
            if q:
                m[i] = [x - q * y for x, y in zip(m[i], m[r])]
        r += 1
    return [row for row in m[:r]], r


def xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


u3 = gqr_rows(3, 1, 0, 0, 0, 1, 1)
w21 = gqr_rows(21, 0, 7, 1, 0, 4, 17)

# isotropy (i'): combined rows against G' = [[28I,7I],[7I,2I]]
def gp_dot(x, y):
    s = 0
    for k in range(20):
        s += 28 * x[k] * y[k] + 7 * (x[k] * y[20 + k] + x[20 + k] * y[k]) + 2 * x[20 + k] * y[20 + k]
    return s

glue = [u3[i] + w21[i] for i in range(20)]
ok = True
for i in range(20):
    for j in range(20):
        v = gp_dot(glue[i], glue[j])
        if i == j:
            if v % 42:
                ok = False
                print("diag fail", i, v % 42)
        else:
            if v % 21:
                ok = False
                print("off fail", i, j, v % 21)
print("isotropy (i'):", ok)

# stack with diag(3I,21I), HNF, det
stack = [row[:] for row in glue]
for k in range(20):
    stack.append([3 if c == k else 0 for c in range(40)])
for k in range(20):
    stack.append([21 if c == 20 + k else 0 for c in range(40)])
H, rank = hnf(stack)
print("rank:", rank)
det = 1
for i in range(40):
    det *= H[i][i]
print("det:", det, "== 63^10:", det == 63**10)

# compare with transcribed B
b1 = read_matrix("src/lat40/fixtures/b1.txt")
b3 = read_matrix("src/lat40/fixtures/b3.txt")
B = [[0] * 40 for _ in range(40)]
for i in range(20):
    B[i][i] = 1
    for j in range(20):
        B[i][20 + j] = b1[i][j]
for i in range(10):
    B[20 + i][20 + i] = 3
    for j in range(10):
        B[20 + i][30 + j] = b3[i][j]
for i in range(10):
    B[30 + i][30 + i] = 21
HB, rkB = hnf(B)
print("B det:", None if rkB < 40 else "ok-rank")
print("HNF(glue stack) == HNF(transcribed B):", H == HB)
print("HNF(B) == B (already HNF?):", HB == B)

# full-product variant: generators (u_i, 0) and (0, w_i)
stack2 = []
for i in range(20):
    stack2.append(u3[i] + [0] * 20)
    stack2.append([0] * 20 + w21[i])
for k in range(20):
    stack2.append([3 if c == k else 0 for c in range(40)])
    stack2.append([21 if c == 20 + k else 0 for c in range(40)])
H2, rank2 = hnf(stack2)
det2 = 1
for i in range(40):
    det2 *= H2[i][i]
print("full product det:", det2, "== 63^10:", det2 == 63**10, "same lattice:", H2 == H)

# Gram of H: integer? even? det 1?
GE_NUM = [[0] * 40 for _ in range(40)]  # 21 * gram of the e-frame
for k in range(20):
    GE_NUM[k][k] = 28
    GE_NUM[k][20 + k] = 7
    GE_NUM[20 + k][k] = 7
    GE_NUM[20 + k][20 + k] = 2


def gram(mat):
    n = len(mat)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            out[i][j] = Fraction(gp_dot(mat[i], mat[j]), 21)
    return out

G = gram(H)
intg = all(x.denominator == 1 for row in G for x in row)
even = all(G[i][i].numerator % 2 == 0 for i in range(40))
print("gram integral:", intg, "even diag:", even)
