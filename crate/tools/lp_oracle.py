import itertools, math, sys
import numpy as np
from scipy.optimize import linprog
from scipy.sparse import lil_matrix

def solve(n, k, rho, s, w=0.0):
    pts = [('O',)] + [(i, j) for i in range(k+1) for j in range(1, n+1)]
    idx = {p: t for t, p in enumerate(pts)}
    def P(i, j): return 0 if j == 0 else idx[(i, j)]
    m = len(pts)
    pairs = {}
    for a in range(m):
        for b in range(a+1, m):
            pairs[(a, b)] = len(pairs)
    def D(a, b): return pairs[(min(a, b), max(a, b))]
    nt = n + 1
    nd = len(pairs)
    N = nt + 1 + nd
    T = lambda j: j
    Y = nt
    dv = lambda a, b: nt + 1 + D(a, b)
    A, b = [], []
    def row(coefs, rhs):  # coefs.x >= rhs -> -coefs.x <= -rhs
        A.append(coefs); b.append(rhs)
    for i in range(k+1):
        for j in range(n):
            row({T(j+1): 1, T(j): -1, dv(P(i, j), P(i, j+1)): -1}, 0)
    for j in range(1, n+1):
        tgt = P(s[j-1], j)
        c = {Y: 1, T(j): -1}
        if P(0, j) != tgt: c[dv(P(0, j), tgt)] = -1/(1+w)
        if w > 0 and P(1, j) != tgt: c[dv(P(1, j), tgt)] = -w/(1+w)
        row(c, 0)
    for a, bb, c in itertools.permutations(range(m), 3):
        if a < bb:
            row({dv(a, c): 1, dv(c, bb): 1, dv(a, bb): -1}, 0)
    bounds = [(None, None)] * N
    bounds[T(0)] = (-1, -1); bounds[T(1)] = (0, 0)
    for q in range(nd): bounds[nt+1+q] = (0, None)
    asg = {P(s[j-1], j): rho[j-1] for j in range(1, n+1)}
    for a, bb in pairs:
        if a == 0 and bb in asg: bounds[dv(a, bb)] = (1, 1)
        elif a in asg and bb in asg:
            v = 2*math.sin(math.pi*(abs(asg[a]-asg[bb]) % n)/n); bounds[dv(a, bb)] = (v, v)
    M = lil_matrix((len(A), N))
    for r, c in enumerate(A):
        for j, v in c.items(): M[r, j] += -v
    cost = np.zeros(N); cost[Y] = 1
    res = linprog(cost, A_ub=M.tocsr(), b_ub=-np.array(b), bounds=bounds, method='highs',
                  options={'primal_feasibility_tolerance': 1e-10, 'dual_feasibility_tolerance': 1e-10})
    return res.fun

if __name__ == '__main__':
    n, k = int(sys.argv[1]), int(sys.argv[2])
    rho = list(map(int, sys.argv[3].split(','))); s = list(map(int, sys.argv[4].split(',')))
    w = float(sys.argv[5]) if len(sys.argv) > 5 else 0.0
    print(repr(solve(n, k, rho, s, w)))
