"""Independent reference computations in sympy.

These deliberately avoid the package's exterior algebra and elimination
code: (p,0)-forms are handled as multilinear functions on g^{1,0}, where
the Dolbeault operator is just the Chevalley-Eilenberg differential of the
complex Lie algebra g^{1,0}.
"""

from itertools import combinations

import sympy as sp


def _perm_sign(p):
    sign = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def holomorphic_frame(I):
    """Basis Z_a of the +i eigenspace of I, columns of a sympy matrix."""
    M = sp.Matrix(I) - sp.I * sp.eye(len(I))
    return [sp.simplify(v) for v in M.nullspace()]


def sub_algebra_constants(brackets, dim, frame):
    """Structure constants of g^{1,0} in the frame: [Z_a, Z_b] = sum C[a][b][c] Z_c."""
    F = sp.Matrix.hstack(*frame)

    def br(x, y):
        out = sp.zeros(dim, 1)
        for (i, j), terms in brackets.items():
            for k, c in terms.items():
                out[k] += sp.Rational(c) * (x[i] * y[j] - x[j] * y[i])
        return out

    m = len(frame)
    C = [[None] * m for _ in range(m)]
    for a in range(m):
        for b in range(m):
            v = br(frame[a], frame[b])
            sol = F.solve_least_squares(v) if any(v) else sp.zeros(m, 1)
            assert sp.simplify(F * sol - v) == sp.zeros(dim, 1), "g^{1,0} not closed"
            C[a][b] = [sp.nsimplify(sp.simplify(s)) for s in sol]
    return C


def partial_matrix(C, p):
    """Matrix of d on Lambda^p(g^{1,0})^* in the basis of sorted index tuples
    (values on Z_I), using d a(X0..Xp) = sum_{s<t} (-1)^{s+t} a([Xs,Xt], ...)
    with a leading minus sign for the 1-form convention d a(X,Y) = -a([X,Y])."""
    m = len(C)
    src = list(combinations(range(m), p))
    tgt = list(combinations(range(m), p + 1))
    idx = {k: n for n, k in enumerate(src)}
    D = sp.zeros(len(tgt), len(src))
    for r, T in enumerate(tgt):
        for s in range(p + 1):
            for t in range(s + 1, p + 1):
                rest = [T[u] for u in range(p + 1) if u not in (s, t)]
                for c, coeff in enumerate(C[T[s]][T[t]]):
                    if coeff == 0 or c in rest:
                        continue
                    args = [c] + rest
                    key = tuple(sorted(args))
                    sign = _perm_sign([sorted(args).index(x) for x in args])
                    D[r, idx[key]] += -((-1) ** (s + t)) * sign * coeff
    return D, src, tgt


def cohomology_dims(C):
    m = len(C)
    mats = [partial_matrix(C, p)[0] for p in range(m)]
    dims = []
    for p in range(m + 1):
        n_p = len(list(combinations(range(m), p)))
        rk_out = mats[p].rank() if p < m else 0
        rk_in = mats[p - 1].rank() if p > 0 else 0
        dims.append(n_p - rk_out - rk_in)
    return dims


def omega_on_frame(G, J, K, frame):
    G, J, K = sp.Matrix(G), sp.Matrix(J), sp.Matrix(K)
    m = len(frame)
    return sp.Matrix(m, m, lambda a, b: (frame[a].T * G * (J + sp.I * K) * frame[b])[0])


def wedge_with_power(W, k, gamma, p):
    """Values of W^k ^ gamma on sorted (2k+p)-tuples; gamma given on sorted p-tuples.

    Uses the determinant-normalised wedge: (a ^ b)(X_1..X_{r+s}) is the sum
    over (r,s)-shuffles of sign * a(...) b(...).
    """
    m = W.shape[0]

    def form2(idx):
        return W[idx[0], idx[1]]

    def wedge_vals(a, ra, b, rb):
        out = {}
        for T in combinations(range(m), ra + rb):
            total = 0
            for A in combinations(range(ra + rb), ra):
                B = [u for u in range(ra + rb) if u not in A]
                perm = list(A) + B
                sign = _perm_sign(perm)
                total += sign * a(tuple(T[u] for u in A)) * b(tuple(T[u] for u in B))
            out[T] = sp.expand(total)
        return out

    cur = {(): sp.Integer(1)}
    deg = 0
    for _ in range(k):
        vals = wedge_vals(lambda t, cur=cur: cur.get(t, 0), deg, form2, 2)
        cur, deg = vals, deg + 2
    full = wedge_vals(lambda t: cur.get(t, 0), deg, lambda t: gamma.get(t, 0), p)
    return full


def lefschetz_rank(brackets, dim, I, J, K, G, i, q):
    frame = holomorphic_frame(I)
    C = sub_algebra_constants(brackets, dim, frame)
    W = omega_on_frame(G, J, K, frame)
    D_src, _, _ = partial_matrix(C, i) if i < len(C) else (sp.zeros(0, 1), None, None)
    src_basis = list(combinations(range(len(C)), i))
    cocycles = D_src.nullspace() if i < len(C) else [sp.eye(len(src_basis))[:, r] for r in range(len(src_basis))]
    p_t = 2 * q - i
    tgt_basis = list(combinations(range(len(C)), p_t))
    images = []
    for v in cocycles:
        gamma = {src_basis[r]: v[r] for r in range(len(src_basis)) if v[r] != 0}
        vals = wedge_with_power(W, q - i, gamma, i)
        images.append(sp.Matrix([vals.get(T, 0) for T in tgt_basis]))
    bound = partial_matrix(C, p_t - 1)[0] if p_t > 0 else sp.zeros(len(tgt_basis), 0)
    base = bound.rank() if bound.shape[1] else 0
    combined = sp.Matrix.hstack(bound, *images) if images else bound
    return {"source": len(cocycles) - (partial_matrix(C, i - 1)[0].rank() if i > 0 else 0),
            "map_rank": combined.rank() - base}
