"""
Exact rational linear algebra and linear programming.

Everything returned from here is exact (gmpy2.mpq).  Floating point
solvers (scipy's HiGHS) are only consulted for a starting guess: a support
or a basis, which is then re-solved and checked in rational arithmetic.

Sparse vectors are dicts {index: value}.
"""

from __future__ import annotations

import numpy as np
from gmpy2 import mpq
from scipy.optimize import linprog
from scipy import sparse as sp

ZERO = mpq(0)
ONE = mpq(1)


def q(x):
    return x if isinstance(x, type(ZERO)) else mpq(x)


def dot(u, v):
    """Dot product of a sparse dict with a dense sequence or another dict."""
    if isinstance(v, dict):
        if len(u) > len(v):
            u, v = v, u
        return sum((c * v[i] for i, c in u.items() if i in v), ZERO)
    return sum((c * v[i] for i, c in u.items()), ZERO)


def solve_sparse(rows, rhs, ncols):
    """Solve rows @ x = rhs exactly.

    Returns (x, rank) with x a dense list (free variables at zero), or
    (None, rank) when the system is inconsistent.
    """
    piv = {}          # pivot column -> (row dict, rhs), fully reduced later
    order = []
    for r, b in zip(rows, rhs):
        r = {i: q(c) for i, c in r.items() if c}
        b = q(b)
        # eliminate existing pivots
        changed = True
        while changed:
            changed = False
            for col in [c for c in r if c in piv]:
                prow, pb = piv[col]
                f = r.get(col)
                if not f:
                    continue
                for i, c in prow.items():
                    v = r.get(i, ZERO) - f * c
                    if v:
                        r[i] = v
                    else:
                        r.pop(i, None)
                b -= f * pb
                changed = True
        if not r:
            if b:
                return None, len(piv)
            continue
        col = min(r)
        f = r[col]
        r = {i: c / f for i, c in r.items()}
        b = b / f
        # keep pivot rows reduced against the new pivot lazily
        piv[col] = (r, b)
        order.append(col)
    x = [ZERO] * ncols
    for col in reversed(order):
        prow, pb = piv[col]
        val = pb - sum((c * x[i] for i, c in prow.items() if i != col), ZERO)
        x[col] = val
    return x, len(piv)


def float_lp(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, method="highs-ds"):
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                  bounds=(None, None) if method == "free" else (0, None),
                  method=method)
    return res


def to_csr(rows, ncols):
    data, ri, ci = [], [], []
    for k, r in enumerate(rows):
        for i, c in r.items():
            data.append(float(c))
            ri.append(k)
            ci.append(i)
    return sp.csr_matrix((data, (ri, ci)), shape=(len(rows), ncols))


class LPResult:
    def __init__(self, status, x=None, obj=None, y=None, basis=None):
        self.status = status      # "optimal" | "infeasible" | "unbounded"
        self.x = x
        self.obj = obj
        self.y = y
        self.basis = basis

    def __repr__(self):
        return f"LPResult({self.status}, obj={self.obj})"


def simplex(cols, b, cost=None, hint=None, max_pivots=100000):
    """Exact revised simplex for min cost.x s.t. sum_j cols[j] x_j = b, x >= 0.

    `cols` is a list of sparse column dicts over rows 0..len(b)-1.  `hint`
    is an optional collection of column indices believed to form an optimal
    basis (typically from a float solve).  Pricing is Dantzig's rule with a
    switch to Bland's rule after a run of degenerate pivots, so the method
    terminates.

    On infeasibility, `y` holds a Farkas vector: y.col_j >= 0 for all j and
    y.b < 0.
    """
    m = len(b)
    n = len(cols)
    b = [q(v) for v in b]
    sign = [(-1 if v < 0 else 1) for v in b]
    bs = [abs(v) for v in b]
    C = [{i: q(c) * sign[i] for i, c in col.items() if c} for col in cols]
    cost = [q(c) for c in cost] if cost is not None else [ZERO] * n
    # artificial columns are n..n+m-1
    def column(j):
        if j < n:
            return C[j]
        return {j - n: ONE}

    basis = list(range(n, n + m))
    Binv = [[ONE if i == k else ZERO for k in range(m)] for i in range(m)]
    xB = list(bs)

    def ftran(col):
        d = [ZERO] * m
        for i, c in col.items():
            for r in range(m):
                v = Binv[r][i]
                if v:
                    d[r] += v * c
        return d

    def pivot(r, j, d):
        piv = d[r]
        row = [v / piv for v in Binv[r]]
        Binv[r] = row
        t = xB[r] / piv
        for i in range(m):
            if i != r and d[i]:
                f = d[i]
                Bi = Binv[i]
                for k in range(m):
                    if row[k]:
                        Bi[k] -= f * row[k]
                xB[i] -= f * t
        xB[r] = t
        basis[r] = j

    if hint:
        _crash(hint, column, basis, Binv, xB, bs, m, n, ftran, pivot)

    def run(costfn, allow):
        degenerate = 0
        for _ in range(max_pivots):
            cB = [costfn(j) for j in basis]
            y = [ZERO] * m
            for r in range(m):
                if cB[r]:
                    row = Binv[r]
                    for k in range(m):
                        if row[k]:
                            y[k] += cB[r] * row[k]
            inb = set(basis)
            enter = None
            best = ZERO
            bland = degenerate > 50
            for j in range(n + m):
                if j in inb or not allow(j):
                    continue
                col = column(j)
                rc = costfn(j) - sum((y[i] * c for i, c in col.items()), ZERO)
                if rc < 0:
                    if bland:
                        enter = j
                        break
                    if rc < best:
                        best, enter = rc, j
            if enter is None:
                return "optimal", y
            d = ftran(column(enter))
            r_best = None
            ratio = None
            for r in range(m):
                if basis[r] >= n and d[r] and not allow(basis[r]) and xB[r] == 0:
                    # artificial stuck at zero: must leave before moving
                    cand = ZERO
                elif d[r] > 0:
                    cand = xB[r] / d[r]
                else:
                    continue
                if (ratio is None or cand < ratio
                        or (cand == ratio and basis[r] < basis[r_best])):
                    ratio, r_best = cand, r
            if r_best is None:
                return "unbounded", y
            degenerate = degenerate + 1 if ratio == 0 else 0
            pivot(r_best, enter, d)
        raise RuntimeError("simplex pivot limit reached")

    status, y = run(lambda j: ONE if j >= n else ZERO, lambda j: True)
    if sum((xB[r] for r in range(m) if basis[r] >= n), ZERO) > 0:
        ysigned = [y[i] * sign[i] for i in range(m)]
        return LPResult("infeasible", y=[-v for v in ysigned])
    status, y = run(lambda j: cost[j] if j < n else ZERO, lambda j: j < n)
    x = [ZERO] * n
    for r, j in enumerate(basis):
        if j < n:
            x[j] = xB[r]
    obj = sum((cost[j] * x[j] for j in range(n)), ZERO)
    y = [y[i] * sign[i] for i in range(m)]
    if status == "unbounded":
        return LPResult("unbounded", x=x, y=y)
    return LPResult("optimal", x=x, obj=obj, y=y,
                    basis=[j for j in basis if j < n])


def _crash(hint, column, basis, Binv, xB, bs, m, n, ftran, pivot):
    """Pivot hinted columns into the basis while keeping xB >= 0."""
    for j in hint:
        if j in basis:
            continue
        d = ftran(column(j))
        # pick a row holding an artificial where the pivot keeps feasibility
        best = None
        for r in range(m):
            if basis[r] >= n and d[r] > 0:
                ratio = xB[r] / d[r]
                ok = all(xB[i] - ratio * d[i] >= 0 for i in range(m))
                if ok and (best is None or ratio < best[0]):
                    best = (ratio, r)
        if best is not None:
            pivot(best[1], j, d)


def certificate(rows, target, float_first=True):
    """Find lam >= 0 with sum lam_i rows_i = target, exactly.

    `rows` are sparse dicts over coordinates 0..dim-1 and `target` a sparse
    dict.  Tries the support suggested by a float LP first (cheap), then
    falls back to the exact simplex.  Returns (lam dict, None) or
    (None, farkas_point) where farkas_point x satisfies rows_i.x >= 0 for
    all i and target.x < 0.
    """
    dim = 1 + max([max(r) for r in rows if r] + [max(target) if target else 0])
    if not target:
        return {}, None
    if float_first:
        lam = _float_support_certificate(rows, target, dim)
        if lam is not None:
            return lam, None
    res = min_l1(rows, target, dim)
    if res.status == "optimal":
        return {i: v for i, v in enumerate(res.x) if v}, None
    return None, res.y


def _float_support_certificate(rows, target, dim):
    A = to_csr(rows, dim).T.tocsr()
    bvec = np.zeros(dim)
    for i, c in target.items():
        bvec[i] = float(c)
    res = linprog(np.ones(len(rows)), A_eq=A, b_eq=bvec, bounds=(0, None),
                  method="highs-ds")
    if res.status != 0:
        return None
    support = [i for i, v in enumerate(res.x) if v > 1e-9]
    return exact_on_support(rows, target, dim, support)


def exact_on_support(rows, target, dim, support):
    """Solve for lam on a fixed support exactly; None unless lam >= 0."""
    # equations: for each coordinate k, sum_{i in support} rows_i[k] lam_i = target[k]
    eqs = [dict() for _ in range(dim)]
    for col, i in enumerate(support):
        for k, c in rows[i].items():
            eqs[k][col] = c
    rhs = [target.get(k, 0) for k in range(dim)]
    keep = [k for k in range(dim) if eqs[k] or rhs[k]]
    x, _ = solve_sparse([eqs[k] for k in keep], [rhs[k] for k in keep],
                        len(support))
    if x is None or any(v < 0 for v in x):
        return None
    lam = {i: x[col] for col, i in enumerate(support) if x[col]}
    # defensive check
    acc = {}
    for i, v in lam.items():
        for k, c in rows[i].items():
            acc[k] = acc.get(k, ZERO) + v * c
    acc = {k: v for k, v in acc.items() if v}
    if acc != {k: q(v) for k, v in target.items() if v}:
        return None
    return lam


def _rationalize(v, max_den=10 ** 6):
    from fractions import Fraction
    f = Fraction(float(v)).limit_denominator(max_den)
    return mpq(f.numerator, f.denominator)


def _certified_optimum(rows, target, dim, w, support, duals, used):
    """Exact optimality proof for a float solution, or None.

    The primal is re-solved on the float support; the float duals are
    rounded to nearby rationals and must satisfy dual feasibility and
    complementary slackness exactly.
    """
    lam = exact_on_support(rows, target, dim, support)
    if lam is None:
        return None
    y = {k: _rationalize(v) for k, v in zip(used, duals)}
    for j, r in enumerate(rows):
        rc = q(w[j]) - sum((c * y.get(k, ZERO) for k, c in r.items()), ZERO)
        if rc < 0 or (rc != 0 and j in lam):
            return None
    x = [lam.get(j, ZERO) for j in range(len(rows))]
    obj = sum((q(w[j]) * v for j, v in lam.items()), ZERO)
    if obj != sum((q(c) * y.get(k, ZERO) for k, c in target.items()), ZERO):
        return None
    return LPResult("optimal", x=x, obj=obj, y=[y[k] for k in used],
                    basis=sorted(lam))


def min_l1(rows, target, dim=None, weights=None, exact_only=False):
    """Exact optimum of min sum w_i lam_i s.t. sum lam_i rows_i = target, lam >= 0."""
    if dim is None:
        dim = 1 + max([max(r) for r in rows if r] + [max(target) if target else 0])
    w = weights if weights is not None else [1] * len(rows)
    # rows of the LP are coordinates; drop coordinates untouched by anything
    used = sorted({k for r in rows for k in r} | set(target))
    idx = {k: t for t, k in enumerate(used)}
    cols = [{idx[k]: c for k, c in r.items()} for r in rows]
    b = [target.get(k, 0) for k in used]
    hint = None
    if not exact_only:
        A = to_csr(rows, dim).T.tocsr()[used, :]
        res = linprog(np.array([float(v) for v in w]), A_eq=A,
                      b_eq=np.array([float(v) for v in b]), bounds=(0, None),
                      method="highs-ds")
        if res.status == 0:
            hint = [i for i, v in enumerate(res.x) if v > 1e-9]
            fast = _certified_optimum(rows, target, dim, w, hint,
                                      res.eqlin.marginals, used)
            if fast is not None:
                return fast
    out = simplex(cols, b, cost=w, hint=hint)
    if out.status == "infeasible":
        # translate Farkas vector back to full coordinates, sign flipped so
        # rows.x >= 0 and target.x < 0
        y = out.y
        x = [ZERO] * dim
        for k, t in idx.items():
            x[k] = y[t]
        out.y = x
    return out
