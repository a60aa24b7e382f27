"""
Exact polyhedral cones.

A cone is stored by inequalities a.x >= 0 and equalities a.x = 0
(H-representation), and/or by extreme rays and a lineality basis
(V-representation).  All vectors are tuples of coprime Python integers.

Conversion between the two uses the double description method.  Projection
is either through the rays (H -> V, drop coordinates, V -> H), through
Fourier-Motzkin elimination, or, for large lifted systems, by a
convex-hull style outer/inner iteration driven by linear programs whose
answers are re-derived exactly (`project_lp`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import numpy as np
from scipy import sparse as sp
from scipy.optimize import linprog

from . import lp


def normalize(vec):
    """Scale a rational vector to coprime integers (sign kept)."""
    vals = [Fraction(int(v.numerator), int(v.denominator))
            if hasattr(v, "denominator") else Fraction(v) for v in vec]
    den = 1
    for v in vals:
        den = lcm(den, v.denominator)
    ints = [int(v * den) for v in vals]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        return tuple(ints)
    return tuple(v // g for v in ints)


def _sign_fix(vec):
    for v in vec:
        if v:
            return vec if v > 0 else tuple(-x for x in vec)
    return vec


def idot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _rref(vectors, dim):
    """Integer-normalized reduced row echelon basis of the span of `vectors`."""
    rows = [[Fraction(x) for x in v] for v in vectors]
    basis = []
    pivots = []
    for r in rows:
        for b, p in zip(basis, pivots):
            if r[p]:
                f = r[p]
                r = [x - f * y for x, y in zip(r, b)]
        p = next((i for i, x in enumerate(r) if x), None)
        if p is None:
            continue
        f = r[p]
        r = [x / f for x in r]
        for k, b in enumerate(basis):
            if b[p]:
                g = b[p]
                basis[k] = [x - g * y for x, y in zip(b, r)]
        basis.append(r)
        pivots.append(p)
    order = sorted(range(len(basis)), key=lambda k: pivots[k])
    return [basis[k] for k in order], [pivots[k] for k in order]


def double_description(dim, inequalities, equalities=()):
    """Extreme rays and lineality basis of {x : A x >= 0, E x = 0}."""
    lin = [tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)]
    rays = []          # list of (vector, tight bitset)
    cons = [(tuple(a), True) for a in equalities] + \
           [(tuple(a), False) for a in inequalities]
    for ci, (a, is_eq) in enumerate(cons):
        bit = 1 << ci
        vals = [idot(a, l) for l in lin]
        k = next((i for i, v in enumerate(vals) if v), None)
        if k is not None:
            l0, s = lin[k], vals[k]
            if s < 0:
                l0, s = tuple(-x for x in l0), -s
            newlin = []
            for i, l in enumerate(lin):
                if i == k:
                    continue
                v = vals[i]
                if v:
                    l = tuple(s * x - v * y for x, y in zip(l, l0))
                newlin.append(normalize(l))
            newrays = []
            for r, z in rays:
                v = idot(a, r)
                if v:
                    r = normalize(tuple(s * x - v * y for x, y in zip(r, l0)))
                newrays.append((r, z | bit))
            if not is_eq:
                # l0 is tight on every earlier constraint
                newrays.append((normalize(l0), bit - 1))
            lin = newlin
            rays = newrays
            continue
        pos, zero, neg = [], [], []
        for r, z in rays:
            v = idot(a, r)
            if v > 0:
                pos.append((r, z, v))
            elif v < 0:
                neg.append((r, z, v))
            else:
                zero.append((r, z | bit))
        need = dim - len(lin) - 2
        allz = [z for _, z in rays]
        new = []
        for rp, zp, vp in pos:
            for rn, zn, vn in neg:
                common = zp & zn
                if bin(common).count("1") < need:
                    continue
                adjacent = True
                for z in allz:
                    if z != zp and z != zn and (z & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                r = normalize(tuple(vp * x - vn * y for x, y in zip(rn, rp)))
                new.append((r, common | bit))
        rays = zero + new
        if not is_eq:
            rays += [(r, z) for r, z, _ in pos]
    return [r for r, _ in rays], lin


@dataclass
class Cone:
    """Rational polyhedral cone in R^dim."""

    dim: int
    inequalities: list = None
    equalities: list = None
    rays: list = None
    lineality: list = None

    def __post_init__(self):
        if self.inequalities is not None:
            self.inequalities = [normalize(a) for a in self.inequalities]
            self.equalities = [_sign_fix(normalize(a))
                               for a in (self.equalities or [])]
        if self.rays is not None:
            self.rays = [normalize(r) for r in self.rays]
            self.lineality = [_sign_fix(normalize(l))
                              for l in (self.lineality or [])]

    @property
    def has_h(self):
        return self.inequalities is not None

    @property
    def has_v(self):
        return self.rays is not None

    def contains(self, x):
        c = self if self.has_h else to_inequalities(self)
        return (all(idot(a, x) >= 0 for a in c.inequalities)
                and all(idot(a, x) == 0 for a in c.equalities))

    def violated(self, x):
        c = self if self.has_h else to_inequalities(self)
        return [a for a in c.inequalities if idot(a, x) < 0]

    def __eq__(self, other):
        return isinstance(other, Cone) and compare(self, other) == "equal"

    def __repr__(self):
        parts = [f"dim={self.dim}"]
        if self.has_h:
            parts.append(f"ineq={len(self.inequalities)} eq={len(self.equalities)}")
        if self.has_v:
            parts.append(f"rays={len(self.rays)} lin={len(self.lineality)}")
        return f"Cone({', '.join(parts)})"


def _reduce_mod(vec, basis, pivots):
    v = [Fraction(x) for x in vec]
    for b, p in zip(basis, pivots):
        if v[p]:
            f = v[p]
            v = [x - f * y for x, y in zip(v, b)]
    return normalize(v)


def to_rays(cone):
    if cone.has_v:
        return cone
    rays, lin = double_description(cone.dim, cone.inequalities, cone.equalities)
    lb, lp_ = _rref(lin, cone.dim)
    lin = [_sign_fix(normalize(b)) for b in lb]
    rays = sorted({_reduce_mod(r, lb, lp_) for r in rays} - {(0,) * cone.dim})
    return Cone(cone.dim, cone.inequalities, cone.equalities, rays, lin)


def to_inequalities(cone):
    """Minimal H-representation of cone(rays) + span(lineality)."""
    if cone.has_h and cone.has_v:
        return cone
    if cone.has_h:
        return cone
    dim = cone.dim
    facets, eqs = double_description(dim, cone.rays, cone.lineality)
    eb, ep = _rref(eqs, dim)
    eqs = [_sign_fix(normalize(b)) for b in eb]
    ineq = sorted({_reduce_mod(f, eb, ep) for f in facets} - {(0,) * dim})
    return Cone(dim, ineq, eqs, cone.rays, cone.lineality)


def canonicalize(cone):
    """Cone with both representations minimal, canonically scaled and sorted."""
    v = to_rays(Cone(cone.dim, cone.inequalities, cone.equalities)) \
        if cone.has_h else cone
    h = to_inequalities(Cone(cone.dim, rays=v.rays, lineality=v.lineality))
    return Cone(cone.dim, h.inequalities, h.equalities, v.rays, v.lineality)


def subset(a, b):
    """True when cone a is contained in cone b."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    av = a if a.has_v else to_rays(a)
    bh = b if b.has_h else to_inequalities(b)
    for r in av.rays:
        if any(idot(f, r) < 0 for f in bh.inequalities):
            return False
        if any(idot(e, r) for e in bh.equalities):
            return False
    for l in av.lineality:
        if any(idot(f, l) for f in bh.inequalities):
            return False
        if any(idot(e, l) for e in bh.equalities):
            return False
    return True


def compare(a, b):
    """One of 'equal', 'subset' (a in b), 'superset', 'incomparable'."""
    ab, ba = subset(a, b), subset(b, a)
    if ab and ba:
        return "equal"
    if ab:
        return "subset"
    if ba:
        return "superset"
    return "incomparable"


def project(cone, keep, method="rays"):
    """Image of the cone under the coordinate projection onto `keep`."""
    keep = list(keep)
    if method == "fme":
        c = cone if cone.has_h else to_inequalities(cone)
        drop = [i for i in range(cone.dim) if i not in set(keep)]
        ineq, eqs = fourier_motzkin(c.inequalities, c.equalities, drop)
        sub = [[a[i] for i in keep] for a in ineq]
        sube = [[a[i] for i in keep] for a in eqs]
        return canonicalize(Cone(len(keep), sub, sube))
    c = to_rays(cone)
    rays = [tuple(r[i] for i in keep) for r in c.rays]
    lin = [tuple(l[i] for i in keep) for l in c.lineality]
    rays = [r for r in rays if any(r)]
    lin = [l for l in lin if any(l)]
    return canonicalize(Cone(len(keep), rays=rays, lineality=lin))


def fourier_motzkin(inequalities, equalities, eliminate):
    """Eliminate coordinates from {A x >= 0, E x = 0}; returns (ineq, eq).

    Equalities are used for substitution when they involve the variable.
    Each step prunes rows that are positive multiples of another and rows
    failing the combination-history (Chernikov) test.
    """
    ineq = [(tuple(a), frozenset([i])) for i, a in enumerate(inequalities)]
    eqs = [tuple(a) for a in equalities]
    for var in eliminate:
        piv = next((e for e in eqs if e[var]), None)
        if piv is not None:
            eqs.remove(piv)
            if piv[var] < 0:
                piv = tuple(-x for x in piv)
            s = piv[var]

            def sub(a, piv=piv, s=s):
                # s > 0, so inequality orientation is preserved
                if not a[var]:
                    return a
                return tuple(s * x - a[var] * y for x, y in zip(a, piv))
            ineq = [(normalize(sub(a)), h) for a, h in ineq]
            eqs = [_sign_fix(normalize(sub(e))) for e in eqs]
            continue
        pos = [(a, h) for a, h in ineq if a[var] > 0]
        neg = [(a, h) for a, h in ineq if a[var] < 0]
        out = [(a, h) for a, h in ineq if a[var] == 0]
        for (p, hp), (n, hn) in itertools.product(pos, neg):
            hist = hp | hn
            c = normalize(tuple(p[var] * y - n[var] * x for x, y in zip(p, n)))
            out.append((c, hist))
        # dedupe and drop histories that contain another's history
        best = {}
        for a, h in out:
            if not any(a):
                continue
            if a not in best or len(h) < len(best[a]):
                best[a] = h
        items = sorted(best.items(), key=lambda t: len(t[1]))
        kept = []
        for a, h in items:
            if any(h2 <= h for _, h2 in kept):
                continue
            kept.append((a, h))
        ineq = kept
    return [a for a, _ in ineq], eqs


def intersect(cone, equalities=(), inequalities=()):
    c = cone if cone.has_h else to_inequalities(cone)
    return Cone(c.dim, list(c.inequalities) + list(inequalities),
                list(c.equalities) + list(equalities))


def conic_decompose(point, generators, weights=None):
    """Nonnegative rational alpha with sum alpha_i g_i = point, or None.

    Among all decompositions one minimizing sum alpha_i (weighted) is
    returned, which tends to be sparse.
    """
    rows = [{k: v for k, v in enumerate(g) if v} for g in generators]
    target = {k: v for k, v in enumerate(point) if v}
    if not target:
        return [Fraction(0)] * len(generators)
    res = lp.min_l1(rows, target, len(point), weights=weights)
    if res.status != "optimal":
        return None
    return [Fraction(int(v.numerator), int(v.denominator)) for v in res.x]


# serialization

def dumps(cone):
    """Text form: header `dim k | ineq m | eq n | rays r`, then integer rows.

    A missing representation is written with count `-`.  Lineality vectors,
    if any, follow under a `lineality l` line.
    """
    c = cone
    cnt = lambda v: "-" if v is None else str(len(v))
    lines = [f"dim {c.dim} | ineq {cnt(c.inequalities)} | eq {cnt(c.equalities)}"
             f" | rays {cnt(c.rays)}"]
    for block in (c.inequalities, c.equalities, c.rays):
        lines.extend(" ".join(str(x) for x in v) for v in block or [])
    if c.lineality:
        lines.append(f"lineality {len(c.lineality)}")
        lines.extend(" ".join(str(x) for x in v) for v in c.lineality)
    return "\n".join(lines) + "\n"


def loads(text):
    lines = [l for l in text.strip().splitlines() if l.strip()]
    head = [h.split() for h in lines[0].split("|")]
    dim = int(head[0][1])
    counts = [None if h[1] == "-" else int(h[1]) for h in head[1:4]]
    pos = 1
    blocks = []
    for k in counts:
        if k is None:
            blocks.append(None)
            continue
        blocks.append([tuple(int(x) for x in l.split())
                       for l in lines[pos:pos + k]])
        pos += k
    lin = [] if blocks[2] is not None else None
    if pos < len(lines) and lines[pos].startswith("lineality"):
        k = int(lines[pos].split()[1])
        lin = [tuple(int(x) for x in l.split()) for l in lines[pos + 1:pos + 1 + k]]
    return Cone(dim, blocks[0], blocks[1], blocks[2], lin)


# projection of large lifted systems

def project_lp(rows, equalities, nvars, keep, seeds, lifted_points=None,
               max_iter=10000):
    """Project {x in R^nvars : rows.x >= 0, equalities.x = 0} onto `keep`.

    `rows` and `equalities` are sparse dicts.  `seeds` are integer vectors in
    the projected space already known to lie in the projection and to span
    it.  The hull of the known points is grown until every one of its
    facets is certified by an exact nonnegative combination of the lifted
    constraints.  Returns (cone, certificates) where certificates maps each
    facet to its lambda.
    """
    d = len(keep)
    eq_rows = []
    for e in equalities:
        eq_rows.append(e)
        eq_rows.append({k: -v for k, v in e.items()})
    allrows = list(rows) + eq_rows
    points = [normalize(s) for s in seeds]
    certified = {}
    A = lp.to_csr(list(rows), nvars)
    Aeq = lp.to_csr(list(equalities), nvars) if equalities else None
    norm = np.zeros(nvars)
    for k in keep:
        norm[k] = 1.0
    for _ in range(max_iter):
        hull = to_inequalities(Cone(d, rays=points, lineality=[]))
        if hull.equalities:
            raise ValueError("seed points do not span the projected space")
        todo = [f for f in hull.inequalities if f not in certified]
        if not todo:
            cone = Cone(d, hull.inequalities, [], points, [])
            return canonicalize(cone), certified
        for f in todo:
            target = {keep[i]: c for i, c in enumerate(f) if c}
            # float search for a point of the projection violating f
            c = np.zeros(nvars)
            for i, v in enumerate(f):
                c[keep[i]] = float(v)
            Aeq_f = norm.reshape(1, -1)
            beq = [1.0]
            if Aeq is not None:
                Aeq_f = sp.vstack([Aeq, sp.csr_matrix(norm.reshape(1, -1))])
                beq = [0.0] * len(equalities) + [1.0]
            res = linprog(c, A_ub=-A, b_ub=np.zeros(len(rows)), A_eq=Aeq_f,
                          b_eq=beq, bounds=(None, None), method="highs-ds")
            new_point = None
            if res.status == 0 and res.fun < -1e-9:
                new_point = _exact_vertex(rows, equalities, nvars, keep,
                                          res.x, f)
            if new_point is None:
                lam, farkas = lp.certificate(allrows, target)
                if lam is not None:
                    certified[f] = lam
                    continue
                new_point = normalize([farkas[k] for k in keep])
            if new_point in points or idot(f, new_point) >= 0:
                raise RuntimeError("projection made no progress")
            points.append(new_point)
            break
    raise RuntimeError("projection iteration limit reached")


def _exact_vertex(rows, equalities, nvars, keep, xf, f):
    """Recover the exact LP vertex near the float point `xf`."""
    scale = max(1.0, max(abs(v) for v in xf))
    for tol in (1e-9, 1e-7, 1e-11):
        tight = [r for r in rows
                 if abs(sum(c * xf[k] for k, c in r.items())) <= tol * scale]
        norm = {k: 1 for k in keep}
        system = tight + list(equalities) + [norm]
        rhs = [0] * (len(tight) + len(equalities)) + [1]
        x, rank = lp.solve_sparse(system, rhs, nvars)
        if x is None or rank < nvars:
            continue
        if any(lp.dot(r, x) < 0 for r in rows):
            continue
        if any(lp.dot(e, x) != 0 for e in equalities):
            continue
        y = normalize([x[k] for k in keep])
        if idot(f, y) < 0:
            return y
    return None
