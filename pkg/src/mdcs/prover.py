"""
Computer-generated converse proofs.

The outer bound is the projection of {Shannon inequalities, network
constraints} onto (H(X_k), R_e).  Every facet b.x >= 0 of it is a
nonnegative combination sum lam_i a_i = b of the lifted rows a_i.  Among
all such lam we take one of least l1 norm (an exact rational LP), with
many redundant Shannon rows in the vocabulary so that short combinations
exist, then order the rows into steps the way one would write the proof
by hand.

Lifted coordinates: h(A) for nonempty A at A - 1 (variables Y_1..Y_K,
U_1..U_E as bits 0..N-1), then R_1..R_E.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import lp
from .model import bits
from .region import (conditional, fan_mask, network_constraints, source_mask,
                     variable_name, _add)


EQUALITY_KINDS = ("decode", "encode", "depend", "independence")


@dataclass(frozen=True)
class ProofRow:
    kind: str          # rate | entropy | mutual | independence | decode | encode | depend
    args: tuple        # masks (and sign for equalities)
    row: tuple         # sorted (coord, coef) pairs

    @property
    def vector(self):
        return dict(self.row)

    @property
    def is_network(self):
        return self.kind == "rate" or self.kind in EQUALITY_KINDS


def _frozen(row):
    return tuple(sorted((k, c) for k, c in row.items() if c))


def _neg(row):
    return {k: -c for k, c in row.items()}


def closure(inst, B):
    """Variables determined by the variable set B through the network:
    decoders whose fan lies in B give their sources, and all sources give
    every encoder output."""
    K = inst.num_sources
    Y = source_mask(K)
    full = (1 << (K + inst.num_encoders)) - 1
    cl = B
    while True:
        new = cl
        for d in inst.decoders:
            f = fan_mask(K, d.fan)
            if f & cl == f:
                new |= source_mask(K, min(d.level, K))
        if new & Y == Y:
            new = full
        if new == cl:
            return cl
        cl = new


def vocabulary(inst):
    """All rows: rate bounds, H(A|B) >= 0, I(A;B|C) >= 0, and network
    equalities as +/- pairs: source independence on every group of sources
    and H(C|B) = 0 for every C inside the network closure of B.
    Duplicate vectors keep the first label."""
    K, E = inst.num_sources, inst.num_encoders
    N = K + E
    full = (1 << N) - 1
    cs = network_constraints(inst)
    rows, seen = [], set()

    def add(kind, args, row):
        fr = _frozen(row)
        if fr and fr not in seen:
            seen.add(fr)
            rows.append(ProofRow(kind, args, fr))

    def add_eq(kind, args, row):
        add(kind, args + (1,), row)
        add(kind, args + (-1,), _neg(row))

    for e in range(E):
        add("rate", (e,), cs.L4[e])
    # network equalities first, so shared vectors keep the network label
    Y = source_mask(K)
    for S in range(1, Y + 1):
        if bin(S).count("1") > 1:
            row = {}
            _add(row, S, 1)
            for k in bits(S):
                _add(row, 1 << k, -1)
            add_eq("independence", (S,), row)
    for B in range(full + 1):
        extra = closure(inst, B) & ~B
        C = extra
        while C:
            kind = "decode" if C & Y == C else "encode" if not C & Y else "depend"
            add_eq(kind, (C, B), conditional(C, B))
            C = (C - 1) & extra
    for A in range(1, full + 1):
        rest = full & ~A
        B = rest
        while True:
            add("entropy", (A, B), conditional(A, B))
            if B == 0:
                break
            B = (B - 1) & rest
    for A in range(1, full + 1):
        for B in range(A + 1, full + 1):
            if A & B:
                continue
            rest = full & ~(A | B)
            C = rest
            while True:
                row = {}
                _add(row, A | C, 1)
                _add(row, B | C, 1)
                _add(row, A | B | C, -1)
                _add(row, C, -1)
                add("mutual", (A, B, C), row)
                if C == 0:
                    break
                C = (C - 1) & rest
    return rows


def lifted_target(inst, facet):
    """Embed a rate-region inequality (H_1..H_K, R_1..R_E) in lifted coordinates."""
    K, E = inst.num_sources, inst.num_encoders
    N = K + E
    b = {}
    for k in range(K):
        if facet[k]:
            b[(1 << k) - 1] = Fraction(facet[k])
    for e in range(E):
        if facet[K + e]:
            b[(1 << N) - 1 + e] = Fraction(facet[K + e])
    return b


@dataclass
class CertificateSystem:
    inst: object
    rows: list
    target: dict
    dim: int


def build_certificate_system(inst, target):
    """`target` is a rate-region inequality vector or a lifted sparse dict."""
    N = inst.num_sources + inst.num_encoders
    b = target if isinstance(target, dict) else lifted_target(inst, target)
    return CertificateSystem(inst, vocabulary(inst), dict(b),
                             (1 << N) - 1 + inst.num_encoders)


@dataclass
class Certificate:
    system: CertificateSystem
    lam: dict              # row index -> positive Fraction

    @property
    def objective(self):
        return sum(self.lam.values(), Fraction(0))

    def residual(self):
        tot = {}
        for i, c in self.lam.items():
            for k, a in self.system.rows[i].row:
                tot[k] = tot.get(k, 0) + c * a
        for k, v in self.system.target.items():
            tot[k] = tot.get(k, 0) - v
        return {k: v for k, v in tot.items() if v}

    def is_valid(self):
        return all(c > 0 for c in self.lam.values()) and not self.residual()


class NotImplied(ValueError):
    def __init__(self, point):
        super().__init__("target is not implied by the Shannon outer bound")
        self.point = point


def solve_sparse_certificate(system, prefer_network=True):
    """Exact least-l1 certificate.

    With `prefer_network`, a second exact LP keeps the l1 optimum and
    minimizes the weight on pure Shannon rows.
    """
    if not system.target:
        return Certificate(system, {})
    vecs = [r.vector for r in system.rows]
    res = lp.min_l1(vecs, system.target, system.dim)
    if res.status != "optimal":
        raise NotImplied(res.y)
    lam = {i: lp.q(v) for i, v in enumerate(res.x) if v}
    if prefer_network:
        opt = res.obj
        extra = system.dim
        vecs2 = [{**v, extra: 1} for v in vecs]
        tgt2 = dict(system.target)
        tgt2[extra] = opt
        w = [0 if r.is_network else 1 for r in system.rows]
        res2 = lp.min_l1(vecs2, tgt2, system.dim + 1, weights=w)
        if res2.status == "optimal":
            lam = {i: lp.q(v) for i, v in enumerate(res2.x) if v}
    lam = {i: Fraction(int(v.numerator), int(v.denominator))
           for i, v in lam.items()}
    return Certificate(system, _collapse_pairs(system.rows, lam))


def _collapse_pairs(rows, lam):
    """Net out an equality used in both directions."""
    lam = dict(lam)
    where = {(r.kind, r.args): i for i, r in enumerate(rows)}
    for i in list(lam):
        r = rows[i]
        if r.kind in EQUALITY_KINDS and r.args[-1] == 1:
            j = where.get((r.kind, r.args[:-1] + (-1,)))
            if j in lam and i in lam:
                d = lam[i] - lam[j]
                lam.pop(i)
                lam.pop(j)
                if d > 0:
                    lam[i] = d
                elif d < 0:
                    lam[j] = -d
    return lam


def certify(inst, target, prefer_network=True):
    return solve_sparse_certificate(build_certificate_system(inst, target),
                                    prefer_network)


# step ordering

@dataclass
class ProofStep:
    number: int
    applied: list          # (coefficient, ProofRow)
    running: dict          # running inequality after this step (>= 0 form)


@dataclass
class ProofScript:
    inst: object
    target: dict
    steps: list = field(default_factory=list)

    @property
    def final(self):
        return self.steps[-1].running if self.steps else {}


def _accumulate(cur, coef, row):
    for k, a in row.row:
        v = cur.get(k, 0) + coef * a
        if v:
            cur[k] = v
        else:
            cur.pop(k, None)


def order_steps(cert):
    """Group the certificate's rows into steps.

    Step 1 takes the rows with rate terms.  Each later step takes the
    unused rows touching a term of the running inequality that does not
    appear in the target.
    """
    system = cert.system
    N = system.inst.num_sources + system.inst.num_encoders
    first_rate = (1 << N) - 1
    left = dict(cert.lam)
    script = ProofScript(system.inst, system.target)
    cur = {}

    def take(idxs):
        applied = []
        for i in sorted(idxs, key=lambda i: system.rows[i].row):
            _accumulate(cur, left[i], system.rows[i])
            applied.append((left.pop(i), system.rows[i]))
        script.steps.append(ProofStep(len(script.steps) + 1, applied, dict(cur)))

    pick = [i for i in left if any(k >= first_rate for k, _ in system.rows[i].row)]
    if pick:
        take(pick)
    while left:
        stray = {k for k, v in cur.items() if system.target.get(k, 0) == 0}
        pick = [i for i in left if any(k in stray for k, _ in system.rows[i].row)]
        if not pick:
            off = {k for k in set(cur) | set(system.target)
                   if cur.get(k, 0) != system.target.get(k, 0)}
            pick = [i for i in left
                    if any(k in off for k, _ in system.rows[i].row)] or list(left)
        take(pick)
    assert cur == {k: v for k, v in system.target.items() if v}
    return script


# rendering

def _names(mask, K):
    return ",".join(variable_name(v, K) for v in bits(mask))


def _coef(c, body, first):
    c = Fraction(c)
    s = "" if c == 1 else f"{c}" if c.denominator == 1 else f"({c})"
    return ("" if first else "+") + s + body


def render_expression(vec, K, E, N=None):
    """c.x >= 0 as 'positive terms >= negative terms'."""
    N = K + E if N is None else N
    first_rate = (1 << N) - 1

    def name(k):
        if k >= first_rate:
            return f"R_{k - first_rate + 1}"
        return f"H({_names(k + 1, K)})"

    def order(k):
        return (0, k) if k >= first_rate else (1, bin(k + 1).count("1"), k)

    pos = [(k, v) for k, v in sorted(vec.items(), key=lambda t: order(t[0])) if v > 0]
    neg = [(k, -v) for k, v in sorted(vec.items(), key=lambda t: order(t[0])) if v < 0]

    def side(terms):
        if not terms:
            return "0"
        return "".join(_coef(v, name(k), i == 0) for i, (k, v) in enumerate(terms))
    return f"{side(pos)} ≥ {side(neg)}"


def render_row(row, K):
    a = row.args
    if row.kind == "rate":
        return f"R_{a[0] + 1} ≥ H(U_{a[0] + 1})"
    if row.kind == "entropy":
        A, B = a
        return f"H({_names(A, K)}|{_names(B, K)}) ≥ 0" if B else \
            f"H({_names(A, K)}) ≥ 0"
    if row.kind == "mutual":
        A, B, C = a
        body = f"{_names(A, K)};{_names(B, K)}"
        return f"I({body}|{_names(C, K)}) ≥ 0" if C else f"I({body}) ≥ 0"
    if row.kind in ("decode", "encode", "depend"):
        C, B, _ = a
        return f"H({_names(C, K)}|{_names(B, K)}) = 0"
    if row.kind == "independence":
        S = a[0]
        return f"H({_names(S, K)}) = " + "+".join(
            f"H({_names(1 << k, K)})" for k in bits(S))
    raise ValueError(row.kind)


def render_proof(script):
    inst = script.inst
    K, E = inst.num_sources, inst.num_encoders
    lines = ["Target: " + render_expression(script.target, K, E)]
    if not script.steps:
        lines.append("0 ≥ 0")
        return "\n".join(lines) + "\n"
    for st in script.steps:
        lines.append(f"Step {st.number}:")
        for c, row in st.applied:
            lines.append(f"  {str(c):>6}  {render_row(row, K)}")
        lines.append("  => " + render_expression(st.running, K, E))
    return "\n".join(lines) + "\n"


def certificate_record(script):
    inst = script.inst
    K, E = inst.num_sources, inst.num_encoders
    return {
        "target": render_expression(script.target, K, E),
        "steps": [{"step": st.number,
                   "rows": [{"coefficient": str(c), "row": render_row(r, K)}
                            for c, r in st.applied],
                   "running": render_expression(st.running, K, E)}
                  for st in script.steps],
    }


def prove(inst, target, prefer_network=True):
    """Certificate, ordered script and rendered text for one inequality."""
    cert = certify(inst, target, prefer_network)
    script = order_steps(cert)
    return cert, script, render_proof(script)
