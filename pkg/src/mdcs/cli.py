"""
Command-line front end, result store and batch pipeline.

    python -m mdcs enumerate 2 3
    python -m mdcs region "2 3 | 1 ; 3 5 6" --kind scalar:2
    python -m mdcs suffice "2 3 | 1 ; 3 5 6"
    python -m mdcs codes "2 3 | 1 ; 3 5 6" --target 1,2,3/2,3/2,3/2 --kind vector:2:6
    python -m mdcs verify "2 3 | 1 ; 3 5 6" code.txt
    python -m mdcs minors "2 3 | 1 ; 3 5 6" --mode scalar
    python -m mdcs prove "3 2 | 1 ; 2 ; 3" --inequality "R_1+R_2 >= 2H(X)+H(Y)+H(Z)"
    python -m mdcs pipeline 2 3 --store results/
    python -m mdcs report --store results/

Instances are given in the one-line text form `K |E| | row ; row ...`
(config-matrix rows, zeros omitted).  Exit codes: 0 success, 1 usage
error, 2 resource limit, 3 invariant violation (including a code that
fails verification).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import codes, minors as mn, model, prover
from .bounds import ResourceLimit
from .enumeration import enumerate_all, nonisomorphic, universe
from .polycone import compare, dumps as cone_dumps, loads as cone_loads
from .region import (RateRegion, classify_sufficiency, parse_inequality,
                     region, render_inequality, witness_ray)

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE, EXIT_INVARIANT = 0, 1, 2, 3

# bump when the generator enumeration changes meaning
GENERATOR_CACHE_VERSION = 1

DEFAULT_KINDS = ("scalar:2", "scalar:3", "vector:2:N+1", "superposition")


class UsageError(Exception):
    pass


def needs_long(K, E):
    """Cells whose inner bounds take hours: (2,4), (3,4) and beyond."""
    return E >= 4 and K >= 2 or E >= 5


# result store

class ResultStore:
    """JSON records on disk, one directory per instance.

    A record lives at <root>/<instance id>/<kind>.json and carries the
    canonical form and the generator-cache version it was computed
    with; a record whose key does not match is treated as missing.
    """

    def __init__(self, root):
        self.root = root

    def path(self, inst, kind):
        safe = kind.replace(":", "_").replace("+", "p")
        return os.path.join(self.root, model.instance_id(inst), safe + ".json")

    def _key(self, inst, kind):
        return {"canonical": [list(r) for r in model.canonical_form(inst)],
                "kind": kind, "version": GENERATOR_CACHE_VERSION}

    def get(self, inst, kind):
        p = self.path(inst, kind)
        if not os.path.exists(p):
            return None
        with open(p) as fh:
            rec = json.load(fh)
        if rec.get("key") != self._key(inst, kind):
            return None
        return rec["data"]

    def put(self, inst, kind, data):
        p = self.path(inst, kind)
        os.makedirs(os.path.dirname(p), exist_ok=True)
        rec = {"key": self._key(inst, kind), "instance": model.to_record(inst),
               "data": data}
        tmp = p + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(rec, fh, sort_keys=True, indent=1)
        os.replace(tmp, p)

    def instances(self):
        if not os.path.isdir(self.root):
            return []
        out = []
        for name in sorted(os.listdir(self.root)):
            d = os.path.join(self.root, name)
            if not os.path.isdir(d):
                continue
            for f in sorted(os.listdir(d)):
                if f.endswith(".json"):
                    with open(os.path.join(d, f)) as fh:
                        rec = json.load(fh)
                    out.append(model.from_record(rec["instance"], check=False))
                    break
        return sorted(out, key=mn.key)

    def kinds(self, inst):
        d = os.path.dirname(self.path(inst, "x"))
        out = []
        for f in sorted(os.listdir(d)) if os.path.isdir(d) else []:
            with open(os.path.join(d, f)) as fh:
                out.append(json.load(fh)["key"]["kind"])
        return out


def region_record(reg):
    return {"cone": cone_dumps(reg.cone), "display": reg.render()}


def region_from_record(inst, kind, rec):
    return RateRegion(inst.num_sources, inst.num_encoders, kind,
                      cone_loads(rec["cone"]), inst)


def _vec(v):
    return None if v is None else [str(x) for x in v]


# pipeline

def analyse(inst, kinds, store=None):
    """Regions of every kind plus sufficiency against the outer bound.

    Returns a per-instance record; a kind that hits a resource limit is
    reported under "errors" rather than raised.
    """
    regs, errors = {}, {}
    for kind in ("outer",) + tuple(k for k in kinds if k != "outer"):
        rec = store.get(inst, kind) if store else None
        if rec is None:
            t0 = time.perf_counter()
            try:
                reg = region(inst, kind)
            except ResourceLimit as exc:
                errors[kind] = str(exc)
                continue
            rec = region_record(reg)
            rec["seconds"] = round(time.perf_counter() - t0, 3)
            if store:
                store.put(inst, kind, rec)
        regs[kind] = region_from_record(inst, kind, rec)
    flags, witnesses = {}, {}
    outer = regs.get("outer")
    for kind in kinds:
        if kind == "outer" or outer is None or kind not in regs:
            continue
        rel = compare(regs[kind].cone, outer.cone)
        if rel not in ("equal", "subset"):
            raise AssertionError(f"{kind} region not inside the outer bound "
                                 f"for {model.to_text(inst)}")
        flags[kind] = rel == "equal"
        if not flags[kind]:
            witnesses[kind] = _vec(witness_ray(outer, regs[kind]))
    return {"instance": model.to_text(inst), "id": model.instance_id(inst),
            "sufficient": flags, "witness": witnesses, "errors": errors,
            "regions": {k: r.render() for k, r in sorted(regs.items())}}


def _analyse_job(args):
    text, kinds, root = args
    inst = model.from_text(text)
    return analyse(inst, kinds, ResultStore(root) if root else None)


def run_pipeline(K, E, kinds=DEFAULT_KINDS, store=None, workers=1):
    """Table-II-shaped summary for one (K, |E|) cell.

    Returns {"K", "E", "total", "counts": {kind: sufficient}, "records"}.
    Records follow canonical instance order whatever the worker count.
    """
    insts = nonisomorphic(K, E)
    root = store.root if store else None
    jobs = [(model.to_text(a), tuple(kinds), root) for a in insts]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            records = list(pool.map(_analyse_job, jobs))
    else:
        records = [_analyse_job(j) for j in jobs]
    counts = {k: sum(1 for r in records if r["sufficient"].get(k))
              for k in kinds}
    return {"K": K, "E": E, "total": len(insts), "counts": counts,
            "records": records}


def summary_line(summary):
    cells = " ".join(f"{k}={v}" for k, v in summary["counts"].items())
    return f"({summary['K']},{summary['E']}) total={summary['total']} {cells}"


def report(store, fmt="text", kinds=None):
    """Render every instance in the store, in canonical order.

    Missing kinds are listed per instance.  An empty store gives an empty
    report.
    """
    insts = store.instances()
    entries = []
    for inst in insts:
        have = store.kinds(inst)
        want = list(kinds) if kinds else have
        outer = store.get(inst, "outer")
        e = {"instance": model.to_text(inst), "id": model.instance_id(inst),
             "regions": {}, "inner_only": {}, "missing": []}
        for kind in want:
            rec = store.get(inst, kind)
            if rec is None or "cone" not in rec:
                e["missing"].append(kind)
                continue
            e["regions"][kind] = rec["display"]
            if outer and kind != "outer":
                e["inner_only"][kind] = [l for l in rec["display"]
                                         if l not in outer["display"]]
        entries.append(e)
    if fmt == "json":
        return json.dumps(entries, indent=1, sort_keys=True) + "\n" if entries else ""
    lines = []
    for e in entries:
        lines.append(f"{e['id']}  [{e['instance']}]")
        for kind, disp in sorted(e["regions"].items()):
            lines.append(f"  {kind}:")
            flagged = set(e["inner_only"].get(kind, ()))
            for l in disp:
                lines.append(f"    {l}" + ("   (inner-only)" if l in flagged else ""))
        for kind in e["missing"]:
            lines.append(f"  {kind}: missing")
    return "\n".join(lines) + ("\n" if lines else "")


# argument helpers

def parse_instance(text):
    try:
        inst = model.from_text(text, check=False)
    except (ValueError, IndexError) as exc:
        raise UsageError(f"cannot parse instance {text!r}: {exc}")
    rep = model.validate(inst)
    if not rep.ok:
        raise UsageError(f"invalid instance {text!r}: {rep}")
    return inst


def parse_vector(text, n):
    try:
        v = [Fraction(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse vector {text!r}")
    if len(v) != n:
        raise UsageError(f"expected {n} coordinates, got {len(v)}")
    return v


def _check_kind(kind, K, E, long):
    if kind not in ("outer", "superposition") and \
            kind.split(":")[0] not in ("scalar", "vector"):
        raise UsageError(f"unknown kind {kind!r}")
    if kind not in ("outer", "superposition") and needs_long(K, E) and not long:
        raise ResourceLimit(f"inner bounds for ({K},{E}) need --long")


def _emit(args, text, data):
    if args.json:
        sys.stdout.write(json.dumps(data, indent=1, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# subcommands

def cmd_enumerate(args):
    if not 1 <= args.E <= 5 or args.K < 1:
        raise UsageError("need K >= 1 and 1 <= |E| <= 5")
    if needs_long(args.K, args.E) and not args.long:
        raise ResourceLimit(f"enumeration of ({args.K},{args.E}) needs --long")
    full, reps = enumerate_all(args.K, args.E)
    lines = [model.to_text(a) for a in (full if args.all else reps)]
    text = "\n".join(lines + [f"# non-isomorphic {len(reps)}, isomorphic {len(full)}"])
    _emit(args, text, {"K": args.K, "E": args.E, "nonisomorphic": len(reps),
                       "isomorphic": len(full), "instances": lines})


def cmd_region(args):
    inst = parse_instance(args.instance)
    K, E = inst.num_sources, inst.num_encoders
    _check_kind(args.kind, K, E, args.long)
    reg = region(inst, args.kind)
    if args.cone:
        sys.stdout.write(cone_dumps(reg.cone))
        return
    _emit(args, "\n".join(reg.render()),
          {"kind": args.kind, "inequalities": reg.render(),
           "rays": [_vec(r) for r in reg.cone.rays]})


def cmd_suffice(args):
    inst = parse_instance(args.instance)
    kinds = args.kinds.split(",")
    for k in kinds:
        _check_kind(k, inst.num_sources, inst.num_encoders, args.long)
    rec = classify_sufficiency(inst, kinds)
    lines = []
    for k in kinds:
        w = rec.witnesses.get(k)
        tail = "" if rec.flags[k] else \
            "  witness [" + " ".join(str(x) for x in w) + "]"
        lines.append(f"{k}: {'sufficient' if rec.flags[k] else 'insufficient'}{tail}")
    _emit(args, "\n".join(lines),
          {"sufficient": rec.flags,
           "witness": {k: _vec(v) for k, v in rec.witnesses.items()}})


def _generators_for(inst, kind):
    parts = kind.split(":")
    if parts[0] == "scalar":
        return int(parts[1]), None
    if parts[0] == "vector":
        N = inst.num_sources + inst.num_encoders
        np_ = parts[2]
        return int(parts[1]), N + int(np_[2:]) if np_.startswith("N+") else int(np_)
    raise UsageError("codes need a scalar:q or vector:q:N' kind")


def cmd_codes(args):
    inst = parse_instance(args.instance)
    K, E = inst.num_sources, inst.num_encoders
    _check_kind(args.kind, K, E, args.long)
    q, n_prime = _generators_for(inst, args.kind)
    target = parse_vector(args.target, K + E)
    try:
        code = codes.construct_code(inst, target, q, n_prime)
    except ValueError as exc:
        raise UsageError(str(exc))
    rep = codes.verify_code(inst, code)
    if not rep.ok or rep.entropies != target[:K] or rep.rates != target[K:]:
        raise AssertionError("constructed code fails verification")
    text = codes.dumps(code)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        sys.stdout.write(codes.describe(code, K) + "\n")
    else:
        sys.stdout.write(text)


def cmd_verify(args):
    inst = parse_instance(args.instance)
    try:
        with open(args.code) as fh:
            code = codes.loads(fh.read())
        rep = codes.verify_code(inst, code)
    except (OSError, ValueError, KeyError, IndexError, AssertionError) as exc:
        raise UsageError(f"cannot read code: {exc}")
    K = inst.num_sources
    lines = []
    for d, ok in rep.decoders:
        fan = ",".join(str(e + 1) for e in model.bits(d.fan))
        lines.append(f"decoder level {d.level} fan {{{fan}}}: {'ok' if ok else 'FAIL'}")
    lines.append("entropies " + " ".join(str(x) for x in rep.entropies))
    lines.append("rates " + " ".join(str(x) for x in rep.rates))
    if args.brute_force:
        try:
            bf = codes.brute_force_recovers(inst, code)
        except ValueError as exc:
            raise ResourceLimit(str(exc))
        agree = [a[1] for a in bf] == [b[1] for b in rep.decoders]
        lines.append(f"exhaustive check {'agrees' if agree else 'DISAGREES'}")
        if not agree:
            raise AssertionError("\n".join(lines))
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK if rep.ok else EXIT_INVARIANT


def cmd_minors(args):
    if args.forbidden:
        K, E = args.forbidden
        if needs_long(K, E) and not args.long:
            raise ResourceLimit(f"forbidden minors up to ({K},{E}) need --long")
        kind = args.kind
        fam = universe(K, E)

        def bad(a):
            _check_kind(kind, a.num_sources, a.num_encoders, True)
            return not classify_sufficiency(a, [kind]).flags[kind]
        out = mn.forbidden_minors(fam, bad, args.mode)
        lines = [model.to_text(a) for a in out]
        _emit(args, "\n".join(lines) or "(none)",
              {"kind": kind, "mode": args.mode, "forbidden": lines})
        return
    if args.instance is None:
        raise UsageError("give an instance or --forbidden K E")
    inst = parse_instance(args.instance)
    found = mn.minors(inst, args.mode, include_self=False)
    lines = [model.to_text(a) for a in found.values()]
    _emit(args, "\n".join(lines) or "(none)", {"mode": args.mode, "minors": lines})


def cmd_prove(args):
    inst = parse_instance(args.instance)
    K, E = inst.num_sources, inst.num_encoders
    if args.all_facets:
        targets = region(inst, "outer").nontrivial_facets()
    elif args.inequality:
        try:
            targets = [parse_inequality(args.inequality, K, E)]
        except (ValueError, KeyError, AttributeError):
            raise UsageError(f"cannot parse inequality {args.inequality!r}")
    else:
        raise UsageError("give --inequality or --all-facets")
    texts, records = [], []
    for f in targets:
        try:
            cert, script, text = prover.prove(inst, f)
        except prover.NotImplied:
            texts.append(f"Not implied: {render_inequality(f, K, E)}\n")
            records.append({"target": render_inequality(f, K, E), "implied": False})
            continue
        if not cert.is_valid():
            raise AssertionError("certificate fails exact check")
        texts.append(text)
        rec = prover.certificate_record(script)
        rec["l1"] = str(cert.objective)
        records.append(rec)
    _emit(args, "\n".join(texts), records)
    if any(r.get("implied") is False for r in records):
        return EXIT_INVARIANT if args.all_facets else EXIT_OK


def cmd_pipeline(args):
    kinds = tuple(args.kinds.split(","))
    for k in kinds:
        _check_kind(k, args.K, args.E, args.long)
    store = ResultStore(args.store) if args.store else None
    s = run_pipeline(args.K, args.E, kinds, store, args.workers)
    if args.json:
        _emit(args, "", s)
        return
    lines = [summary_line(s)]
    for r in s["records"]:
        bad = [k for k in kinds if not r["sufficient"].get(k, True)]
        err = [k for k in r["errors"]]
        tail = ("  insufficient: " + ",".join(bad)) if bad else ""
        tail += ("  limit: " + ",".join(err)) if err else ""
        lines.append(f"  {r['instance']}{tail}")
    sys.stdout.write("\n".join(lines) + "\n")


def cmd_report(args):
    store = ResultStore(args.store)
    kinds = args.kinds.split(",") if args.kinds else None
    sys.stdout.write(report(store, "json" if args.json else "text", kinds))


def build_parser():
    def common(default):
        c = argparse.ArgumentParser(add_help=False)
        c.add_argument("--workers", type=int, default=default or 1)
        c.add_argument("--cache-dir", default=default,
                       help="generator cache (default $MDCS_CACHE_DIR)")
        c.add_argument("--long", action="store_true", default=default or False,
                       help="allow the (2,4), (3,4) and larger cells")
        return c

    # global flags may come before or after the subcommand
    p = argparse.ArgumentParser(prog="mdcs", parents=[common(None)],
                                description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    late = common(argparse.SUPPRESS)

    def add(name, fn, help):
        s = sub.add_parser(name, help=help, parents=[late])
        s.set_defaults(fn=fn)
        s.add_argument("--json", action="store_true", help="structured output")
        return s

    s = add("enumerate", cmd_enumerate, "list instances")
    s.add_argument("K", type=int)
    s.add_argument("E", type=int)
    s.add_argument("--all", action="store_true", help="every labeled instance")

    s = add("region", cmd_region, "rate region of one kind")
    s.add_argument("instance")
    s.add_argument("--kind", default="outer")
    s.add_argument("--cone", action="store_true", help="print the cone file format")

    s = add("suffice", cmd_suffice, "sufficiency of code classes")
    s.add_argument("instance")
    s.add_argument("--kinds", default=",".join(DEFAULT_KINDS))

    s = add("codes", cmd_codes, "construct a code for a rate point")
    s.add_argument("instance")
    s.add_argument("--target", required=True, help="H(X_1),..,R_1,.. (fractions ok)")
    s.add_argument("--kind", default="scalar:2")
    s.add_argument("-o", "--output")

    s = add("verify", cmd_verify, "check a code file")
    s.add_argument("instance")
    s.add_argument("code")
    s.add_argument("--brute-force", action="store_true")

    s = add("minors", cmd_minors, "minors or forbidden minors")
    s.add_argument("instance", nargs="?")
    s.add_argument("--mode", default="vector", choices=sorted(mn.MODES))
    s.add_argument("--forbidden", nargs=2, type=int, metavar=("K", "E"))
    s.add_argument("--kind", default="scalar:2")

    s = add("prove", cmd_prove, "converse proof of an inequality")
    s.add_argument("instance")
    s.add_argument("--inequality")
    s.add_argument("--all-facets", action="store_true")

    s = add("pipeline", cmd_pipeline, "sufficiency table for a cell")
    s.add_argument("K", type=int)
    s.add_argument("E", type=int)
    s.add_argument("--kinds", default=",".join(DEFAULT_KINDS))
    s.add_argument("--store")

    s = add("report", cmd_report, "render stored results")
    s.add_argument("--store", required=True)
    s.add_argument("--kinds")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.cache_dir:
        os.environ["MDCS_CACHE_DIR"] = args.cache_dir
    try:
        return args.fn(args) or EXIT_OK
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceLimit, MemoryError) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except AssertionError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
