"""Command-line interface.  Exit codes: 0 success, 1 negative verdict, 2 bad input."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import calculus, corpus, matrix, model, order, reproduce, search
from .formula import ParseError, parse, render

OK, NEGATIVE, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


def _load_model(ref: str) -> model.FiniteNModel:
    if ref.startswith("corpus:"):
        name = ref.split(":", 1)[1]
        if name not in corpus.models():
            raise InputError(f"no corpus model {name!r}; known: {', '.join(corpus.MODEL_IDS)}")
        return corpus.models()[name]
    try:
        return model.load_model(ref)
    except OSError as e:
        raise InputError(f"cannot read {ref}: {e.strerror}") from None
    except (ValueError, model.ModelError) as e:
        raise InputError(f"{ref}: {e}") from None


def _load_proof(ref: str) -> calculus.Proof:
    if ref.startswith("corpus:"):
        name = ref.split(":", 1)[1]
        try:
            entry = corpus.lookup(name)
        except KeyError:
            raise InputError(f"no corpus entry {name!r}") from None
        if entry.kind != "proof":
            raise InputError(f"corpus entry {name!r} is a {entry.kind}, not a proof")
        return entry.payload
    try:
        return calculus.load_proof(ref)
    except OSError as e:
        raise InputError(f"cannot read {ref}: {e.strerror}") from None
    except (ValueError, calculus.ProofFormatError, ParseError) as e:
        raise InputError(f"{ref}: {e}") from None


def _formula(text: str):
    try:
        return parse(text)
    except ParseError as e:
        raise InputError(f"parse error at byte {e.offset}: {e}") from None


def _split(text: str | None) -> list[str]:
    return [x.strip() for x in (text or "").split(",") if x.strip()]


def _parse_rule(text: str) -> model.HornCondition:
    if "|-" not in text:
        raise InputError("rule must look like 'p, q |- r'")
    left, right = text.split("|-", 1)
    # premises are comma separated at top level only
    prem, depth, cur = [], 0, ""
    for ch in left:
        depth += ch == "("
        depth -= ch == ")"
        if ch == "," and depth == 0:
            prem.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        prem.append(cur)
    return model.HornCondition(tuple(_formula(p) for p in prem), _formula(right), text.strip())


class _Out:
    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.data: dict = {}

    def put(self, key, value, text: str | None = None):
        self.data[key] = value
        if not self.as_json and text is not None:
            print(text)

    def finish(self, code: int) -> int:
        if self.as_json:
            self.data.setdefault("exit", code)
            print(json.dumps(self.data, ensure_ascii=False, indent=2, default=str))
        return code


# -- commands --------------------------------------------------------------------

def cmd_parse(args, out: _Out) -> int:
    f = _formula(args.formula)
    out.put("primitive", render(f, "primitive"), render(f, "primitive"))
    out.put("sugared", render(f, "sugared"), f"sugared: {render(f, 'sugared')}")
    return OK


def cmd_proof_check(args, out: _Out) -> int:
    p = _load_proof(args.file)
    try:
        v = calculus.check_proof(p)
    except calculus.UnknownSystem as e:
        raise InputError(str(e)) from None
    if v.ok:
        out.put("ok", True, f"proof checks in {p.system} ({len(p.steps)} lines)")
        out.put("conclusion", render(p.conclusion, "sugared"), f"conclusion: {render(p.conclusion, 'sugared')}")
        return OK
    line, reason = v.first_failure
    out.put("ok", False, f"rejected at line {line}: {reason}")
    out.put("first_failure", {"line": line, "reason": reason})
    return NEGATIVE


def cmd_model_validate(args, out: _Out) -> int:
    m = _load_model(args.file)
    rep = model.validate_nmodel(m)
    viol = [str(v) for v in rep.violations]
    if args.assoc:
        viol += [str(v) for v in model.validate_algebra(m.algebra, require_assoc=True).violations
                 if v.condition == "tensor-associative"]
    out.put("violations", viol)
    if viol:
        if not out.as_json:
            print(f"{m.name or args.file}: not a model ({len(viol)} violations)")
            for v in viol[:20]:
                print(f"  {v}")
        return NEGATIVE
    out.put("ok", True, f"{m.name or args.file}: valid{' associative' if args.assoc else ''} model, "
                        f"F = {{{', '.join(sorted(model.designated(m)))}}}")
    return OK


def _assignment(m: model.FiniteNModel, text: str | None) -> dict:
    asg = {}
    for item in _split(text):
        if "=" not in item:
            raise InputError(f"bad assignment {item!r}, expected var=element")
        k, v = (s.strip() for s in item.split("=", 1))
        if v not in m.carrier:
            raise InputError(f"{v!r} is not an element of {m.name or 'the model'}")
        asg[k] = v
    return asg


def cmd_eval(args, out: _Out) -> int:
    m = _load_model(args.file)
    f = _formula(args.formula)
    try:
        v = model.evaluate(m, f, _assignment(m, args.assign))
    except model.ModelError as e:
        raise InputError(str(e)) from None
    des = v in model.designated(m)
    out.put("value", v, v)
    out.put("designated", des, f"designated: {'yes' if des else 'no'}")
    return OK


def cmd_holds(args, out: _Out) -> int:
    m = _load_model(args.file)
    o = model.holds(m, _formula(args.formula))
    out.put("holds", o.ok)
    out.put("witness", o.witness)
    if o.ok:
        if not out.as_json:
            print("holds")
        return OK
    if not out.as_json:
        print("fails under " + ", ".join(f"{k}={v}" for k, v in o.witness.items()))
    return NEGATIVE


def cmd_consequence(args, out: _Out) -> int:
    m = _load_model(args.file)
    prem = [_formula(p) for group in (args.premises or []) for p in group.split(";") if p.strip()]
    o = model.consequence(m, prem, _formula(args.formula))
    out.put("holds", o.ok)
    out.put("witness", o.witness)
    if o.ok:
        if not out.as_json:
            print("consequence holds")
        return OK
    if not out.as_json:
        print("premises designated, conclusion not, under "
              + ", ".join(f"{k}={v}" for k, v in o.witness.items()))
    return NEGATIVE


def cmd_class(args, out: _Out) -> int:
    m = _load_model(args.file)
    tags = [t for group in args.tags for t in _split(group)]
    bad = [t for t in tags if t not in model.CLASS_TAGS]
    if bad:
        raise InputError(f"unknown class tags {bad}; known: {', '.join(model.CLASS_TAGS)}")
    code = OK
    res = {}
    for t in tags:
        w = model.class_witness(m, t)
        res[t] = {"member": w is None, "witness": w}
        if not out.as_json:
            print(f"{t}: {'yes' if w is None else 'NO, witness ' + str(w)}")
        if w is not None:
            code = NEGATIVE
    out.put("classes", res)
    return code


def cmd_matrix(args, out: _Out) -> int:
    m = _load_model(args.file)
    a = m.algebra
    if args.filter is None:
        mat = matrix.matrix_of(m)
    else:
        try:
            mat = matrix.Matrix.of(a, _split(args.filter))
        except model.ModelError as e:
            raise InputError(str(e)) from None
    out.put("filter", mat.filter_names(), f"filter: {{{', '.join(mat.filter_names())}}}")
    code = OK
    if args.leibniz or not args.roundtrip:
        omega = matrix.leibniz(mat)
        out.put("leibniz", omega.named_blocks(a),
                f"Leibniz congruence: {omega.named_blocks(a)}" + (" (identity)" if omega.is_identity() else ""))
        try:
            arrows = matrix.leibniz_via_arrows(mat)
            out.put("arrows_agree", arrows == omega, f"arrow relation agrees: {'yes' if arrows == omega else 'NO'}")
        except matrix.PreconditionViolation as e:
            out.put("arrows_agree", None, f"arrow relation unusable: {e}")
        viol = matrix.nel_filter_violations(mat)
        out.put("filter_violations", viol, "logical filter: yes" if not viol else
                "logical filter: NO\n  " + "\n  ".join(viol[:10]))
        if not omega.is_identity() or viol:
            code = NEGATIVE
    if args.roundtrip:
        rep = matrix.roundtrip_check(m if args.filter is None else mat)
        out.put("roundtrip", {"filter": rep.filter_roundtrip, "perp": rep.perp_roundtrip,
                              "reduced": rep.reduced, "model": rep.is_model, "details": rep.details},
                f"filter round trip: {rep.filter_roundtrip}, ⊥ round trip: {rep.perp_roundtrip}, "
                f"reduced: {rep.reduced}, model: {rep.is_model}")
        if not out.as_json:
            for d in rep.details:
                print(f"  {d}")
        if not rep.ok:
            code = NEGATIVE
    return code


def cmd_order(args, out: _Out) -> int:
    m = _load_model(args.file)
    try:
        p = order.poset_from_model(m)
    except order.OrderError as e:
        out.put("error", str(e), str(e))
        return NEGATIVE
    code = OK
    wants_any = args.poset or args.dm or args.ortho or args.residuation or args.nogo
    if args.poset or not wants_any:
        cov = p.covers()
        out.put("covers", cov, "covers: " + ", ".join(f"{x}<{y}" for x, y in cov))
    lat = None
    if args.dm:
        lat = order.dm_completion(p)
        out.put("dm_size", lat.size, f"Dedekind–MacNeille completion: {lat.size} elements")
    if args.ortho:
        if lat is None:
            try:
                lat = order.closed_set_lattice(m)
            except order.ClosureInapplicable as e:
                out.put("error", str(e), str(e))
                return NEGATIVE
            out.put("closed_sets", lat.size, f"⊥-closed sets: {lat.size}")
        rep = order.ortho_checks(lat)
        wit = {k: list(v) for k, v in rep.witnesses.items()}
        out.put("ortho", {"lattice": rep.lattice, "ortholattice": rep.ortholattice,
                          "orthomodular": rep.orthomodular, "boolean": rep.boolean, "witnesses": wit})
        if not out.as_json:
            def yn(flag, key):
                w = wit.get(key)
                return "yes" if flag else "NO" + (f" (witness {', '.join(map(str, w))})" if w else "")
            print(f"ortholattice: {yn(rep.ortholattice, 'ortholattice')}, "
                  f"orthomodular: {yn(rep.orthomodular, 'orthomodular')}, "
                  f"boolean: {yn(rep.boolean, 'boolean')}")
    for flag, fn, label in ((args.residuation, order.residuation_check, "residuation"),
                            (args.nogo, lambda _: order.nogo_checks(p), "no-go")):
        if flag:
            r = fn(m)
            out.put(label, {"ok": r.ok, "witness": r.witness},
                    f"{label}: {'holds' if r.ok else 'FAILS at ' + str(r.witness)}")
            if not r.ok:
                code = NEGATIVE
    if args.dot:
        text = (lat or p).to_dot()
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        out.put("dot", args.dot, f"wrote {args.dot}")
    return code


def _classes(args) -> frozenset[str]:
    tags = {t for group in (args.cls or []) for t in _split(group)} | {"Nw"}
    bad = tags - set(model.CLASS_TAGS)
    if bad:
        raise InputError(f"unknown class tags {sorted(bad)}")
    return frozenset(tags)


def cmd_enumerate(args, out: _Out) -> int:
    spec = search.SearchSpec(args.size, _classes(args), max_models=args.limit,
                             time_limit=args.time_limit, iso=not args.labelled)
    res = search.enumerate_models(spec)
    out.put("count", len(res.models),
            f"{len(res.models)} model(s) of size {args.size}"
            f"{'' if args.labelled else ' up to isomorphism'}; {res.nodes} nodes; "
            f"{'exhausted' if res.exhausted else 'stopped: ' + str(res.stop_reason)}")
    out.put("exhausted", res.exhausted)
    out.put("models", [model.model_to_dict(m) for m in res.models])
    if not out.as_json and args.show:
        for m in res.models:
            print(json.dumps(model.model_to_dict(m), ensure_ascii=False))
    return OK


def cmd_countermodel(args, out: _Out) -> int:
    if (args.target is None) == (args.rule is None):
        raise InputError("give exactly one of --target or --rule")
    target = _formula(args.target) if args.target else _parse_rule(args.rule)
    spec = search.SearchSpec(args.size, _classes(args), target=target, time_limit=args.time_limit)
    c = search.find_countermodel(spec)
    out.put("found", c.found)
    out.put("exhausted_sizes", list(c.exhausted_sizes))
    if not c.found:
        if not out.as_json:
            print(f"no countermodel; sizes exhausted: {list(c.exhausted_sizes)} ({c.nodes} nodes)")
        return NEGATIVE
    out.put("size", c.size, f"countermodel of size {c.size} ({c.nodes} nodes)")
    out.put("assignment", c.assignment,
            "falsifying assignment: " + ", ".join(f"{k}={v}" for k, v in c.assignment.items()))
    out.put("model", model.model_to_dict(c.model),
            json.dumps(model.model_to_dict(c.model), ensure_ascii=False))
    return OK


def cmd_reproduce(args, out: _Out) -> int:
    results = reproduce.run_all(args.filter)
    if not results:
        raise InputError(f"no criterion matches {args.filter!r}")
    for r in results:
        if not out.as_json:
            print(r.line())
            for f in r.failures:
                print(f"    {f}")
    out.put("criteria", [r.as_dict() for r in results])
    return OK if all(r.passed for r in results) else NEGATIVE


def cmd_export_corpus(args, out: _Out) -> int:
    os.makedirs(args.dir, exist_ok=True)
    written = []

    def dump(name, data):
        path = os.path.join(args.dir, name)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(data, fh, ensure_ascii=False, indent=2)
            fh.write("\n")
        written.append(path)

    for e in corpus.corpus():
        if e.kind == "model":
            dump(f"model-{e.id}.json", model.model_to_dict(e.payload))
        elif e.kind == "proof":
            dump(f"proof-{e.id}.json", calculus.proof_to_dict(e.payload))
        elif e.kind == "poset":
            dump(f"poset-{e.id}.json", {"model": e.payload["model"],
                                         "covers": [list(c) for c in e.payload["covers"]]})
    dump("computed-values.json", list(corpus.COMPUTED_VALUES))
    out.put("written", written, f"wrote {len(written)} files to {args.dir}")
    return OK


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="connexive", description=__doc__)
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        p.set_defaults(fn=fn)
        return p

    p = add("parse", cmd_parse, "parse and pretty-print a formula")
    p.add_argument("formula")
    p = add("proof-check", cmd_proof_check, "check a JSON proof (or corpus:NAME)")
    p.add_argument("file")
    p = add("model-validate", cmd_model_validate, "validate a model file (or corpus:NAME)")
    p.add_argument("file")
    p.add_argument("--assoc", action="store_true", help="also require ⊗ associative")
    p = add("eval", cmd_eval, "evaluate a formula under an assignment")
    p.add_argument("file")
    p.add_argument("formula")
    p.add_argument("--assign", help="comma separated var=element pairs")
    p = add("holds", cmd_holds, "check validity of a formula in a model")
    p.add_argument("file")
    p.add_argument("formula")
    p = add("consequence", cmd_consequence, "check local consequence in a model")
    p.add_argument("file")
    p.add_argument("formula")
    p.add_argument("--premises", action="append", help="premise formula (repeatable, or ';' separated)")
    p = add("class", cmd_class, "class membership with witnesses")
    p.add_argument("file")
    p.add_argument("--tags", nargs="+", required=True)
    p = add("matrix", cmd_matrix, "Leibniz congruence and round trips")
    p.add_argument("file")
    p.add_argument("--filter", help="comma separated designated elements (default: F of the model)")
    p.add_argument("--leibniz", action="store_true")
    p.add_argument("--roundtrip", action="store_true")
    p = add("order", cmd_order, "induced poset, completions and ortho checks")
    p.add_argument("file")
    for flag in ("poset", "dm", "ortho", "residuation", "nogo"):
        p.add_argument(f"--{flag}", action="store_true")
    p.add_argument("--dot", metavar="OUT", help="write Graphviz of the poset or lattice")
    for name, fn, help_ in (("enumerate", cmd_enumerate, "enumerate models of a size"),
                            ("countermodel", cmd_countermodel, "search for a countermodel")):
        p = add(name, fn, help_)
        p.add_argument("--size", type=int, required=True)
        p.add_argument("--class", dest="cls", action="append", help="class tags, comma separated")
        p.add_argument("--time-limit", type=float, default=None)
        if name == "enumerate":
            p.add_argument("--limit", type=int, default=None, help="stop after K models")
            p.add_argument("--labelled", action="store_true", help="no isomorphism pruning")
            p.add_argument("--show", action="store_true", help="print every model as JSON")
        else:
            p.add_argument("--target")
            p.add_argument("--rule", help="Horn rule such as 'p, p => q |- q'")
    p = add("reproduce", cmd_reproduce, "run the numbered regression criteria")
    p.add_argument("--filter", help="criterion number or title pattern")
    p = add("export-corpus", cmd_export_corpus, "write the embedded corpus as JSON files")
    p.add_argument("dir")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else OK
    out = _Out(args.json)
    try:
        code = args.fn(args, out)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR
    return out.finish(code)


if __name__ == "__main__":
    sys.exit(main())
