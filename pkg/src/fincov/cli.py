"""Command-line front door.

Loads JSON inputs (or named corpus fixtures via ``corpus:<name>``),
dispatches a named check and emits a deterministic report.  Exit codes:
0 pass, 1 definition failure or counterexample, 2 hypothesis failure,
3 inconclusive (cap), 4 input error.  JSON reports carry no timing, so
identical (inputs, flags, seed) are byte-identical; the text format
appends wall time.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import report as rp
from .algkit import AlgHom, FinAlgebra, Theory, classify_uniformity, \
    check_monic_pullback_corollary, term_from_json
from .coverage import ClosedFamilyCoverage, DiagramTypeFailure, \
    OpenCoverCoverage, RuleCoverage, build_chain_type, build_powerset_type, \
    check_coverage, check_image_compatibility, check_subordination, \
    decide_tau_compact
from .fincat import FinCategory, category_from_json, classify_morphism, \
    validate_category
from .instances import standard_corpus
from .morphclass import MorphismClass, builtin_class, \
    check_class_properties, check_factorization_system, check_regular
from .protomod import check_protomodularity_equivalent, \
    check_protomodularity_pair
from .theorems import check_mono_reflective, check_tau_well_behaved, \
    run_hopfian_construction, run_image_closure_suite, \
    verify_closure_extensions, verify_closure_quotients, \
    verify_closure_subobjects, verify_product_closure


class InputError(Exception):
    pass


def build_parser():
    p = argparse.ArgumentParser(prog="fincov")
    sub = p.add_subparsers(dest="command", required=True)

    chk = sub.add_parser("check", help="run a named check")
    chk.add_argument("name", nargs="?", help="check name")
    chk.add_argument("--check", dest="check_flag", help="check name (flag form)")
    chk.add_argument("--input", required=True,
                     help="input JSON path or corpus:<name>")
    chk.add_argument("--classes", default="",
                     help="role bindings, e.g. E=epis,M=monos[,K=...]")
    chk.add_argument("--diagram-types", default=None,
                     help="JSON list of diagram type specs (path or inline)")
    chk.add_argument("--kappa", type=int, default=2)
    chk.add_argument("--chain-n", type=int, default=2)
    chk.add_argument("--chain-smalls", type=int, default=None)
    chk.add_argument("--direction", default="cov", choices=["cov", "contr"])
    chk.add_argument("--coverage", default=None,
                     choices=["rule", "open-covers", "closed-families"])
    chk.add_argument("--cap", type=int, default=512)
    chk.add_argument("--seed", type=int, default=0)
    chk.add_argument("--format", default="text", choices=["text", "json"])
    chk.add_argument("--max-size", type=int, default=None,
                     help="ambient size cap override")
    chk.add_argument("--jobs", type=int, default=1)
    chk.add_argument("--object", default=None, help="anchor object id")
    chk.add_argument("--objects", default=None,
                     help="comma-separated object pair (products)")
    chk.add_argument("--morphism", default=None, help="morphism id")
    chk.add_argument("--along", default=None,
                     help="second cospan leg (extensions) or fixed point "
                          "(hopfian)")
    chk.add_argument("--truncation", type=int, default=8,
                     help="chain truncation depth for hopfian runs")
    chk.add_argument("--hom", default=None,
                     help="algebra hom as src>tgt:images, e.g. Z4>Z2:0101")

    sv = sub.add_parser("schema-version", help="print the report schema id")
    sv.add_argument("--format", default="text", choices=["text", "json"])

    exp = sub.add_parser("export-corpus",
                         help="write corpus fixtures and manifest")
    exp.add_argument("outdir")

    ste = sub.add_parser("suite", help="run the standard deterministic suite")
    ste.add_argument("--seed", type=int, default=0)
    ste.add_argument("--cap", type=int, default=256)
    ste.add_argument("--format", default="json", choices=["text", "json"])
    return p


# ---------------------------------------------------------------------------
# input resolution
# ---------------------------------------------------------------------------

def load_input(spec, max_size=None):
    """Returns (category, entry-or-None, raw data)."""
    if spec.startswith("corpus:"):
        name = spec.split(":", 1)[1]
        if max_size is not None:
            corpus = standard_corpus(group_cap=min(max_size, 8),
                                     monoid_cap=min(max_size, 4))
        else:
            corpus = standard_corpus()
        if name not in corpus.entries:
            raise InputError(f"unknown corpus fixture {name!r}; "
                             f"known: {', '.join(corpus.names())}")
        entry = corpus[name]
        return entry.category, entry, None
    try:
        with open(spec, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read input {spec}: {exc}")
    if "objects" in data:
        body = data
    elif "category" in data:
        body = data["category"]
    else:
        return None, None, data
    cat = category_from_json(body, name=spec)
    if not isinstance(cat, FinCategory):
        raise InputError(f"input category invalid: {cat.to_json()}")
    return cat, None, data


def resolve_class(C, entry, data, name):
    if entry is not None and name in entry.classes:
        return entry.classes[name]
    if data:
        for item in data.get("classes", []):
            if item.get("class", {}).get("name") == name:
                return MorphismClass.from_json(C, item)
    try:
        return builtin_class(C, name)
    except KeyError:
        raise InputError(f"unknown class {name!r}")


def parse_class_bindings(spec):
    out = {}
    if not spec:
        return out
    for part in spec.split(","):
        if "=" not in part:
            raise InputError(f"malformed class binding {part!r}")
        role, name = part.split("=", 1)
        out[role.strip()] = name.strip()
    return out


def parse_diagram_types(args):
    if args.diagram_types:
        text = args.diagram_types
        if text.strip().startswith(("[", "{")):
            specs = json.loads(text)
        else:
            with open(text, encoding="utf-8") as fh:
                specs = json.load(fh)
        if isinstance(specs, dict):
            specs = [specs]
        out = []
        for spec in specs:
            if "chain" in spec:
                c = spec["chain"]
                out.append(build_chain_type(c["n"], c["smalls"],
                                            c.get("dir", "cov")))
            elif "powerset" in spec:
                pw = spec["powerset"]
                dt = build_powerset_type(pw["index"], pw["kappa"],
                                         pw.get("dir", "cov"))
                if isinstance(dt, DiagramTypeFailure):
                    raise InputError(f"diagram type invalid: {dt.to_json()}")
                out.append(dt)
            else:
                raise InputError(f"unknown diagram type spec {spec}")
        return out
    smalls = args.chain_smalls
    if smalls is None:
        smalls = max(args.chain_n - 1, 0)
    return [build_chain_type(args.chain_n, smalls, args.direction)]


def resolve_coverage(C, entry, data, args, M):
    kind = args.coverage or "rule"
    if kind in ("open-covers", "closed-families"):
        top = entry.extra if entry is not None else None
        if top is None or not hasattr(top, "spaces"):
            raise InputError("topological coverages need the finite_top "
                             "corpus fixture")
        cls = OpenCoverCoverage if kind == "open-covers" else \
            ClosedFamilyCoverage
        return cls(top, kappa=args.kappa)
    if data and "coverage" in data and args.coverage is None:
        body = data["coverage"]
        if "rule" in body:
            types = []
            for spec in body["rule"]["J"]:
                if "chain" in spec:
                    c = spec["chain"]
                    types.append(build_chain_type(c["n"], c["smalls"],
                                                  c.get("dir", "cov")))
                elif "powerset" in spec:
                    pw = spec["powerset"]
                    dt = build_powerset_type(pw["index"], pw["kappa"],
                                             pw.get("dir", "cov"))
                    if isinstance(dt, DiagramTypeFailure):
                        raise InputError(
                            f"diagram type invalid: {dt.to_json()}")
                    types.append(dt)
                else:
                    raise InputError(f"unknown diagram type spec {spec}")
            return RuleCoverage(types,
                                resolve_class(C, entry, data,
                                              body["rule"]["M"]))
        raise InputError("coverage entry must carry a rule specification")
    return RuleCoverage(parse_diagram_types(args), M)


def resolve_morphism(C, mid):
    if mid is None:
        raise InputError("this check needs --morphism")
    if mid not in C.morphisms():
        raise InputError(f"unknown morphism {mid!r}")
    return mid


def resolve_hom(data, spec):
    if not data or "theory" not in data:
        raise InputError("algebra checks need a theory/algebras input file")
    theory = Theory.from_json(data["theory"])
    algebras = {}
    for item in data.get("algebras", []):
        A = FinAlgebra(theory, item["name"], len(item["carrier"]),
                       item["ops"])
        err = A.validate()
        if err is not None:
            raise InputError(f"algebra {A.name} invalid: {err}")
        algebras[A.name] = A
    if spec is None:
        raise InputError("this check needs --hom src>tgt:images")
    head, images = spec.split(":", 1)
    sname, tname = head.split(">", 1)
    if sname not in algebras or tname not in algebras:
        raise InputError(f"unknown algebra in hom spec {spec!r}")
    src, tgt = algebras[sname], algebras[tname]
    h = AlgHom(src, tgt, tuple(int(ch) for ch in images))
    if not h.is_valid():
        raise InputError("hom spec does not preserve the operations")
    t = term_from_json(data["t"]) if "t" in data else theory.default_t
    return h, t, algebras, theory


# ---------------------------------------------------------------------------
# the checks
# ---------------------------------------------------------------------------

def run_check(args):
    name = args.name or args.check_flag
    if not name:
        raise InputError("no check name given")
    params = {"seed": args.seed, "cap": args.cap, "kappa": args.kappa,
              "jobs": args.jobs}
    C, entry, data = load_input(args.input, args.max_size)
    bindings = parse_class_bindings(args.classes)

    def cls(role, default=None):
        n = bindings.get(role, default)
        if n is None:
            raise InputError(f"check {name!r} needs --classes {role}=<name>")
        return resolve_class(C, entry, data, n)

    if name == "validate":
        if data is not None and "objects" not in data and "category" in data:
            body = data["category"]
        elif data is not None and "objects" in data:
            body = data
        else:
            body = C.to_json()
        res = validate_category(body)
        ok = isinstance(res, FinCategory)
        return rp.build_report(
            name, rp.EXIT_PASS if ok else rp.EXIT_COUNTEREXAMPLE,
            params, ok=ok,
            report=None if ok else res.to_json()), None

    if name == "classify":
        if args.morphism:
            targets = [resolve_morphism(C, args.morphism)]
        else:
            targets = sorted(C.morphisms(), key=str)
        out = [classify_morphism(C, m).to_json() for m in targets]
        return rp.build_report(name, rp.EXIT_PASS, params,
                               morphisms=out), None

    if name == "variance":
        from .variance import Variance, validate_variance
        if not data or "variance" not in data:
            raise InputError("variance check needs a variance entry "
                             "{\"cov\": [...], \"contr\": [...]}")
        v = validate_variance(C, data["variance"]["cov"],
                              data["variance"]["contr"])
        ok = isinstance(v, Variance)
        return rp.build_report(
            name, rp.EXIT_PASS if ok else rp.EXIT_COUNTEREXAMPLE, params,
            ok=ok, report=v.to_json()), None

    if name == "class-properties":
        E = cls("E", "all")
        repq = check_class_properties(C, E)
        code = rp.EXIT_PASS if repq.system else rp.EXIT_COUNTEREXAMPLE
        return rp.build_report(name, code, params,
                               report=repq.to_json()), None

    if name == "factorization-system":
        res = check_factorization_system(C, cls("E"), cls("M"))
        ok = bool(res)
        return rp.build_report(
            name, rp.EXIT_PASS if ok else rp.EXIT_COUNTEREXAMPLE, params,
            ok=ok, report=res.to_json()), None

    if name == "regular":
        res = check_regular(C)
        return rp.build_report(
            name, rp.EXIT_PASS if res.regular else rp.EXIT_COUNTEREXAMPLE,
            params, report=res.to_json()), None

    if name in ("protomodularity", "protomodularity-equivalent"):
        E = cls("E", "retractions")
        M = cls("M", "all")
        fn = check_protomodularity_pair if name == "protomodularity" \
            else check_protomodularity_equivalent
        res = fn(C, E, M)
        code = rp.EXIT_PASS if res.satisfied else rp.EXIT_COUNTEREXAMPLE
        return rp.build_report(name, code, params,
                               report=res.to_json()), None

    if name == "compact":
        M = cls("M", "monos")
        tau = resolve_coverage(C, entry, data, args, M)
        objects = [args.object] if args.object else sorted(C.objects(),
                                                           key=str)
        out = {}
        worst = rp.EXIT_PASS
        for c in objects:
            v = decide_tau_compact(C, c, tau, cap=args.cap, jobs=args.jobs)
            out[str(c)] = v.to_json()
            if v.compact is None:
                worst = max(worst, rp.EXIT_INCONCLUSIVE)
            elif not v.compact:
                worst = max(worst, rp.EXIT_COUNTEREXAMPLE)
        return rp.build_report(name, worst, params, objects=out), None

    if name == "coverage":
        M = cls("M", "monos")
        tau = resolve_coverage(C, entry, data, args, M)
        res = check_coverage(C, tau, cap=args.cap)
        code = rp.EXIT_PASS if res.is_coverage else (
            rp.EXIT_INCONCLUSIVE if res.is_coverage is None
            else rp.EXIT_COUNTEREXAMPLE)
        return rp.build_report(name, code, params,
                               report=res.to_json()), None

    if name == "subordination":
        M = cls("M", "monos")
        tau = resolve_coverage(C, entry, data, args, M)
        for c in sorted(C.objects(), key=str):
            covs, _ = tau.coverings_of(C, c, cap=args.cap)
            for cov in covs:
                ok, i = check_subordination(cov, M)
                if not ok:
                    return rp.build_report(
                        name, rp.EXIT_COUNTEREXAMPLE, params,
                        ok=False, witness={"covering": cov.to_json(),
                                           "object": str(i)}), None
        return rp.build_report(name, rp.EXIT_PASS, params, ok=True), None

    if name == "image-compatibility":
        E, M = cls("E"), cls("M")
        tau = resolve_coverage(C, entry, data, args, M)
        f = resolve_morphism(C, args.morphism)
        res = check_image_compatibility(C, f, tau, E, M, cap=args.cap)
        code = rp.EXIT_PASS if res.compatible else (
            rp.EXIT_INCONCLUSIVE if res.compatible is None
            else rp.EXIT_COUNTEREXAMPLE)
        return rp.build_report(name, code, params,
                               report=res.to_json()), None

    def closure_code(res):
        if "inconclusive" in res.details:
            return rp.EXIT_INCONCLUSIVE
        if not res.hypotheses_ok:
            return rp.EXIT_HYPOTHESIS
        if res.conclusion_ok is None:
            return rp.EXIT_INCONCLUSIVE
        return rp.EXIT_PASS if res.conclusion_ok else rp.EXIT_COUNTEREXAMPLE

    if name == "closure-subobjects":
        M = cls("M", "monos")
        res = verify_closure_subobjects(C, parse_diagram_types(args), M,
                                        cap=args.cap)
        return rp.build_report(name, closure_code(res), params,
                               report=res.to_json()), None

    if name == "closure-quotients":
        E, M = cls("E", "epis"), cls("M", "monos")
        tau = resolve_coverage(C, entry, data, args, M)
        f = resolve_morphism(C, args.morphism)
        res = verify_closure_quotients(C, tau, E, M, f, cap=args.cap)
        return rp.build_report(name, closure_code(res), params,
                               report=res.to_json()), None

    if name == "closure-extensions":
        E, M = cls("E", "epis"), cls("M", "monos")
        tau = resolve_coverage(C, entry, data, args, M)
        f = resolve_morphism(C, args.morphism)
        phi = resolve_morphism(C, args.along)
        square = C.find_pullback(f, phi)
        if square is None:
            raise InputError("the cospan has no pullback in the category")
        res = verify_closure_extensions(C, tau, E, M, square, cap=args.cap)
        return rp.build_report(name, closure_code(res), params,
                               report=res.to_json()), None

    if name == "product-closure":
        E, M = cls("E", "epis"), cls("M", "monos")
        tau = resolve_coverage(C, entry, data, args, M)
        if not args.objects or "," not in args.objects:
            raise InputError("product-closure needs --objects a,b")
        a, b = args.objects.split(",", 1)
        res = verify_product_closure(C, tau, E, M, a, b, cap=args.cap)
        return rp.build_report(name, closure_code(res), params,
                               report=res.to_json()), None

    if name == "well-behaved":
        E, M = cls("E", "epis"), cls("M", "monos")
        tau = resolve_coverage(C, entry, data, args, M)
        res = check_tau_well_behaved(C, tau, E, M, cap=args.cap)
        code = rp.EXIT_PASS if res.well_behaved else rp.EXIT_COUNTEREXAMPLE
        return rp.build_report(name, code, params,
                               report=res.to_json()), None

    if name == "hopfian":
        M = cls("M", "monos")
        f = resolve_morphism(C, args.morphism)
        pi0 = resolve_morphism(C, args.along)
        res, chain = run_hopfian_construction(C, M, f, pi0,
                                              N=args.truncation)
        return rp.build_report(
            name, closure_code(res), params, report=res.to_json(),
            chain=chain.to_json() if chain else None), None

    if name == "mono-reflective":
        objects = [args.object] if args.object else sorted(C.objects(),
                                                           key=str)
        out = {}
        worst = rp.EXIT_PASS
        for c in objects:
            res = check_mono_reflective(C, c)
            out[str(c)] = res
            if not res["reflective"]:
                worst = rp.EXIT_COUNTEREXAMPLE
        return rp.build_report(name, worst, params, objects={
            k: {"reflective": v["reflective"],
                "witness": list(v["witness"]) if v["witness"] else None,
                "restricted": v["restricted"]} for k, v in out.items()}), None

    if name == "image-closure":
        E, M, K = cls("E", "epis"), cls("M", "monos"), cls("K")
        FS = check_factorization_system(C, E, M)
        if not FS:
            return rp.build_report(name, rp.EXIT_HYPOTHESIS, params,
                                   report=FS.to_json()), None
        tau = resolve_coverage(C, entry, data, args, M)
        parts = run_image_closure_suite(C, FS, tau, K, cap=args.cap)
        oks = [parts[p].conclusion_ok for p in
               ("part1", "part2", "part3", "part4")]
        if not parts["hypotheses"].hypotheses_ok or None in oks:
            code = rp.EXIT_HYPOTHESIS if not parts["hypotheses"].hypotheses_ok \
                else rp.EXIT_INCONCLUSIVE
        else:
            code = rp.EXIT_PASS if all(oks) else rp.EXIT_COUNTEREXAMPLE
        return rp.build_report(
            name, code, params,
            report={k: v.to_json() for k, v in parts.items()}), None

    if name == "uniformity":
        h, t, _, _ = resolve_hom(data, args.hom)
        res = classify_uniformity(h, t)
        return rp.build_report(name, rp.EXIT_PASS, params,
                               report=res.to_json()), None

    if name == "monic-pullback":
        h, t, _, _ = resolve_hom(data, args.hom)
        res = check_monic_pullback_corollary(h, t)
        if res["ok"] is None:
            code = rp.EXIT_HYPOTHESIS
        else:
            code = rp.EXIT_PASS if res["ok"] else rp.EXIT_COUNTEREXAMPLE
        return rp.build_report(name, code, params, report=res), None

    raise InputError(f"unknown check {name!r}")


# ---------------------------------------------------------------------------
# suite and entry point
# ---------------------------------------------------------------------------

def run_suite(seed=0, cap=256):
    """Fixed battery over the corpus; one canonical JSON report."""
    from .instances import random_category, random_mixed_functor
    from .variance import assemble_mixed_functor, split_mixed_functor
    corpus = standard_corpus()
    out = {"schema": rp.SCHEMA_VERSION, "check": "suite",
           "params": {"seed": seed, "cap": cap}}

    validations = {}
    for nm in ("poset_2chain", "diamond", "set_skeleton_2", "sub_Z8"):
        cat = corpus[nm].category
        validations[nm] = isinstance(validate_category(cat.to_json()),
                                     FinCategory)
    out["validations"] = validations

    sk = corpus["set_skeleton_2"]
    proto = check_protomodularity_pair(sk.category,
                                       sk.classes["retractions"],
                                       sk.classes["all"])
    out["set2_protomodularity"] = proto.to_json()

    sub = corpus["sub_Z8"]
    tau = RuleCoverage([build_chain_type(2, 0, "cov")], "monos")
    verdicts = {}
    for c in sorted(sub.category.objects()):
        verdicts[c] = decide_tau_compact(sub.category, c, tau,
                                         cap=cap).to_json()
    out["sub_Z8_compact"] = verdicts

    top = corpus["finite_top"].extra
    occ = OpenCoverCoverage(top, kappa=2)
    singles = {}
    for oid in sorted(top.spaces):
        if top.npoints(oid) <= 2:
            singles[oid] = decide_tau_compact(top.category, oid, occ,
                                              cap=cap).to_json()
    out["top_compact"] = singles

    rng_reports = []
    for s in range(seed, seed + 25):
        cat = random_category(s)
        ok = isinstance(validate_category(cat.to_json()), FinCategory)
        F = random_mixed_functor(s)
        rt = assemble_mixed_functor(split_mixed_functor(F)) == F
        rng_reports.append({"seed": s, "category_valid": ok,
                            "roundtrip": rt})
    out["seeded"] = rng_reports
    return out


def main(argv=None):
    args = build_parser().parse_args(argv)
    t0 = time.time()
    try:
        if args.command == "schema-version":
            rep = {"schema": rp.SCHEMA_VERSION}
            if args.format == "json":
                sys.stdout.write(rp.dumps_canonical(rep))
            else:
                print(rp.SCHEMA_VERSION)
            return 0
        if args.command == "export-corpus":
            return export_corpus(args.outdir)
        if args.command == "suite":
            rep = run_suite(args.seed, args.cap)
            if args.format == "json":
                sys.stdout.write(rp.dumps_canonical(rep))
            else:
                sys.stdout.write(rp.render_text(rep, time.time() - t0))
            return 0
        rep, _ = run_check(args)
    except InputError as exc:
        rep = rp.build_report("input-error", rp.EXIT_INPUT, {},
                              error=str(exc))
        sys.stderr.write(rp.dumps_canonical(rep))
        return rp.EXIT_INPUT
    if args.format == "json":
        sys.stdout.write(rp.dumps_canonical(rep))
    else:
        sys.stdout.write(rp.render_text(rep, time.time() - t0))
    return rep["exit_code"]


def export_corpus(outdir):
    import os
    os.makedirs(outdir, exist_ok=True)
    corpus = standard_corpus()
    manifest = {"schema": rp.SCHEMA_VERSION, "fixtures": {}}
    for nm in corpus.names():
        entry = corpus[nm]
        if hasattr(entry.category, "theory"):
            continue  # ambient handles are constructed, not serialized
        payload = {"category": entry.category.to_json(),
                   "classes": [entry.classes[k].to_json()
                               for k in sorted(entry.classes)
                               if entry.classes[k].members is not None]}
        path = os.path.join(outdir, f"{nm}.json")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(rp.dumps_canonical(payload))
        manifest["fixtures"][nm] = {
            "file": f"{nm}.json",
            "classes": sorted(entry.classes)}
    with open(os.path.join(outdir, "manifest.json"), "w",
              encoding="utf-8") as fh:
        fh.write(rp.dumps_canonical(manifest))
    print(f"wrote {len(manifest['fixtures'])} fixtures to {outdir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
