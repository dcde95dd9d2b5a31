"""Executable harnesses for the closure, product, Hopfian, mono-reflectivity
and image-closure results.

Every harness separates hypothesis checking from the conclusion: a failed
hypothesis yields a report (the theorems are conditionals and many fixtures
violate them on purpose), while a failed conclusion under verified
hypotheses populates the counterexample slot, which signals a checker bug
and fails the build.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coverage import RuleCoverage, check_coverage, \
    check_image_compatibility, check_subordination, decide_tau_compact
from .fincat import try_pullback
from .morphclass import MorphismClass, builtin_class, check_class_properties, \
    is_stably_extremal, is_stably_in
from .protomod import check_protomodularity_pair


@dataclass
class ClosureReport:
    """Hypothesis checklist plus conclusion verdict.

    ``counterexample`` is nonempty only when every hypothesis passed and the
    conclusion failed.
    """

    check: str
    hypotheses: list = field(default_factory=list)
    conclusion_ok: bool | None = None
    counterexample: dict | None = None
    details: dict = field(default_factory=dict)

    def add_hypothesis(self, name, ok, witness=None):
        self.hypotheses.append((name, ok, witness))

    @property
    def hypotheses_ok(self):
        return all(ok is True for _, ok, _ in self.hypotheses)

    def finish(self, conclusion_ok, counterexample=None):
        self.conclusion_ok = conclusion_ok
        if self.hypotheses_ok and conclusion_ok is False:
            self.counterexample = counterexample or {"unspecified": True}
        return self

    def to_json(self):
        return {"check": self.check,
                "hypotheses": [[n, ok, str(w) if w is not None else None]
                               for n, ok, w in self.hypotheses],
                "hypotheses_ok": self.hypotheses_ok,
                "conclusion_ok": self.conclusion_ok,
                "counterexample": self.counterexample,
                "details": {k: str(v) for k, v in sorted(self.details.items())}}


_proto_cache = {}


def _protomodularity(C, E, M):
    key = (id(C), E.name, M.name)
    if key not in _proto_cache:
        _proto_cache[key] = check_protomodularity_pair(C, E, M)
    return _proto_cache[key]


def _class_hypotheses(rep, C, M, label, need=("system", "stable",
                                              "left_cancelable")):
    props = check_class_properties(C, M)
    for prop in need:
        rep.add_hypothesis(f"{label} {prop}", getattr(props, prop),
                           props.witnesses.get(prop))
    return props


def verify_closure_subobjects(C, J, M, cap=None):
    """Targets of M-morphisms into compact objects stay compact."""
    rep = ClosureReport("closure-subobjects")
    _class_hypotheses(rep, C, M, M.name)
    if not rep.hypotheses_ok:
        return rep.finish(None)
    tau = RuleCoverage(J, M)
    compact = {}

    def is_compact(c):
        if c not in compact:
            compact[c] = decide_tau_compact(C, c, tau, cap=cap)
        return compact[c]

    inconclusive = False
    for m in sorted(M.member_list(), key=str):
        vb = is_compact(C.tgt(m))
        if vb.compact is None:
            inconclusive = True
            continue
        if not vb.compact:
            continue
        va = is_compact(C.src(m))
        if va.compact is None:
            inconclusive = True
            continue
        if not va.compact:
            return rep.finish(False, {"subobject": str(m),
                                      "failing": va.failing.to_json()})
    rep.details["checked"] = len(M.member_list())
    return rep.finish(None if inconclusive else True)


def _subordination_hypothesis(rep, C, tau, M, cap):
    sub = tau.subordination_class(C)
    if sub is not None and sub.name == M.name:
        rep.add_hypothesis("tau subordinated to M", True, "by construction")
        return
    ok = True
    wit = None
    for c in sorted(C.objects(), key=str):
        covs, _ = tau.coverings_of(C, c, cap=cap)
        for cov in covs:
            good, i = check_subordination(cov, M)
            if not good:
                ok, wit = False, (cov.key(), i)
                break
        if not ok:
            break
    rep.add_hypothesis("tau subordinated to M", ok, wit)


def verify_closure_quotients(C, tau, E, M, f, cap=None, probe_cap=None):
    """Compactness descends along f under either hypothesis bundle."""
    rep = ClosureReport("closure-quotients", details={"morphism": f})
    _class_hypotheses(rep, C, M, M.name)
    _subordination_hypothesis(rep, C, tau, M, cap)

    okA, _, witA = is_stably_extremal(C, f, M, probe_cap)
    bundleB = False
    if not okA:
        props = check_class_properties(C, E, probe_cap)
        inter_iso = all(C.is_iso(m) for m in E.member_list()
                        if M.contains(m))
        stably_e, _, witB = is_stably_in(C, f, E, probe_cap)
        bundleB = (props.system and props.stable and props.right_cancelable
                   and inter_iso and stably_e)
    if okA:
        rep.add_hypothesis("f stably M-extremal", True)
        rep.details["bundle"] = "stably-extremal"
    elif bundleB:
        rep.add_hypothesis("E right-cancelable stable system, E&M isos, "
                           "f stably in E", True)
        rep.details["bundle"] = "right-cancelable"
    else:
        rep.add_hypothesis("f stably M-extremal", False, witA)
        return rep.finish(None)

    va = decide_tau_compact(C, C.src(f), tau, cap=cap)
    rep.add_hypothesis("source compact", va.compact,
                       None if va.compact else
                       va.failing.key() if va.failing else "inconclusive")
    if not rep.hypotheses_ok:
        return rep.finish(None)
    vb = decide_tau_compact(C, C.tgt(f), tau, cap=cap)
    if vb.compact is None:
        return rep.finish(None)
    return rep.finish(vb.compact,
                      None if vb.compact else
                      {"morphism": str(f), "failing": vb.failing.to_json()})


def verify_closure_extensions(C, tau, E, M, square, cap=None, FS=None,
                              probe_cap=None):
    """Pullback square with compact apex and base corner: the middle object
    inherits compactness when E is M-protomodular and the base morphism is
    image compatible."""
    from .fincat import verify_pullback_square
    rep = ClosureReport("closure-extensions")
    f, phi = square.f, square.g
    rep.details["f"] = f
    rep.details["phi"] = phi
    _class_hypotheses(rep, C, M, M.name)
    _subordination_hypothesis(rep, C, tau, M, cap)
    rep.add_hypothesis("square is a pullback",
                       verify_pullback_square(C, square, cap=probe_cap))
    proto = _protomodularity(C, E, M)
    rep.add_hypothesis("(E, M) protomodularity", proto.satisfied,
                       proto.counterexample.to_json()
                       if proto.counterexample else None)
    compat = check_image_compatibility(C, f, tau, E, M, FS=FS, cap=cap)
    rep.add_hypothesis("f image compatible", compat.compatible,
                       compat.witness or None)
    va = decide_tau_compact(C, square.apex, tau, cap=cap)
    rep.add_hypothesis("apex compact", va.compact)
    vc = decide_tau_compact(C, C.tgt(f), tau, cap=cap)
    rep.add_hypothesis("base corner compact", vc.compact)
    if not rep.hypotheses_ok:
        return rep.finish(None)
    vb = decide_tau_compact(C, C.src(f), tau, cap=cap)
    if vb.compact is None:
        return rep.finish(None)
    return rep.finish(vb.compact,
                      None if vb.compact else
                      {"square": (str(f), str(phi)),
                       "failing": vb.failing.to_json()})


@dataclass
class WellBehavedReport:
    conditions: list = field(default_factory=list)

    @property
    def well_behaved(self):
        return all(ok for _, ok, _ in self.conditions)

    def to_json(self):
        return {"well_behaved": self.well_behaved,
                "conditions": [[n, ok, str(w) if w is not None else None]
                               for n, ok, w in self.conditions]}


def check_tau_well_behaved(C, tau, E, M, cap=None, probe_cap=None, FS=None):
    """The three-part compatibility checklist for a pair (E, M)."""
    rep = WellBehavedReport()
    props = check_class_properties(C, M, probe_cap)
    cond1 = props.system and props.stable and props.left_cancelable
    sub_ok = True
    wit = None
    sub = tau.subordination_class(C)
    if sub is None or sub.name != M.name:
        for c in sorted(C.objects(), key=str):
            covs, _ = tau.coverings_of(C, c, cap=cap)
            for cov in covs:
                good, i = check_subordination(cov, M)
                if not good:
                    sub_ok, wit = False, (cov.key(), i)
                    break
            if not sub_ok:
                break
    rep.conditions.append(("subordinated to stable left-cancelable M",
                           cond1 and sub_ok,
                           wit or props.witnesses or None))

    proto = _protomodularity(C, E, M)
    compat_ok = True
    compat_wit = None
    for f in sorted(E.member_list(), key=str):
        r = check_image_compatibility(C, f, tau, E, M, FS=FS, cap=cap)
        if r.compatible is False:
            compat_ok, compat_wit = False, (f, r.witness)
            break
    rep.conditions.append(("protomodularity and E image compatible",
                           proto.satisfied and compat_ok,
                           compat_wit or (proto.counterexample.to_json()
                                          if proto.counterexample else None)))

    all_ext = True
    ext_wit = None
    for f in sorted(E.member_list(), key=str):
        ok, _, w = is_stably_extremal(C, f, M, probe_cap)
        if not ok:
            all_ext, ext_wit = False, (f, w)
            break
    if all_ext:
        rep.conditions.append(("E-condition", True, "all stably M-extremal"))
    else:
        eprops = check_class_properties(C, E, probe_cap)
        inter_iso = all(C.is_iso(m) for m in E.member_list() if M.contains(m))
        alt = (eprops.system and eprops.stable and eprops.right_cancelable
               and inter_iso)
        rep.conditions.append(("E-condition", alt,
                               ext_wit if not alt else
                               "right-cancelable stable, E&M isos"))
    return rep


def _zero_object(C):
    zero = None
    for o in sorted(C.objects(), key=str):
        if all(len(C.hom(o, z)) == 1 and len(C.hom(z, o)) == 1
               for z in C.objects()):
            zero = o
            break
    return zero


def verify_product_closure(C, tau, E, M, a, b, cap=None, FS=None,
                           probe_cap=None):
    """In a pointed category, compactness of a and b propagates to a x b
    through the pullback square over the zero object."""
    rep = ClosureReport("product-closure", details={"a": a, "b": b})
    zero = _zero_object(C)
    rep.add_hypothesis("zero object exists", zero is not None)
    if zero is None:
        return rep.finish(None)
    ta = C.hom(a, zero)[0]
    tb = C.hom(b, zero)[0]
    prod = try_pullback(C, ta, tb)
    rep.add_hypothesis("binary product exists", prod is not None)
    if prod is None:
        return rep.finish(None)
    p = prod.apex
    pi2 = prod.proj2
    zb = C.hom(zero, b)[0]
    square = try_pullback(C, pi2, zb)
    rep.add_hypothesis("corollary square exists", square is not None)
    if square is None:
        return rep.finish(None)
    proto = _protomodularity(C, E, M)
    rep.add_hypothesis("(E, M) protomodularity", proto.satisfied)
    compat = check_image_compatibility(C, pi2, tau, E, M, FS=FS, cap=cap)
    rep.add_hypothesis("projection image compatible", compat.compatible)
    va = decide_tau_compact(C, square.apex, tau, cap=cap)
    rep.add_hypothesis("first factor (as fiber) compact", va.compact)
    vb = decide_tau_compact(C, b, tau, cap=cap)
    rep.add_hypothesis("second factor compact", vb.compact)
    _class_hypotheses(rep, C, M, M.name)
    _subordination_hypothesis(rep, C, tau, M, cap)
    if not rep.hypotheses_ok:
        return rep.finish(None)
    vp = decide_tau_compact(C, p, tau, cap=cap)
    if vp.compact is None:
        return rep.finish(None)
    return rep.finish(vp.compact,
                      None if vp.compact else
                      {"product": str(p), "failing": vp.failing.to_json()})


# ---------------------------------------------------------------------------
# the fixed-point pullback chain
# ---------------------------------------------------------------------------

@dataclass
class HopfianChain:
    """Objects I_n with projections to the base and to I_0, the comparison
    morphisms between stages, and the stabilization index."""

    base: object
    f: object
    pi0: object
    objects: list          # I_0 .. I_N
    pi: list               # pi_n : I_n -> x
    to_zero: list          # f_n^0 : I_n -> I_0
    up: dict               # (n, n+k) -> phi_n^{n+k}
    down: dict             # (n+k, n) -> f_{n+k}^n
    stable_index: int | None = None

    def to_json(self):
        return {"objects": [str(o) for o in self.objects],
                "pi": [str(m) for m in self.pi],
                "to_zero": [str(m) for m in self.to_zero],
                "up": {f"{a}->{b}": str(m) for (a, b), m in
                       sorted(self.up.items())},
                "down": {f"{a}->{b}": str(m) for (a, b), m in
                         sorted(self.down.items())},
                "stable_index": self.stable_index}


def run_hopfian_construction(C, M, f, pi0, N=8, probe_cap=None):
    """Build the pullbacks of the powers of f along its fixed point and
    locate stabilization; the first comparison must be an isomorphism.

    The Noetherian hypothesis is checked in the exact form the argument
    uses: the constructed chain stabilizes within the truncation.
    """
    rep = ClosureReport("hopfian", details={"f": f, "pi0": pi0, "N": N})
    x = C.src(f)
    rep.add_hypothesis("f endomorphism", C.tgt(f) == x)
    rep.add_hypothesis("pi0 in M", M.contains(pi0))
    rep.add_hypothesis("pi0 fixed point", C.compose(f, pi0) == pi0)
    if not rep.hypotheses_ok:
        return rep.finish(None), None
    sections = builtin_class(C, "sections")
    powers = [C.identity(x)]
    for _ in range(N):
        powers.append(C.compose(f, powers[-1]))
    for n in range(1, N + 1):
        ok, _, wit = is_stably_extremal(C, powers[n], sections, probe_cap)
        if not ok:
            rep.add_hypothesis(f"f^{n} stably sections-extremal", False, wit)
            return rep.finish(None), None
    rep.add_hypothesis("all powers stably sections-extremal", True)

    I0 = C.src(pi0)
    objects = [I0]
    pi = [pi0]
    to_zero = [C.identity(I0)]
    squares = [None]
    for n in range(1, N + 1):
        sq = try_pullback(C, powers[n], pi0)
        if sq is None:
            rep.add_hypothesis(f"pullback of f^{n} along pi0 exists", False)
            return rep.finish(None), None
        squares.append(sq)
        objects.append(sq.apex)
        pi.append(sq.proj1)
        to_zero.append(sq.proj2)
    up = {}
    down = {}
    for n in range(N + 1):
        for m in range(n, N + 1):
            if n == m:
                up[(n, m)] = C.identity(objects[n])
                down[(m, n)] = C.identity(objects[n])
                continue
            up[(n, m)] = squares[m].mediator(pi[n], to_zero[n])
            down[(m, n)] = (squares[n].mediator(
                C.compose(powers[m - n], pi[m]), to_zero[m])
                if n > 0 else to_zero[m])
    for n in range(1, N + 1):
        assert C.compose(to_zero[n], up[(0, n)]) == C.identity(I0), \
            "the zero projection must split the comparison"

    pis_in_M = all(M.contains(pi[n]) for n in range(N + 1))
    rep.add_hypothesis("stage anchors in M (stability)", pis_in_M)

    stable = None
    for n in range(N):
        if C.is_iso(up[(n, n + 1)]):
            stable = n
            break
    rep.add_hypothesis("chain stabilizes within truncation "
                       "(Noetherian consequence)", stable is not None,
                       None if stable is not None else f"N={N}")
    if stable is None:
        rep.details["inconclusive"] = f"N={N}"
    chain = HopfianChain(x, f, pi0, objects, pi, to_zero, up, down, stable)
    if not rep.hypotheses_ok:
        return rep.finish(None), chain
    first_iso = C.is_iso(up[(0, 1)])
    rep.details["stable_index"] = stable
    return rep.finish(first_iso,
                      None if first_iso else
                      {"comparison": str(up[(0, 1)])}), chain


def hopfian_naturality_ok(C, chain, samples=None):
    """The comparison/projection squares commute for all (m, n, k)."""
    N = len(chain.objects) - 1
    for m in range(N + 1):
        for n in range(m, N + 1):
            for k in range(N + 1 - n):
                lhs = C.compose(chain.up[(m, n)], chain.down[(m + k, m)])
                rhs = C.compose(chain.down[(n + k, n)],
                                chain.up[(m + k, n + k)])
                if lhs != rhs:
                    return False
    return True


def check_mono_reflective(C, c, probe_cap=None):
    """No morphism out of c has a monic pullback without being monic."""
    if hasattr(C, "theory"):
        return _mono_reflective_ambient(C, c)
    restricted = False
    for f in sorted(C.morphisms_from(c), key=str):
        if C.is_mono(f):
            continue
        probes = 0
        for g in sorted(C.morphisms_into(C.tgt(f)), key=str):
            if probe_cap is not None and probes >= probe_cap:
                restricted = True
                break
            probes += 1
            sq = try_pullback(C, f, g)
            if sq is None:
                restricted = True
                continue
            if C.is_mono(sq.proj2):
                return {"reflective": False, "witness": (str(f), str(g)),
                        "restricted": restricted}
    return {"reflective": True, "witness": None, "restricted": restricted}


def _mono_reflective_ambient(C, c):
    # pullback pairs are computed directly; no roster registration needed
    for f in C.morphisms_from(c):
        if f.is_injective():
            continue
        fibers = {}
        for a in f.src.carrier:
            fibers.setdefault(f(a), 0)
            fibers[f(a)] += 1
        for g in C.morphisms_into(f.tgt):
            if all(fibers.get(g(b), 0) <= 1 for b in g.src.carrier):
                return {"reflective": False, "witness": (str(f), str(g)),
                        "restricted": False}
    return {"reflective": True, "witness": None, "restricted": False}


# ---------------------------------------------------------------------------
# image closure of a generated subcategory
# ---------------------------------------------------------------------------

class RestrictedCoverage:
    """A coverage restricted to coverings subordinated to a class."""

    def __init__(self, tau, K, name=None):
        self.tau = tau
        self.K = K
        self.name = name or f"{tau.name}|{K.name}"

    def coverings_of(self, C, c, cap=None):
        covs, capped = self.tau.coverings_of(C, c, cap=cap)
        return [cov for cov in covs
                if check_subordination(cov, self.K)[0]], capped

    def contains(self, C, cov):
        return self.tau.contains(C, cov) and \
            check_subordination(cov, self.K)[0]

    def subordination_class(self, C):
        return self.K

    def to_json(self):
        return {"restricted": {"tau": self.tau.to_json(),
                               "K": self.K.name}}


def generated_system(C, K, name=None):
    """The subcategory generated by K together with all identities;
    worklist closure over composable pairs."""
    members = set(K.member_list())
    members.update(C.identity(o) for o in C.objects())
    by_src = {}
    by_tgt = {}
    for m in members:
        by_src.setdefault(C.src(m), set()).add(m)
        by_tgt.setdefault(C.tgt(m), set()).add(m)
    work = list(members)
    while work:
        m = work.pop()
        new = []
        for g in by_src.get(C.tgt(m), ()):
            gf = C.compose(g, m)
            if gf not in members:
                new.append(gf)
        for f in by_tgt.get(C.src(m), ()):
            gf = C.compose(m, f)
            if gf not in members:
                new.append(gf)
        for gf in new:
            members.add(gf)
            by_src.setdefault(C.src(gf), set()).add(gf)
            by_tgt.setdefault(C.tgt(gf), set()).add(gf)
            work.append(gf)
    return MorphismClass(C, name or f"<{K.name}>", members=members)


def _images_closed(C, FS, E, M, K, source_class, cap=None):
    """source_class members push to K along E through (E, M)-image squares;
    quantifies all factorizations of f.k through E then M."""
    checked = 0
    e_members = sorted(E.member_list(), key=str)
    ambient = hasattr(C, "theory")
    by_src = {}
    for fbar in e_members:
        by_src.setdefault(C.src(fbar), []).append(fbar)
    for f in e_members:
        for k in sorted(source_class.member_list(), key=str):
            if C.tgt(k) != C.src(f):
                continue
            fk = C.compose(f, k)
            for fbar in by_src.get(C.src(k), ()):
                if ambient and fbar.is_surjective():
                    # the M-leg is determined pointwise through fbar
                    gmap = {}
                    ok = True
                    for x in fbar.src.carrier:
                        y = fbar(x)
                        if y in gmap and gmap[y] != fk(x):
                            ok = False
                            break
                        gmap[y] = fk(x)
                    if not ok:
                        continue
                    from .algkit import AlgHom
                    kbar = AlgHom(fbar.tgt, f.tgt,
                                  tuple(gmap[y] for y in fbar.tgt.carrier))
                    if not kbar.is_valid() or not M.contains(kbar):
                        continue
                    checked += 1
                    if cap is not None and checked > cap:
                        return None, None
                    if not K.contains(kbar):
                        return False, (k, f, fbar, kbar)
                    continue
                for kbar in C.hom(C.tgt(fbar), C.tgt(f)):
                    if not M.contains(kbar):
                        continue
                    if C.compose(kbar, fbar) != fk:
                        continue
                    checked += 1
                    if cap is not None and checked > cap:
                        return None, None
                    if not K.contains(kbar):
                        return False, (k, f, fbar, kbar)
    return True, None


def run_image_closure_suite(C, FS, tau, K, cap=None, probe_cap=None,
                            coverage_morphism_cap=None):
    """The four-part suite over the subcategory generated by K."""
    E, M = FS.E, FS.M
    out = {}
    hyp = ClosureReport("image-closure-hypotheses")
    mono_M = all(C.is_mono(m) if not hasattr(C, "theory")
                 else m.is_injective() for m in M.member_list())
    hyp.add_hypothesis("M consists of monos", mono_M)
    hyp.add_hypothesis("K contained in M",
                       all(M.contains(k) for k in K.member_list()))
    hyp.add_hypothesis("K contains isos",
                       all(K.contains(m) for m in C.morphisms()
                           if C.is_iso(m)))
    kprops = check_class_properties(C, K, probe_cap)
    kbar = generated_system(C, K)
    out["hypotheses"] = hyp

    part1 = ClosureReport("image-closure-1")
    part1.add_hypothesis("K stable", kprops.stable, kprops.witnesses.get("stable"))
    if part1.hypotheses_ok and hyp.hypotheses_ok:
        props = check_class_properties(C, kbar, probe_cap)
        part1.finish(props.system and props.stable and props.left_cancelable,
                     {"properties": props.to_json()}
                     if not (props.system and props.stable
                             and props.left_cancelable) else None)
    else:
        part1.finish(None)
    out["part1"] = part1

    part2 = ClosureReport("image-closure-2")
    part2.add_hypothesis("K stable", kprops.stable)
    tau_prime = RestrictedCoverage(tau, kbar)
    if part2.hypotheses_ok and hyp.hypotheses_ok:
        cov_rep = check_coverage(C, tau_prime, cap=cap,
                                 morphism_cap=coverage_morphism_cap)
        sub_ok = True
        for c in sorted(C.objects(), key=str):
            covs, _ = tau_prime.coverings_of(C, c, cap=cap)
            if not all(check_subordination(cov, kbar)[0] for cov in covs):
                sub_ok = False
                break
        part2.finish(bool(cov_rep.is_coverage) and sub_ok,
                     cov_rep.to_json() if not cov_rep.is_coverage else None)
    else:
        part2.finish(None)
    out["part2"] = part2

    part3 = ClosureReport("image-closure-3")
    closed_K, wit = _images_closed(C, FS, E, M, K, K, cap)
    part3.add_hypothesis("K closed under images along E", closed_K, wit)
    if part3.hypotheses_ok and hyp.hypotheses_ok and closed_K is not None:
        closed_bar, witb = _images_closed(C, FS, E, M, kbar, kbar, cap)
        part3.finish(closed_bar, {"witness": [str(w) for w in witb]}
                     if closed_bar is False else None)
    else:
        part3.finish(None)
    out["part3"] = part3

    part4 = ClosureReport("image-closure-4")
    part4.add_hypothesis("K closed under images along E", closed_K, wit)
    e_compat = True
    e_wit = None
    for f in sorted(E.member_list(), key=str):
        r = check_image_compatibility(C, f, tau, E, M, FS=FS, cap=cap)
        if r.compatible is False:
            e_compat, e_wit = False, (f, r.witness)
            break
    part4.add_hypothesis("E image compatible with tau", e_compat, e_wit)
    if part4.hypotheses_ok and hyp.hypotheses_ok:
        concl = True
        cwit = None
        for f in sorted(E.member_list(), key=str):
            r = check_image_compatibility(C, f, tau_prime, E, kbar, FS=FS,
                                          cap=cap)
            if r.compatible is False:
                concl, cwit = False, {"morphism": str(f),
                                      "witness": [str(w) for w in r.witness]}
                break
        part4.finish(concl, cwit)
    else:
        part4.finish(None)
    out["part4"] = part4
    return out
