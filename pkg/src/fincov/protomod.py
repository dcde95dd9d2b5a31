"""The relative protomodularity condition for a pair of morphism classes,
its equivalent rectangle formulation, and transport along jointly
conservative pullback-preserving functors.

A counterexample is a commuting diagram built from two pullbacks in which
the middle comparison morphism satisfies every hypothesis but is not an
isomorphism.  Enumeration is (e, beta, theta)-lexicographic with canonical
pullback choices, so the reported counterexample is deterministic.  For
on-demand algebra ambients the scan is anchored at the initial object (the
equivalent form with I replaced by 0) and the verdict is "no violation
within the size cap" rather than a proof.
"""

from __future__ import annotations

from dataclasses import dataclass

from .morphclass import MorphismClass


class InternalConsistencyError(AssertionError):
    """The two formulations disagreed; one of the checkers is wrong."""


@dataclass
class ProtoDiagram:
    """The seven morphisms of a counterexample diagram plus its apexes."""

    e: object
    theta: object
    m: object            # pullback projection a -> b
    p: object            # pullback projection a -> I
    beta: object
    gamma: object
    e_prime: object
    m_prime: object      # pullback projection a' -> b'
    alpha: object        # pullback projection a' -> a
    apex: object
    apex_prime: object

    def to_json(self):
        return {k: str(getattr(self, k)) for k in
                ("e", "theta", "m", "p", "beta", "gamma", "e_prime",
                 "m_prime", "alpha", "apex", "apex_prime")}


@dataclass
class ProtoReport:
    satisfied: bool
    counterexample: ProtoDiagram | None = None
    diagrams_checked: int = 0
    restricted: bool = False     # some cospans had no pullback and were skipped
    scope: str = "exhaustive"
    form: str = "definition"

    def __bool__(self):
        return self.satisfied

    def to_json(self):
        return {"satisfied": self.satisfied,
                "counterexample": self.counterexample.to_json()
                if self.counterexample else None,
                "diagrams_checked": self.diagrams_checked,
                "restricted": self.restricted, "scope": self.scope,
                "form": self.form}


def _key(m):
    return m if isinstance(m, str) else (m.key() if hasattr(m, "key") else repr(m))


def _iso_saturation(C, E):
    """All gamma . e with e in E and gamma iso; explicit categories only."""
    sat = set()
    iso_out = {}
    for e in E.member_list():
        c = C.tgt(e)
        if c not in iso_out:
            iso_out[c] = [g for g in C.morphisms_from(c) if C.is_iso(g)]
        for g in iso_out[c]:
            sat.add(C.compose(g, e))
    return sat


def _extract_gamma(C, E, e_beta, c):
    """Concrete (gamma, e') with gamma iso into c, e' in E, gamma.e' = e.beta."""
    for gamma in sorted((g for g in C.morphisms_into(c) if C.is_iso(g)),
                        key=_key):
        e_pr = C.compose(C.iso_inverse(gamma), e_beta)
        if E.contains(e_pr):
            return gamma, e_pr
    raise AssertionError("saturation test passed but no witness found")


def check_protomodularity_pair(C, E, M, theta_anchor=None):
    """Exhaustive scan of the defining diagram shape.

    Enumerates e in E, beta in M into src... the middle object, and theta
    into the common target; builds the two canonical pullbacks and tests
    whether an isomorphic left projection forces beta isomorphic.  Returns
    the least counterexample diagram when the condition fails.
    """
    if hasattr(C, "theory"):
        return _check_ambient(C, E, M, form="definition")
    sat = _iso_saturation(C, E)
    count = 0
    restricted = False
    for e in sorted(E.member_list(), key=_key):
        b, c = C.src(e), C.tgt(e)
        thetas = [theta_anchor] if theta_anchor is not None else \
            sorted(C.morphisms_into(c), key=_key)
        for beta in sorted(C.morphisms_into(b), key=_key):
            if not M.contains(beta):
                continue
            if C.compose(e, beta) not in sat:
                continue
            beta_iso = C.is_iso(beta)
            for theta in thetas:
                sq1 = C.find_pullback(theta, e)
                if sq1 is None:
                    restricted = True
                    continue
                sq2 = C.find_pullback(sq1.proj2, beta)
                if sq2 is None:
                    restricted = True
                    continue
                count += 1
                if C.is_iso(sq2.proj1) and not beta_iso:
                    gamma, e_pr = _extract_gamma(C, E, C.compose(e, beta), c)
                    diag = ProtoDiagram(
                        e=e, theta=theta, m=sq1.proj2, p=sq1.proj1,
                        beta=beta, gamma=gamma, e_prime=e_pr,
                        m_prime=sq2.proj2, alpha=sq2.proj1,
                        apex=sq1.apex, apex_prime=sq2.apex)
                    return ProtoReport(False, diag, count, restricted,
                                       form="definition")
    return ProtoReport(True, None, count, restricted, form="definition")


def check_protomodularity_equivalent(C, E, M):
    """The rectangle formulation: e and e.beta in E directly (isomorphisms
    absorbed); theta anchored at the initial object when one exists."""
    if hasattr(C, "theory"):
        return _check_ambient(C, E, M, form="rectangle")
    initial = _initial_object(C)
    count = 0
    restricted = False
    for e in sorted(E.member_list(), key=_key):
        b, c = C.src(e), C.tgt(e)
        if initial is not None:
            thetas = [C.hom(initial, c)[0]]
        else:
            thetas = sorted(C.morphisms_into(c), key=_key)
        for beta in sorted(C.morphisms_into(b), key=_key):
            if not M.contains(beta):
                continue
            if not E.contains(C.compose(e, beta)):
                continue
            beta_iso = C.is_iso(beta)
            for theta in thetas:
                sq1 = C.find_pullback(theta, e)
                if sq1 is None:
                    restricted = True
                    continue
                sq2 = C.find_pullback(sq1.proj2, beta)
                if sq2 is None:
                    restricted = True
                    continue
                count += 1
                if C.is_iso(sq2.proj1) and not beta_iso:
                    diag = ProtoDiagram(
                        e=e, theta=theta, m=sq1.proj2, p=sq1.proj1,
                        beta=beta, gamma=None, e_prime=C.compose(e, beta),
                        m_prime=sq2.proj2, alpha=sq2.proj1,
                        apex=sq1.apex, apex_prime=sq2.apex)
                    return ProtoReport(False, diag, count, restricted,
                                       form="rectangle")
    return ProtoReport(True, None, count, restricted, form="rectangle")


def check_protomodularity_mono_part(C, E, M):
    """Third cross-check: theta replaced by the monic part of its
    (mono, stably extremal epi) factorization, where that factorization
    exists; skipped thetas are counted as restricted."""
    from .morphclass import builtin_class, is_stably_extremal
    if hasattr(C, "theory"):
        return _check_ambient(C, E, M, form="rectangle")
    monos = builtin_class(C, "monos")
    mono_parts = {}
    for theta in C.morphisms():
        part = None
        for e0 in sorted(C.morphisms_from(C.src(theta)), key=_key):
            ok, _, _ = is_stably_extremal(C, e0, monos)
            if not ok:
                continue
            for m0 in C.hom(C.tgt(e0), C.tgt(theta)):
                if monos.contains(m0) and C.compose(m0, e0) == theta:
                    part = m0
                    break
            if part:
                break
        mono_parts[theta] = part
    sat = _iso_saturation(C, E)
    count = 0
    restricted = False
    for e in sorted(E.member_list(), key=_key):
        b, c = C.src(e), C.tgt(e)
        for beta in sorted(C.morphisms_into(b), key=_key):
            if not M.contains(beta):
                continue
            if C.compose(e, beta) not in sat:
                continue
            beta_iso = C.is_iso(beta)
            for theta in sorted(C.morphisms_into(c), key=_key):
                anchor = mono_parts[theta]
                if anchor is None:
                    restricted = True
                    continue
                sq1 = C.find_pullback(anchor, e)
                if sq1 is None:
                    restricted = True
                    continue
                sq2 = C.find_pullback(sq1.proj2, beta)
                if sq2 is None:
                    restricted = True
                    continue
                count += 1
                if C.is_iso(sq2.proj1) and not beta_iso:
                    gamma, e_pr = _extract_gamma(C, E, C.compose(e, beta), c)
                    diag = ProtoDiagram(
                        e=e, theta=anchor, m=sq1.proj2, p=sq1.proj1,
                        beta=beta, gamma=gamma, e_prime=e_pr,
                        m_prime=sq2.proj2, alpha=sq2.proj1,
                        apex=sq1.apex, apex_prime=sq2.apex)
                    return ProtoReport(False, diag, count, restricted,
                                       form="mono-part")
    return ProtoReport(True, None, count, restricted, form="mono-part")


def _initial_object(C):
    for o in sorted(C.objects()):
        if all(len(C.hom(o, z)) == 1 for z in C.objects()):
            return o
    return None


def _check_ambient(C, E, M, form):
    """Initial-object anchored scan over an algebra ambient.

    The kernel of e is the pullback of the unique 0 -> c along e; beta is a
    violation when it restricts to a bijection between the kernels of
    e.beta and e without being bijective itself.
    """
    I0 = C.initial()
    if I0 is None:
        raise ValueError("ambient protomodularity scan needs an initial object")
    if not getattr(E, "iso_saturated", True):
        raise ValueError("ambient scan needs an iso-saturated E")
    count = 0
    for e in sorted((m for m in C.morphisms() if E.contains(m)),
                    key=_key):
        b, c = e.src, e.tgt
        theta = C.hom(I0, c)[0]
        ker_e = {(u, y) for u in I0.carrier for y in b.carrier
                 if theta(u) == e(y)}
        for beta in sorted(C.morphisms_into(b), key=_key):
            if not M.contains(beta):
                continue
            if beta.is_bijective():
                continue
            eb = C.compose(e, beta)
            # the definition form asks for an iso gamma with gamma^-1.e.beta
            # in E; E is iso-saturated here, so that reduces to e.beta in E
            if not E.contains(eb):
                continue
            count += 1
            ker_eb = [(u, z) for u in I0.carrier for z in beta.src.carrier
                      if theta(u) == eb(z)]
            image = {(u, beta(z)) for u, z in ker_eb}
            if len(image) == len(ker_eb) and image == ker_e:
                diag = ProtoDiagram(
                    e=e, theta=theta, m=None, p=None, beta=beta,
                    gamma=None, e_prime=eb, m_prime=None, alpha=None,
                    apex=f"ker({_key(e)})", apex_prime=f"ker({_key(eb)})")
                return ProtoReport(False, diag, count, False,
                                   scope=f"within size cap {C.size_cap}",
                                   form=form)
    return ProtoReport(True, None, count, False,
                       scope=f"within size cap {C.size_cap}", form=form)


def cross_validate_protomodularity(C, E, M):
    """Run both formulations; they must agree (Remark equivalence)."""
    pair = check_protomodularity_pair(C, E, M)
    equiv = check_protomodularity_equivalent(C, E, M)
    if pair.satisfied != equiv.satisfied:
        raise InternalConsistencyError(
            f"formulations disagree on ({E.name}, {M.name}): "
            f"definition={pair.satisfied} rectangle={equiv.satisfied}")
    return pair, equiv


# ---------------------------------------------------------------------------
# transport along jointly conservative pullback-preserving functors
# ---------------------------------------------------------------------------

@dataclass
class TransportReport:
    E_prime: MorphismClass | None
    M_prime: MorphismClass | None
    verdict: ProtoReport | None
    precondition_failure: tuple | None = None

    def to_json(self):
        return {"ok": self.precondition_failure is None,
                "precondition_failure":
                    [str(x) for x in self.precondition_failure]
                    if self.precondition_failure else None,
                "verdict": self.verdict.to_json() if self.verdict else None}


def _is_pullback_square(D, f, g, p1, p2):
    if D.compose(f, p1) != D.compose(g, p2):
        return False
    w = D.src(p1)
    for z in D.objects():
        for p in D.hom(z, D.src(f)):
            fp = D.compose(f, p)
            for q in D.hom(z, D.src(g)):
                if fp != D.compose(g, q):
                    continue
                hits = [h for h in D.hom(z, w)
                        if D.compose(p1, h) == p and D.compose(p2, h) == q]
                if len(hits) != 1:
                    return False
    return True


def preserves_pullbacks(F):
    """Exhaustively check that F sends canonical pullback squares to
    pullback squares; returns (ok, witness cospan)."""
    C, D = F.source, F.target
    for f in C.morphisms():
        for g in C.morphisms_into(C.tgt(f)):
            sq = C.find_pullback(f, g)
            if sq is None:
                continue
            if not _is_pullback_square(D, F.on_mor(f), F.on_mor(g),
                                       F.on_mor(sq.proj1), F.on_mor(sq.proj2)):
                return False, (f, g)
    return True, None


def jointly_conservative(functors):
    """Every morphism with all images iso must be iso; (ok, witness)."""
    C = functors[0].source
    for m in C.morphisms():
        if C.is_iso(m):
            continue
        if all(F.target.is_iso(F.on_mor(m)) for F in functors):
            return False, m
    return True, None


def transport_classes(functors, pairs):
    """Intersected preimage classes along a jointly conservative family of
    pullback-preserving functors, plus the protomodularity verdict."""
    if len(functors) != len(pairs) or not functors:
        raise ValueError("need one (E_i, M_i) pair per functor")
    C = functors[0].source
    for F in functors:
        err = F.validate()
        if err is not None:
            return TransportReport(None, None, None,
                                   ("functoriality", F.name) + err)
        ok, wit = preserves_pullbacks(F)
        if not ok:
            return TransportReport(None, None, None,
                                   ("pullback preservation", F.name, wit))
    ok, wit = jointly_conservative(functors)
    if not ok:
        return TransportReport(None, None, None,
                               ("joint conservativity", wit))
    e_members = []
    m_members = []
    for m in C.morphisms():
        if all(E.contains(F.on_mor(m)) for F, (E, _) in zip(functors, pairs)):
            e_members.append(m)
        if all(M.contains(F.on_mor(m)) for F, (_, M) in zip(functors, pairs)):
            m_members.append(m)
    E_prime = MorphismClass(C, "E'", members=e_members)
    M_prime = MorphismClass(C, "M'", members=m_members)
    verdict = check_protomodularity_pair(C, E_prime, M_prime)
    return TransportReport(E_prime, M_prime, verdict)
