"""Independent brute-force oracle over the JSON category form.

Deliberately shares no code with the package: plain dict lookups and
triple loops, used to cross-check mono/epi/iso flags, pullback universal
properties, orthogonality and extremality on small categories.
"""


class RawCat:
    def __init__(self, data):
        self.objects = list(data["objects"])
        self.src = {}
        self.tgt = {}
        for m in data["morphisms"]:
            self.src[m["id"]] = m["src"]
            self.tgt[m["id"]] = m["tgt"]
        self.ident = dict(data["identities"])
        self.comp = {(g, f): gf for g, f, gf in data["composition"]}
        self.morphisms = sorted(self.src)

    def hom(self, a, b):
        return [m for m in self.morphisms
                if self.src[m] == a and self.tgt[m] == b]


def is_mono(cat, f):
    for u in cat.morphisms:
        for v in cat.morphisms:
            if cat.tgt[u] != cat.src[f] or cat.tgt[v] != cat.src[f]:
                continue
            if cat.src[u] != cat.src[v]:
                continue
            if cat.comp[(f, u)] == cat.comp[(f, v)] and u != v:
                return False
    return True


def is_epi(cat, f):
    for u in cat.morphisms:
        for v in cat.morphisms:
            if cat.src[u] != cat.tgt[f] or cat.src[v] != cat.tgt[f]:
                continue
            if cat.tgt[u] != cat.tgt[v]:
                continue
            if cat.comp[(u, f)] == cat.comp[(v, f)] and u != v:
                return False
    return True


def is_iso(cat, f):
    for g in cat.hom(cat.tgt[f], cat.src[f]):
        if cat.comp[(g, f)] == cat.ident[cat.src[f]] and \
           cat.comp[(f, g)] == cat.ident[cat.tgt[f]]:
            return True
    return False


def is_section(cat, f):
    return any(cat.comp[(r, f)] == cat.ident[cat.src[f]]
               for r in cat.hom(cat.tgt[f], cat.src[f]))


def is_retraction(cat, f):
    return any(cat.comp[(f, s)] == cat.ident[cat.tgt[f]]
               for s in cat.hom(cat.tgt[f], cat.src[f]))


def cones(cat, f, g):
    out = []
    for p in cat.morphisms:
        if cat.tgt[p] != cat.src[f]:
            continue
        for q in cat.morphisms:
            if cat.tgt[q] != cat.src[g] or cat.src[q] != cat.src[p]:
                continue
            if cat.comp[(f, p)] == cat.comp[(g, q)]:
                out.append((p, q))
    return out


def is_pullback(cat, f, g, p1, p2):
    if cat.comp[(f, p1)] != cat.comp[(g, p2)]:
        return False
    w = cat.src[p1]
    for p, q in cones(cat, f, g):
        hits = [h for h in cat.hom(cat.src[p], w)
                if cat.comp[(p1, h)] == p and cat.comp[(p2, h)] == q]
        if len(hits) != 1:
            return False
    return True


def all_pullbacks(cat, f, g):
    return [(p, q) for p, q in cones(cat, f, g) if is_pullback(cat, f, g, p, q)]


def orthogonal(cat, e, m):
    for u in cat.hom(cat.src[e], cat.src[m]):
        for v in cat.hom(cat.tgt[e], cat.tgt[m]):
            if cat.comp[(m, u)] != cat.comp[(v, e)]:
                continue
            lifts = [h for h in cat.hom(cat.tgt[e], cat.src[m])
                     if cat.comp[(h, e)] == u and cat.comp[(m, h)] == v]
            if len(lifts) != 1:
                return False
    return True


def extremal_wrt(cat, f, members):
    for m in members:
        if cat.tgt[m] != cat.tgt[f] or is_iso(cat, m):
            continue
        if any(cat.comp[(m, g)] == f
               for g in cat.hom(cat.src[f], cat.src[m])):
            return False
    return True
