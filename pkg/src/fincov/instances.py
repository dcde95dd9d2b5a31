"""Corpus builders: posets and lattices, set skeletons, finite topological
spaces, algebra ambients and seeded random categories.

Every builder routes its tables through validate_category, so generated
fixtures are validated structures by construction.  Ids are zero-padded
where order matters; all enumeration is deterministic.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .algkit import FinAlgebra, build_finalg_category, group_theory, \
    monoid_theory, subalgebra_closure
from .fincat import FinCategory, product_category, validate_category
from .morphclass import builtin_class, explicit_class


def _must(cat):
    if not isinstance(cat, FinCategory):
        raise AssertionError(f"generated category failed validation: {cat}")
    return cat


# ---------------------------------------------------------------------------
# posets
# ---------------------------------------------------------------------------

def poset_category(elements, le_pairs, name="poset"):
    """Thin category of a finite partial order.

    ``le_pairs`` generates the order; the reflexive-transitive closure is
    taken and antisymmetry is rejected.
    """
    elems = sorted(str(x) for x in elements)
    le = {(x, x) for x in elems}
    le |= {(str(a), str(b)) for a, b in le_pairs}
    changed = True
    while changed:
        changed = False
        for a, b in list(le):
            for c, d in list(le):
                if b == c and (a, d) not in le:
                    le.add((a, d))
                    changed = True
    for a, b in le:
        if a != b and (b, a) in le:
            raise ValueError(f"relation is not antisymmetric at ({a}, {b})")
    morphisms = {f"{a}<{b}": (a, b) for a, b in le}
    identities = {a: f"{a}<{a}" for a in elems}
    composition = {}
    for a, b in le:
        for c, d in le:
            if b == c:
                composition[(f"{c}<{d}", f"{a}<{b}")] = f"{a}<{d}"
    return _must(validate_category((elems, morphisms, identities, composition),
                                   name=name))


def chain_poset(n, name=None):
    """The chain o0 < o1 < ... < on."""
    elems = [f"o{i}" for i in range(n + 1)]
    pairs = [(elems[i], elems[i + 1]) for i in range(n)]
    return poset_category(elems, pairs, name=name or f"chain{n}")


def diamond_lattice(name="diamond"):
    return poset_category(["o0", "oa", "ob", "o1"],
                          [("o0", "oa"), ("o0", "ob"), ("oa", "o1"),
                           ("ob", "o1")], name=name)


# ---------------------------------------------------------------------------
# set skeleton
# ---------------------------------------------------------------------------

@dataclass
class SetSkeleton:
    """Skeleton of finite sets S0..Sn with all functions as morphisms."""

    category: FinCategory
    maps: dict = field(repr=False)  # mor id -> (src size, tgt size, images)

    def is_injective(self, m):
        s, _, img = self.maps[m]
        return len(set(img)) == s

    def is_surjective(self, m):
        _, t, img = self.maps[m]
        return len(set(img)) == t

    def injections(self):
        return explicit_class(self.category, "injections",
                              [m for m in self.maps if self.is_injective(m)])

    def surjections(self):
        return explicit_class(self.category, "surjections",
                              [m for m in self.maps if self.is_surjective(m)])


def set_skeleton(max_size, name=None):
    """Sets of size 0..max_size and every function between them."""
    objs = [f"S{i}" for i in range(max_size + 1)]
    morphisms = {}
    maps = {}
    for a in range(max_size + 1):
        for b in range(max_size + 1):
            for img in itertools.product(range(b), repeat=a):
                mid = f"f{a}>{b}:" + "".join(map(str, img))
                morphisms[mid] = (f"S{a}", f"S{b}")
                maps[mid] = (a, b, img)
    identities = {f"S{i}": f"f{i}>{i}:" + "".join(map(str, range(i)))
                  for i in range(max_size + 1)}
    composition = {}
    for g, (b1, c, gimg) in maps.items():
        for f, (a, b2, fimg) in maps.items():
            if b1 != b2:
                continue
            himg = tuple(gimg[x] for x in fimg)
            composition[(g, f)] = f"f{a}>{c}:" + "".join(map(str, himg))
    cat = _must(validate_category((objs, morphisms, identities, composition),
                                  name=name or f"set<= {max_size}"))
    return SetSkeleton(cat, maps)


# ---------------------------------------------------------------------------
# groups and monoids
# ---------------------------------------------------------------------------

def cyclic_group(n, name=None):
    T = group_theory()
    mul = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
    inv = tuple((-i) % n for i in range(n))
    return FinAlgebra(T, name or f"Z{n}", n, {"mul": mul, "inv": inv, "e": 0})


def group_from_permutations(perms, name):
    """Group table from a closed set of permutations (identity first)."""
    T = group_theory()
    perms = sorted(set(map(tuple, perms)))
    ident = tuple(range(len(perms[0])))
    perms.remove(ident)
    perms.insert(0, ident)
    idx = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    mul = tuple(tuple(idx[tuple(p[q[k]] for k in range(len(ident)))]
                      for q in perms) for p in perms)
    inv = []
    for i, p in enumerate(perms):
        q = [0] * len(ident)
        for a, b in enumerate(p):
            q[b] = a
        inv.append(idx[tuple(q)])
    return FinAlgebra(T, name, n, {"mul": mul, "inv": tuple(inv), "e": 0})


def direct_product_group(A, B, name=None):
    T = group_theory()
    n, m = A.size, B.size
    enc = lambda a, b: a * m + b
    mul = tuple(tuple(enc(A.apply("mul", [i // m, j // m]),
                          B.apply("mul", [i % m, j % m]))
                      for j in range(n * m)) for i in range(n * m))
    inv = tuple(enc(A.apply("inv", [i // m]), B.apply("inv", [i % m]))
                for i in range(n * m))
    return FinAlgebra(T, name or f"{A.name}x{B.name}", n * m,
                      {"mul": mul, "inv": inv, "e": 0})


def symmetric_group(n, name=None):
    return group_from_permutations(itertools.permutations(range(n)),
                                   name or f"S{n}")


def dihedral_group_8():
    """Symmetries of the square as permutations of its vertices."""
    r = (1, 2, 3, 0)
    s = (1, 0, 3, 2)
    perms = set()
    frontier = [tuple(range(4))]
    while frontier:
        p = frontier.pop()
        if p in perms:
            continue
        perms.add(p)
        for q in (r, s):
            frontier.append(tuple(q[p[k]] for k in range(4)))
    return group_from_permutations(perms, "D4")


def quaternion_group():
    """Q8 presented by its multiplication table over 1,-1,i,-i,j,-j,k,-k."""
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    idx = {s: k for k, s in enumerate(names)}

    def neg(s):
        return s[1:] if s.startswith("-") else "-" + s

    base = {("1", "1"): "1", ("i", "i"): "-1", ("j", "j"): "-1",
            ("k", "k"): "-1", ("i", "j"): "k", ("j", "k"): "i",
            ("k", "i"): "j", ("j", "i"): "-k", ("k", "j"): "-i",
            ("i", "k"): "-j"}

    def mulsym(a, b):
        sign = 1
        if a.startswith("-"):
            sign, a = -sign, a[1:]
        if b.startswith("-"):
            sign, b = -sign, b[1:]
        if a == "1":
            out = b
        elif b == "1":
            out = a
        else:
            out = base[(a, b)]
        if out.startswith("-"):
            sign, out = -sign, out[1:]
        return out if sign > 0 else neg(out)

    mul = tuple(tuple(idx[mulsym(a, b)] for b in names) for a in names)
    inv = tuple(next(j for j in range(8) if mul[idx[a]][j] == idx["1"])
                for a in names)
    T = group_theory()
    return FinAlgebra(T, "Q8", 8, {"mul": mul, "inv": inv, "e": 0})


def klein_four_group():
    return direct_product_group(cyclic_group(2), cyclic_group(2), "V4")


def groups_upto(order_cap):
    """All groups of order <= cap up to isomorphism (cap <= 8)."""
    if order_cap > 8:
        raise ValueError("group roster is hand-built up to order 8")
    out = [cyclic_group(n) for n in range(1, order_cap + 1)]
    if order_cap >= 4:
        out.append(klein_four_group())
    if order_cap >= 6:
        out.append(symmetric_group(3, "S3"))
    if order_cap >= 8:
        out.append(direct_product_group(cyclic_group(4), cyclic_group(2),
                                        "Z4xZ2"))
        out.append(direct_product_group(klein_four_group(), cyclic_group(2),
                                        "Z2^3"))
        out.append(dihedral_group_8())
        out.append(quaternion_group())
    return out


def abelian_groups_upto(order_cap):
    return [A for A in groups_upto(order_cap)
            if A.name not in ("S3", "D4", "Q8")]


def monoids_upto(order_cap):
    """All monoids of order <= cap up to isomorphism, by table search."""
    T = monoid_theory()
    out = []
    for n in range(1, order_cap + 1):
        seen = set()
        count = 0
        for table in _unital_assoc_tables(n):
            canon = _monoid_canonical(table, n)
            if canon in seen:
                continue
            seen.add(canon)
            count += 1
            out.append(FinAlgebra(T, f"M{n}_{count}", n,
                                  {"mul": table, "e": 0}))
    return out


def _unital_assoc_tables(n):
    """Associative tables on range(n) with 0 as two-sided unit, by
    backtracking over the non-unit cells."""
    cells = [(i, j) for i in range(1, n) for j in range(1, n)]
    table = [[(i + j) if i == 0 or j == 0 else None for j in range(n)]
             for i in range(n)]
    for i in range(n):
        table[i][0] = i
        table[0][i] = i

    def assoc_ok(i, j):
        # check all triples whose products are already known and involve (i,j)
        for a in range(n):
            for b in range(n):
                ab = table[a][b]
                if ab is None:
                    continue
                for c in range(n):
                    bc = table[b][c]
                    if bc is None:
                        continue
                    left = table[ab][c] if table[ab][c] is not None else None
                    right = table[a][bc] if table[a][bc] is not None else None
                    if left is not None and right is not None and left != right:
                        return False
        return True

    def rec(k):
        if k == len(cells):
            yield tuple(tuple(row) for row in table)
            return
        i, j = cells[k]
        for v in range(n):
            table[i][j] = v
            if assoc_ok(i, j):
                yield from rec(k + 1)
        table[i][j] = None

    yield from rec(0)


def _monoid_canonical(table, n):
    best = None
    for perm in itertools.permutations(range(1, n)):
        p = (0,) + perm
        q = [0] * n
        for a, b in enumerate(p):
            q[b] = a
        t = tuple(tuple(q[table[p[i]][p[j]]] for j in range(n))
                  for i in range(n))
        if best is None or t < best:
            best = t
    return best


def group_category(A, name=None):
    """One-object category of a group (or monoid) table."""
    n = A.size
    objs = ["*"]
    morphisms = {f"g{i}": ("*", "*") for i in range(n)}
    identities = {"*": f"g{A.apply('e', [])}" if A.theory.has_symbol("e")
                  else "g0"}
    composition = {(f"g{i}", f"g{j}"): f"g{A.apply('mul', [i, j])}"
                   for i in range(n) for j in range(n)}
    return _must(validate_category((objs, morphisms, identities, composition),
                                   name=name or f"B({A.name})"))


def subgroup_lattice_poset(A, name=None):
    """Poset category of all subalgebras of A ordered by inclusion."""
    subs = set()
    for seed in itertools.chain([()], itertools.combinations(A.carrier, 1),
                                itertools.combinations(A.carrier, 2)):
        subs.add(subalgebra_closure(A, seed))
    # two generators suffice for carriers <= 8 except Z2^3-like; close again
    changed = True
    while changed:
        changed = False
        for s in list(subs):
            for x in A.carrier:
                t = subalgebra_closure(A, set(s) | {x})
                if t not in subs:
                    subs.add(t)
                    changed = True
    names = {s: "u" + "".join(map(str, sorted(s))) for s in subs}
    pairs = [(names[s], names[t]) for s in subs for t in subs
             if s != t and s <= t]
    return poset_category(names.values(), pairs,
                          name=name or f"sub({A.name})")


# ---------------------------------------------------------------------------
# finite topological spaces
# ---------------------------------------------------------------------------

@dataclass
class FiniteTopCorpus:
    """Finite spaces up to homeomorphism with all continuous maps.

    ``spaces`` maps object id -> (npoints, opens) where opens is a sorted
    tuple of point-bitmask ints; ``maps`` maps morphism id -> images tuple.
    """

    category: FinCategory
    spaces: dict
    maps: dict = field(repr=False)

    def opens(self, obj):
        return self.spaces[obj][1]

    def npoints(self, obj):
        return self.spaces[obj][0]

    def is_injective(self, m):
        src = self.category.src(m)
        return len(set(self.maps[m])) == self.npoints(src)

    def is_surjective(self, m):
        tgt = self.category.tgt(m)
        return len(set(self.maps[m])) == self.npoints(tgt)

    def image_mask(self, m):
        mask = 0
        for y in self.maps[m]:
            mask |= 1 << y
        return mask

    def preimage_mask(self, m, mask):
        out = 0
        for x, y in enumerate(self.maps[m]):
            if mask & (1 << y):
                out |= 1 << x
        return out

    def is_open_embedding(self, m):
        """Injective, open image, and open onto its image (subspace topology
        matches)."""
        if not self.is_injective(m):
            return False
        src, tgt = self.category.src(m), self.category.tgt(m)
        img = self.image_mask(m)
        if img not in self.opens(tgt):
            return False
        fwd = {}
        for x, y in enumerate(self.maps[m]):
            fwd[x] = y
        src_opens = set(self.opens(src))
        pushed = set()
        for u in src_opens:
            mask = 0
            for x in range(self.npoints(src)):
                if u & (1 << x):
                    mask |= 1 << fwd[x]
            pushed.add(mask)
        relative = {v & img for v in self.opens(tgt)}
        return pushed == relative

    def is_closed_embedding(self, m):
        if not self.is_injective(m):
            return False
        src, tgt = self.category.src(m), self.category.tgt(m)
        nt = self.npoints(tgt)
        full = (1 << nt) - 1
        img = self.image_mask(m)
        closed = {full ^ u for u in self.opens(tgt)}
        if img not in closed:
            return False
        fwd = dict(enumerate(self.maps[m]))
        ns = self.npoints(src)
        fulls = (1 << ns) - 1
        src_closed = {fulls ^ u for u in self.opens(src)}
        pushed = set()
        for c in src_closed:
            mask = 0
            for x in range(ns):
                if c & (1 << x):
                    mask |= 1 << fwd[x]
            pushed.add(mask)
        return pushed == {v & img for v in closed}

    def extremal_monos(self):
        """Embeddings (subspace inclusions up to homeomorphism)."""
        members = []
        for m in self.maps:
            if not self.is_injective(m):
                continue
            src, tgt = self.category.src(m), self.category.tgt(m)
            img = self.image_mask(m)
            fwd = dict(enumerate(self.maps[m]))
            ns = self.npoints(src)
            pushed = set()
            for u in self.opens(src):
                mask = 0
                for x in range(ns):
                    if u & (1 << x):
                        mask |= 1 << fwd[x]
                pushed.add(mask)
            if pushed == {v & img for v in self.opens(tgt)}:
                members.append(m)
        return explicit_class(self.category, "embeddings", members)


def _all_topologies(n):
    """All topologies on range(n) as sorted tuples of open bitmasks."""
    full = (1 << n) - 1
    subsets = range(1 << n)
    out = []
    for fam_bits in range(1 << (1 << n)):
        fam = [s for s in subsets if fam_bits & (1 << s)]
        famset = set(fam)
        if 0 not in famset or full not in famset:
            continue
        ok = True
        for a in fam:
            for b in fam:
                if (a | b) not in famset or (a & b) not in famset:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(tuple(sorted(fam)))
    return out


def _canonical_topology(opens, n):
    best = None
    for perm in itertools.permutations(range(n)):
        mapped = []
        for u in opens:
            m = 0
            for x in range(n):
                if u & (1 << x):
                    m |= 1 << perm[x]
            mapped.append(m)
        t = tuple(sorted(mapped))
        if best is None or t < best:
            best = t
    return best


def finite_top_category(max_points=3, name=None):
    """Finite spaces up to homeomorphism and all continuous maps.

    Gated at four points: topology enumeration is exponential in 2^n.
    """
    if max_points > 4:
        raise ValueError("finite space corpus is gated at 4 points")
    spaces = {}
    order = []
    for n in range(max_points + 1):
        canon = sorted({_canonical_topology(t, n) for t in _all_topologies(n)})
        for i, opens in enumerate(canon):
            oid = f"X{n}.{i}"
            spaces[oid] = (n, opens)
            order.append(oid)
    morphisms = {}
    maps = {}
    for a in order:
        na, opa = spaces[a]
        for b in order:
            nb, opb = spaces[b]
            opa_set = set(opa)
            for img in itertools.product(range(nb), repeat=na):
                ok = True
                for v in opb:
                    pre = 0
                    for x in range(na):
                        if v & (1 << img[x]):
                            pre |= 1 << x
                    if pre not in opa_set:
                        ok = False
                        break
                if ok:
                    mid = f"c{a}>{b}:" + "".join(map(str, img))
                    morphisms[mid] = (a, b)
                    maps[mid] = img
    identities = {a: f"c{a}>{a}:" + "".join(map(str, range(spaces[a][0])))
                  for a in order}
    composition = {}
    by_src = {}
    for m, (s, t) in morphisms.items():
        by_src.setdefault(s, []).append(m)
    for f, (a, b) in morphisms.items():
        fi = maps[f]
        for g in by_src.get(b, []):
            gi = maps[g]
            hi = tuple(gi[x] for x in fi)
            c = morphisms[g][1]
            composition[(g, f)] = f"c{a}>{c}:" + "".join(map(str, hi))
    cat = _must(validate_category(
        (order, morphisms, identities, composition),
        name=name or f"top<= {max_points}"))
    return FiniteTopCorpus(cat, spaces, maps)


# ---------------------------------------------------------------------------
# random categories
# ---------------------------------------------------------------------------

def random_category(seed, size_bounds=(4, 24), name=None):
    """Seeded random valid category: a random preorder, sometimes multiplied
    by a small cyclic group category.  Always validates."""
    max_obj, max_mor = size_bounds
    rng = random.Random(seed)
    for _ in range(64):
        k = rng.randint(1, max_obj)
        density = rng.random() * 0.6
        rel = {(i, i) for i in range(k)}
        for i in range(k):
            for j in range(k):
                if i != j and rng.random() < density:
                    rel.add((i, j))
        changed = True
        while changed:
            changed = False
            for a, b in list(rel):
                for c, d in list(rel):
                    if b == c and (a, d) not in rel:
                        rel.add((a, d))
                        changed = True
        elems = [f"o{i}" for i in range(k)]
        morphisms = {f"r{a}>{b}": (f"o{a}", f"o{b}") for a, b in rel}
        identities = {f"o{i}": f"r{i}>{i}" for i in range(k)}
        composition = {}
        for a, b in rel:
            for c, d in rel:
                if b == c:
                    composition[(f"r{c}>{d}", f"r{a}>{b}")] = f"r{a}>{d}"
        cat = validate_category((elems, morphisms, identities, composition),
                                name=name or f"rand{seed}")
        assert isinstance(cat, FinCategory)
        if rng.random() < 0.3:
            g = group_category(cyclic_group(rng.choice([2, 3])))
            prod = product_category(cat, g, name=name or f"rand{seed}")
            if len(prod.morphisms()) <= max_mor:
                return prod
        if len(cat.morphisms()) <= max_mor:
            return cat
    return cat


# ---------------------------------------------------------------------------
# random mixed-variance instances
# ---------------------------------------------------------------------------

def grid_variance(rows, cols):
    """Product of a covariant chain and a contravariant chain: morphisms
    moving in the first coordinate are covariant, in the second
    contravariant.  A genuinely mixed variance on a thin index."""
    from .variance import Variance, validate_variance
    A = chain_poset(rows)
    B = chain_poset(cols)
    I = product_category(A, B, name=f"grid{rows}x{cols}")
    cov = []
    contr = []
    for m in I.morphisms():
        left, right = m.split("*")
        a0, a1 = left.split("<")
        b0, b1 = right.split("<")
        if b0 == b1:
            cov.append(m)
        if a0 == a1:
            contr.append(m)
    v = validate_variance(I, cov, contr)
    assert isinstance(v, Variance)
    return v


def klein_variance():
    """The Klein four-group as a one-object groupoid with its two
    two-element subgroups as the covariant and contravariant classes."""
    from .variance import Variance, validate_variance
    V4 = klein_four_group()
    I = group_category(V4, name="BV4")
    # elements: g0 = e, g1 = a, g2 = b, g3 = ab (product encoding)
    v = validate_variance(I, ["g0", "g2"], ["g0", "g1"])
    assert isinstance(v, Variance)
    return v


def _random_klein_functor(rng):
    from .variance import MixedFunctor
    v = klein_variance()
    G = group_category(rng.choice(
        [cyclic_group(2), klein_four_group(), cyclic_group(4),
         symmetric_group(3, "S3")]))
    ident = G.identity("*")
    invol = [g for g in G.morphisms() if G.compose(g, g) == ident]
    x = rng.choice(invol)
    y = rng.choice([g for g in invol
                    if G.compose(g, x) == G.compose(x, g)])
    mor_map = {}
    for k in v.category.morphisms():
        c1, _ = v.factor_cov_contr(k)        # covariant part: e or g2
        d1, _ = v.factor_contr_cov(k)        # contravariant part: e or g1
        gx = x if c1 == "g2" else ident
        hy = y if d1 == "g1" else ident
        mor_map[k] = G.compose(gx, hy)
    return MixedFunctor(v, G, {"*": "*"}, mor_map)


def _random_grid_functor(rng):
    from .variance import MixedFunctor
    v = grid_variance(rng.randint(1, 2), rng.randint(1, 2))
    D = random_category(rng.randrange(10 ** 6), (4, 30))
    obj_map = {o: rng.choice(sorted(D.objects()))
               for o in sorted(v.category.objects())}
    mor_map = {}
    for k in v.category.morphisms():
        ks, kt = v.source_stage(k), v.target_stage(k)
        cands = sorted(D.hom(obj_map[ks], obj_map[kt]))
        if not cands:
            return None
        mor_map[k] = rng.choice(cands)
    return MixedFunctor(v, D, obj_map, mor_map)


def random_mixed_functor(seed):
    """A seeded valid mixed functor, rejection-sampled and validated.

    Thin grid variances map into random preorders (where any object map
    with the required homs is functorial); the Klein variance maps into a
    small one-object groupoid via a commuting pair of involutions.
    """
    from .variance import validate_mixed_functor
    rng = random.Random(seed)
    for _ in range(400):
        if rng.random() < 0.25:
            F = _random_klein_functor(rng)
        else:
            F = _random_grid_functor(rng)
        if F is not None and validate_mixed_functor(F) is None:
            return F
    raise AssertionError(f"no valid mixed functor found for seed {seed}")


# ---------------------------------------------------------------------------
# the standard corpus
# ---------------------------------------------------------------------------

@dataclass
class CorpusEntry:
    name: str
    category: object
    classes: dict
    extra: object = None


@dataclass
class Corpus:
    entries: dict

    def __getitem__(self, name):
        return self.entries[name]

    def names(self):
        return sorted(self.entries)

    def categories(self):
        return [self.entries[n].category for n in self.names()]

    def manifest(self):
        out = {}
        for n in self.names():
            e = self.entries[n]
            size = len(e.category.morphisms()) \
                if not hasattr(e.category, "theory") else \
                f"ambient cap {e.category.size_cap}"
            out[n] = {"category": e.category.name,
                      "classes": sorted(e.classes),
                      "morphisms": size}
        return out


def _default_classes(C):
    return {n: builtin_class(C, n)
            for n in ("all", "identities", "isos", "monos", "epis",
                      "sections", "retractions")}


_corpus_cache = {}


def standard_corpus(max_top_points=3, group_cap=8, monoid_cap=4):
    """The fixed fixture set used across the test and acceptance suites."""
    key = (max_top_points, group_cap, monoid_cap)
    if key in _corpus_cache:
        return _corpus_cache[key]
    entries = {}

    def add(name, category, classes=None, extra=None):
        cls = _default_classes(category)
        cls.update(classes or {})
        entries[name] = CorpusEntry(name, category, cls, extra)

    add("poset_2chain", chain_poset(1, name="poset_2chain"))
    add("poset_3chain", chain_poset(2, name="poset_3chain"))
    add("poset_4chain", chain_poset(3, name="poset_4chain"))
    add("diamond", diamond_lattice())

    sk2 = set_skeleton(2, name="set2")
    add("set_skeleton_2", sk2.category,
        {"injections": sk2.injections(), "surjections": sk2.surjections()},
        extra=sk2)
    sk3 = set_skeleton(3, name="set3")
    add("set_skeleton_3", sk3.category,
        {"injections": sk3.injections(), "surjections": sk3.surjections()},
        extra=sk3)

    for A in groups_upto(group_cap):
        if A.size in (2, 4, 8):
            add(f"group_cat_{A.name}", group_category(A), extra=A)
    add("sub_Z8", subgroup_lattice_poset(cyclic_group(8), name="sub_Z8"),
        extra=cyclic_group(8))
    add("sub_Z4", subgroup_lattice_poset(cyclic_group(4), name="sub_Z4"),
        extra=cyclic_group(4))

    top = finite_top_category(max_top_points)
    add("finite_top", top.category,
        {"injections": explicit_class(top.category, "injections",
                                      [m for m in top.maps
                                       if top.is_injective(m)]),
         "surjections": explicit_class(top.category, "surjections",
                                       [m for m in top.maps
                                        if top.is_surjective(m)]),
         "embeddings": top.extremal_monos()},
        extra=top)

    groups = build_finalg_category(group_theory(), group_cap,
                                   groups_upto(group_cap))
    add("groups_ambient", groups,
        {n: builtin_class(groups, n)
         for n in ("all", "isos", "injections", "surjections",
                   "sections", "retractions", "monos", "epis")})
    abelian = build_finalg_category(group_theory(), group_cap,
                                    abelian_groups_upto(group_cap))
    add("abelian_ambient", abelian,
        {n: builtin_class(abelian, n)
         for n in ("all", "isos", "injections", "surjections",
                   "sections", "retractions", "monos", "epis")})
    monoids = build_finalg_category(monoid_theory(), monoid_cap,
                                    monoids_upto(monoid_cap))
    add("monoids_ambient", monoids,
        {n: builtin_class(monoids, n)
         for n in ("all", "isos", "injections", "surjections",
                   "sections", "retractions", "monos", "epis")})

    corpus = Corpus(entries)
    _corpus_cache[key] = corpus
    return corpus
