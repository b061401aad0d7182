"""2-bracketings and the face posets of the 2-associahedra W_n.

A face of W_n is a pair (B, 2B) of a bracketing of the r lines and a
compatible family of 2-brackets.  A 2-bracket crosses the consecutive lines
of a bracket and either encloses a nonempty run of marked points on a line
or passes through one of its gaps (gap g sits between points g and g+1, with
g = 0 below the first point).  Point singletons and the maximal 2-bracket
are stored explicitly; the face order is reverse containment of the pairs.

Validity of a candidate family is decided structurally: the containment
forest of the 2-brackets must parse into alternating stack nodes (all
children project to the node's own bracket, are totally ordered vertically
and split the node's points) and split nodes (children project exactly onto
the bracket-tree children and cover all points).  This parse is exactly what
makes single lines reduce to K_n and pins the face counts to the two
independent count oracles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .poset import RankedPoset
from .trees import (Bracketing, Tree, all_bracketings, bracketing_to_tree, count_K,
                    dim_tree, root_decompose, tree_to_text)


def check_nvector(n) -> tuple[int, ...]:
    n = tuple(int(v) for v in n)
    if not n:
        raise ValueError("n must have r >= 1 entries")
    if any(v < 0 for v in n):
        raise ValueError("n entries must be nonnegative")
    if not any(n):
        raise ValueError("n must be nonzero (n in Z_{>=0}^r \\ {0})")
    return n


@dataclass(frozen=True)
class TwoBracket:
    """A 2-bracket: line interval [lo..hi] with one vertical extent per line.

    Extents are ('p', a, b) for the run of points a..b, or ('g', g) for the
    crossing through gap g.
    """

    lo: int
    hi: int
    extents: tuple[tuple, ...]

    def __post_init__(self):
        if not (1 <= self.lo <= self.hi):
            raise ValueError(f"bad line interval [{self.lo}..{self.hi}]")
        if len(self.extents) != self.hi - self.lo + 1:
            raise ValueError("need exactly one extent per line")
        for e in self.extents:
            if e[0] == "p":
                if len(e) != 3 or not (1 <= e[1] <= e[2]):
                    raise ValueError(f"malformed points extent {e!r}")
            elif e[0] == "g":
                if len(e) != 2 or e[1] < 0:
                    raise ValueError(f"malformed gap extent {e!r}")
            else:
                raise ValueError(f"malformed extent {e!r}")

    @property
    def bracket(self) -> tuple[int, int]:
        return (self.lo, self.hi)

    def lines(self):
        return range(self.lo, self.hi + 1)

    def extent(self, line: int):
        return self.extents[line - self.lo]

    def points(self) -> frozenset[tuple[int, int]]:
        out = []
        for line in self.lines():
            e = self.extent(line)
            if e[0] == "p":
                out += [(line, j) for j in range(e[1], e[2] + 1)]
        return frozenset(out)

    def has_points(self) -> bool:
        return any(e[0] == "p" for e in self.extents)

    def sort_key(self):
        return (self.lo, self.hi,
                tuple((0, e[1], e[1]) if e[0] == "g" else (1, e[1], e[2])
                      for e in self.extents))

    def __str__(self):
        exts = ",".join(f"p{e[1]}-{e[2]}" if e[0] == "p" else f"g{e[1]}"
                        for e in self.extents)
        return f"[{self.lo}-{self.hi}:{exts}]"


def point_singleton(line: int, j: int) -> TwoBracket:
    return TwoBracket(line, line, (("p", j, j),))


def max_two_bracket(n: tuple[int, ...]) -> TwoBracket:
    """All points on all lines; pointless lines are crossed at their only gap."""
    exts = tuple(("p", 1, v) if v > 0 else ("g", 0) for v in n)
    return TwoBracket(1, len(n), exts)


def forced_two_brackets(n: tuple[int, ...]) -> frozenset[TwoBracket]:
    out = {max_two_bracket(n)}
    for i, v in enumerate(n, start=1):
        for j in range(1, v + 1):
            out.add(point_singleton(i, j))
    return frozenset(out)


@dataclass(frozen=True)
class TwoBracketing:
    """(bracketing, 2-brackets) pair; brackets stored as in Bracketing."""

    n: tuple[int, ...]
    brackets: frozenset[tuple[int, int]]
    two_brackets: frozenset[TwoBracket]

    @property
    def r(self) -> int:
        return len(self.n)

    def bracketing(self) -> Bracketing:
        return Bracketing(self.r, self.brackets)

    def label(self) -> str:
        tree = tree_to_text(bracketing_to_tree(self.bracketing()))
        tbs = ";".join(str(t) for t in sorted(self.two_brackets, key=TwoBracket.sort_key))
        return f"{tree}|{tbs}"

    def to_json_dict(self) -> dict:
        rows = []
        for tb in sorted(self.two_brackets, key=TwoBracket.sort_key):
            exts = []
            for line in tb.lines():
                e = tb.extent(line)
                if e[0] == "p":
                    exts.append({"line": line, "points": [e[1], e[2]]})
                else:
                    exts.append({"line": line, "gap": e[1]})
            rows.append({"B": [tb.lo, tb.hi], "extents": exts})
        full = sorted(self.brackets | {(i, i) for i in range(1, self.r + 1)})
        return {"n": list(self.n), "brackets": [[a, b] for a, b in full],
                "two_brackets": rows}


def top_element(n) -> TwoBracketing:
    """Only the forced members: the unique maximum of W_n."""
    n = check_nvector(n)
    r = len(n)
    brackets = frozenset({(1, r)}) if r >= 2 else frozenset()
    return TwoBracketing(n, brackets, forced_two_brackets(n))


def top_rank(n) -> int:
    """Dimension of the maximum: |n| + r - 3, except W_(1) which is a point."""
    n = check_nvector(n)
    if n == (1,):
        return 0
    return sum(n) + len(n) - 3


# --- extent and 2-bracket geometry ---

def _ext_inside(child, parent) -> bool:
    if parent[0] == "p":
        a, b = parent[1], parent[2]
        if child[0] == "p":
            return a <= child[1] and child[2] <= b
        return a - 1 <= child[1] <= b  # gap may sit anywhere across the run
    return child[0] == "g" and child[1] == parent[1]


def _ext_below(e, f) -> bool:
    """Strictly below: e's footprint entirely under f's."""
    if e[0] == "p":
        return e[2] < f[1] if f[0] == "p" else e[2] <= f[1]
    return e[1] < f[1]


def _ext_tie(e, f) -> bool:
    return e[0] == "g" and f[0] == "g" and e[1] == f[1]


def tb_inside(child: TwoBracket, parent: TwoBracket) -> bool:
    """Containment: nested brackets and per-line nested extents."""
    if not (parent.lo <= child.lo and child.hi <= parent.hi):
        return False
    return all(_ext_inside(child.extent(line), parent.extent(line))
               for line in child.lines())


def _tb_oriented(x: TwoBracket, y: TwoBracket) -> str | None:
    """'below'/'above' if x sits consistently on one side of y on shared lines."""
    lo, hi = max(x.lo, y.lo), min(x.hi, y.hi)
    below = above = True
    for line in range(lo, hi + 1):
        e, f = x.extent(line), y.extent(line)
        if _ext_tie(e, f):
            continue
        if not _ext_below(e, f):
            below = False
        if not _ext_below(f, e):
            above = False
    if below and not above:
        return "below"
    if above and not below:
        return "above"
    return None


def tb_compatible(x: TwoBracket, y: TwoBracket) -> bool:
    """Nested or consistently disjoint; pairs over disjoint brackets are free."""
    if x.hi < y.lo or y.hi < x.lo:
        return True
    return (tb_inside(x, y) or tb_inside(y, x)
            or _tb_oriented(x, y) is not None)


# --- validity ---

def _bracket_children(stored: frozenset[tuple[int, int]], b: tuple[int, int]) -> list[tuple[int, int]]:
    """Bracket-tree children of b: maximal proper sub-brackets plus singleton gaps."""
    lo, hi = b
    inner = [c for c in stored if lo <= c[0] and c[1] <= hi and c != b]
    out = []
    pos = lo
    while pos <= hi:
        sub = max((c for c in inner if c[0] == pos), key=lambda c: c[1], default=None)
        if sub is None:
            out.append((pos, pos))
            pos += 1
        else:
            out.append(sub)
            pos = sub[1] + 1
    return out


def validate_two_bracketing(tb: TwoBracketing) -> bool:
    """Decide the defining conditions for a structurally well-formed candidate.

    Malformed data (extents out of the range set by n, brackets out of
    range) raises; anything well-formed evaluates to True or False.
    """
    n = check_nvector(tb.n)
    r = len(n)

    for x in tb.two_brackets:
        if x.hi > r:
            raise ValueError(f"2-bracket {x} exceeds r={r}")
        for line in x.lines():
            e = x.extent(line)
            top = n[line - 1]
            if e[0] == "p" and e[2] > top:
                raise ValueError(f"points extent {e!r} exceeds n_{line}={top}")
            if e[0] == "g" and e[1] > top:
                raise ValueError(f"gap extent {e!r} exceeds n_{line}={top}")
    for lo, hi in tb.brackets:
        if not (1 <= lo <= hi <= r):
            raise ValueError(f"bracket ({lo},{hi}) out of range")

    # (V1) the bracket family is a bracketing
    try:
        tb.bracketing()
    except ValueError:
        return False

    # (V3) forced members present; every 2-bracket encloses a point
    if not forced_two_brackets(n) <= tb.two_brackets:
        return False
    if not all(x.has_points() for x in tb.two_brackets):
        return False

    # (V2) projections land in the bracketing
    stored = tb.brackets
    all_brackets = stored | {(i, i) for i in range(1, r + 1)}
    if any(x.bracket not in all_brackets for x in tb.two_brackets):
        return False

    # (V4) pairwise nesting or consistent vertical order
    elems = sorted(tb.two_brackets, key=TwoBracket.sort_key)
    for i, x in enumerate(elems):
        for y in elems[i + 1:]:
            if not tb_compatible(x, y):
                return False

    # (V5)/(V6) the containment forest parses into stack and split nodes
    root = max_two_bracket(n)
    parent: dict[TwoBracket, TwoBracket] = {}
    for x in elems:
        if x == root:
            continue
        containers = [y for y in elems if y != x and tb_inside(x, y)]
        if not containers:
            return False
        # point count then line width strictly increases along a containment chain
        containers.sort(key=lambda y: (len(y.points()), y.hi - y.lo))
        for a, b in zip(containers, containers[1:]):
            if not tb_inside(a, b):
                return False  # containers must form a chain
        parent[x] = containers[0]

    children: dict[TwoBracket, list[TwoBracket]] = {x: [] for x in elems}
    for x, p in parent.items():
        children[p].append(x)

    witnessed = {x.bracket for x in elems}
    for b in stored:
        block = n[b[0] - 1:b[1]]
        if any(block) and b not in witnessed:
            return False

    for node in elems:
        ch = children[node]
        if not ch:
            if len(node.points()) > 1:
                return False  # singletons inside would be children
            continue
        same = [x for x in ch if x.bracket == node.bracket]
        if same:
            # stack node: >= 2 screens over the same bracket splitting the points
            if len(same) != len(ch) or len(same) < 2:
                return False
            if not _stack_ok(same, node):
                return False
        else:
            # split node: children sit exactly on the bracket-tree branches
            branches = set(_bracket_children(stored, node.bracket))
            if any(x.bracket not in branches for x in ch):
                return False
            covered = set()
            for x in ch:
                covered |= x.points()
            if covered != set(node.points()):
                return False
            for b in branches:
                group = [x for x in ch if x.bracket == b]
                if len(group) > 1 and not _stack_ordered(group):
                    return False
    return True


def _stack_ordered(group: list[TwoBracket]) -> bool:
    """Pairwise strict vertical order that is acyclic (hence a total order)."""
    import functools

    def cmp(x, y):
        o = _tb_oriented(x, y)
        if o == "below":
            return -1
        if o == "above":
            return 1
        return 0

    ordered = sorted(group, key=functools.cmp_to_key(cmp))
    for i, x in enumerate(ordered):
        for y in ordered[i + 1:]:
            if _tb_oriented(x, y) != "below":
                return False
    return True


def _stack_ok(same: list[TwoBracket], node: TwoBracket) -> bool:
    if not _stack_ordered(same):
        return False
    covered: set = set()
    for x in same:
        pts = x.points()
        if covered & pts:
            return False
        covered |= pts
    return covered == set(node.points())


# --- operations on faces ---

def forgetful_map(tb: TwoBracketing) -> Bracketing:
    """Project to the line-level bracketing (the K_r face)."""
    return tb.bracketing()


def removables(tb: TwoBracketing) -> tuple[frozenset[tuple[int, int]], frozenset[TwoBracket]]:
    """Brackets/2-brackets that are neither forced singletons nor the maxima."""
    r = tb.r
    rem_b = frozenset(b for b in tb.brackets if b != (1, r))
    mx = max_two_bracket(tb.n)
    rem_2b = frozenset(x for x in tb.two_brackets
                       if x != mx and not (x.lo == x.hi and x.extents[0][0] == "p"
                                           and x.extents[0][1] == x.extents[0][2]))
    return rem_b, rem_2b


def restrict_to_bracket(tb: TwoBracketing, b: tuple[int, int]) -> TwoBracketing:
    """Keep only the 2-brackets lying exactly over b, reindexed to 1..#b.

    The result lives in W_{n(b)} with the minimal bracketing: singletons, the
    full bracket, fresh point singletons and a fresh maximal 2-bracket.
    """
    lo, hi = b
    r = tb.r
    if b not in tb.brackets and not (lo == hi and 1 <= lo <= r):
        raise ValueError(f"bracket {b} not in the bracketing")
    sub_n = tb.n[lo - 1:hi]
    if not any(sub_n):
        raise ValueError(f"restriction to {b} has no marked points")
    s = hi - lo + 1
    kept = set()
    for x in tb.two_brackets:
        if x.bracket == b:
            kept.add(TwoBracket(1, s, x.extents))
    kept |= forced_two_brackets(sub_n)
    brackets = frozenset({(1, s)}) if s >= 2 else frozenset()
    out = TwoBracketing(sub_n, brackets, frozenset(kept))
    if not validate_two_bracketing(out):
        raise AssertionError(f"restriction to {b} produced an invalid 2-bracketing")
    return out


# --- enumeration ---

class SearchSpaceError(ValueError):
    """The configured element bound would be exceeded."""


def _shift(tbs: frozenset[TwoBracket], line_off: int,
           point_offs: tuple[int, ...]) -> list[TwoBracket]:
    out = []
    for x in tbs:
        exts = []
        for line in x.lines():
            off = point_offs[line - 1]
            e = x.extent(line)
            if e[0] == "p":
                exts.append(("p", e[1] + off, e[2] + off))
            else:
                exts.append(("g", e[1] + off))
        out.append(TwoBracket(x.lo + line_off, x.hi + line_off, tuple(exts)))
    return out


def _vector_compositions(n: tuple[int, ...], parts: int):
    """Ordered compositions of n into `parts` nonzero vectors."""
    weight = sum(n)
    if parts == 0:
        if weight == 0:
            yield ()
        return
    if weight < parts:
        return

    def rec(remaining: tuple[int, ...], k: int):
        if k == 1:
            if any(remaining):
                yield (remaining,)
            return
        for first in itertools.product(*[range(v + 1) for v in remaining]):
            w = sum(first)
            if w == 0 or sum(remaining) - w < k - 1:
                continue
            rest = tuple(a - b for a, b in zip(remaining, first))
            for tail in rec(rest, k - 1):
                yield (first,) + tail

    yield from rec(n, parts)


_GEN_MEMO: dict[tuple[str, tuple[int, ...]], tuple] = {}


def _gen_fiber(tree: Tree, n: tuple[int, ...]):
    """All faces of W_n over `tree`, in local coordinates.

    Returns a tuple of (two_bracket_frozenset, dimension) pairs.  Every face
    includes its own maximal 2-bracket, whose shift is exactly the screen
    enclosing it inside a larger face.
    """
    key = (tree_to_text(tree), n)
    cached = _GEN_MEMO.get(key)
    if cached is not None:
        return cached

    r = tree.leaf_count()
    assert len(n) == r and any(n)
    out = []
    if r == 1:
        q = n[0]
        for kb in all_bracketings(q):
            two = {point_singleton(1, j) for j in range(1, q + 1)}
            two.add(TwoBracket(1, 1, (("p", 1, q),)))
            for a, b in kb.brackets:
                two.add(TwoBracket(1, 1, (("p", a, b),)))
            out.append((frozenset(two), kb.dim))
    else:
        branches = root_decompose(tree)
        k = len(branches)
        p = dim_tree(tree)
        p_i = [dim_tree(b) for b in branches]
        widths = [b.leaf_count() for b in branches]
        mx = max_two_bracket(n)

        # vertical: a >= 2 stacked screens over the full line set
        for a in range(2, sum(n) + 1):
            for qs in _vector_compositions(n, a):
                fibers = [_gen_fiber(tree, q) for q in qs]
                for combo in itertools.product(*fibers):
                    two = {mx}
                    offs = [0] * r
                    for (fs, _d), q in zip(combo, qs):
                        two.update(_shift(fs, 0, tuple(offs)))
                        offs = [o + v for o, v in zip(offs, q)]
                    d = sum(dd for _fs, dd in combo) - (a - 1) * p + a - 2
                    out.append((frozenset(two), d))

        # horizontal: per-branch stacks on the bracket-tree children
        blocks = []
        pos = 0
        for w in widths:
            blocks.append(n[pos:pos + w])
            pos += w
        a_ranges = []
        for blk in blocks:
            a_ranges.append([0] if not any(blk) else list(range(1, sum(blk) + 1)))
        for avec in itertools.product(*a_ranges):
            per_branch = []
            for blk, a_i in zip(blocks, avec):
                per_branch.append(list(_vector_compositions(blk, a_i)))
            for qs_by_branch in itertools.product(*per_branch):
                fiber_lists = []
                for child, qs in zip(branches, qs_by_branch):
                    fiber_lists.append([_gen_fiber(child, q) for q in qs])
                for combo in itertools.product(*[itertools.product(*fl) for fl in fiber_lists]):
                    two = {mx}
                    d = sum(avec) + k - 3
                    line_off = 0
                    for bi, (child_combo, qs) in enumerate(zip(combo, qs_by_branch)):
                        w = widths[bi]
                        offs = [0] * w
                        for (fs, dd), q in zip(child_combo, qs):
                            two.update(_shift(fs, line_off, tuple(offs)))
                            offs = [o + v for o, v in zip(offs, q)]
                            d += dd
                        d -= (avec[bi] - 1) * p_i[bi]
                        line_off += w
                    out.append((frozenset(two), d))

    assert len({fs for fs, _ in out}) == len(out), f"duplicate faces in fiber over {key}"
    assert all(d >= 0 for _, d in out), f"negative dimension in fiber over {key}"
    result = tuple(out)
    _GEN_MEMO[key] = result
    return result


DEFAULT_MAX_ELEMENTS = 100_000
_ENUM_CACHE: dict[tuple[int, ...], RankedPoset] = {}


def enumerate_Wn(n, max_elements: int = DEFAULT_MAX_ELEMENTS) -> RankedPoset:
    """Face poset of W_n with forgetful labels.

    Faces are generated fiber by fiber over the trees of K_r, materialized as
    explicit (bracketing, 2-brackets) pairs, validated, and ordered by
    reverse containment.  The construction asserts gradedness, the unique
    maximum at rank |n| + r - 3 and minimal elements at rank 0.
    """
    n = check_nvector(n)
    if max_elements == DEFAULT_MAX_ELEMENTS and n in _ENUM_CACHE:
        return _ENUM_CACHE[n]
    r = len(n)

    expected = 0
    for kb in all_bracketings(r):
        tree = bracketing_to_tree(kb)
        expected += sum(count_W(tree, m, n) for m in range(top_rank(n) + 1))
    if expected > max_elements:
        raise SearchSpaceError(f"W_{n} has {expected} faces, above the bound {max_elements}")

    ranked: dict[str, int] = {}
    objects: dict[str, TwoBracketing] = {}
    pi_of: dict[str, str] = {}
    for kb in all_bracketings(r):
        tree = bracketing_to_tree(kb)
        for fs, d in _gen_fiber(tree, n):
            tb = TwoBracketing(n, kb.brackets, fs)
            if not validate_two_bracketing(tb):
                raise AssertionError(f"enumerated face fails validation: {tb.label()}")
            lab = tb.label()
            if lab in ranked:
                raise AssertionError(f"duplicate face across fibers: {lab}")
            ranked[lab] = d
            objects[lab] = tb
            pi_of[lab] = tree_to_text(tree)
    if len(ranked) != expected:
        raise AssertionError(f"enumerated {len(ranked)} faces, count oracle says {expected}")

    def leq(x: str, y: str) -> bool:
        a, b = objects[x], objects[y]
        return b.brackets <= a.brackets and b.two_brackets <= a.two_brackets

    poset = RankedPoset.from_order(
        ranked, leq,
        meta={"kind": "W_n", "n": n, "pi": pi_of, "objects": objects})

    top = top_element(n).label()
    if poset.unique_max() != top or poset.rank_of(top) != top_rank(n):
        raise AssertionError("unique maximum is not the forced-core element at |n|+r-3")
    if any(poset.rank_of(m) != 0 for m in poset.minimal_elements()):
        raise AssertionError("a minimal face has nonzero rank")
    if max_elements == DEFAULT_MAX_ELEMENTS:
        _ENUM_CACHE[n] = poset
    return poset


# --- the count recurrence (second oracle) ---

_FIBER_POLY_MEMO: dict[tuple[str, tuple[int, ...]], dict[int, int]] = {}
_cache_hook = None


def set_count_cache(hook) -> None:
    global _cache_hook
    _cache_hook = hook


def count_W(tree: Tree, m: int, n) -> int:
    """Faces of W_n over `tree` with dimension m, by the concatenation recurrence."""
    n = check_nvector(n)
    if tree.leaf_count() != len(n):
        raise ValueError(f"tree has {tree.leaf_count()} leaves but n has {len(n)} entries")
    if m < 0:
        return 0
    if _cache_hook is not None:
        v = _cache_hook.get_W(tree_to_text(tree), m, n)
        if v is not None:
            return v
    v = _fiber_poly(tree, n).get(m, 0)
    if _cache_hook is not None:
        _cache_hook.put_W(tree_to_text(tree), m, n, v)
    return v


def _convolve(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = m1 + m2
            out[m] = out.get(m, 0) + c1 * c2
    return out


def _fiber_poly(tree: Tree, n: tuple[int, ...]) -> dict[int, int]:
    """Dimension-indexed face counts of the fiber of W_n over `tree`."""
    key = (tree_to_text(tree), n)
    cached = _FIBER_POLY_MEMO.get(key)
    if cached is not None:
        return cached

    r = tree.leaf_count()
    if r == 1:
        out = {}
        for m in range(max(n[0] - 1, 1)):
            c = count_K(m, n[0])
            if c:
                out[m] = c
    else:
        out = {}
        branches = root_decompose(tree)
        k = len(branches)
        p = dim_tree(tree)
        p_i = [dim_tree(b) for b in branches]
        widths = [b.leaf_count() for b in branches]

        for a in range(2, sum(n) + 1):
            for qs in _vector_compositions(n, a):
                conv = {0: 1}
                for q in qs:
                    conv = _convolve(conv, _fiber_poly(tree, q))
                    if not conv:
                        break
                for s, c in conv.items():
                    m = s - (a - 1) * p + a - 2
                    if m >= 0:
                        out[m] = out.get(m, 0) + c

        blocks = []
        pos = 0
        for w in widths:
            blocks.append(n[pos:pos + w])
            pos += w
        branch_polys: list[dict[int, dict[int, int]]] = []
        for child, blk in zip(branches, blocks):
            by_a: dict[int, dict[int, int]] = {}
            if not any(blk):
                by_a[0] = {0: 1}
            else:
                for a_i in range(1, sum(blk) + 1):
                    acc: dict[int, int] = {}
                    for qs in _vector_compositions(blk, a_i):
                        conv = {0: 1}
                        for q in qs:
                            conv = _convolve(conv, _fiber_poly(child, q))
                            if not conv:
                                break
                        for s, c in conv.items():
                            acc[s] = acc.get(s, 0) + c
                    if acc:
                        by_a[a_i] = acc
            branch_polys.append(by_a)

        for avec in itertools.product(*[sorted(bp) for bp in branch_polys]):
            conv = {0: 1}
            for bp, a_i in zip(branch_polys, avec):
                conv = _convolve(conv, bp[a_i])
                if not conv:
                    break
            shift = -sum((a_i - 1) * pi for a_i, pi in zip(avec, p_i)) + sum(avec) + k - 3
            for s, c in conv.items():
                m = s + shift
                if m >= 0:
                    out[m] = out.get(m, 0) + c

    _FIBER_POLY_MEMO[key] = out
    return out


def dim_2concat(p_list, a_vec, P_matrix) -> int:
    """Dimension of a tree-pair concatenation from the parts' dimensions.

    Evaluates sum(P_ij) - sum((a_i - 1) p_i) + |a| + k - 3 with full shape
    checking; the trivial single-part case is excluded.
    """
    k = len(p_list)
    if k != len(a_vec) or k != len(P_matrix):
        raise ValueError("p_list, a_vec and P_matrix must share length k")
    if k < 1 or any(a < 0 for a in a_vec) or not any(a_vec):
        raise ValueError("need a in Z_{>=0}^k \\ {0}")
    for a_i, row in zip(a_vec, P_matrix):
        if len(row) != a_i:
            raise ValueError("row lengths must match a_vec")
    if k == 1 and tuple(a_vec) == (1,):
        raise ValueError("the (k, a) = (1, (1)) case is the excluded trivial concatenation")
    total = sum(sum(row) for row in P_matrix)
    return total - sum((a - 1) * p for a, p in zip(a_vec, p_list)) + sum(a_vec) + k - 3


@lru_cache(maxsize=None)
def trees_of_Kr(r: int) -> tuple[Tree, ...]:
    return tuple(bracketing_to_tree(b) for b in all_bracketings(r))
