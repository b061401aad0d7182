import itertools

import pytest

from assoc2.trees import (all_bracketings, bracketing_to_tree, corolla, count_K,
                          parse_tree, tree_to_text)
from assoc2.series import coefficient, solve_F
from assoc2.twoassoc import (SearchSpaceError, TwoBracket, TwoBracketing,
                             check_nvector, count_W, dim_2concat, enumerate_Wn,
                             forced_two_brackets, forgetful_map, max_two_bracket,
                             point_singleton, removables, restrict_to_bracket,
                             tb_compatible, top_element, top_rank,
                             validate_two_bracketing)


def test_check_nvector():
    assert check_nvector((0, 2)) == (0, 2)
    for bad in [(), (0, 0), (-1, 2)]:
        with pytest.raises(ValueError):
            check_nvector(bad)


def test_two_bracket_malformed():
    with pytest.raises(ValueError):
        TwoBracket(2, 1, ())
    with pytest.raises(ValueError):
        TwoBracket(1, 1, (("p", 2, 1),))
    with pytest.raises(ValueError):
        TwoBracket(1, 2, (("p", 1, 1),))  # missing extent
    with pytest.raises(ValueError):
        TwoBracket(1, 1, (("q", 1),))


def test_validate_raises_on_out_of_range():
    tb = top_element((1, 1))
    bad = TwoBracketing(tb.n, tb.brackets,
                        tb.two_brackets | {TwoBracket(1, 2, (("p", 1, 5), ("g", 0)))})
    with pytest.raises(ValueError):
        validate_two_bracketing(bad)


def test_validate_top_elements():
    for n in [(1,), (2,), (1, 1), (2, 1), (1, 0, 2)]:
        assert validate_two_bracketing(top_element(n))


def test_validate_rejects_projection_outside_bracketing():
    n = (1, 1, 1)
    tb = top_element(n)
    rogue = TwoBracket(1, 2, (("p", 1, 1), ("p", 1, 1)))  # (1,2) not in the bracketing
    cand = TwoBracketing(n, tb.brackets, tb.two_brackets | {rogue})
    assert not validate_two_bracketing(cand)


def test_validate_rejects_missing_forced_members():
    n = (1, 1)
    cand = TwoBracketing(n, frozenset({(1, 2)}),
                         frozenset({max_two_bracket(n), point_singleton(1, 1)}))
    assert not validate_two_bracketing(cand)


def test_validate_rejects_single_screen_stack():
    # one full-width screen plus a dangling singleton cannot encode a face
    n = (1, 1)
    tb = top_element(n)
    screen = TwoBracket(1, 2, (("p", 1, 1), ("g", 1)))
    cand = TwoBracketing(n, tb.brackets, tb.two_brackets | {screen})
    assert not validate_two_bracketing(cand)


def test_validate_rejects_inconsistent_orientation():
    n = (1, 1)
    tb = top_element(n)
    s1 = TwoBracket(1, 2, (("p", 1, 1), ("g", 1)))
    s2 = TwoBracket(1, 2, (("g", 1), ("p", 1, 1)))  # above on line 1, below on line 2
    assert not tb_compatible(s1, s2)
    cand = TwoBracketing(n, tb.brackets, tb.two_brackets | {s1, s2})
    assert not validate_two_bracketing(cand)


def test_W11_has_three_faces_and_vertex_shape():
    P = enumerate_Wn((1, 1))
    assert P.rank_counts() == {0: 2, 1: 1}
    for lab in P.labels:
        tb = P.meta["objects"][lab]
        assert validate_two_bracketing(tb)
        rem_b, rem_2b = removables(tb)
        assert rem_b == frozenset()
        # each vertex records both stacked screens of its vertical split
        assert len(rem_2b) == (2 if P.rank_of(lab) == 0 else 0)


@pytest.mark.parametrize("n,expect", [
    ((1,), {0: 1}),
    ((2,), {0: 1}),
    ((2, 1), {0: 8, 1: 8, 2: 1}),
    ((1, 1, 1), {0: 32, 1: 48, 2: 18, 3: 1}),
    ((2, 2), {0: 44, 1: 69, 2: 27, 3: 1}),
    ((1, 0), {0: 1}),
    ((0, 0, 1), {0: 2, 1: 1}),
])
def test_enumerate_rank_counts(n, expect):
    assert enumerate_Wn(n).rank_counts() == expect


def test_enumerate_respects_element_bound():
    with pytest.raises(SearchSpaceError):
        enumerate_Wn((2, 1), max_elements=5)


@pytest.mark.parametrize("n,rank", [((1, 1), 1), ((2,), 0), ((2, 1), 2), ((1,), 0)])
def test_top_element_rank(n, rank):
    assert top_rank(n) == rank
    P = enumerate_Wn(n)
    assert P.rank_of(P.unique_max()) == rank
    assert P.unique_max() == top_element(n).label()


def test_forgetful_map():
    n = (2, 1)
    P = enumerate_Wn(n)
    objs = P.meta["objects"]
    top = P.unique_max()
    assert forgetful_map(objs[top]).brackets == frozenset({(1, 2)})
    # order preserving: smaller faces have larger bracket sets
    for i, j in P.cover_pairs:
        bi = forgetful_map(objs[P.labels[i]]).brackets
        bj = forgetful_map(objs[P.labels[j]]).brackets
        assert bj <= bi


def test_forgetful_fibers_match_series():
    n = (1, 1)
    P = enumerate_Wn(n)
    pi = P.meta["pi"]
    for tree in [corolla(2)]:
        F = solve_F(tree, 2)
        for m in (0, 1):
            fiber = [lab for lab in P.labels
                     if pi[lab] == tree_to_text(tree) and P.rank_of(lab) == m]
            assert len(fiber) == coefficient(F, m, n)


def test_removables_top_and_bracket_side():
    rb, r2b = removables(top_element((2, 1)))
    assert rb == frozenset() and r2b == frozenset()
    from assoc2.trees import Bracketing
    b = Bracketing(4, frozenset({(1, 4), (1, 2)}))
    assert b.removable() == frozenset({(1, 2)})


def test_restrict_to_bracket_top_cases():
    n = (2, 1)
    top = top_element(n)
    assert restrict_to_bracket(top, (1, 2)) == top
    assert restrict_to_bracket(top, (1, 1)) == top_element((2,))
    with pytest.raises(ValueError):
        restrict_to_bracket(top, (9, 9))


def test_restrict_to_bracket_forgets_other_lines():
    # a W_(2,1) vertex with a point cluster on line 1 restricts to the K_2 face
    P = enumerate_Wn((2, 1))
    objs = P.meta["objects"]
    cluster = TwoBracket(1, 1, (("p", 1, 2),))
    carriers = [tb for tb in objs.values() if cluster in tb.two_brackets]
    assert carriers
    for tb in carriers:
        sub = restrict_to_bracket(tb, (1, 1))
        assert sub.n == (2,)
        assert cluster in sub.two_brackets


@pytest.mark.parametrize("n", [(1, 1), (2, 1)])
def test_restrict_to_bracket_always_valid(n):
    P = enumerate_Wn(n)
    for tb in P.meta["objects"].values():
        for b in sorted(tb.brackets | {(i, i) for i in range(1, len(n) + 1)}):
            if any(tb.n[b[0] - 1:b[1]]):
                out = restrict_to_bracket(tb, b)  # raises if invalid
                assert validate_two_bracketing(out)


def test_count_W_leaf_is_count_K():
    leaf = parse_tree(".")
    for q in range(1, 9):
        for m in range(q):
            assert count_W(leaf, m, (q,)) == count_K(m, q)


def test_count_W_corolla2_values():
    c2 = corolla(2)
    assert count_W(c2, 0, (1, 1)) == 2
    assert count_W(c2, 1, (1, 1)) == 1
    assert count_W(c2, 5, (1, 1)) == 0


def test_count_W_shape_mismatch():
    with pytest.raises(ValueError):
        count_W(corolla(2), 0, (1, 1, 1))


def test_dim_2concat():
    assert dim_2concat([0, 0], (1, 1), [[0], [0]]) == 1
    assert dim_2concat([0], (2,), [[0, 0]]) == 0
    with pytest.raises(ValueError):
        dim_2concat([0], (1,), [[0]])  # excluded trivial case
    with pytest.raises(ValueError):
        dim_2concat([0, 0], (1,), [[0]])
    with pytest.raises(ValueError):
        dim_2concat([0], (2,), [[0]])


def test_count_W_constraints_match_dim_2concat():
    """Every vertical branch target agrees with the concatenation dimension."""
    p = 0  # d(corolla_2)
    for a in (2, 3):
        for m_parts in itertools.product(range(3), repeat=a):
            m = dim_2concat([p], (a,), [list(m_parts)])
            assert sum(m_parts) == m + (a - 1) * p - a + 2


# --- the independent brute-force cross-check ---

def candidate_two_brackets(n, stored):
    r = len(n)
    forced = forced_two_brackets(n)
    brs = sorted(stored | {(i, i) for i in range(1, r + 1)})
    out = []
    for lo, hi in brs:
        ext_opts = []
        for line in range(lo, hi + 1):
            v = n[line - 1]
            opts = [("p", a, b) for a in range(1, v + 1) for b in range(a, v + 1)]
            opts += [("g", g) for g in range(v + 1)]
            ext_opts.append(opts)
        for exts in itertools.product(*ext_opts):
            if not any(e[0] == "p" for e in exts):
                continue
            tb = TwoBracket(lo, hi, tuple(exts))
            if tb not in forced:
                out.append(tb)
    return sorted(out, key=TwoBracket.sort_key)


def brute_force_Wn(n):
    """Every subset of the candidate universe that satisfies the predicate."""
    found = {}
    for kb in all_bracketings(len(n)):
        cands = candidate_two_brackets(n, kb.brackets)
        forced = forced_two_brackets(n)
        base = sorted(forced, key=TwoBracket.sort_key)

        def dfs(start, chosen):
            tb = TwoBracketing(n, kb.brackets, frozenset(chosen) | forced)
            if validate_two_bracketing(tb):
                found[tb.label()] = tb
            for i in range(start, len(cands)):
                c = cands[i]
                if all(tb_compatible(c, x) for x in chosen) \
                        and all(tb_compatible(c, x) for x in base):
                    chosen.append(c)
                    dfs(i + 1, chosen)
                    chosen.pop()

        dfs(0, [])
    return found


@pytest.mark.parametrize("n", [
    (1,), (3,), (4,), (1, 1), (2, 1), (1, 2), (2, 2), (1, 0), (0, 2),
    (1, 1, 1), (1, 0, 1),
])
def test_brute_force_matches_enumeration(n):
    assert set(brute_force_Wn(n)) == set(enumerate_Wn(n).labels)


@pytest.mark.parametrize("n", [(1, 1), (2, 1), (1, 1, 1), (2, 2)])
def test_antichain_stacks_are_facets(n):
    """No removable brackets + an antichain of full-width removable 2-brackets
    forces codimension exactly 1 (the unfused-seams dimension count)."""
    from assoc2.twoassoc import tb_inside, top_rank
    P = enumerate_Wn(n)
    r = len(n)
    seen = 0
    for lab, tb in P.meta["objects"].items():
        rem_b, rem_2b = removables(tb)
        if rem_b or not rem_2b:
            continue
        if any(x.bracket != (1, r) for x in rem_2b):
            continue
        if any(x != y and tb_inside(x, y) for x in rem_2b for y in rem_2b):
            continue
        seen += 1
        assert P.rank_of(lab) == top_rank(n) - 1, lab
    assert seen > 0


def test_fiber_balance_and_global_balance():
    for n in [(1, 1), (2, 1), (1, 1, 1), (2, 2)]:
        P = enumerate_Wn(n)
        pi = P.meta["pi"]
        total = 0
        sums = {}
        for lab in P.labels:
            s = (-1) ** P.rank_of(lab)
            total += s
            sums[pi[lab]] = sums.get(pi[lab], 0) + s
        assert total == 1
        for kb in all_bracketings(len(n)):
            tree = bracketing_to_tree(kb)
            from assoc2.trees import dim_tree
            assert sums.get(tree_to_text(tree), 0) == (-1) ** dim_tree(tree)


def test_two_bracketing_json_schema():
    doc = top_element((1, 0)).to_json_dict()
    assert doc["n"] == [1, 0]
    assert [1, 1] in doc["brackets"] and [1, 2] in doc["brackets"]
    mx = doc["two_brackets"][-1]
    assert mx["B"] == [1, 2]
    assert {"line": 1, "points": [1, 1]} in mx["extents"]
    assert {"line": 2, "gap": 0} in mx["extents"]
