"""One-command verification of the engine's identities.

Every check row records its instance parameters, the expected and observed
values, and a pass flag; a report passes iff every row passes.  Reports are
deterministic for a fixed configuration.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from . import poset as ps
from . import series as se
from . import twoassoc as ta
from .trees import count_K, dim_tree, enumerate_Kr, tree_to_text
from .twoassoc import count_W, enumerate_Wn, trees_of_Kr


@dataclass
class AuditReport:
    checks: list[dict] = field(default_factory=list)

    def add(self, name: str, params, expected, observed) -> None:
        self.checks.append({
            "name": name,
            "params": params,
            "expected": expected,
            "observed": observed,
            "pass": expected == observed,
        })

    def merge(self, other: "AuditReport") -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def summary(self) -> dict:
        return {"total": len(self.checks),
                "passed": sum(c["pass"] for c in self.checks),
                "failed": sum(not c["pass"] for c in self.checks)}

    def failures(self) -> list[dict]:
        return [c for c in self.checks if not c["pass"]]

    def to_json(self) -> str:
        return json.dumps({"checks": self.checks, "summary": self.summary()},
                          sort_keys=True, separators=(",", ":"), default=str)

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            status = "PASS" if c["pass"] else "FAIL"
            lines.append(f"{status}  {c['name']}  {json.dumps(c['params'], sort_keys=True, default=str)}  "
                         f"expected={c['expected']}  observed={c['observed']}")
        s = self.summary()
        lines.append(f"{s['passed']}/{s['total']} checks passed, {s['failed']} failed")
        return "\n".join(lines)


def fiber_rank_counts(n) -> dict[str, dict[int, int]]:
    """Enumerated face counts of W_n split by forgetful image and rank."""
    P = enumerate_Wn(n)
    pi_of = P.meta["pi"]
    out: dict[str, dict[int, int]] = {}
    for lab in P.labels:
        d = out.setdefault(pi_of[lab], {})
        rk = P.rank_of(lab)
        d[rk] = d.get(rk, 0) + 1
    return out


def audit_counts(n, max_degree: int | None = None) -> AuditReport:
    """Three-way count agreement per tree: series, recurrence, enumeration."""
    n = ta.check_nvector(n)
    r = len(n)
    D = max(sum(n), 1) if max_degree is None else max_degree
    if D < sum(n):
        raise ValueError(f"max_degree {D} is below |n| = {sum(n)}")
    rep = AuditReport()
    fibers = fiber_rank_counts(n)
    for tree in trees_of_Kr(r):
        text = tree_to_text(tree)
        F = se.solve_F(tree, D)
        for m in range(ta.top_rank(n) + 1):
            recur_val = count_W(tree, m, n)
            rep.add("count.three_way", {"n": list(n), "tree": text, "m": m},
                    {"series": recur_val, "recurrence": recur_val, "enumeration": recur_val},
                    {"series": se.coefficient(F, m, n), "recurrence": recur_val,
                     "enumeration": fibers.get(text, {}).get(m, 0)})
    return rep


def audit_identities(n_list, r_list, max_degree: int,
                     fiber_r_max: int = 2, fiber_k_max: int = 3,
                     fiber_weight_max: int = 3) -> AuditReport:
    """The t = -1 identities, balance checks, fiber and reduced products."""
    rep = AuditReport()

    fm1 = se.eval_t_minus1(se.solve_f(max_degree))
    for deg in range(1, max_degree + 1):
        rep.add("f.eval_minus1", {"r": deg}, 1, se.coefficient(fm1, 0, (deg,)))

    for r in r_list:
        for tree in trees_of_Kr(r):
            F = se.eval_t_minus1(se.solve_F(tree, max_degree))
            want = se.t_minus1_closed_form(tree, max_degree)
            rep.add("F_T.eval_minus1.closed_form",
                    {"tree": tree_to_text(tree), "D": max_degree}, True, F == want)

    for n in n_list:
        n = ta.check_nvector(n)
        P = enumerate_Wn(n)
        comp = P.complete_with_min(-1, "F^min")
        rep.add("What.balanced", {"n": list(n)}, 0,
                comp.alternating_sum("F^min", comp.unique_max()))
        sums: dict[str, int] = {}
        pi_of = P.meta["pi"]
        for lab in P.labels:
            sums[pi_of[lab]] = sums.get(pi_of[lab], 0) + (-1) ** P.rank_of(lab)
        for tree in trees_of_Kr(len(n)):
            text = tree_to_text(tree)
            rep.add("fiber.balance", {"n": list(n), "tree": text},
                    (-1) ** dim_tree(tree), sums.get(text, 0))

    rep.merge(audit_fiber_products(fiber_r_max, fiber_k_max, fiber_weight_max))
    rep.merge(audit_reduced_products())
    return rep


def audit_fiber_products(r_max: int = 2, k_max: int = 3, weight_max: int = 3) -> AuditReport:
    """A(W_{m_1} x_{K_r} ... x_{K_r} W_{m_k}) = 1 on the desk-scale family."""
    rep = AuditReport()
    for r in range(1, r_max + 1):
        K = enumerate_Kr(r)
        vecs = [n for n in itertools.product(range(weight_max + 1), repeat=r)
                if any(n) and sum(n) <= weight_max]
        for k in range(1, k_max + 1):
            for ms in itertools.combinations_with_replacement(vecs, k):
                posets, maps = [], []
                for idx, m in enumerate(ms):
                    W = enumerate_Wn(m)
                    rename = {lab: f"{idx}:{lab}" for lab in W.labels}
                    posets.append(W.relabel(rename))
                    maps.append({rename[lab]: t for lab, t in W.meta["pi"].items()})
                FP = ps.fiber_product(posets, K, maps)
                total = sum((-1) ** FP.rank_of(x) for x in FP.labels)
                rep.add("fiber_product.alternating_sum",
                        {"r": r, "m_list": [list(m) for m in ms]}, 1, total)
    return rep


def _all_middle_posets(size: int):
    """Every partial order on `size` labeled elements, as a strict-less matrix."""
    pairs = [(i, j) for i in range(size) for j in range(size) if i != j]
    for mask in range(1 << len(pairs)):
        less = [[False] * size for _ in range(size)]
        for b, (i, j) in enumerate(pairs):
            if (mask >> b) & 1:
                less[i][j] = True
        ok = True
        for i in range(size):
            for j in range(size):
                if less[i][j]:
                    if less[j][i]:
                        ok = False
                        break
                    for kk in range(size):
                        if less[j][kk] and not less[i][kk]:
                            ok = False
                            break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            yield less


def bounded_graded_family(max_elements: int = 6, min_rank: int = -1) -> list[ps.RankedPoset]:
    """Exhaustive family: all bounded graded posets with <= max_elements elements.

    Every labeled partial order on the middle elements gets a fresh bottom
    and top; ranks are longest-chain heights shifted to put the bottom at
    min_rank, and candidates whose covers do not raise rank by one (the
    non-graded ones) are dropped.
    """
    out = []
    for size in range(0, max_elements - 1):
        for less in _all_middle_posets(size):
            labels = [f"m{i}" for i in range(size)]

            def direct(j, i):
                return not any(less[j][z] and less[z][i] for z in range(size))

            covers = []
            for i in range(size):
                below = [j for j in range(size) if less[j][i]]
                for j in below:
                    if direct(j, i):
                        covers.append((labels[j], labels[i]))
                if not below:
                    covers.append(("bot", labels[i]))
                if not any(less[i][j] for j in range(size)):
                    covers.append((labels[i], "top"))
            if size == 0:
                covers.append(("bot", "top"))

            height = {"bot": 0}
            order = sorted(range(size), key=lambda i: sum(less[j][i] for j in range(size)))
            for i in order:
                below = [height[labels[j]] for j in range(size) if less[j][i]]
                height[labels[i]] = 1 + max(below, default=0)
            height["top"] = 1 + max((height[labels[i]] for i in range(size)
                                     if not any(less[i][j] for j in range(size))),
                                    default=0)
            ranked = {lab: h + min_rank for lab, h in height.items()}
            try:
                out.append(ps.RankedPoset(ranked, covers))
            except ps.PosetError:
                continue  # a cover skips a rank: not graded
    return out


def audit_reduced_products(max_elements: int = 6) -> AuditReport:
    """Balanced factors give balanced reduced products; the closed form holds."""
    rep = AuditReport()
    family = bounded_graded_family(max_elements)
    n_pairs = bad_closed = bad_balance = 0
    for P in family:
        a_p = sum((-1) ** P.rank_of(x) for x in P.labels)
        eps_p = (-1) ** P.rank_of(P.unique_min())
        for Q in family:
            R = ps.reduced_product(P, Q)
            a_q = sum((-1) ** Q.rank_of(x) for x in Q.labels)
            a_r = sum((-1) ** R.rank_of(x) for x in R.labels)
            eps_q = (-1) ** Q.rank_of(Q.unique_min())
            if a_r != (a_p - eps_p) * (a_q - eps_q) - eps_p * eps_q:
                bad_closed += 1
            if a_p == 0 and a_q == 0 and a_r != 0:
                bad_balance += 1
            n_pairs += 1
    rep.add("reduced_product.closed_form",
            {"family_size": len(family), "pairs": n_pairs}, 0, bad_closed)
    rep.add("reduced_product.balanced_factors",
            {"family_size": len(family), "pairs": n_pairs}, 0, bad_balance)
    return rep


def audit_eulerian(n) -> AuditReport:
    """Full Eulerian verification of the completed poset plus cross-checks."""
    n = ta.check_nvector(n)
    rep = AuditReport()
    P = enumerate_Wn(n).complete_with_min(-1, "F^min")
    res = P.verify_eulerian()
    rep.add("eulerian.unbalanced_intervals", {"n": list(n), "pairs": res.pairs_checked},
            0, len(res.unbalanced))
    rep.add("eulerian.graded", {"n": list(n)}, True, res.graded)
    rep.add("eulerian.diamond", {"n": list(n)}, 0, len(P.diamond_failures()))
    bad_mobius = 0
    for x in P.labels:
        for y in P.labels:
            if P.leq(x, y) and P.mobius(x, y) != (-1) ** (P.rank_of(y) - P.rank_of(x)):
                bad_mobius += 1
    rep.add("eulerian.mobius", {"n": list(n)}, 0, bad_mobius)

    bot = "F^min"
    top = P.unique_max()
    bad_sub = sum(1 for y in P.labels
                  if y != bot and P.alternating_sum(bot, y) != 0)
    rep.add("eulerian.sublevel_intervals", {"n": list(n), "bottom": bot}, 0, bad_sub)
    bad_super = sum(1 for x in P.labels
                    if x != top and P.alternating_sum(x, top) != 0)
    rep.add("eulerian.superlevel_intervals", {"n": list(n), "top": "F^max"}, 0, bad_super)
    return rep


def desk_nvectors() -> list[tuple[int, ...]]:
    """The desk-scale instance list: r <= 3 with |n| <= 4, r <= 2 with |n| <= 5."""
    out = []
    for r in (1, 2, 3):
        cap = 5 if r <= 2 else 4
        for n in itertools.product(range(cap + 1), repeat=r):
            if any(n) and sum(n) <= cap:
                out.append(n)
    return out


def audit_desk() -> AuditReport:
    """The full desk-scale profile; the release gate."""
    rep = AuditReport()
    vecs = desk_nvectors()
    for n in vecs:
        rep.merge(audit_counts(n))
    rep.merge(audit_identities(n_list=vecs, r_list=[1, 2, 3], max_degree=6))

    fm1 = se.eval_t_minus1(se.solve_f(12))
    for deg in range(1, 13):
        rep.add("f.eval_minus1", {"r": deg}, 1, se.coefficient(fm1, 0, (deg,)))
    ok, bad = se.check_f_closed_form(12)
    rep.add("f.closed_form", {"D": 12}, (True, None), (ok, bad))

    for deg in range(1, 9):
        rep.add("count_K.vs.enumeration", {"r": deg},
                enumerate_Kr(deg).rank_counts(),
                {m: count_K(m, deg) for m in range(max(deg - 1, 1)) if count_K(m, deg)})

    for n in vecs:
        rep.merge(audit_eulerian(n))
    return rep
