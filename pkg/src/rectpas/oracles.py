"""Independent brute-force referees.

Exact maximum independent set of rectangles, complete rectangle-packing
feasibility, exact cardinality geometric knapsack, and a multi-subset-sum
DP with witness reconstruction. These define ground truth for tests and for
the acceptance suite, so they favour transparent completeness arguments over
speed and every answer carries a checkable certificate.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from .geometry import (
    Item,
    MisrInstance,
    Packing,
    Placement,
    open_overlap,
    rects_disjoint,
    validate_misr_solution,
    validate_packing,
)


class BudgetExceededError(RuntimeError):
    """Raised when a search would exceed its declared budget."""


@dataclass(frozen=True)
class OracleBudget:
    max_items: int = 25
    max_solution_size: int = 8
    time_limit: Optional[float] = None

    def __post_init__(self) -> None:
        if self.max_items < 1 or self.max_solution_size < 0:
            raise ValueError("budget bounds must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time limit must be positive")

    def start_clock(self) -> "_Clock":
        return _Clock(self.time_limit)


class _Clock:
    __slots__ = ("deadline", "checks")

    def __init__(self, limit: Optional[float]):
        self.deadline = None if limit is None else time.monotonic() + limit
        self.checks = 0

    def tick(self) -> None:
        if self.deadline is None:
            return
        self.checks += 1
        if self.checks % 256 == 0 and time.monotonic() > self.deadline:
            raise BudgetExceededError("oracle time budget exceeded")


DEFAULT_BUDGET = OracleBudget()


# ---------------------------------------------------------------------------
# Maximum independent set of rectangles


def conflict_graph(inst: MisrInstance) -> list[set[int]]:
    """Adjacency lists of the rectangle intersection graph."""
    adj: list[set[int]] = [set() for _ in range(inst.n)]
    for i in range(inst.n):
        for j in range(i + 1, inst.n):
            if not rects_disjoint(inst.rects[i], inst.rects[j]):
                adj[i].add(j)
                adj[j].add(i)
    return adj


def _clique_cover_bound(adj: Sequence[set[int]], alive: list[int]) -> int:
    """Greedy clique cover size: an upper bound on the independent set."""
    cliques: list[list[int]] = []
    for v in alive:
        for cl in cliques:
            if all(u in adj[v] for u in cl):
                cl.append(v)
                break
        else:
            cliques.append([v])
    return len(cliques)


def mis_rectangles_exact(
    inst: MisrInstance, budget: OracleBudget = DEFAULT_BUDGET
) -> tuple[int, ...]:
    """Exact maximum independent set via branch and bound.

    Branches on the maximum-degree rectangle of the live subproblem and
    prunes with a greedy clique cover bound. The certificate is re-validated
    before returning.
    """
    if inst.n > budget.max_items:
        raise BudgetExceededError(f"{inst.n} rectangles exceed budget {budget.max_items}")
    clock = budget.start_clock()
    adj = conflict_graph(inst)
    best: list[int] = []

    def search(alive: list[int], chosen: list[int]) -> None:
        nonlocal best
        clock.tick()
        if not alive:
            if len(chosen) > len(best):
                best = sorted(chosen)
            return
        if len(chosen) + _clique_cover_bound(adj, alive) <= len(best):
            return
        v = max(alive, key=lambda u: (len(adj[u] & set(alive)), -u))
        rest = [u for u in alive if u != v]
        search([u for u in rest if u not in adj[v]], chosen + [v])
        if adj[v] & set(rest):
            search(rest, chosen)

    search(list(range(inst.n)), [])
    assert validate_misr_solution(inst, best)
    return tuple(best)


def mis_rectangles_scan(inst: MisrInstance) -> tuple[int, ...]:
    """Reference 2^n subset scan (oracle of the oracle, small n only)."""
    best: tuple[int, ...] = ()
    n = inst.n
    for mask in range(1 << n):
        if mask.bit_count() <= len(best):
            continue
        sel = [i for i in range(n) if mask >> i & 1]
        if validate_misr_solution(inst, sel):
            best = tuple(sel)
    return best


# ---------------------------------------------------------------------------
# Rectangle packing feasibility


def _orientations(it: Item, rotations: bool) -> tuple[tuple[int, int, bool], ...]:
    outs: list[tuple[int, int, bool]] = [(it.w, it.h, False)]
    if rotations and it.w != it.h:
        outs.append((it.h, it.w, True))
    return tuple(outs)


def _subset_sums(values: Sequence[int], limit) -> list[int]:
    sums = {0}
    for v in values:
        sums |= {s + v for s in sums if s + v <= limit}
    return sorted(sums)


def packing_feasible_exact(
    items: Sequence[Item],
    W: int,
    H,
    rotations: bool = True,
    budget: OracleBudget = DEFAULT_BUDGET,
    verify: bool = False,
) -> Optional[tuple[Placement, ...]]:
    """Complete feasibility search for packing all given items into W x H.

    Branches on the rotation assignment, then places items in index order at
    canonical coordinates: subset sums of the other items' effective widths
    and heights. Completeness follows from sliding any feasible packing
    left and down until every item rests against the boundary or another
    item. The first item is confined to the lower-left quadrant to break the
    reflection symmetries.

    With ``verify`` a returned packing is re-validated and, for tiny inputs,
    a "none" answer is cross-checked against the full coordinate scan.
    """
    m = len(items)
    if m > budget.max_solution_size:
        raise BudgetExceededError(f"{m} items exceed budget {budget.max_solution_size}")
    clock = budget.start_clock()
    result = None
    if m == 0:
        result = ()
    elif sum(it.w * it.h for it in items) <= W * H:
        result = _packing_search(items, W, H, rotations, clock)
    if verify:
        _verify_packing_answer(items, W, H, rotations, result)
    return result


def _choice_sums(pairs: Sequence[tuple[int, int]], limit: int) -> list[int]:
    """Sums realizable by picking one of each pair's values per subset."""
    sums = {0}
    for a, b in pairs:
        sums |= {s + a for s in sums if s + a <= limit}
        sums |= {s + b for s in sums if s + b <= limit}
    return sorted(sums)


def _packing_search(items, W, H, rotations, clock):
    m = len(items)
    # Large items first prunes earliest; determinism via the index tie-break.
    order = sorted(range(m), key=lambda i: (-items[i].w * items[i].h, i))
    per_item = [_orientations(items[i], rotations) for i in order]
    dim_pairs = [(items[i].w, items[i].h) for i in order]
    area = [items[i].w * items[i].h for i in order]
    suffix_area = [0] * (m + 1)
    for t in range(m - 1, -1, -1):
        suffix_area[t] = suffix_area[t + 1] + area[t]
    h_limit = H if isinstance(H, int) else W
    xs_all = [
        _choice_sums([dim_pairs[j] for j in range(m) if j != t], W)
        for t in range(m)
    ]
    ys_all = [
        _choice_sums([dim_pairs[j] for j in range(m) if j != t], h_limit)
        for t in range(m)
    ]
    placed: list[tuple[int, int, int, int]] = []
    out: list[Placement] = []

    def rec(t: int, used_area: int) -> bool:
        clock.tick()
        if t == m:
            return True
        if used_area + suffix_area[t] > W * H:
            return False
        for w, h, rot in per_item[t]:
            if w > W or h > H:
                continue
            for x in xs_all[t]:
                if x + w > W:
                    break
                if t == 0 and 2 * x > W - w:
                    break
                for y in ys_all[t]:
                    if y + h > H:
                        break
                    if t == 0 and 2 * y > H - h:
                        break
                    ok = True
                    for (px1, py1, px2, py2) in placed:
                        if open_overlap(x, x + w, px1, px2) and open_overlap(
                            y, y + h, py1, py2
                        ):
                            ok = False
                            break
                    if not ok:
                        continue
                    placed.append((x, y, x + w, y + h))
                    out.append(Placement(order[t], x, y, rot))
                    if rec(t + 1, used_area + area[t]):
                        return True
                    placed.pop()
                    out.pop()
        return False

    if rec(0, 0):
        return tuple(sorted(out, key=lambda p: p.item))
    return None


def packing_feasible_scan(
    items: Sequence[Item], W: int, H: int, rotations: bool = True
) -> Optional[tuple[Placement, ...]]:
    """Exhaustive placement scan over all integer coordinates.

    Independent referee for :func:`packing_feasible_exact`; only usable for
    very small boards since it enumerates every placement cell by cell.
    """
    m = len(items)
    if m == 0:
        return ()
    if sum(it.w * it.h for it in items) > W * H:
        return None
    order = sorted(range(m), key=lambda i: (-items[i].w * items[i].h, i))
    masks: list[list[tuple[int, Placement]]] = []
    for i in order:
        opts = []
        for w, h, rot in _orientations(items[i], rotations):
            for x in range(W - w + 1):
                for y in range(H - h + 1):
                    mask = 0
                    for cx in range(x, x + w):
                        for cy in range(y, y + h):
                            mask |= 1 << (cy * W + cx)
                    opts.append((mask, Placement(i, x, y, rot)))
        if not opts:
            return None
        masks.append(opts)

    chosen: list[Placement] = []

    def rec(t: int, used: int) -> bool:
        if t == m:
            return True
        for mask, pl in masks[t]:
            if used & mask:
                continue
            chosen.append(pl)
            if rec(t + 1, used | mask):
                return True
            chosen.pop()
        return False

    if rec(0, 0):
        return tuple(sorted(chosen, key=lambda p: p.item))
    return None


def _verify_packing_answer(items, W, H, rotations, result) -> None:
    if result is not None:
        fake_n = max(W, H if isinstance(H, int) else W)
        report = validate_packing(Packing(fake_n, result), items)
        box_ok = all(
            pl.x >= 0 and pl.y >= 0 and pl.box(items[pl.item])[2] <= W and pl.box(items[pl.item])[3] <= H
            for pl in result
        )
        overlap_free = not any(v.kind == "overlap" for v in report.violations)
        if not (box_ok and overlap_free):
            raise AssertionError("oracle produced an invalid packing")
    elif len(items) <= 4 and W <= 8 and isinstance(H, int) and H <= 8:
        if packing_feasible_scan(items, W, H, rotations) is not None:
            raise AssertionError("canonical search missed a feasible packing")


# ---------------------------------------------------------------------------
# Exact cardinality geometric knapsack


def knapsack_exact(
    items: Sequence[Item],
    W: int,
    H,
    k: int,
    rotations: bool = True,
    budget: OracleBudget = DEFAULT_BUDGET,
) -> tuple[tuple[int, ...], tuple[Placement, ...]]:
    """Maximum-cardinality packable subset of size <= k, with its packing.

    Enumerates candidate subsets by decreasing size with an area bound,
    probing each with :func:`packing_feasible_exact`. Placements in the
    result reference the original item indices.
    """
    n = len(items)
    if k > budget.max_solution_size:
        raise BudgetExceededError(f"k={k} exceeds budget {budget.max_solution_size}")
    clock = budget.start_clock()
    areas = sorted(it.w * it.h for it in items)
    cap = 0
    total = 0
    area_limit = W * H
    for a in areas:
        if total + a > area_limit:
            break
        total += a
        cap += 1
    for s in range(min(k, n, cap), 0, -1):
        for subset in combinations(range(n), s):
            clock.tick()
            chosen = [items[i] for i in subset]
            if sum(it.w * it.h for it in chosen) > area_limit:
                continue
            placed = packing_feasible_exact(chosen, W, H, rotations, budget)
            if placed is not None:
                remap = tuple(
                    Placement(subset[pl.item], pl.x, pl.y, pl.rotated) for pl in placed
                )
                return subset, remap
    return (), ()


# ---------------------------------------------------------------------------
# Multi-subset sum


def mss_exact(xs: Sequence[int], t: int, k: int) -> Optional[tuple[int, ...]]:
    """Find k values from xs (repetition allowed) summing exactly to t.

    Reachability DP over (number of picks, partial sum) with parent
    pointers; returns a sorted witness multiset or None.
    """
    if t < 0 or k < 0:
        raise ValueError("target and count must be non-negative")
    if any(x <= 0 for x in xs):
        raise ValueError("values must be positive integers")
    parent: list[dict[int, int]] = [dict() for _ in range(k + 1)]
    parent[0][0] = -1
    for j in range(k):
        layer = parent[j]
        nxt = parent[j + 1]
        for s in layer:
            for x in sorted(set(xs)):
                s2 = s + x
                if s2 <= t and s2 not in nxt:
                    nxt[s2] = x
    if t not in parent[k]:
        return None
    witness = []
    s = t
    for j in range(k, 0, -1):
        x = parent[j][s]
        witness.append(x)
        s -= x
    assert s == 0 and len(witness) == k and sum(witness) == t
    return tuple(sorted(witness))


def mss_enumerate(xs: Sequence[int], t: int, k: int) -> Optional[tuple[int, ...]]:
    """Brute-force multiset enumeration referee for :func:`mss_exact`."""
    from itertools import combinations_with_replacement

    for combo in combinations_with_replacement(sorted(set(xs)), k):
        if sum(combo) == t:
            return tuple(combo)
    return None
