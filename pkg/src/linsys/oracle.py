"""Ground-truth enumeration and exact search over small point sets.

The workhorse is a depth-first solution iterator over given candidate
sets, one per variable position.  Whenever a position is the largest
support index of some equation, that equation pins the value there
(back-substitution): over F_p by a modular inverse, over Z by exact
division.  Positions nobody pins are enumerated in ascending order, so
solutions stream out in lexicographic order and the product of the free
positions' set sizes bounds the work (guarded at 1e8).

Search for maximum free sets fixes the zero vector into every nonempty
candidate (balanced systems are translation invariant, and among maximum
witnesses one contains 0; its sorted sequence starts with the globally
smallest point, so the lexicographically least maximum witness contains 0)
and branches over the remaining points in lexicographic order with a
shared monotone best-size record.  Pruning is strict (a branch dies only
when it cannot even tie the record), which makes the reported value and
witness independent of worker count and schedule.
"""
from __future__ import annotations

import itertools
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .arith import is_prime
from .eqsys import FpSystem
from .errors import GuardExceeded

ENUMERATION_GUARD = 10**8
#: exact search is guaranteed only up to this many points
SEARCH_GUARD = 81
#: per-task node allowance for best-effort (non-exhaustive) searches
DEFAULT_NODE_BUDGET = 2_000_000

Point = tuple[int, ...]


@dataclass(frozen=True)
class PointSet:
    """A canonical subset of F_p^n: entries reduced mod p, sorted, deduped."""

    p: int
    n: int
    points: tuple[Point, ...]

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.n < 1:
            raise ValueError("dimension must be >= 1")
        norm = sorted({tuple(c % self.p for c in pt) for pt in self.points})
        for pt in norm:
            if len(pt) != self.n:
                raise ValueError("point dimension mismatch")
        object.__setattr__(self, "points", tuple(norm))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __contains__(self, pt: object) -> bool:
        return pt in set(self.points)


@dataclass(frozen=True)
class Matching:
    """Rows of r-tuples of points; within each column all entries differ
    (a system of distinct representatives, one row per color class)."""

    rows: tuple[tuple[Point, ...], ...]

    def __post_init__(self) -> None:
        if not self.rows:
            raise ValueError("matching needs at least one row")
        rows = tuple(tuple(tuple(pt) for pt in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        arity = len(rows[0])
        if any(len(row) != arity for row in rows):
            raise ValueError("rows must share one arity")
        dim = len(rows[0][0])
        for row in rows:
            for pt in row:
                if len(pt) != dim:
                    raise ValueError("point dimension mismatch")
        for col in range(arity):
            entries = [row[col] for row in rows]
            if len(set(entries)) != len(entries):
                raise ValueError(f"column {col + 1} repeats a point")

    @property
    def arity(self) -> int:
        return len(self.rows[0])

    @property
    def size(self) -> int:
        return len(self.rows)

    def column(self, i: int) -> tuple[Point, ...]:
        return tuple(sorted(row[i] for row in self.rows))


@dataclass(frozen=True)
class SearchResult:
    value: int
    witness: PointSet
    nodes_explored: int
    exhaustive: bool


def space_points(p: int, n: int) -> tuple[Point, ...]:
    """All of F_p^n in lexicographic order."""
    return tuple(itertools.product(range(p), repeat=n))


# ---------------------------------------------------------------------------
# core enumeration

def iter_solutions(
    rows: Sequence[Sequence[int]],
    sets: Sequence[Iterable[Point]],
    modulus: Optional[int] = None,
    *,
    distinct: bool = False,
    must_use: Optional[Point] = None,
    guard: int = ENUMERATION_GUARD,
) -> Iterator[tuple[Point, ...]]:
    """Stream all tuples (x_1..x_r), x_i from sets[i], solving every row.

    modulus None means exact integer arithmetic.  ``distinct`` keeps only
    pairwise-distinct tuples (pruned along the prefix), ``must_use``
    requires the given point to appear somewhere.  Solutions come out in
    lexicographic order.
    """
    r = len(sets)
    srt = [sorted({tuple(pt) for pt in s}) for s in sets]
    lookup = [set(s) for s in srt]
    if any(not s for s in srt):
        return
    dim = len(srt[0][0])
    for s in srt:
        if any(len(pt) != dim for pt in s):
            raise ValueError("point dimension mismatch")

    eqs = []
    for row in rows:
        if len(row) != r:
            raise ValueError("row width must equal the number of sets")
        if modulus is not None:
            row = tuple(c % modulus for c in row)
        sup = tuple(i for i, c in enumerate(row) if c != 0)
        if sup:  # an all-zero (mod p) row constrains nothing
            eqs.append((tuple(row), sup))
    by_last: dict[int, list] = {}
    for row, sup in eqs:
        by_last.setdefault(sup[-1], []).append((row, sup))

    work = 1
    for v in range(r):
        if v not in by_last:
            work *= len(srt[v])
    if work > guard:
        raise GuardExceeded(f"enumeration would take ~{work} nodes (> {guard})")

    tail_has = [False] * (r + 1)
    if must_use is not None:
        for v in range(r - 1, -1, -1):
            tail_has[v] = tail_has[v + 1] or (must_use in lookup[v])

    x: list[Optional[Point]] = [None] * r

    def residual(row: Sequence[int], sup: Sequence[int]) -> list[int]:
        out = [0] * dim
        for i in sup[:-1]:
            c = row[i]
            xi = x[i]
            for d in range(dim):
                out[d] += c * xi[d]
        return out

    def rec(v: int, used: bool) -> Iterator[tuple[Point, ...]]:
        if v == r:
            if must_use is None or used:
                yield tuple(x)  # type: ignore[arg-type]
            return
        if must_use is not None and not used and not tail_has[v]:
            return
        pinned = by_last.get(v)
        if pinned:
            row, sup = pinned[0]
            cv = row[v]
            rest = residual(row, sup)
            if modulus is not None:
                inv = pow(cv, -1, modulus)
                cand = tuple((-rv * inv) % modulus for rv in rest)
            else:
                vals = []
                for rv in rest:
                    q, rem = divmod(-rv, cv)
                    if rem:
                        return
                    vals.append(q)
                cand = tuple(vals)
            if cand not in lookup[v]:
                return
            for row2, sup2 in pinned[1:]:
                acc = residual(row2, sup2)
                c2 = row2[v]
                for d in range(dim):
                    acc[d] += c2 * cand[d]
                if modulus is not None:
                    if any(a % modulus for a in acc):
                        return
                elif any(acc):
                    return
            if distinct and cand in x[:v]:
                return
            x[v] = cand
            yield from rec(v + 1, used or cand == must_use)
            x[v] = None
        else:
            for cand in srt[v]:
                if distinct and cand in x[:v]:
                    continue
                x[v] = cand
                yield from rec(v + 1, used or cand == must_use)
            x[v] = None

    yield from rec(0, False)


def _as_point_lists(t: FpSystem, sets) -> list[list[Point]]:
    if isinstance(sets, PointSet):
        return [list(sets.points)] * t.r
    sets = list(sets)
    if len(sets) != t.r:
        raise ValueError(f"expected {t.r} candidate sets, got {len(sets)}")
    return [list(PointSet(t.p, _dim_of(s), tuple(s)).points) if not isinstance(s, PointSet) else list(s.points) for s in sets]


def _dim_of(s) -> int:
    for pt in s:
        return len(pt)
    return 1


def enumerate_semishapes(t: FpSystem, sets, limit: Optional[int] = None) -> Iterator[tuple[Point, ...]]:
    """All solutions of t with x_i drawn from sets[i] (or one set for all
    positions), in lexicographic order, optionally capped at ``limit``."""
    cols = _as_point_lists(t, sets)
    it = iter_solutions(t.rows, cols, t.p)
    return itertools.islice(it, limit) if limit is not None else it


def is_strongly_free(t: FpSystem, a) -> bool:
    """No solution within ``a`` except the constant ones."""
    cols = _as_point_lists(t, [a] * t.r if not isinstance(a, PointSet) else a)
    for sol in iter_solutions(t.rows, cols, t.p):
        if any(pt != sol[0] for pt in sol):
            return False
    return True


def is_weakly_free(t: FpSystem, a) -> bool:
    """No solution within ``a`` whose r entries are pairwise distinct."""
    cols = _as_point_lists(t, [a] * t.r if not isinstance(a, PointSet) else a)
    if len(cols[0]) < t.r:  # r distinct entries cannot fit
        return True
    for _ in iter_solutions(t.rows, cols, t.p, distinct=True):
        return False
    return True


# ---------------------------------------------------------------------------
# maximum free set search

class _Best:
    """Monotone best-size record shared across worker tasks."""

    def __init__(self, size: int):
        self.size = size
        self._lock = threading.Lock()

    def update(self, size: int) -> None:
        with self._lock:
            if size > self.size:
                self.size = size

    def get(self) -> int:
        with self._lock:
            return self.size


class _OutOfNodes(Exception):
    pass


def _violates(rows, p, members: list[Point], cand: Point, weak: bool) -> bool:
    """Would adding ``cand`` to the free set ``members`` break freeness?
    Only tuples involving ``cand`` can (the rest were checked before)."""
    cols = [members + [cand]] * len(rows[0])
    if weak:
        for _ in iter_solutions(rows, cols, p, distinct=True, must_use=cand):
            return True
        return False
    for sol in iter_solutions(rows, cols, p, must_use=cand):
        if any(pt != cand for pt in sol):
            return True
    return False


def _search_max_free(t: FpSystem, n: int, weak: bool, workers: Optional[int], node_budget: Optional[int]) -> SearchResult:
    if n < 1:
        raise ValueError("dimension must be >= 1")
    p = t.p
    pts = space_points(p, n)
    N = len(pts)
    if weak and N < t.r:
        # fewer points than positions: no tuple can have r distinct entries
        return SearchResult(N, PointSet(p, n, pts), 0, True)
    workers = workers or 1
    under_guard = N <= SEARCH_GUARD
    budget = node_budget if node_budget is not None else (None if under_guard else DEFAULT_NODE_BUDGET)
    rows = t.rows
    zero = pts[0]

    shared = _Best(1)
    # when budgeted, tasks must not influence each other or results would
    # depend on scheduling; each then prunes only against its own record
    share_pruning = budget is None

    def run_task(second_idx: int) -> tuple[int, Optional[tuple[Point, ...]], int, bool]:
        nodes = 0
        task_best = 0
        task_witness: Optional[tuple[Point, ...]] = None
        local = _Best(1)

        def record() -> int:
            return shared.get() if share_pruning else local.get()

        def note(size: int) -> None:
            shared.update(size)
            local.update(size)

        def spend() -> None:
            nonlocal nodes
            nodes += 1
            if budget is not None and nodes > budget:
                raise _OutOfNodes

        members = [zero]

        def extend(next_idx: int) -> None:
            nonlocal task_best, task_witness
            for idx in range(next_idx, N):
                if len(members) + (N - idx) < record():
                    return  # cannot even tie the best anymore
                spend()
                cand = pts[idx]
                if _violates(rows, p, members, cand, weak):
                    continue
                members.append(cand)
                size = len(members)
                if size > task_best:
                    task_best = size
                    task_witness = tuple(members)
                    note(size)
                extend(idx + 1)
                members.pop()

        truncated = False
        try:
            if len(members) + (N - second_idx) >= record():
                spend()
                cand = pts[second_idx]
                if not _violates(rows, p, members, cand, weak):
                    members.append(cand)
                    task_best = 2
                    task_witness = tuple(members)
                    note(2)
                    extend(second_idx + 1)
                    members.pop()
        except _OutOfNodes:
            truncated = True
        return task_best, task_witness, nodes, truncated

    task_ids = list(range(1, N))
    if workers <= 1:
        results = [run_task(i) for i in task_ids]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_task, task_ids))

    best_size = 1
    witness: tuple[Point, ...] = (zero,)
    nodes_total = 0
    truncated_any = False
    for size, wit, nodes, truncated in results:
        nodes_total += nodes
        truncated_any = truncated_any or truncated
        if size > best_size and wit is not None:
            best_size = size
            witness = wit
    return SearchResult(best_size, PointSet(p, n, witness), nodes_total, not truncated_any)


def max_strongly_free(t: FpSystem, n: int, workers: Optional[int] = None, node_budget: Optional[int] = None) -> SearchResult:
    """Exact maximum size of a strongly free subset of F_p^n with the
    lexicographically least maximum witness (exact up to p^n <= 81; larger
    spaces fall back to a budgeted best-effort with exhaustive=False)."""
    return _search_max_free(t, n, weak=False, workers=workers, node_budget=node_budget)


def max_weakly_free(t: FpSystem, n: int, workers: Optional[int] = None, node_budget: Optional[int] = None) -> SearchResult:
    """Like max_strongly_free but forbidding only pairwise-distinct
    solutions; p^n < r short-circuits to the whole space."""
    return _search_max_free(t, n, weak=True, workers=workers, node_budget=node_budget)


# ---------------------------------------------------------------------------
# colored (matching) freeness and the five-variable W system devices

def is_multicolored_free(t: FpSystem, m: Matching) -> bool:
    """The solutions of t with x_i from column i of m are exactly m's rows."""
    if m.arity != t.r:
        raise ValueError(f"matching arity {m.arity} != system arity {t.r}")
    cols = [list(m.column(i)) for i in range(t.r)]
    found = set(iter_solutions(t.rows, cols, t.p))
    return found == set(m.rows)


_W_ROWS = ((1, -1, -1, 1, 0), (1, 0, -2, 0, 1))


def classify_semishape_W(x: Sequence[Point], p: int) -> str:
    """Class of a W-system solution by its coincidence structure.

    The number of distinct entries determines the class: 5 distinct is
    nondegenerate; 4 forces x1=x4 or x2=x5 (a 4-term progression with one
    repeated label); 3 forces a 3-term progression configuration; 2 forces
    x1=x3=x5, x2=x4; 1 is a constant.  (For p = 3 the extra coincidence
    x1=x4, x2=x5 with three values occurs; it is still a 3-term
    progression configuration, which is why classification goes by
    coincidence count, not by a fixed label list.)
    """
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    pts = [tuple(c % p for c in pt) for pt in x]
    if len(pts) != 5:
        raise ValueError("need a 5-tuple")
    dim = len(pts[0])
    if any(len(pt) != dim for pt in pts):
        raise ValueError("point dimension mismatch")
    for row in _W_ROWS:
        for d in range(dim):
            if sum(c * pt[d] for c, pt in zip(row, pts)) % p:
                raise ValueError("not a solution of the W system")
    x1, x2, x3, x4, x5 = pts
    k = len(set(pts))
    if k == 1:
        return "singleton"
    if k == 2:
        assert x1 == x3 == x5 and x2 == x4, "unexpected two-point labelling"
        return "two-point"
    if k == 3:
        return "3AP"
    if k == 4:
        assert x1 == x4 or x2 == x5, "unexpected 4AP labelling"
        return "4AP"
    return "nondegenerate"


def extendable_pairs(t: FpSystem, sets, i: int, j: int) -> set[tuple[Point, Point]]:
    """All (x_i, x_j) projections of solutions with x_k from sets[k]
    (0-based positions)."""
    if not 0 <= i < t.r or not 0 <= j < t.r or i == j:
        raise ValueError("positions must be distinct and in range")
    cols = _as_point_lists(t, sets)
    return {(sol[i], sol[j]) for sol in iter_solutions(t.rows, cols, t.p)}


def build_colored_subcollection(m: Matching, p: int, n: int) -> Matching:
    """Thin a family of disjoint 3-term progressions, given as rows
    (a, a, a', a', a''), down to a subfamily with no cross extensions.

    Drops the first terms that extend too often (threshold 2*p^n/t, exact
    integer comparison), then greedily keeps the lexicographically least
    surviving first term and discards every first term its extendable
    pairs point at.  The result keeps at least ceil(t^2 / (4 p^n)) rows
    unconditionally; it is multicolored-free whenever the union of the
    family's points is weakly free for the five-variable system (without
    that hypothesis a cross solution can slip through, e.g. the two
    progressions {0,1,2} and {3,4,5} in F_7 admit (3,0,4,1,5)).
    """
    if m.arity != 5:
        raise ValueError("rows must have arity 5")
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    seen: set[Point] = set()
    for row in m.rows:
        a, a2, b, b2, c = [tuple(v % p for v in pt) for pt in row]
        if a != a2 or b != b2:
            raise ValueError("rows must look like (a, a, a', a', a'')")
        if len({a, b, c}) != 3:
            raise ValueError("each progression needs three distinct points")
        for d in range(len(a)):
            if (a[d] - 2 * b[d] + c[d]) % p:
                raise ValueError("row is not a 3-term progression")
        if seen & {a, b, c}:
            raise ValueError("progressions must be pairwise disjoint")
        seen |= {a, b, c}

    t_count = m.size
    space = p**n
    tsys = FpSystem(p, 5, tuple(tuple(c % p for c in row) for row in _W_ROWS))
    cols = [list(m.column(i)) for i in range(5)]
    pairs = extendable_pairs(tsys, cols, 0, 2)
    fanout: dict[Point, list[Point]] = {}
    for xx, yy in sorted(pairs):
        fanout.setdefault(xx, []).append(yy)

    bad = {xx for xx, ys in fanout.items() if len(ys) * t_count >= 2 * space}
    assert 2 * len(bad) <= t_count, "more heavy first-terms than the pair count allows"
    row_by_first = {row[0]: row for row in m.rows}
    row_by_third = {row[2]: row for row in m.rows}
    active = set(row_by_first) - bad
    kept = []
    while active:
        xx = min(active)
        kept.append(row_by_first[xx])
        for yy in fanout.get(xx, ()):  # includes xx's own row
            active.discard(row_by_third[yy][0])
        assert xx not in active, "picked first term must remove itself"
    result = Matching(tuple(kept))
    assert 4 * space * result.size >= t_count * t_count, "kept fewer rows than guaranteed"
    return result
