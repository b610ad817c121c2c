"""Dominant equations, dominant reductions, and the lower bounds they buy.

A balanced equation is *dominant* when one variable's coefficient opposes
all the others: either exactly one coefficient is positive, or exactly one
is negative.  Writing it as b'_j x_j = sum b'_i x_i with every b'_i >= 0
(the standard form), b'_j is the dominant coefficient.  Two-sided
equations b*x_i - b*x_j = 0 are dominant from both ends.

Reducing by a dominant subsystem S' contracts each connected component of
S'-variables to a single merged variable and drops the equations of S'
(they become 0 = 0 because every equation is balanced).  A sequence of
such reductions ending at the empty system in one variable yields b~, the
maximum dominant coefficient used along the way, which converts into
asymptotic lower bounds on free-set sizes via box/sphere constructions.
"""
from __future__ import annotations

import itertools
import re
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

from .arith import is_prime
from .eqsys import ZEquation, ZSystem, subsystem
from .errors import GuardExceeded
from .structure import build_hypergraph, is_irreducible

_EXHAUSTIVE_GUARD = 12  # max L for exhaustive strategy


@dataclass(frozen=True)
class Dominance:
    """Witnesses of dominance for one equation: 0-based variable positions
    (two for b*x_i - b*x_j, else one) and the dominant coefficient."""

    indices: tuple[int, ...]
    coefficient: int


@dataclass(frozen=True)
class StandardForm:
    """b'_j x_j = sum of b'_i x_i with all shown coefficients positive."""

    index: int                              # 0-based dominant variable
    coefficient: int                        # b'_j > 0
    rhs: tuple[tuple[int, int], ...]        # ((position, coefficient), ...) ascending


@dataclass(frozen=True)
class DominanceReport:
    table: tuple[Optional[Dominance], ...]
    dominant_equations: tuple[int, ...]                     # 0-based equation indices
    maximal: tuple[int, ...]                                # == dominant_equations
    irreducible_subsystems: tuple[tuple[tuple[int, ...], int], ...]
    subset_enumeration_complete: bool


@dataclass(frozen=True)
class ReductionStep:
    subsystem: tuple[int, ...]                  # equation indices into the step's input
    coefficient: int                            # max dominant coefficient of the subsystem
    merge_map: tuple[tuple[str, str], ...]      # (old name, new name), merged variables only
    result: ZSystem


@dataclass(frozen=True)
class ReductionTrace:
    initial: ZSystem
    steps: tuple[ReductionStep, ...]

    @property
    def terminal(self) -> ZSystem:
        return self.steps[-1].result if self.steps else self.initial

    @property
    def terminated(self) -> bool:
        t = self.terminal
        return t.L == 0 and t.r == 1

    @property
    def b_tilde(self) -> int:
        return max((s.coefficient for s in self.steps), default=1)


@dataclass(frozen=True)
class LowerBoundReport:
    """Asymptotic lower-bound base: the free-set maximum is >= base^n once
    n is large enough depending on p (never a finite-n guarantee)."""

    kind: str                       # "strong" | "weak"
    p: int
    b: int
    base: float
    epsilon: Optional[float]
    asymptotic: bool
    floor_term: Optional[int]       # floor((p + b - 1) / b) for the strong kind
    simple_base: Optional[float]    # p/b when b >= 2


def dominance_of(eq: ZEquation) -> Optional[Dominance]:
    """Dominance witnesses of a balanced equation, or None."""
    if not eq.is_balanced:
        raise ValueError("equation is not balanced")
    pos = [i for i, c in enumerate(eq.coeffs) if c > 0]
    neg = [i for i, c in enumerate(eq.coeffs) if c < 0]
    if len(pos) == 1 and len(neg) == 1:
        # b x_i - b x_j: dominant from both ends (coefficients match by balance)
        i, j = sorted((pos[0], neg[0]))
        return Dominance((i, j), abs(eq.coeffs[pos[0]]))
    if len(pos) == 1:
        return Dominance((pos[0],), eq.coeffs[pos[0]])
    if len(neg) == 1:
        return Dominance((neg[0],), -eq.coeffs[neg[0]])
    return None


def standard_form(eq: ZEquation) -> StandardForm:
    """Standard form of a dominant equation; two-sided ties pick the
    smaller index as the dominant variable."""
    dom = dominance_of(eq)
    if dom is None:
        raise ValueError("equation is not dominant")
    j = min(dom.indices)
    sign = 1 if eq.coeffs[j] > 0 else -1
    rhs = tuple((i, -sign * c) for i, c in enumerate(eq.coeffs) if i != j and c != 0)
    sf = StandardForm(j, sign * eq.coeffs[j], rhs)
    assert sf.coefficient == sum(c for _, c in sf.rhs), "balance lost in standard form"
    return sf


def render_standard(sf: StandardForm, names: tuple[str, ...]) -> str:
    def term(i: int, c: int) -> str:
        return names[i] if c == 1 else f"{c}{names[i]}"

    right = " + ".join(term(i, c) for i, c in sf.rhs)
    return f"{term(sf.index, sf.coefficient)} = {right}"


def dominant_subsystems(s: ZSystem) -> DominanceReport:
    """Per-equation dominance table, the maximal dominant subsystem, and
    which dominant subsystems are irreducible in the original r variables.

    All nonempty subsets are inspected when at most 16 equations are
    dominant; beyond that only singletons and the maximal subsystem are,
    and the completeness flag turns off.
    """
    table = []
    for eq in s.equations:
        if not eq.is_balanced:
            raise ValueError("system must be balanced")
        table.append(dominance_of(eq))
    dom = tuple(i for i, d in enumerate(table) if d is not None)
    if not dom:
        return DominanceReport(tuple(table), (), (), (), True)
    complete = len(dom) <= 16
    if complete:
        candidates = []
        for size in range(1, len(dom) + 1):
            candidates.extend(itertools.combinations(dom, size))
    else:
        candidates = [(i,) for i in dom]
        if len(dom) > 1:
            candidates.append(dom)
    irreducible = []
    for subset in candidates:
        sub = subsystem(s, subset)
        ok, _ = is_irreducible(build_hypergraph(sub))
        if ok:
            coeff = max(table[i].coefficient for i in subset)
            irreducible.append((tuple(subset), coeff))
    irreducible.sort(key=lambda t: (len(t[0]), t[0]))
    return DominanceReport(tuple(table), dom, dom, tuple(irreducible), complete)


# ---------------------------------------------------------------------------
# merged-variable labels

_PLAIN = re.compile(r"^x(\d+)$")
_MERGED = re.compile(r"^x_\{(\d+(?:_\d+)*)\}$")


def _atoms(name: str) -> tuple[int, ...]:
    m = _PLAIN.match(name)
    if m:
        return (int(m.group(1)),)
    m = _MERGED.match(name)
    if m:
        return tuple(int(a) for a in m.group(1).split("_"))
    raise ValueError(f"cannot merge variable with non-canonical name {name!r}")


def _merged_name(atom_sets: list[tuple[int, ...]]) -> str:
    atoms = sorted(set(itertools.chain.from_iterable(atom_sets)))
    if len(atoms) == 1:
        return f"x{atoms[0]}"
    return "x_{" + "_".join(str(a) for a in atoms) + "}"


def _reduce_detailed(s: ZSystem, sub: tuple[int, ...]) -> tuple[ZSystem, tuple[tuple[str, str], ...], int]:
    if not sub:
        raise ValueError("subsystem must be nonempty")
    sub = tuple(sorted(set(sub)))
    doms = []
    for i in sub:
        if not 0 <= i < s.L:
            raise IndexError(f"equation index {i} out of range")
        d = dominance_of(s.equations[i])
        if d is None:
            raise ValueError(f"equation {i} is not dominant")
        doms.append(d)
    coefficient = max(d.coefficient for d in doms)

    sub_sys = subsystem(s, sub)
    h = build_hypergraph(sub_sys)
    comp_of: dict[int, int] = {}
    for ci, comp in enumerate(h.components):
        for v in comp:
            comp_of[v] = ci

    # new variable order: untouched variables keep relative order, each
    # merged component sits at the position of its smallest member
    slots: list[tuple[int, object]] = []
    for v in range(s.r):
        if v in comp_of:
            comp = h.components[comp_of[v]]
            if v == comp[0]:
                slots.append((v, comp))
        else:
            slots.append((v, v))
    new_names: list[str] = []
    old_to_new: dict[int, int] = {}
    merge_map: list[tuple[str, str]] = []
    for new_idx, (_, what) in enumerate(slots):
        if isinstance(what, tuple):
            name = _merged_name([_atoms(s.names[v]) for v in what])
            for v in what:
                old_to_new[v] = new_idx
                merge_map.append((s.names[v], name))
        else:
            name = s.names[what]
            old_to_new[what] = new_idx
        new_names.append(name)

    new_r = len(slots)
    assert new_r == s.r - (len(h.vertices) - len(h.components)), "variable bookkeeping broke"

    new_eqs = []
    for eq in s.equations:
        row = [0] * new_r
        for i, c in enumerate(eq.coeffs):
            row[old_to_new[i]] += c
        nz = [c for c in row if c != 0]
        if not nz:
            continue  # 0 = 0, dropped
        # a single surviving term would mean c * x_K = 0, impossible for
        # balanced input since the row sum is preserved by merging
        assert len(nz) >= 2, "balanced equation collapsed to a single term"
        new_eqs.append(ZEquation(tuple(row)))
    return ZSystem(new_r, tuple(new_eqs), tuple(new_names)), tuple(merge_map), coefficient


def dominant_reduce(s: ZSystem, sub: tuple[int, ...] | list[int]) -> ZSystem:
    """Contract the connected components of the dominant subsystem ``sub``
    (0-based equation indices) and drop the 0 = 0 rows that result."""
    reduced, _, _ = _reduce_detailed(s, tuple(sub))
    return reduced


def _is_terminal(s: ZSystem) -> bool:
    return s.L == 0 and s.r == 1


def _dominant_indices(s: ZSystem) -> tuple[int, ...]:
    return tuple(i for i, eq in enumerate(s.equations) if dominance_of(eq) is not None)


def reduction_sequence(
    s: ZSystem, strategy: str = "greedy", workers: int = 1
) -> Optional[ReductionTrace]:
    """A sequence of dominant reductions ending at the one-variable empty
    system, or None when no such sequence exists.

    greedy: always reduce by the maximal dominant subsystem (all dominant
    equations at once).  exhaustive: search all subsystem choices (guarded
    by L <= 12) and return the trace minimizing (b~, #steps, lexicographic
    step encoding); ties are schedule-independent for any worker count.
    """
    for eq in s.equations:
        if not eq.is_balanced:
            raise ValueError("system must be balanced")
    if strategy == "greedy":
        current = s
        steps: list[ReductionStep] = []
        while not _is_terminal(current):
            dom = _dominant_indices(current)
            if not dom:
                return None
            reduced, merge_map, coeff = _reduce_detailed(current, dom)
            steps.append(ReductionStep(dom, coeff, merge_map, reduced))
            current = reduced
        return ReductionTrace(s, tuple(steps))
    if strategy != "exhaustive":
        raise ValueError("strategy must be 'greedy' or 'exhaustive'")
    if s.L > _EXHAUSTIVE_GUARD:
        raise GuardExceeded(f"exhaustive strategy guarded by L <= {_EXHAUSTIVE_GUARD}")

    best_lock = threading.Lock()
    best: list = [None]  # (b_tilde, nsteps, encoding, steps)

    def subsets_of(dom: tuple[int, ...]):
        for size in range(1, len(dom) + 1):
            yield from itertools.combinations(dom, size)

    def dfs(current: ZSystem, steps: tuple[ReductionStep, ...], running: int, encoding: tuple):
        if _is_terminal(current):
            key = (running, len(steps), encoding)
            with best_lock:
                if best[0] is None or key < best[0][:3]:
                    best[0] = (running, len(steps), encoding, steps)
            return
        dom = _dominant_indices(current)
        if not dom or current.L == 0:
            return
        for subset in subsets_of(dom):
            coeff = max(dominance_of(current.equations[i]).coefficient for i in subset)
            new_running = max(running, coeff)
            with best_lock:
                cut = best[0] is not None and new_running > best[0][0]
            if cut:
                continue
            reduced, merge_map, _ = _reduce_detailed(current, subset)
            dfs(
                reduced,
                steps + (ReductionStep(subset, coeff, merge_map, reduced),),
                new_running,
                encoding + (subset,),
            )

    if _is_terminal(s):
        return ReductionTrace(s, ())
    dom0 = _dominant_indices(s)
    if not dom0 or s.L == 0:
        return None
    first_choices = list(subsets_of(dom0))

    def run_first(subset):
        coeff = max(dominance_of(s.equations[i]).coefficient for i in subset)
        reduced, merge_map, _ = _reduce_detailed(s, subset)
        dfs(reduced, (ReductionStep(subset, coeff, merge_map, reduced),), coeff, (subset,))

    if workers <= 1:
        for subset in first_choices:
            run_first(subset)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_first, first_choices))
    if best[0] is None:
        return None
    return ReductionTrace(s, best[0][3])


def lower_bound_strong(trace: ReductionTrace, p: int, epsilon: float = 1.0 / 16) -> LowerBoundReport:
    """Asymptotic base ((1-eps) * floor((p + b~ - 1)/b~)) from a
    terminating reduction; also carries the plain p/b~ form when b~ >= 2."""
    if not trace.terminated:
        raise ValueError("trace does not end at the one-variable empty system")
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    b = trace.b_tilde
    if p <= b:
        raise ValueError(f"need p > b~ (p={p}, b~={b})")
    floor_term = (p + b - 1) // b
    base = (1.0 - epsilon) * floor_term
    simple = p / b if b >= 2 else None
    return LowerBoundReport("strong", p, b, base, epsilon, True, floor_term, simple)


def lower_bound_weak(s: ZSystem, p: int) -> Optional[LowerBoundReport]:
    """Asymptotic base p/b from any single dominant equation with
    coefficient 2 <= b < p (smallest such b), or None."""
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    candidates = []
    for eq in s.equations:
        if not eq.is_balanced:
            raise ValueError("system must be balanced")
        d = dominance_of(eq)
        if d is not None and d.coefficient >= 2 and p > d.coefficient:
            candidates.append(d.coefficient)
    if not candidates:
        return None
    b = min(candidates)
    return LowerBoundReport("weak", p, b, p / b, None, True, None, p / b)
