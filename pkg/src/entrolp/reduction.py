"""Symmetry-group validation and the canonical map that fuses joint-entropy
variables under functional-dependency closure and group orbits.

Two subsets share one LP variable when they are connected by any chain of
 (a) dependency-closure steps: S ~ S + dependent whenever given is inside S,
 (b) permutation images: S ~ g(S) for a group row g.
The canonical representative of a class is its numerically smallest bitmask
(bit 0 = first declared RV), so the map is order-independent and idempotent.

The map is built with a vectorized label-propagation sweep over all 2^n
subsets; construction is deterministic and safe to reuse across threads once
built.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SymmetryError

GROUP_OK_MESSAGE = "Symmetries have been successfully checked."


@dataclass(frozen=True)
class GroupCheckReport:
    ok: bool
    message: str
    missing: tuple | None = None  # a composed permutation absent from the rows


def check_group(sym, rv_names=None):
    """Verify the symmetry rows contain the identity and are closed under
    composition.  Returns a report; raise-on-failure is the caller's choice.
    """
    rows = [tuple(p) for p in sym.perms]
    if not rows:
        return GroupCheckReport(ok=True, message=GROUP_OK_MESSAGE)
    n = len(rows[0])
    have = set(rows)
    ident = tuple(range(n))
    if ident not in have:
        return GroupCheckReport(
            ok=False,
            message=_missing_message(ident, rv_names),
            missing=ident,
        )
    for g in rows:
        for h in rows:
            comp = tuple(g[h[j]] for j in range(n))
            if comp not in have:
                return GroupCheckReport(
                    ok=False,
                    message=_missing_message(comp, rv_names),
                    missing=comp,
                )
    return GroupCheckReport(ok=True, message=GROUP_OK_MESSAGE)


def _missing_message(perm, rv_names):
    if rv_names:
        shown = "[" + ",".join(rv_names[p] for p in perm) + "]"
    else:
        shown = "[" + ",".join(str(p) for p in perm) + "]"
    return f"Bad Symmetry -- missing permutation {shown}"


def dependency_closure(s, deps):
    """Smallest superset of ``s`` such that every dependency whose given set
    is contained is also fully contained.  Monotone fixpoint on a finite
    lattice, so it always terminates."""
    t = s
    changed = True
    while changed:
        changed = False
        for d in deps:
            if t & d.given == d.given and t | d.dependent != t:
                t |= d.dependent
                changed = True
    return t


@dataclass(frozen=True)
class ReductionMap:
    """Canonical-representative map over all 2^n subsets.

    ``canon[m]`` is the smallest bitmask in the class of ``m``;
    ``index_of`` assigns dense LP-column indices to the nonempty canonical
    representatives in ascending bitmask order (the empty class has no
    column: its entropy is identically zero).
    """

    n: int
    canon: np.ndarray
    index_of: dict
    count_before: int
    count_after: int  # distinct classes, the empty class included

    def col_of(self, mask):
        """Dense column of a subset's class, or -1 for the empty class."""
        return self.index_of.get(int(self.canon[mask]), -1)

    @property
    def reps(self):
        """Nonempty canonical representatives, ascending."""
        return sorted(self.index_of, key=self.index_of.get)


def closure_table(n, deps):
    """Vectorized dependency closure of every subset at once."""
    f = np.arange(1 << n, dtype=np.int64)
    while True:
        changed = False
        for d in deps:
            sel = (f & d.given) == d.given
            merged = f[sel] | d.dependent
            if not np.array_equal(merged, f[sel]):
                f[sel] = merged
                changed = True
        if not changed:
            return f


def permutation_image_table(n, perm):
    """Image of every subset under one permutation row."""
    s = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n, dtype=np.int64)
    for j in range(n):
        out |= ((s >> j) & 1) << int(perm[j])
    return out


def build_reduction_map(pd):
    """Build the canonical map for a problem description.

    Runs min-label propagation until no label changes; scatter steps make the
    result exact even when closure and orbit steps interact, or when the
    provided rows only generate a group rather than being one.
    """
    n = pd.n
    nsub = 1 << n
    fix = closure_table(n, pd.deps)
    pmaps = [permutation_image_table(n, p) for p in pd.sym.perms]
    labels = np.arange(nsub, dtype=np.int64)
    while True:
        before = labels.copy()
        for pm in pmaps:
            np.minimum(labels, labels[pm], out=labels)
            np.minimum.at(labels, pm, labels)
        np.minimum(labels, labels[fix], out=labels)
        np.minimum.at(labels, fix, labels)
        if np.array_equal(labels, before):
            break
    reps = np.unique(labels)
    index_of = {}
    k = 0
    for r in reps.tolist():
        if r != 0:
            index_of[r] = k
            k += 1
    return ReductionMap(
        n=n,
        canon=labels,
        index_of=index_of,
        count_before=nsub,
        count_after=len(reps),
    )


def reduction_report_lines(rmap, n_al):
    """The two count lines.  The 'after' figure is the number of variables
    the reduced LP works with: nonempty entropy classes plus the additional
    LP variables."""
    after = rmap.count_after - 1 + n_al
    return [
        f"Total number of elements before reduction: {rmap.count_before}",
        f"Total number of elements after reduction: {after}",
    ]


def require_valid_group(pd):
    """Run the group check and raise on failure (used by the CS option)."""
    report = check_group(pd.sym, pd.rv_names)
    if not report.ok:
        raise SymmetryError(report.message)
    return report
