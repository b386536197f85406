"""Exact sparse linear algebra over the rationals.

Vectors are dicts keyed by arbitrary hashable row labels.  The central object
is ColumnReducer: an incremental echelon form with a caller-supplied pivot
priority, which yields images, nullspace combinations and expressing
certificates.  Pivot rows are chosen greedily by priority, so the pivot set
is the priority-first independent row set of the column span — exactly the
"removable slots" notion a formal-basis normal form style needs.
"""

from __future__ import annotations

from .rationals import Q, ZERO


def vec_add(a: dict, b: dict, factor=None) -> dict:
    out = dict(a)
    for k, v in b.items():
        w = v if factor is None else v * factor
        acc = out.get(k, ZERO) + w
        if acc:
            out[k] = acc
        else:
            out.pop(k, None)
    return out


def vec_scale(a: dict, c) -> dict:
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


class ColumnReducer:
    """Incremental echelon over prioritized row labels.

    Invariant: every stored pivot column was fully reduced against all pivots
    inserted before it, so pivot columns are triangular with respect to
    insertion order.  One forward pass therefore fully reduces any vector.
    """

    def __init__(self, priority):
        self.priority = priority
        self.order = []  # pivot labels, insertion order
        self.pivots = {}  # label -> (column, combination over tags)

    def reduce(self, col: dict, combo: dict | None = None):
        """Fully reduce col; returns (residual, combination) with
        original == residual + sum(combination[tag] * column_tag)."""
        combo = dict(combo or {})
        col = dict(col)
        for label in self.order:
            c = col.get(label)
            if not c:
                continue
            pcol, pcombo = self.pivots[label]
            f = c / pcol[label]
            col = vec_add(col, pcol, -f)
            combo = vec_add(combo, pcombo, f)
        return col, combo

    def add(self, col: dict, tag):
        """Insert a generator column; returns a kernel combination or None.

        A dependent column yields a dict expressing zero:
        sum(kernel[t] * column_t) == 0 with kernel[tag] == 1.
        """
        residual, combo = self.reduce(col)
        if not residual:
            return vec_add({tag: Q(1)}, combo, Q(-1))
        label = min(residual, key=self.priority)
        self.order.append(label)
        self.pivots[label] = (residual, vec_add({tag: Q(1)}, combo, Q(-1)))
        return None

    def pivot_labels(self):
        return sorted(self.order, key=self.priority)

    def eliminate(self, vec: dict, allowed=None):
        """Split vec into (remainder, combination) along the echelon.

        Zeroes vec's entries on every pivot label passing the allowed filter;
        remainder keeps everything else.  The combination is over generator
        tags: removed part == sum(combination[t] * column_t).
        """
        combo: dict = {}
        vec = dict(vec)
        for label in self.order:
            c = vec.get(label)
            if not c:
                continue
            if allowed is not None and not allowed(label):
                continue
            pcol, pcombo = self.pivots[label]
            f = c / pcol[label]
            vec = vec_add(vec, pcol, -f)
            combo = vec_add(combo, pcombo, f)
        return vec, combo


def nullspace(columns, priority):
    """Kernel combinations of a list of (tag, column) pairs."""
    red = ColumnReducer(priority)
    out = []
    for tag, col in columns:
        k = red.add(col, tag)
        if k is not None:
            out.append(k)
    return out


def solve_in_span(columns, priority, target):
    """Express target in the span of (tag, column) pairs, or return None."""
    red = ColumnReducer(priority)
    for tag, col in columns:
        red.add(col, tag)
    residual, combo = red.reduce(target)
    if residual:
        return None
    return combo
