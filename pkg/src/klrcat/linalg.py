"""Sparse exact linear algebra over an arbitrary field.

Rows are dicts column -> coefficient.  Coefficients only need the arithmetic
dunders and truthiness (Fraction for rational work, RationalFnQ for work over
the field of rational functions in q).  Elimination is plain fraction-free-in-
spirit Gaussian reduction with normalized pivots and a deterministic column
order supplied by the caller, so ranks, solved coordinates, and reported
bases never depend on insertion timing.
"""

from __future__ import annotations

from fractions import Fraction


class SparseRREF:
    """Incremental reduced row echelon form.

    Columns are compared through `col_key` (defaults to the natural order of
    the column labels).  Each added row is reduced against current pivots; a
    surviving row is normalized and recorded as a new pivot.  With
    `track=True` every pivot row also carries its expression in terms of the
    originally added rows, enabling membership certificates.
    """

    def __init__(self, col_key=None, track=False):
        self.col_key = col_key or (lambda c: c)
        self.track = track
        self.pivots = {}  # col -> row dict (row[col] == 1)
        self.combos = {}  # col -> dict original_row_index -> coeff
        self.n_added = 0

    @property
    def rank(self):
        return len(self.pivots)

    def _reduce(self, row, combo=None):
        row = dict(row)
        while True:
            hit = None
            for c in row:
                if c in self.pivots:
                    hit = c
                    break
            if hit is None:
                break
            f = row[hit]
            prow = self.pivots[hit]
            for c, v in prow.items():
                w = row.get(c, None)
                w = (w - f * v) if w is not None else -f * v
                if w:
                    row[c] = w
                else:
                    row.pop(c, None)
            if combo is not None:
                for k, v in self.combos[hit].items():
                    w = combo.get(k, None)
                    w = (w - f * v) if w is not None else -f * v
                    if w:
                        combo[k] = w
                    else:
                        combo.pop(k, None)
        return row

    def add_row(self, row) -> bool:
        """Reduce `row` and absorb it; True iff the rank grew."""
        idx = self.n_added
        self.n_added += 1
        combo = {idx: _one_like(row)} if self.track and row else None
        row = self._reduce(row, combo)
        if not row:
            return False
        piv = min(row, key=self.col_key)
        f = row[piv]
        row = {c: v / f for c, v in row.items()}
        if combo is not None:
            combo = {k: v / f for k, v in combo.items()}
        # back-substitute into existing pivot rows
        for pc, prow in self.pivots.items():
            g = prow.get(piv)
            if g:
                for c, v in row.items():
                    w = prow.get(c, None)
                    w = (w - g * v) if w is not None else -g * v
                    if w:
                        prow[c] = w
                    else:
                        prow.pop(c, None)
                if self.track:
                    pcombo = self.combos[pc]
                    for k, v in combo.items():
                        w = pcombo.get(k, None)
                        w = (w - g * v) if w is not None else -g * v
                        if w:
                            pcombo[k] = w
                        else:
                            pcombo.pop(k, None)
        self.pivots[piv] = row
        if self.track:
            self.combos[piv] = combo
        return True

    def residual(self, row):
        """The reduction of `row` against current pivots (no absorption)."""
        return self._reduce(dict(row))

    def contains(self, row) -> bool:
        return not self._reduce(dict(row))

    def solve(self, row):
        """Coefficients expressing `row` over the added rows, or None.

        Requires track=True.
        """
        if not self.track:
            raise RuntimeError("solve requires coefficient tracking")
        combo = {}
        row = dict(row)
        while True:
            hit = None
            for c in row:
                if c in self.pivots:
                    hit = c
                    break
            if hit is None:
                break
            f = row[hit]
            for c, v in self.pivots[hit].items():
                w = row.get(c, None)
                w = (w - f * v) if w is not None else -f * v
                if w:
                    row[c] = w
                else:
                    row.pop(c, None)
            for k, v in self.combos[hit].items():
                w = combo.get(k, None)
                w = (w + f * v) if w is not None else f * v
                if w:
                    combo[k] = w
                else:
                    combo.pop(k, None)
        if row:
            return None
        return combo

    def pivot_columns(self):
        return sorted(self.pivots, key=self.col_key)


def _one_like(row):
    for v in row.values():
        return v / v
    return Fraction(1)


def rank_of_rows(rows, col_key=None) -> int:
    r = SparseRREF(col_key=col_key)
    for row in rows:
        r.add_row(row)
    return r.rank


def quotient_basis(all_cols, rows, col_key=None):
    """Columns of the ambient space not hit by a pivot of span(rows).

    The returned labels are the canonical basis of ambient/span in the fixed
    column order, together with the RREF used (for later reduction of
    arbitrary vectors to quotient coordinates).
    """
    r = SparseRREF(col_key=col_key)
    for row in rows:
        r.add_row(row)
    piv = set(r.pivots)
    keep = [c for c in sorted(all_cols, key=r.col_key) if c not in piv]
    return keep, r


def matrix_rank_dense(mat) -> int:
    """Rank of a dense list-of-lists matrix with field entries."""
    rows = []
    for i, row in enumerate(mat):
        rows.append({j: v for j, v in enumerate(row) if v})
    return rank_of_rows(rows)
