"""Exact sparse Gaussian elimination over the rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping


class SparseRREF:
    """Incrementally maintained reduced row echelon form.

    Rows are ``{column: coefficient}`` dicts.  Every stored pivot row has a
    leading 1 in its pivot column and zeros in every other pivot column.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, dict[int, Fraction]] = {}

    def _reduce(self, row: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out = {c: Fraction(v) for c, v in row.items() if v}
        for c in [c for c in out if c in self.pivots]:
            coef = out.get(c)
            if not coef:
                continue
            for cc, vv in self.pivots[c].items():
                nv = out.get(cc, 0) - coef * vv
                if nv:
                    out[cc] = nv
                else:
                    out.pop(cc, None)
        return out

    def add(self, row: Mapping[int, Fraction]) -> bool:
        """Insert a row; return True when it increased the rank."""
        red = self._reduce(row)
        if not red:
            return False
        lead = min(red)
        inv = 1 / red[lead]
        red = {c: v * inv for c, v in red.items()}
        for prow in self.pivots.values():
            coef = prow.get(lead)
            if coef:
                for cc, vv in red.items():
                    nv = prow.get(cc, 0) - coef * vv
                    if nv:
                        prow[cc] = nv
                    else:
                        prow.pop(cc, None)
        self.pivots[lead] = red
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def nullspace(self) -> list[list[Fraction]]:
        free = [c for c in range(self.ncols) if c not in self.pivots]
        basis = []
        for f in free:
            vec = [Fraction(0)] * self.ncols
            vec[f] = Fraction(1)
            for pc, prow in self.pivots.items():
                vec[pc] = -prow.get(f, Fraction(0))
            basis.append(vec)
        return basis


def nullspace(rows: Iterable[Mapping[int, Fraction]], ncols: int) -> list[list[Fraction]]:
    solver = SparseRREF(ncols)
    for row in rows:
        solver.add(row)
    return solver.nullspace()
