"""Correlation analysis over measure/score tables.

Pearson is the primary statistic; two-sided p-values come from the exact
Student-t relation t = r * sqrt((n-2)/(1-r^2)) evaluated through the
regularized incomplete beta function. Spearman (rank Pearson with average
ranks) is available as a secondary method. Missing cells are handled by
pairwise deletion unless complete-row filtering is requested.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import betainc

from .errors import DomainError, ParameterError


@dataclass
class ResultsTable:
    """Rows keyed by image id with named numeric columns; NaN = missing."""

    columns: list[str]
    rows: dict[str, dict[str, float]] = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.columns)) != len(self.columns):
            raise ParameterError("column names must be unique")

    def add_row(self, row_id: str, values: dict[str, float | None]) -> None:
        if row_id in self.rows:
            raise ParameterError(f"duplicate row id {row_id!r}")
        clean = {}
        for name, value in values.items():
            if name not in self.columns:
                raise ParameterError(f"unknown column {name!r}")
            if value is not None:
                clean[name] = float(value)
        self.rows[row_id] = clean

    def column(self, name: str) -> np.ndarray:
        """Column values in row order, NaN where missing."""
        if name not in self.columns:
            raise ParameterError(f"no such column: {name!r}")
        return np.array([row.get(name, math.nan) for row in self.rows.values()])

    def ids(self) -> list[str]:
        return list(self.rows.keys())

    def filter_rows(self, predicate) -> "ResultsTable":
        out = ResultsTable(columns=list(self.columns))
        for row_id, row in self.rows.items():
            if predicate(row_id, row):
                out.rows[row_id] = dict(row)
        return out


def _paired(xs, ys) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ParameterError("series must be 1-D and of equal length")
    keep = np.isfinite(x) & np.isfinite(y)
    return x[keep], y[keep]


def pearson(xs, ys) -> tuple[float, float]:
    """Product-moment correlation with a two-sided p-value.

    Pairs with a missing value on either side are deleted. Needs n >= 3
    and non-constant series.
    """
    x, y = _paired(xs, ys)
    n = x.size
    if n < 3:
        raise ParameterError(f"need at least 3 paired observations, got {n}")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise DomainError("correlation is undefined for a constant series")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    return r, _t_p_value(r, n)


def _t_p_value(r: float, n: int) -> float:
    """Two-sided p for the null of zero correlation: Student t with n-2
    degrees of freedom, via the regularized incomplete beta function."""
    dof = n - 2
    if abs(r) >= 1.0:
        return 0.0
    t2 = r * r * dof / (1.0 - r * r)
    return float(betainc(dof / 2.0, 0.5, dof / (dof + t2)))


def rankdata_average(values: np.ndarray) -> np.ndarray:
    """Ranks 1..n with ties sharing their average rank."""
    values = np.asarray(values, dtype=np.float64)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size, dtype=np.float64)
    sorted_vals = values[order]
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(xs, ys) -> tuple[float, float]:
    """Rank correlation: Pearson over average ranks."""
    x, y = _paired(xs, ys)
    if x.size < 3:
        raise ParameterError(f"need at least 3 paired observations, got {x.size}")
    return pearson(rankdata_average(x), rankdata_average(y))


@dataclass
class CorrelationMatrix:
    columns: list[str]
    r: np.ndarray  # full symmetric matrix, diagonal 1
    p: np.ndarray
    score_column: str | None = None
    best_column: str | None = None  # max |r| against score_column

    def cell(self, a: str, b: str) -> tuple[float, float]:
        i, j = self.columns.index(a), self.columns.index(b)
        return float(self.r[i, j]), float(self.p[i, j])


def correlation_matrix(
    table: ResultsTable,
    columns: list[str],
    score_column: str | None = None,
    method=pearson,
) -> CorrelationMatrix:
    """Pairwise correlations with per-pair deletion of missing values.

    When score_column is given it is included in the matrix and the
    non-score column with the largest |r| against it is flagged.
    """
    names = list(columns)
    if score_column is not None and score_column not in names:
        names.append(score_column)
    series = {}
    for name in names:
        series[name] = table.column(name)  # raises naming a missing column
    k = len(names)
    r = np.eye(k)
    p = np.zeros((k, k))
    for i in range(k):
        for j in range(i):
            rij, pij = method(series[names[i]], series[names[j]])
            r[i, j] = r[j, i] = rij
            p[i, j] = p[j, i] = pij
    best = None
    if score_column is not None:
        s = names.index(score_column)
        candidates = [(abs(r[i, s]), names[i]) for i in range(k) if i != s]
        best = max(candidates)[1] if candidates else None
    return CorrelationMatrix(columns=names, r=r, p=p, score_column=score_column, best_column=best)


def render_matrix_text(matrix: CorrelationMatrix) -> str:
    """Aligned lower-triangular text rendering; the best measure against
    the score column is starred."""
    names = matrix.columns
    width = max(len(n) for n in names) + 1
    cell_w = max(7, width)
    lines = [" " * width + "".join(f"{n:>{cell_w}}" for n in names)]
    for i, name in enumerate(names):
        cells = []
        for j in range(len(names)):
            if j > i:
                cells.append(" " * cell_w)
            elif j == i:
                cells.append(f"{'1':>{cell_w}}")
            else:
                cells.append(f"{matrix.r[i, j]:>{cell_w}.3f}")
        marker = " *" if matrix.best_column == name else ""
        lines.append(f"{name:<{width}}" + "".join(cells) + marker)
    if matrix.best_column is not None:
        lines.append(
            f"highest |r| vs {matrix.score_column}: {matrix.best_column} "
            f"(r = {matrix.cell(matrix.best_column, matrix.score_column)[0]:.3f})"
        )
    return "\n".join(lines)


def render_matrix_markdown(matrix: CorrelationMatrix) -> str:
    """Markdown table shaped like the lower-triangular report tables."""
    names = matrix.columns
    header = "| | " + " | ".join(names) + " |"
    rule = "|---" * (len(names) + 1) + "|"
    lines = [header, rule]
    for i, name in enumerate(names):
        cells = []
        for j in range(len(names)):
            if j > i:
                cells.append("")
            elif j == i:
                cells.append("1")
            else:
                value = f"{matrix.r[i, j]:.3f}"
                if matrix.best_column in (name, names[j]) and matrix.score_column in (name, names[j]):
                    value = f"**{value}**"
                cells.append(value)
        lines.append(f"| {name} | " + " | ".join(cells) + " |")
    return "\n".join(lines)


def write_matrix_csv(matrix: CorrelationMatrix, path) -> None:
    """Long-form CSV: column_a, column_b, r, p for the lower triangle."""
    with open(Path(path), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["column_a", "column_b", "r", "p"])
        for i, a in enumerate(matrix.columns):
            for j in range(i):
                writer.writerow(
                    [a, matrix.columns[j], f"{matrix.r[i, j]:.9g}", f"{matrix.p[i, j]:.9g}"]
                )
