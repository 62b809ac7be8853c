"""Square 0-1 matrices viewed as bipartite graphs, plus the dense text format."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching


class InfeasibleInstanceError(ValueError):
    """The instance has no perfect matching, so its permanent is zero."""


class MatrixFormatError(ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


@dataclass(frozen=True, eq=False)
class Instance:
    """Adjacency matrix of a bipartite graph with n nodes per side.

    Row ``i`` is left node ``i`` and column ``j`` is right node ``j``.
    The stored matrix is read-only; row and column sums are cached.
    """

    adj: np.ndarray
    row_sums: np.ndarray = field(init=False)
    col_sums: np.ndarray = field(init=False)

    def __post_init__(self):
        a = np.array(self.adj, dtype=np.int8, copy=True)
        a.setflags(write=False)
        r = a.sum(axis=1, dtype=np.int64)
        c = a.sum(axis=0, dtype=np.int64)
        r.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "adj", a)
        object.__setattr__(self, "row_sums", r)
        object.__setattr__(self, "col_sums", c)

    @classmethod
    def from_array(cls, a) -> Instance:
        return cls(check_adjacency(a))

    @classmethod
    def identity(cls, n: int) -> Instance:
        return cls(np.eye(n, dtype=np.int8))

    @classmethod
    def ones(cls, n: int) -> Instance:
        return cls(np.ones((n, n), dtype=np.int8))

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    @property
    def min_degree(self) -> int:
        return int(min(self.row_sums.min(), self.col_sums.min()))

    def has_zero_line(self) -> bool:
        """True when some row or column is empty."""
        return bool((self.row_sums == 0).any() or (self.col_sums == 0).any())

    def has_perfect_matching(self) -> bool:
        if self.has_zero_line():
            return False
        match = maximum_bipartite_matching(csr_matrix(self.adj), perm_type="column")
        return bool((match >= 0).all())

    def column_rows(self) -> list[list[int]]:
        """For every column, the sorted list of rows holding a 1."""
        return [np.flatnonzero(self.adj[:, j]).tolist() for j in range(self.n)]

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return np.array_equal(self.adj, other.adj)

    def __hash__(self):
        return hash(self.adj.tobytes())

    def __repr__(self):
        return f"Instance(n={self.n}, edges={int(self.row_sums.sum())})"


def check_adjacency(a) -> np.ndarray:
    """Validate a square 0-1 matrix and return it as an int8 array."""
    arr = np.asarray(a)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise ValueError("matrix must have at least one row")
    if arr.dtype == bool:
        return arr.astype(np.int8)
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("matrix entries must be 0 or 1")
    return arr.astype(np.int8)


def check_feasible(inst: Instance) -> None:
    """Raise InfeasibleInstanceError if the permanent is structurally zero."""
    if inst.has_zero_line():
        raise InfeasibleInstanceError("permanent is zero: instance has an empty row or column")
    if not inst.has_perfect_matching():
        raise InfeasibleInstanceError("permanent is zero: instance has no perfect matching")


def parse_matrix(text: str) -> Instance:
    """Parse the dense format: ``n`` on the first line, then n rows of n tokens."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise MatrixFormatError("empty input", line=1)
    header = lines[0].split()
    if len(header) != 1:
        raise MatrixFormatError("header must be a single integer n", line=1)
    try:
        n = int(header[0])
    except ValueError:
        raise MatrixFormatError(f"header {header[0]!r} is not an integer", line=1, column=1) from None
    if n < 1:
        raise MatrixFormatError("n must be positive", line=1, column=1)
    body = lines[1:]
    if len(body) != n:
        raise MatrixFormatError(f"expected {n} matrix rows, found {len(body)}", line=len(lines) + 1)
    adj = np.zeros((n, n), dtype=np.int8)
    for i, raw in enumerate(body):
        lineno = i + 2
        tokens = raw.split()
        if len(tokens) != n:
            raise MatrixFormatError(f"expected {n} tokens, found {len(tokens)}", line=lineno)
        for j, tok in enumerate(tokens):
            if tok not in ("0", "1"):
                raise MatrixFormatError(f"token {tok!r} is not 0 or 1", line=lineno, column=j + 1)
            adj[i, j] = tok == "1"
    return Instance(adj)


def format_matrix(inst: Instance) -> str:
    rows = [" ".join(str(int(v)) for v in row) for row in inst.adj]
    return "\n".join([str(inst.n), *rows]) + "\n"


def read_matrix(path) -> Instance:
    return parse_matrix(Path(path).read_text())


def write_matrix(inst: Instance, path) -> None:
    Path(path).write_text(format_matrix(inst))
