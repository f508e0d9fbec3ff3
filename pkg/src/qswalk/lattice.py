"""Walk graphs (line segments, truncated lines) and their Lindblad operators.

Vertex labels are 1..n on a segment and -(n-1)/2..(n-1)/2 on a truncated
line; internally every matrix is indexed by position 0..n-1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import InvalidSizeError

GraphKind = Literal["segment", "truncated_line"]
DissipatorKind = Literal["local_set", "global_sum"]


@dataclass(frozen=True)
class AdjacencySpec:
    """Path graph on ``n`` vertices."""

    n: int
    kind: GraphKind = "segment"
    matrix: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise InvalidSizeError(f"graph size must be a positive integer, got {self.n!r}")
        if self.kind not in ("segment", "truncated_line"):
            raise ValueError(f"unknown graph kind {self.kind!r}")
        if self.kind == "truncated_line" and self.n % 2 == 0:
            raise InvalidSizeError(f"truncated line needs an odd vertex count, got {self.n}")
        a = np.zeros((self.n, self.n))
        idx = np.arange(self.n - 1)
        a[idx, idx + 1] = 1.0
        a[idx + 1, idx] = 1.0
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)

    @property
    def labels(self) -> np.ndarray:
        """Vertex labels in position order."""
        if self.kind == "segment":
            return np.arange(1, self.n + 1)
        w = (self.n - 1) // 2
        return np.arange(-w, w + 1)

    @property
    def half_width(self) -> int:
        return (self.n - 1) // 2

    def index_of(self, label: int) -> int:
        """Position of a vertex label; raises ``ValueError`` for unknown labels."""
        lo = int(self.labels[0])
        pos = int(label) - lo
        if int(label) != label or not 0 <= pos < self.n:
            raise ValueError(f"vertex {label!r} is not on this {self.kind} (labels {lo}..{lo + self.n - 1})")
        return pos

    def degrees(self) -> np.ndarray:
        return self.matrix.sum(axis=1)


@dataclass(frozen=True)
class DissipatorSpec:
    kind: DissipatorKind
    operators: tuple[np.ndarray, ...]

    @property
    def n(self) -> int:
        return self.operators[0].shape[0]


def build_segment(n: int) -> AdjacencySpec:
    return AdjacencySpec(n, "segment")


def build_truncated_line(half_width: int) -> AdjacencySpec:
    """Odd-length segment relabelled -half_width..half_width."""
    if half_width < 0:
        raise InvalidSizeError(f"half width must be non-negative, got {half_width}")
    return AdjacencySpec(2 * half_width + 1, "truncated_line")


def build_local_dissipators(adj: AdjacencySpec) -> DissipatorSpec:
    """One hopping operator ``|dst><src| / deg(src)`` per directed edge.

    On a segment the endpoints have degree 1, so their outgoing operators
    carry coefficient 1 rather than the interior 1/2.
    """
    deg = adj.degrees()
    ops = []
    src, dst = np.nonzero(adj.matrix.T)
    for m, k in sorted(zip(src.tolist(), dst.tolist())):
        op = np.zeros((adj.n, adj.n))
        op[k, m] = 1.0 / deg[m]
        op.setflags(write=False)
        ops.append(op)
    if not ops:
        # isolated vertex: the dissipator is identically zero
        ops.append(np.zeros((adj.n, adj.n)))
    return DissipatorSpec("local_set", tuple(ops))


def build_global_dissipator(adj: AdjacencySpec) -> DissipatorSpec:
    """Single Hermitian operator with 1/2 on both off-diagonals (``2 L_S = A``)."""
    ls = 0.5 * adj.matrix
    ls.setflags(write=False)
    return DissipatorSpec("global_sum", (ls,))


def build_dissipator(adj: AdjacencySpec, kind: str) -> DissipatorSpec:
    if kind in ("global", "global_sum"):
        return build_global_dissipator(adj)
    if kind in ("local", "local_set"):
        return build_local_dissipators(adj)
    raise ValueError(f"unknown dissipator kind {kind!r}")
