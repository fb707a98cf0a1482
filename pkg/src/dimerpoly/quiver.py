"""Skew-symmetric exchange matrices with labelled vertices and frozen marks."""
from __future__ import annotations

import json

from .errors import FrozenVertex, InputError


class Quiver:
    """Quiver stored as its signed arrow-count matrix.

    ``labels`` names the vertices; the first ``r`` are mutable and the rest
    frozen.  ``b[i][j]`` is the number of arrows i->j minus arrows j->i.
    """

    __slots__ = ("labels", "r", "b", "_index")

    def __init__(self, labels, b, r=None):
        self.labels = tuple(labels)
        n = len(self.labels)
        self.r = n if r is None else r
        rows = tuple(tuple(int(x) for x in row) for row in b)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise InputError("exchange matrix has the wrong shape")
        for i in range(n):
            if rows[i][i]:
                raise InputError(f"loop at vertex {self.labels[i]}")
            for j in range(i):
                if rows[i][j] != -rows[j][i]:
                    raise InputError("exchange matrix is not skew-symmetric")
        self.b = rows
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._index) != n:
            raise InputError("duplicate quiver vertex labels")

    @property
    def n(self):
        return len(self.labels)

    @property
    def mutable(self):
        return self.labels[:self.r]

    @property
    def frozen(self):
        return self.labels[self.r:]

    def index(self, label):
        return self._index[label]

    def arrows(self, i, j) -> int:
        """Net arrow count from label i to label j."""
        return self.b[self._index[i]][self._index[j]]

    def arrow_count(self) -> int:
        return sum(x for row in self.b for x in row if x > 0)

    def __eq__(self, other):
        return (isinstance(other, Quiver) and self.labels == other.labels
                and self.r == other.r and self.b == other.b)

    def __hash__(self):
        return hash((self.labels, self.r, self.b))

    def __repr__(self):
        arrows = [f"{self.labels[i]}->{self.labels[j]}" + (f"x{self.b[i][j]}" if self.b[i][j] > 1 else "")
                  for i in range(self.n) for j in range(self.n) if self.b[i][j] > 0]
        return f"Quiver(mutable={list(self.mutable)}, frozen={list(self.frozen)}, arrows={arrows})"

    def mutate(self, k) -> "Quiver":
        ki = self._index[k]
        if ki >= self.r:
            raise FrozenVertex(f"vertex {k} is frozen")
        n = self.n
        b = self.b
        new = [list(row) for row in b]
        for i in range(n):
            for j in range(n):
                if i == ki or j == ki:
                    new[i][j] = -b[i][j]
                else:
                    new[i][j] = b[i][j] + (abs(b[i][ki]) * b[ki][j] + b[i][ki] * abs(b[ki][j])) // 2
        return Quiver(self.labels, new, self.r)

    def mutate_sequence(self, seq) -> "Quiver":
        q = self
        for k in seq:
            q = q.mutate(k)
        return q

    def mutable_part(self) -> "Quiver":
        return Quiver(self.labels[:self.r], [row[:self.r] for row in self.b[:self.r]])

    def induced(self, labels, r=None) -> "Quiver":
        idx = [self._index[a] for a in labels]
        return Quiver(labels, [[self.b[i][j] for j in idx] for i in idx], r)

    def delete(self, label) -> "Quiver":
        keep = [a for a in self.labels if a != label]
        r = self.r - (1 if self._index[label] < self.r else 0)
        return self.induced(keep, r)

    def relabel(self, mapping) -> "Quiver":
        return Quiver([mapping.get(a, a) for a in self.labels], self.b, self.r)

    def frame(self) -> "Quiver":
        """Principal framing: drop old frozens, add i' with one arrow i' -> i."""
        r = self.r
        labels = list(self.labels[:r]) + [("frozen", a) for a in self.labels[:r]]
        n = 2 * r
        b = [[0] * n for _ in range(n)]
        for i in range(r):
            for j in range(r):
                b[i][j] = self.b[i][j]
            b[r + i][i] = 1
            b[i][r + i] = -1
        return Quiver(labels, b, r)

    def is_oriented_path(self) -> bool:
        """True when the mutable part is an orientation of a path (type A)."""
        r = self.r
        deg = [0] * r
        edges = 0
        for i in range(r):
            for j in range(i + 1, r):
                x = abs(self.b[i][j])
                if x > 1:
                    return False
                if x:
                    deg[i] += 1
                    deg[j] += 1
                    edges += 1
        if r == 0:
            return True
        if edges != r - 1 or max(deg) > 2:
            return False
        # connected check
        seen = {0}
        stack = [0]
        while stack:
            i = stack.pop()
            for j in range(r):
                if self.b[i][j] and j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == r

    # -- io -----------------------------------------------------------------
    def to_json(self):
        return {"labels": [lab if not isinstance(lab, tuple) else list(lab) for lab in self.labels],
                "matrix": [list(row) for row in self.b], "frozen": self.n - self.r}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        mat = obj["matrix"]
        n = len(mat)
        labels = obj.get("labels") or list(range(1, n + 1))
        labels = [tuple(a) if isinstance(a, list) else a for a in labels]
        return cls(labels, mat, n - obj.get("frozen", 0))

    def to_dot(self, name="Q") -> str:
        lines = [f"digraph {name} {{"]
        for i, lab in enumerate(self.labels):
            shape = "circle" if i < self.r else "box"
            lines.append(f'  "{lab}" [shape={shape}];')
        for i in range(self.n):
            for j in range(self.n):
                for _ in range(max(self.b[i][j], 0)):
                    lines.append(f'  "{self.labels[i]}" -> "{self.labels[j]}";')
        lines.append("}")
        return "\n".join(lines)


def mutate_quiver(q: Quiver, k) -> Quiver:
    return q.mutate(k)


def frame(q: Quiver) -> Quiver:
    return q.frame()
