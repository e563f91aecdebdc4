"""Order-respecting DAGs, separation checks, and moralization."""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .csi import CsiStatement
from .errors import BadGraphError, PreconditionError
from .model import Context


@dataclass(frozen=True)
class Dag:
    """A DAG whose edges all point from smaller to larger vertex.

    Acyclicity is structural: a backward edge is rejected outright, so the
    vertex order is always a topological order.
    """

    vertices: tuple
    edges: frozenset

    def __post_init__(self):
        vertices = tuple(int(v) for v in self.vertices)
        object.__setattr__(self, "vertices", vertices)
        if list(vertices) != sorted(set(vertices)):
            raise BadGraphError(f"vertices must be strictly increasing: {vertices}")
        known = set(vertices)
        edges = frozenset((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        for u, v in edges:
            if u not in known or v not in known:
                raise BadGraphError(f"edge ({u},{v}) uses unknown vertices")
            if u >= v:
                raise BadGraphError(f"edge ({u},{v}) does not respect the order")

    @classmethod
    def of(cls, vertices, edges=()) -> "Dag":
        return cls(tuple(vertices), frozenset(tuple(e) for e in edges))

    def parents(self, v) -> frozenset:
        return _adjacency(self)[0][v]

    def children(self, v) -> frozenset:
        return _adjacency(self)[1][v]

    def adjacent(self, u, v) -> bool:
        return (u, v) in self.edges or (v, u) in self.edges

    def sorted_edges(self) -> tuple:
        return tuple(sorted(self.edges))


@dataclass(frozen=True)
class UndirectedGraph:
    """Plain undirected graph; edges stored as (u, v) with u < v."""

    vertices: tuple
    edges: frozenset

    def __post_init__(self):
        vertices = tuple(int(v) for v in self.vertices)
        object.__setattr__(self, "vertices", vertices)
        if list(vertices) != sorted(set(vertices)):
            raise BadGraphError(f"vertices must be strictly increasing: {vertices}")
        known = set(vertices)
        edges = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v or u not in known or v not in known:
                raise BadGraphError(f"bad undirected edge ({u},{v})")
            edges.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(edges))

    def adjacent(self, u, v) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def neighbors(self, v) -> frozenset:
        return frozenset(
            (b if a == v else a) for a, b in self.edges if v in (a, b)
        )

    def sorted_edges(self) -> tuple:
        return tuple(sorted(self.edges))


@dataclass(frozen=True)
class ContextDag:
    """A DAG over the unpinned variables, tagged with its context."""

    context: Context
    dag: Dag


@lru_cache(maxsize=None)
def _adjacency(dag: Dag):
    parents = {v: frozenset(u for u, w in dag.edges if w == v) for v in dag.vertices}
    children = {v: frozenset(w for u, w in dag.edges if u == v) for v in dag.vertices}
    return parents, children


def _check_query(dag: Dag, a, b, s):
    known = set(dag.vertices)
    if not a or not b:
        raise BadGraphError("separation query needs two nonempty sets")
    if (a | b | s) - known:
        raise BadGraphError(f"unknown vertices {sorted((a | b | s) - known)}")
    if a & b or a & s or b & s:
        raise BadGraphError("separation query sets must be disjoint")


def _ancestral(dag: Dag, seed) -> frozenset:
    parents, _ = _adjacency(dag)
    closed = set(seed)
    frontier = list(seed)
    while frontier:
        v = frontier.pop()
        for u in parents[v]:
            if u not in closed:
                closed.add(u)
                frontier.append(u)
    return frozenset(closed)


def descendants(dag: Dag, v) -> frozenset:
    """Strict descendants of a vertex."""
    _, children = _adjacency(dag)
    out = set()
    frontier = [v]
    while frontier:
        u = frontier.pop()
        for w in children[u]:
            if w not in out:
                out.add(w)
                frontier.append(w)
    return frozenset(out)


def d_separated(dag: Dag, a, b, s=()) -> bool:
    """Separation of two vertex sets given a third, via the moral graph of
    their ancestral closure.  The three sets must be disjoint and the first
    two nonempty."""
    a, b, s = frozenset(a), frozenset(b), frozenset(s)
    _check_query(dag, a, b, s)
    closure = _ancestral(dag, a | b | s)
    parents, _ = _adjacency(dag)
    adj = {v: set() for v in closure}
    for u, v in dag.edges:
        if u in closure and v in closure:
            adj[u].add(v)
            adj[v].add(u)
    for v in closure:
        for x, y in itertools.combinations(sorted(parents[v]), 2):
            adj[x].add(y)
            adj[y].add(x)
    seen = set(a)
    frontier = list(a)
    while frontier:
        u = frontier.pop()
        if u in b:
            return False
        for w in adj[u]:
            if w not in s and w not in seen:
                seen.add(w)
                frontier.append(w)
    return True


def d_separated_bayes_ball(dag: Dag, a, b, s=()) -> bool:
    """Separation by directed reachability (ball passing).

    Independent of ``d_separated`` on purpose, so the two implementations
    can vouch for each other in tests.
    """
    a, b, s = frozenset(a), frozenset(b), frozenset(s)
    _check_query(dag, a, b, s)
    parents, children = _adjacency(dag)
    anc_s = _ancestral(dag, s)
    queue = deque((v, "up") for v in a)
    visited = set()
    while queue:
        v, direction = queue.popleft()
        if (v, direction) in visited:
            continue
        visited.add((v, direction))
        if v in b and v not in s:
            return False
        if direction == "up" and v not in s:
            for u in parents[v]:
                queue.append((u, "up"))
            for w in children[v]:
                queue.append((w, "down"))
        elif direction == "down":
            if v not in s:
                for w in children[v]:
                    queue.append((w, "down"))
            if v in anc_s:
                for u in parents[v]:
                    queue.append((u, "up"))
    return True


def local_markov(dag: Dag, context=Context()) -> tuple:
    """One statement per vertex: independent of its non-descendant
    non-parents given its parents.  Vacuous statements drop out."""
    out = []
    parents, _ = _adjacency(dag)
    for v in dag.vertices:
        rest = set(dag.vertices) - {v} - descendants(dag, v) - parents[v]
        if rest:
            out.append(
                CsiStatement(
                    frozenset({v}), frozenset(rest), parents[v], context
                )
            )
    return tuple(out)


def moralize(dag: Dag) -> UndirectedGraph:
    """Drop directions and marry all co-parents."""
    parents, _ = _adjacency(dag)
    edges = set(dag.edges)
    for v in dag.vertices:
        edges.update(itertools.combinations(sorted(parents[v]), 2))
    return UndirectedGraph(dag.vertices, frozenset(edges))


def directed_moralize(dag: Dag):
    """Marry unmarried co-parents with an edge from the smaller vertex.

    One simultaneous pass over the current graph; returns the new graph and
    the sorted tuple of edges added.
    """
    parents, _ = _adjacency(dag)
    added = set()
    for v in dag.vertices:
        for x, y in itertools.combinations(sorted(parents[v]), 2):
            if not dag.adjacent(x, y):
                added.add((x, y))
    return Dag(dag.vertices, dag.edges | added), tuple(sorted(added))


def to_perfect(dag: Dag):
    """Iterate directed moralization to its fixed point.

    Returns (graph, passes) where ``passes`` lists the edges added per
    round; the result has every parent set complete.
    """
    passes = []
    graph = dag
    n = len(dag.vertices)
    for _ in range(n * (n - 1) // 2 + 1):
        graph, added = directed_moralize(graph)
        if not added:
            return graph, tuple(passes)
        passes.append(added)
    raise PreconditionError("directed moralization failed to stabilize")


def is_perfect(dag: Dag) -> bool:
    """Every parent set induces a complete subgraph."""
    parents, _ = _adjacency(dag)
    return all(
        dag.adjacent(x, y)
        for v in dag.vertices
        for x, y in itertools.combinations(sorted(parents[v]), 2)
    )


def saturated_statements(dag, context=Context()) -> tuple:
    """All A _||_ B | S with A, B, S partitioning the vertices that hold by
    separation, canonicalized (min(A) < min(B)) and duplicate-free.

    Accepts a bare Dag plus an optional context, or a ContextDag carrying
    its own.
    """
    if isinstance(dag, ContextDag):
        dag, context = dag.dag, dag.context
    verts = dag.vertices
    out = []
    for split in itertools.product((0, 1, 2), repeat=len(verts)):
        a = frozenset(v for v, t in zip(verts, split) if t == 0)
        b = frozenset(v for v, t in zip(verts, split) if t == 1)
        if not a or not b or min(a) > min(b):
            continue
        s = frozenset(v for v, t in zip(verts, split) if t == 2)
        if d_separated(dag, a, b, s):
            out.append(CsiStatement(a, b, s, context))
    return tuple(out)


@dataclass(frozen=True)
class ObstructionReport:
    """Structures around a non-adjacent pair that survive one marrying pass.

    ``case1`` holds (k, l) pairs and ``case2`` holds (k, l1, l2) triples
    with l1 the child of i; the report is empty exactly when the saturated
    pair statement still holds after one pass of directed moralization.
    """

    i: int
    j: int
    case1: tuple
    case2: tuple

    @property
    def n1(self) -> int:
        return len(self.case1)

    @property
    def n2(self) -> int:
        return len(self.case2)

    @property
    def clear(self) -> bool:
        return not (self.case1 or self.case2)


def moralization_obstructions(dag: Dag, i, j) -> ObstructionReport:
    """Find the patterns that give i and j a common child after one pass.

    Requires i and j non-adjacent with no common child.  Case 1 is a pair
    k < l above both with the induced graph {i->k, j->l, k->l} (or its
    mirror); case 2 is a triple k < l1, l2 with the induced graph
    {i->l1, j->l2, k->l1, k->l2}.
    """
    i, j = int(i), int(j)
    known = set(dag.vertices)
    if i == j or i not in known or j not in known:
        raise BadGraphError(f"need two distinct vertices, got {i}, {j}")
    i, j = min(i, j), max(i, j)
    _, children = _adjacency(dag)
    if dag.adjacent(i, j):
        raise PreconditionError(f"{i} and {j} are adjacent")
    if children[i] & children[j]:
        raise PreconditionError(f"{i} and {j} already share a child")

    def induced(sub):
        return {e for e in dag.edges if e[0] in sub and e[1] in sub}

    case1 = []
    for k in dag.vertices:
        if k <= j:
            continue
        for l in dag.vertices:
            if l <= k:
                continue
            got = induced({i, j, k, l})
            if got in ({(i, k), (j, l), (k, l)}, {(i, l), (j, k), (k, l)}):
                case1.append((k, l))
    case2 = []
    for k in dag.vertices:
        if k <= j:
            continue
        for l1, l2 in itertools.combinations(dag.vertices, 2):
            if l1 <= k:
                continue
            got = induced({i, j, k, l1, l2})
            if got == {(i, l1), (j, l2), (k, l1), (k, l2)}:
                case2.append((k, l1, l2))
            elif got == {(i, l2), (j, l1), (k, l1), (k, l2)}:
                case2.append((k, l2, l1))
    return ObstructionReport(i, j, tuple(case1), tuple(case2))


def dag_to_dot(dag: Dag, label="") -> str:
    """Deterministic DOT text for a directed graph."""
    lines = ["digraph G {"]
    if label:
        lines.append(f'  label="{label}";')
    lines.extend(f"  {v};" for v in dag.vertices)
    lines.extend(f"  {u} -> {v};" for u, v in dag.sorted_edges())
    lines.append("}")
    return "\n".join(lines) + "\n"


def undirected_to_dot(graph: UndirectedGraph, label="") -> str:
    """Deterministic DOT text for an undirected graph."""
    lines = ["graph G {"]
    if label:
        lines.append(f'  label="{label}";')
    lines.extend(f"  {v};" for v in graph.vertices)
    lines.extend(f"  {u} -- {v};" for u, v in graph.sorted_edges())
    lines.append("}")
    return "\n".join(lines) + "\n"


def context_dag_to_dot(cdag: ContextDag) -> str:
    return dag_to_dot(cdag.dag, label=str(cdag.context))


def dag_to_json(value) -> dict:
    """Serialize a Dag or ContextDag."""
    if isinstance(value, ContextDag):
        out = dag_to_json(value.dag)
        out["context"] = {str(v): x for v, x in value.context.items}
        return out
    return {
        "vertices": list(value.vertices),
        "edges": [list(e) for e in value.sorted_edges()],
    }


def dag_from_json(data):
    """Parse a Dag, or a ContextDag when a ``context`` field is present."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    dag = Dag.of(data["vertices"], data.get("edges", ()))
    if "context" in data:
        ctx = Context.of({int(k): int(v) for k, v in data["context"].items()})
        return ContextDag(ctx, dag)
    return dag


def dags_from_json(data) -> tuple:
    """Parse a ``{"dags": [...]}`` collection into ContextDags.

    Entries without a context get the empty one.
    """
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    out = []
    for entry in data["dags"]:
        parsed = dag_from_json(entry)
        if isinstance(parsed, Dag):
            parsed = ContextDag(Context(), parsed)
        out.append(parsed)
    return tuple(out)
