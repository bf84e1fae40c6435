# functions/core/prefix_tree.py
"""
Prefix-Tree Schedules — Five Classical Trees as Leveled Combine Plans

Intent
- Generate the abstract combine/fan-out schedule of a parallel prefix tree,
  independent of how the combines are realised as gates:
  - BRENT_KUNG, SKLANSKY, KOGGE_STONE, HAN_CARLSON, LADNER_FISCHER
- Each combine node at level k merges the current span of column x with the
  pre-level span of a lower column l, where l sits immediately below x's span.

What this module guarantees
- After the last level every column x holds the full span [x:0], i.e. the
  carry G[0:x] (= c_{x+1}).
- Spans are replayed level by level; a node always reads the pre-level span of
  its low column, so columns updated in the same level still compose correctly.
- `needs_p_output` is set exactly when some later node reads the node's P:
  either as its own high operand (the column is updated again) or as the low
  operand of a node that itself needs P.
- FanoutOps count, per level, how many extra copies each (span, kind) operand
  needs so that no two nodes share an operand.

Primary API
- build_schedule(tree, n) -> PrefixSchedule
- validate_schedule(schedule) -> list[str]
- evaluate_carries(schedule, a, b) -> tuple[int, ...]
- schedule_to_dict(schedule) -> dict
- schedule_graph(schedule) -> networkx.DiGraph (node dependencies)
- expected_shape(tree, n) -> {"levels", "nodes"} from the closed forms
- require_power_of_two(n, minimum=2) -> int (returns log2 n)

Notes
- n must be a power of two. For n=2 the Brent-Kung, Han-Carlson and
  Ladner-Fischer generators degenerate to the single node [1:1]o[0:0].
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Literal, Sequence, Set, Tuple

import networkx as nx

from functions.core.formulas import evaluate

OperandKind = Literal["P", "G"]


# -----------------------------
# Types
# -----------------------------
class TreeKind(str, Enum):
    BRENT_KUNG = "brent-kung"
    SKLANSKY = "sklansky"
    KOGGE_STONE = "kogge-stone"
    HAN_CARLSON = "han-carlson"
    LADNER_FISCHER = "ladner-fischer"

    @classmethod
    def parse(cls, value: Any) -> "TreeKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        aliases = {"bk": "brent-kung", "sk": "sklansky", "ks": "kogge-stone", "hc": "han-carlson", "lf": "ladner-fischer"}
        key = aliases.get(key, key)
        for member in cls:
            if member.value == key:
                return member
        raise ValueError(f"unknown tree kind: {value!r}")

    @property
    def short(self) -> str:
        return {
            TreeKind.BRENT_KUNG: "bk",
            TreeKind.SKLANSKY: "sk",
            TreeKind.KOGGE_STONE: "ks",
            TreeKind.HAN_CARLSON: "hc",
            TreeKind.LADNER_FISCHER: "lf",
        }[self]


@dataclass(frozen=True, order=True)
class Span:
    """Index range [hi:lo] with hi >= lo."""

    hi: int
    lo: int

    def __str__(self) -> str:
        return f"[{self.hi}:{self.lo}]"


@dataclass(frozen=True)
class PrefixNode:
    level: int
    hi_span: Span
    lo_span: Span
    needs_p_output: bool

    @property
    def column(self) -> int:
        return self.hi_span.hi

    @property
    def lo_column(self) -> int:
        return self.lo_span.hi

    @property
    def out_span(self) -> Span:
        return Span(self.hi_span.hi, self.lo_span.lo)


@dataclass(frozen=True)
class FanoutOp:
    level: int
    span: Span
    kind: OperandKind
    copy_count: int


@dataclass(frozen=True)
class PrefixLevel:
    index: int
    nodes: Tuple[PrefixNode, ...]
    fanouts: Tuple[FanoutOp, ...]


@dataclass(frozen=True)
class PrefixSchedule:
    tree: TreeKind
    n: int
    levels: Tuple[PrefixLevel, ...]

    @property
    def level_count(self) -> int:
        return len(self.levels)

    @property
    def node_count(self) -> int:
        return sum(len(lv.nodes) for lv in self.levels)

    @property
    def nodes(self) -> Tuple[PrefixNode, ...]:
        return tuple(nd for lv in self.levels for nd in lv.nodes)

    @property
    def required_carries(self) -> Tuple[Span, ...]:
        return tuple(Span(i, 0) for i in range(self.n))


# -----------------------------
# Helpers
# -----------------------------
def require_power_of_two(n: int, minimum: int = 2) -> int:
    """Return log2(n); raise ValueError unless n is a power of two >= minimum."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1 or n & (n - 1):
        raise ValueError("n must be a power of two")
    if n < minimum:
        raise ValueError(f"n must be >= {minimum}")
    return n.bit_length() - 1


Pairs = List[List[Tuple[int, int]]]


def _sklansky_pairs(n: int, columns: Sequence[int]) -> Pairs:
    # Sklansky over an ordered subset of columns (all columns, or the odd ones for LF).
    m = len(columns)
    levels: Pairs = []
    d = 1
    while d < m:
        pairs = []
        for base in range(0, m, 2 * d):
            low = columns[base + d - 1]
            pairs.extend((columns[j], low) for j in range(base + d, min(base + 2 * d, m)))
        levels.append(pairs)
        d *= 2
    return levels


def _kogge_stone_pairs(n: int) -> Pairs:
    levels: Pairs = []
    d = 1
    while d < n:
        levels.append([(x, x - d) for x in range(d, n)])
        d *= 2
    return levels


def _brent_kung_pairs(n: int) -> Pairs:
    log_n = n.bit_length() - 1
    levels: Pairs = []
    for k in range(1, log_n):
        s = 1 << k
        levels.append([(x, x - s // 2) for x in range(s - 1, n, s)])

    def down(k: int) -> List[Tuple[int, int]]:
        s = 1 << k
        return [(m * s + s // 2 - 1, m * s - 1) for m in range(1, n // s)]

    # top node shares its level with the first down-sweep stage
    levels.append([(n - 1, n // 2 - 1)] + (down(log_n - 1) if log_n >= 2 else []))
    for k in range(log_n - 2, 0, -1):
        levels.append(down(k))
    return levels


def _han_carlson_pairs(n: int) -> Pairs:
    levels: Pairs = [[(x, x - 1) for x in range(1, n, 2)]]
    d = 2
    while d < n:
        levels.append([(x, x - d) for x in range(d + 1, n, 2)])
        d *= 2
    levels.append([(x, x - 1) for x in range(2, n, 2)])
    return [lv for lv in levels if lv]


def _ladner_fischer_pairs(n: int) -> Pairs:
    levels: Pairs = [[(x, x - 1) for x in range(1, n, 2)]]
    levels.extend(_sklansky_pairs(n, list(range(1, n, 2))))
    levels.append([(x, x - 1) for x in range(2, n, 2)])
    return [lv for lv in levels if lv]


def _tree_pairs(tree: TreeKind, n: int) -> Pairs:
    if tree is TreeKind.SKLANSKY:
        return _sklansky_pairs(n, list(range(n)))
    if tree is TreeKind.KOGGE_STONE:
        return _kogge_stone_pairs(n)
    if tree is TreeKind.BRENT_KUNG:
        return _brent_kung_pairs(n)
    if tree is TreeKind.HAN_CARLSON:
        return _han_carlson_pairs(n)
    if tree is TreeKind.LADNER_FISCHER:
        return _ladner_fischer_pairs(n)
    raise ValueError(f"unsupported tree: {tree!r}")


def _count_fanouts(level: int, nodes: Sequence[PrefixNode]) -> Tuple[FanoutOp, ...]:
    consumers: Dict[Tuple[OperandKind, Span], Set[int]] = {}
    for i, nd in enumerate(nodes):
        consumers.setdefault(("P", nd.hi_span), set()).add(i)
        consumers.setdefault(("G", nd.hi_span), set()).add(i)
        consumers.setdefault(("G", nd.lo_span), set()).add(i)
        if nd.needs_p_output:
            consumers.setdefault(("P", nd.lo_span), set()).add(i)
    ops = [
        FanoutOp(level=level, span=span, kind=kind, copy_count=len(users) - 1)
        for (kind, span), users in consumers.items()
        if len(users) > 1
    ]
    return tuple(sorted(ops, key=lambda f: (f.kind, f.span.hi, f.span.lo)))


# -----------------------------
# Public API
# -----------------------------
def build_schedule(tree: TreeKind | str, n: int) -> PrefixSchedule:
    tree = TreeKind.parse(tree)
    require_power_of_two(n)
    pair_levels = _tree_pairs(tree, n)

    # forward replay: spans + versions
    lo = list(range(n))
    version = [0] * n
    raw: List[List[Tuple[Span, Span, int, int]]] = []  # (hi, lo, x-version, l-version)
    for k, pairs in enumerate(pair_levels, start=1):
        start_lo = list(lo)
        start_version = list(version)
        rows = []
        for x, l in pairs:
            if l != start_lo[x] - 1:
                raise ValueError(f"{tree.value} n={n}: level {k} pairs {x} with non-adjacent column {l}")
            rows.append((Span(x, start_lo[x]), Span(l, start_lo[l]), start_version[x], start_version[l]))
            lo[x] = start_lo[l]
            version[x] = k
        raw.append(rows)

    # backward pass: which (column, version) P values are read later
    p_required: Set[Tuple[int, int]] = set()
    needs: List[List[bool]] = [[False] * len(rows) for rows in raw]
    for k in range(len(raw), 0, -1):
        for i, (hi, lo_span, vx, vl) in enumerate(raw[k - 1]):
            needed = (hi.hi, k) in p_required
            needs[k - 1][i] = needed
            p_required.add((hi.hi, vx))
            if needed:
                p_required.add((lo_span.hi, vl))

    levels: List[PrefixLevel] = []
    for k, rows in enumerate(raw, start=1):
        nodes = tuple(
            PrefixNode(level=k, hi_span=hi, lo_span=lo_span, needs_p_output=needs[k - 1][i])
            for i, (hi, lo_span, _, _) in enumerate(rows)
        )
        levels.append(PrefixLevel(index=k, nodes=nodes, fanouts=_count_fanouts(k, nodes)))
    return PrefixSchedule(tree=tree, n=n, levels=tuple(levels))


def validate_schedule(s: PrefixSchedule) -> List[str]:
    """Diagnostics only: carry completeness, span algebra, operand disjointness."""
    problems: List[str] = []
    n = s.n
    lo = list(range(n))
    producers: Dict[int, int] = {}

    for lv in s.levels:
        start_lo = list(lo)
        updated: Set[int] = set()
        for nd in lv.nodes:
            x, l = nd.column, nd.lo_column
            if not (0 <= nd.lo_span.lo <= l < x < n):
                problems.append(f"level {lv.index}: node {nd.hi_span}o{nd.lo_span} out of range")
                continue
            if nd.hi_span.lo != nd.lo_span.hi + 1:
                problems.append(f"level {lv.index}: spans {nd.hi_span} and {nd.lo_span} are not adjacent")
            if nd.hi_span.lo != start_lo[x]:
                problems.append(f"level {lv.index}: stale high operand {nd.hi_span} (column holds [{x}:{start_lo[x]}])")
            if nd.lo_span.lo != start_lo[l]:
                problems.append(f"level {lv.index}: stale low operand {nd.lo_span} (column holds [{l}:{start_lo[l]}])")
            if x in updated:
                problems.append(f"level {lv.index}: column {x} updated twice")
            updated.add(x)
            lo[x] = nd.lo_span.lo
            if nd.out_span.lo == 0:
                producers[x] = producers.get(x, 0) + 1

        consumers: Dict[Tuple[str, Span], Set[int]] = {}
        for i, nd in enumerate(lv.nodes):
            consumers.setdefault(("P", nd.hi_span), set()).add(i)
            consumers.setdefault(("G", nd.hi_span), set()).add(i)
            consumers.setdefault(("G", nd.lo_span), set()).add(i)
            if nd.needs_p_output:
                consumers.setdefault(("P", nd.lo_span), set()).add(i)
        copies = {(f.kind, f.span): f.copy_count for f in lv.fanouts}
        for (kind, span), users in sorted(consumers.items(), key=lambda kv: (_kind_order(kv[0][0]), kv[0][1])):
            available = 1 + copies.get((kind, span), 0)
            if len(users) > available:
                problems.append(
                    f"level {lv.index}: operand {kind}{span} read by {len(users)} nodes with {available - 1} copies"
                )

    for i in range(n):
        count = producers.get(i, 0)
        if i == 0:
            if count:
                problems.append("duplicate producer of G[0:0] (leaf g_0 is the producer)")
            continue
        if count == 0:
            problems.append(f"missing carry G[0:{i}]")
        elif count > 1:
            problems.append(f"duplicate producer of G[0:{i}] ({count} nodes)")
    return problems


def _kind_order(kind: str) -> int:
    return 0 if kind == "P" else 1


def evaluate_carries(s: PrefixSchedule, a: int, b: int) -> Tuple[int, ...]:
    """Classical (g, p) evaluation of the schedule; returns (c_1, ..., c_n)."""
    n = s.n
    g = [(a >> i) & (b >> i) & 1 for i in range(n)]
    p = [((a >> i) ^ (b >> i)) & 1 for i in range(n)]
    for lv in s.levels:
        g0, p0 = list(g), list(p)
        for nd in lv.nodes:
            x, l = nd.column, nd.lo_column
            g[x] = g0[x] | (p0[x] & g0[l])
            p[x] = p0[x] & p0[l]
    return tuple(g)


def expected_shape(tree: TreeKind | str, n: int) -> Dict[str, int]:
    """Closed-form level and node counts; every tree is a single level at n=2."""
    tree = TreeKind.parse(tree)
    require_power_of_two(n)
    shape = evaluate("table1", tree.value, n)
    levels = 1 if n == 2 else int(shape["levels"])
    return {"levels": levels, "nodes": int(shape["nodes"])}


def schedule_graph(s: PrefixSchedule) -> nx.DiGraph:
    """Dependency DAG: node (level, column) -> the nodes that read its output."""
    graph = nx.DiGraph()
    producer: Dict[int, Tuple[int, int]] = {}
    for lv in s.levels:
        start = dict(producer)
        for nd in lv.nodes:
            key = (lv.index, nd.column)
            graph.add_node(key, out=str(nd.out_span), needs_p_output=nd.needs_p_output)
            for col in (nd.column, nd.lo_column):
                if col in start:
                    graph.add_edge(start[col], key)
        for nd in lv.nodes:
            producer[nd.column] = (lv.index, nd.column)
    return graph


def schedule_to_dict(s: PrefixSchedule) -> Dict[str, Any]:
    return {
        "tree": s.tree.value,
        "n": s.n,
        "level_count": s.level_count,
        "node_count": s.node_count,
        "levels": [
            {
                "level": lv.index,
                "nodes": [
                    {
                        "hi": [nd.hi_span.hi, nd.hi_span.lo],
                        "lo": [nd.lo_span.hi, nd.lo_span.lo],
                        "out": [nd.out_span.hi, nd.out_span.lo],
                        "needs_p_output": nd.needs_p_output,
                    }
                    for nd in lv.nodes
                ],
                "fanouts": [
                    {"span": [f.span.hi, f.span.lo], "kind": f.kind, "copy_count": f.copy_count}
                    for f in lv.fanouts
                ],
            }
            for lv in s.levels
        ],
    }


__all__ = [
    "TreeKind",
    "Span",
    "PrefixNode",
    "FanoutOp",
    "PrefixLevel",
    "PrefixSchedule",
    "require_power_of_two",
    "build_schedule",
    "validate_schedule",
    "evaluate_carries",
    "schedule_to_dict",
    "schedule_graph",
    "expected_shape",
]
