"""Storage systems with an MDS core and their repair groups.

Nodes are numbered 0..N-1 internally: the systematic nodes of file 0 come
first, then those of file 1, and so on, with the coded nodes last.  All
human-facing output adds one to these indices.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from math import comb, prod
from typing import Iterator, Sequence

from .errors import InvalidParameterError, InvalidSystemError

CODED = None


@dataclass(frozen=True)
class NodeKind:
    """``file`` is the file a systematic node stores, or None for a coded node."""

    file: int | None = CODED

    @property
    def is_coded(self) -> bool:
        return self.file is None

    def __str__(self):
        return "c" if self.file is None else f"f{self.file + 1}"


@dataclass(frozen=True)
class StorageSystem:
    K: int
    nodes: tuple[NodeKind, ...]
    mu: object = 1

    def __post_init__(self):
        if self.K < 1:
            raise InvalidSystemError(f"need at least one file, got K={self.K}")
        if not self.mu > 0:
            raise InvalidParameterError(f"service rate must be positive, got {self.mu}")
        for node in self.nodes:
            if node.file is not None and not 0 <= node.file < self.K:
                raise InvalidSystemError(f"systematic node for unknown file {node.file}")

    @property
    def N(self) -> int:
        return len(self.nodes)

    @cached_property
    def N_counts(self) -> tuple[int, ...]:
        counts = [0] * self.K
        for node in self.nodes:
            if node.file is not None:
                counts[node.file] += 1
        return tuple(counts)

    @cached_property
    def C(self) -> int:
        return sum(1 for node in self.nodes if node.is_coded)

    @cached_property
    def coded_nodes(self) -> tuple[int, ...]:
        return tuple(j for j, node in enumerate(self.nodes) if node.is_coded)

    def systematic_nodes(self, k: int) -> tuple[int, ...]:
        return tuple(j for j, node in enumerate(self.nodes) if node.file == k)

    @property
    def is_all_coded(self) -> bool:
        return not any(self.N_counts)

    def with_mu(self, mu) -> "StorageSystem":
        return StorageSystem(self.K, self.nodes, mu)

    def to_spec(self) -> dict:
        return {"K": self.K, "mu": self.mu, "systematic": list(self.N_counts), "coded": self.C}

    def __str__(self):
        return "[" + ",".join(str(n) for n in self.nodes) + "]"


def build_mds_core_system(N_counts: Sequence[int], C: int, mu=1) -> StorageSystem:
    """Lay out ``N_counts[k]`` systematic nodes per file followed by ``C`` coded ones."""
    if len(N_counts) == 0:
        raise InvalidSystemError("need at least one file")
    if C < 0 or any(n < 0 for n in N_counts):
        raise InvalidParameterError("node counts must be nonnegative")
    if not mu > 0:
        raise InvalidParameterError(f"service rate must be positive, got {mu}")
    nodes = [NodeKind(k) for k, n in enumerate(N_counts) for _ in range(n)]
    nodes += [NodeKind(CODED)] * C
    return StorageSystem(len(N_counts), tuple(nodes), mu)


def parse_node_kind(token: str, K: int) -> NodeKind:
    """``"c"`` is a coded node, ``"f3"`` (or ``3``) a systematic node of file 3 (1-based)."""
    if isinstance(token, int):
        return NodeKind(token - 1)
    token = token.strip().lower()
    if token == "c":
        return NodeKind(CODED)
    if token.startswith("f") and token[1:].isdigit():
        return NodeKind(int(token[1:]) - 1)
    raise InvalidSystemError(f"bad node token {token!r}; use 'c' or 'f<k>'")


def system_from_spec(spec: dict) -> StorageSystem:
    """Build a system from the JSON-shaped spec ``{"K", "mu", "systematic", "coded"}``.

    An optional ``"nodes"`` list (``["f1", "f1", "c", "f2"]``) fixes an explicit
    node order; the counts, when also given, must agree with it.
    """
    mu = spec.get("mu", 1)
    if "nodes" in spec:
        K = spec.get("K")
        if K is None:
            if "systematic" not in spec:
                raise InvalidSystemError("an explicit node list needs K or systematic")
            K = len(spec["systematic"])
        system = StorageSystem(K, tuple(parse_node_kind(t, K) for t in spec["nodes"]), mu)
        if "systematic" in spec and list(spec["systematic"]) != list(system.N_counts):
            raise InvalidSystemError("systematic counts disagree with the node list")
        if "coded" in spec and spec["coded"] != system.C:
            raise InvalidSystemError("coded count disagrees with the node list")
        return system
    systematic = spec["systematic"]
    K = spec.get("K", len(systematic))
    if K != len(systematic):
        raise InvalidSystemError(f"K={K} but {len(systematic)} systematic counts given")
    return build_mds_core_system(systematic, spec["coded"], mu)


def load_system(path) -> StorageSystem:
    with open(path) as fh:
        return system_from_spec(json.load(fh))


@dataclass(frozen=True)
class RepairGroup:
    file: int
    members: frozenset[int]

    @property
    def sorted_members(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def __contains__(self, j):
        return j in self.members

    def label(self) -> str:
        """1-based member set, e.g. ``{1,3}``."""
        return "{" + ",".join(str(j + 1) for j in self.sorted_members) + "}"


@dataclass(frozen=True)
class GroupShape:
    """Class of repair groups that are interchangeable under node relabeling.

    ``systematic`` holds the files contributing one systematic node each and
    ``coded`` the number of coded nodes.  A singleton group for file k has
    ``systematic == (k,)`` and ``coded == 0``.
    """

    file: int
    systematic: tuple[int, ...]
    coded: int

    @property
    def is_singleton(self) -> bool:
        return self.systematic == (self.file,)

    def count(self, system: StorageSystem) -> int:
        return prod(system.N_counts[j] for j in self.systematic) * comb(system.C, self.coded)

    def to_json(self) -> dict:
        return {"file": self.file + 1,
                "systematic": [j + 1 for j in self.systematic],
                "coded": self.coded}


def group_shapes(system: StorageSystem, k: int) -> list[GroupShape]:
    """Shapes of the f_k repair groups, in the canonical group order."""
    K, C, Ns = system.K, system.C, system.N_counts
    shapes = []
    if Ns[k] > 0:
        shapes.append(GroupShape(k, (k,), 0))
    others = [j for j in range(K) if j != k and Ns[j] > 0]
    for n in range(0, min(K - 1, len(others)) + 1):
        if C < K - n:
            continue
        for files in combinations(others, n):
            shapes.append(GroupShape(k, files, K - n))
    return shapes


def shape_of(system: StorageSystem, group: RepairGroup) -> GroupShape:
    files = sorted(system.nodes[j].file for j in group.members if not system.nodes[j].is_coded)
    coded = sum(1 for j in group.members if system.nodes[j].is_coded)
    return GroupShape(group.file, tuple(files), coded)


def _expand_shape(system: StorageSystem, shape: GroupShape) -> Iterator[frozenset[int]]:
    if shape.is_singleton:
        for j in system.systematic_nodes(shape.file):
            yield frozenset((j,))
        return
    pools = [system.systematic_nodes(j) for j in shape.systematic]
    for sys_pick in product(*pools):
        for coded in combinations(system.coded_nodes, shape.coded):
            yield frozenset(sys_pick + coded)


@dataclass(frozen=True)
class RepairGroupTable:
    system: StorageSystem
    groups: tuple[tuple[RepairGroup, ...], ...]
    shapes: tuple[tuple[GroupShape, ...], ...] = field(repr=False)

    @property
    def gamma(self) -> tuple[int, ...]:
        return tuple(len(g) for g in self.groups)

    @property
    def K(self) -> int:
        return len(self.groups)

    @property
    def N(self) -> int:
        return self.system.N

    @cached_property
    def _shape_members(self) -> tuple[dict[GroupShape, list[int]], ...]:
        out = []
        for groups in self.groups:
            by_shape: dict[GroupShape, list[int]] = {}
            for i, g in enumerate(groups):
                by_shape.setdefault(shape_of(self.system, g), []).append(i)
            out.append(by_shape)
        return tuple(out)

    def shape_indices(self, k: int) -> list[tuple[GroupShape, list[int]]]:
        """Pair each shape of file k with the indices of the groups it covers."""
        by_shape = self._shape_members[k]
        return [(shape, by_shape[shape]) for shape in self.shapes[k]]

    def format(self) -> str:
        lines = []
        for k, groups in enumerate(self.groups):
            body = ",".join(g.label() for g in groups) or "(none)"
            lines.append(f"f{k + 1} (gamma={len(groups)}): {body}")
        return "\n".join(lines)


def enumerate_repair_groups(system: StorageSystem) -> RepairGroupTable:
    """Minimal repair groups of every file under the MDS-core access rules.

    Per file: singletons first, then groups made of n systematic nodes of
    distinct other files plus K-n coded nodes, by ascending n, ties broken
    lexicographically on the sorted member tuple.
    """
    all_groups, all_shapes = [], []
    for k in range(system.K):
        shapes = group_shapes(system, k)
        keyed = []
        for shape in shapes:
            for members in _expand_shape(system, shape):
                n_sys = 0 if shape.is_singleton else len(shape.systematic)
                keyed.append(((not shape.is_singleton, n_sys, tuple(sorted(members))), members))
        keyed.sort(key=lambda t: t[0])
        all_groups.append(tuple(RepairGroup(k, m) for _, m in keyed))
        all_shapes.append(tuple(shapes))
    return RepairGroupTable(system, tuple(all_groups), tuple(all_shapes))


def delta(table: RepairGroupTable, k: int, i: int, j: int) -> int:
    """1 if node j belongs to the i-th repair group of file k, else 0."""
    if not 0 <= k < table.K:
        raise IndexError(f"file index {k} out of range")
    if not 0 <= i < len(table.groups[k]):
        raise IndexError(f"group index {i} out of range for file {k}")
    if not 0 <= j < table.N:
        raise IndexError(f"node index {j} out of range")
    return int(j in table.groups[k][i].members)
