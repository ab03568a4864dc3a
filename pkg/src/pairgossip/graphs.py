"""Communication graphs: generators, spectra, edge sampling, virtual-node expansion.

Graphs are immutable after construction and safe to share across concurrent
runs.  Spectra are computed by dense symmetric eigendecomposition, which keeps
results exact at desk scale (node counts up to a configurable cap).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

# Dense eigendecomposition cap; larger graphs are refused rather than solved
# approximately.
DENSE_EIG_CAP = 2000

WATTS_STROGATZ_MAX_RETRIES = 100


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on nodes 0..n-1 with a canonical edge list."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"node count must be positive, got {self.n}")
        seen = set()
        for (i, j) in self.edges:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={self.n}")
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            if i > j:
                raise ValueError(f"edge ({i}, {j}) not canonically ordered")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))

    @classmethod
    def from_edges(cls, n, edges):
        """Build a graph, canonicalizing (and deduplicating) the edge list."""
        canon = sorted({(min(i, j), max(i, j)) for (i, j) in edges})
        return cls(n=n, edges=tuple(canon))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def degrees(self) -> np.ndarray:
        d = np.zeros(self.n, dtype=np.int64)
        for (i, j) in self.edges:
            d[i] += 1
            d[j] += 1
        d.setflags(write=False)
        return d

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for (i, j) in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return tuple(tuple(sorted(a)) for a in adj)

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for (i, j) in self.edges:
            a[i, j] = a[j, i] = 1.0
        return a

    def laplacian(self) -> np.ndarray:
        """L = D - A."""
        return np.diag(self.degrees.astype(float)) - self.adjacency()

    def expected_gossip_matrix(self) -> np.ndarray:
        """Expectation of the pairwise averaging matrix over a uniform edge draw.

        Averaging along edge (i, j) applies I - (e_i - e_j)(e_i - e_j)^T / 2;
        the uniform-edge expectation is I - L / (2m).
        """
        return np.eye(self.n) - self.laplacian() / (2 * self.num_edges)

    def is_connected(self) -> bool:
        if self.n == 1:
            return True
        seen = {0}
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for v in self.neighbors[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return len(seen) == self.n

    def is_bipartite(self) -> bool:
        color = [-1] * self.n
        for start in range(self.n):
            if color[start] != -1:
                continue
            color[start] = 0
            queue = deque([start])
            while queue:
                u = queue.popleft()
                for v in self.neighbors[u]:
                    if color[v] == -1:
                        color[v] = 1 - color[u]
                        queue.append(v)
                    elif color[v] == color[u]:
                        return False
        return True

    def is_complete(self) -> bool:
        return self.num_edges == self.n * (self.n - 1) // 2


def complete_graph(n: int) -> Graph:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return Graph(n=n, edges=tuple(edges))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def _ring_lattice_edges(n: int, k: int) -> list[tuple[int, int]]:
    edges = []
    for lane in range(1, k // 2 + 1):
        for i in range(n):
            edges.append((i, (i + lane) % n))
    return edges


def watts_strogatz_graph(n: int, k: int, p: float, rng: np.random.Generator) -> Graph:
    """Classic Watts-Strogatz small-world graph, resampled until connected.

    Starts from a ring lattice of even mean degree k and rewires the far
    ("clockwise") endpoint of each lattice edge independently with probability
    p, to a uniform non-self, non-duplicate target.  An odd k is rounded down
    to the nearest even value.
    """
    if k % 2 == 1:
        k -= 1
    if not (2 <= k < n):
        raise ValueError(f"watts_strogatz needs even k with 2 <= k < n, got k={k}, n={n}")
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"rewiring probability must be in [0, 1], got {p}")
    for _ in range(WATTS_STROGATZ_MAX_RETRIES):
        present = {(min(i, j), max(i, j)) for (i, j) in _ring_lattice_edges(n, k)}
        for (i, j) in _ring_lattice_edges(n, k):
            if rng.random() >= p:
                continue
            old = (min(i, j), max(i, j))
            # rewire the far endpoint j -> uniform fresh target
            candidates = [t for t in range(n)
                          if t != i and (min(i, t), max(i, t)) not in present]
            if not candidates:
                continue
            new_j = candidates[rng.integers(len(candidates))]
            present.discard(old)
            present.add((min(i, new_j), max(i, new_j)))
        g = Graph.from_edges(n, present)
        if g.is_connected():
            return g
    raise RuntimeError(
        f"could not sample a connected Watts-Strogatz graph in "
        f"{WATTS_STROGATZ_MAX_RETRIES} attempts (n={n}, k={k}, p={p})")


def build_topology(kind: str, n: int, ws_params: tuple[int, float] | None = None,
                   rng: np.random.Generator | None = None) -> Graph:
    """Construct a named communication topology.

    kind is one of "complete", "cycle", "watts_strogatz"; the latter needs
    ws_params = (k, p) and a seeded rng.
    """
    if n < 3:
        raise ValueError(f"need at least 3 nodes, got {n}")
    if kind == "complete":
        return complete_graph(n)
    if kind == "cycle":
        return cycle_graph(n)
    if kind == "watts_strogatz":
        if ws_params is None:
            raise ValueError("watts_strogatz requires ws_params=(k, p)")
        if rng is None:
            raise ValueError("watts_strogatz requires a seeded rng")
        k, p = ws_params
        return watts_strogatz_graph(n, k, p, rng)
    raise ValueError(f"unknown topology kind: {kind!r}")


def spectral_gap(g: Graph) -> float:
    """1 - lambda_2 of the expected gossip matrix I - L/(2m).

    Equivalently beta_{n-1} / (2m) with beta_{n-1} the second-smallest
    Laplacian eigenvalue.  Requires a connected, non-bipartite graph.
    """
    if g.n > DENSE_EIG_CAP:
        raise ValueError(f"graph too large for dense spectra (n={g.n} > {DENSE_EIG_CAP})")
    if not g.is_connected():
        raise ValueError("spectral gap requires a connected graph")
    if g.is_bipartite():
        raise ValueError("spectral gap requires a non-bipartite graph")
    beta = np.linalg.eigvalsh(g.laplacian())
    return float(beta[1] / (2 * g.num_edges))


def tensor_with_complete(g: Graph, k: int) -> Graph:
    """Expand each node into k virtual nodes: the tensor product with K_k.

    The adjacency of the product is J_k (x) A, i.e. virtual copies (i, a) and
    (j, b) are linked iff (i, j) is an edge of g, for all a, b.  This gives
    k n nodes and k^2 m edges, and divides the spectral gap by k for
    non-complete g.  Virtual node (i, a) has index i*k + a.
    """
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    if g.is_complete():
        raise ValueError("virtual-node expansion is undefined for complete graphs "
                         "(the gap-division identity requires a non-complete base)")
    edges = []
    for (i, j) in g.edges:
        for a in range(k):
            for b in range(k):
                u, v = i * k + a, j * k + b
                edges.append((min(u, v), max(u, v)))
    return Graph.from_edges(g.n * k, edges)


def sample_edge(g: Graph, rng: np.random.Generator) -> tuple[int, int]:
    """Uniform edge draw; both orientations of the returned pair equally likely."""
    if g.num_edges < 1:
        raise ValueError("graph has no edges")
    i, j = g.edges[rng.integers(g.num_edges)]
    if rng.random() < 0.5:
        return j, i
    return i, j


def activation_probabilities(g: Graph) -> np.ndarray:
    """Per-node probability of being an endpoint of a uniform edge draw.

    p_k = d_k / m, so that sum_k p_k = 2 (each draw touches two nodes).
    """
    return g.degrees / g.num_edges


def write_edgelist(g: Graph, path) -> None:
    """Text export: first line "n m", then one "i j" line per edge (0-based)."""
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.num_edges}\n")
        for (i, j) in g.edges:
            fh.write(f"{i} {j}\n")


def read_edgelist(path) -> Graph:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError("edge-list header must be 'n m'")
        n, m = int(header[0]), int(header[1])
        edges = []
        for line in fh:
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"malformed edge line: {line!r}")
            edges.append((int(parts[0]), int(parts[1])))
    if len(edges) != m:
        raise ValueError(f"expected {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)
