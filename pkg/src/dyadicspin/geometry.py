"""Coupling graph and distance notions for power-of-two coupled spin chains.

Sites 0..N-1 carry pairwise flip-flop couplings J(d) = J_s * 2**(l*s) whenever
the separation d equals 2**l, and zero otherwise.  The overall scale J_s is
fixed so that the largest coupling equals j0 for every exponent s: short-range
bonds dominate for s < 0 (chain-like geometry), long-range bonds dominate for
s > 0 (tree-like geometry).

Three notions of distance coexist on this graph:

* archimedean: ordinary separation |i-j| (minimal image when periodic),
* 2-adic: |i-j|_2 = 2**(-v), with 2**v the largest power of two dividing i-j;
  equivalently a tree distance between leaves ordered by the bit-reversal
  (Monna) permutation,
* graph: minimum hop count along nonzero couplings, at most
  ceil(log2(N)/2) hops for any pair.

All quantities here are immutable after construction and cheap to compute;
heavier dynamics modules consume the dense bond matrix built by
``interaction_matrix``.
"""

from __future__ import annotations

import collections
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

PERIODIC = "periodic"
OPEN = "open"


def is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class CouplingModel:
    """Parameters of the coupling graph.

    n_sites: number of sites (>= 4; a power of 2 when boundary is periodic).
    s:       coupling exponent; s < 0 favors short bonds, s > 0 long bonds.
    j0:      value of the largest coupling (sets the unit of energy).
    boundary: "periodic" (minimal-image separations) or "open" (literal).
    """

    n_sites: int
    s: float = 0.0
    j0: float = 1.0
    boundary: str = PERIODIC

    def __post_init__(self):
        if self.boundary not in (PERIODIC, OPEN):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if self.n_sites < 4:
            raise ValueError("n_sites must be at least 4")
        if self.boundary == PERIODIC and not is_power_of_two(self.n_sites):
            raise ValueError("periodic boundary requires n_sites to be a power of 2")
        if not self.j0 > 0:
            raise ValueError("j0 must be positive")

    @property
    def max_distance(self) -> int:
        """Largest realizable separation: N//2 minimal-image, N-1 open."""
        if self.boundary == PERIODIC:
            return self.n_sites // 2
        return self.n_sites - 1

    @property
    def coupled_distances(self) -> tuple[int, ...]:
        """Powers of two up to the largest realizable separation."""
        ds = []
        d = 1
        while d <= self.max_distance:
            ds.append(d)
            d *= 2
        return tuple(ds)

    @property
    def coupling_scale(self) -> float:
        """Prefactor J_s such that the largest coupling equals j0 exactly."""
        if self.s <= 0:
            return self.j0
        return self.j0 * self.coupled_distances[-1] ** (-self.s)

    def check_index(self, i: int) -> None:
        if not 0 <= i < self.n_sites:
            raise IndexError(f"site index {i} out of range 0..{self.n_sites - 1}")


def archimedean_distance(model: CouplingModel, i: int, j: int) -> int:
    """Separation |i-j|, minimal-image for periodic boundary."""
    model.check_index(i)
    model.check_index(j)
    d = abs(i - j)
    if model.boundary == PERIODIC:
        d = min(d, model.n_sites - d)
    return d


def _bond_strength(model: CouplingModel, d: int) -> float:
    # (d / d_max)**s for s > 0 keeps the largest bond at j0 exactly; the
    # mathematically equivalent J_s * d**s picks up a rounding ulp
    if model.s <= 0:
        return model.j0 * float(d) ** model.s
    return model.j0 * (d / model.coupled_distances[-1]) ** model.s


def coupling_table(model: CouplingModel) -> dict[int, float]:
    """Map separation -> coupling strength for the nonzero bonds."""
    return {d: _bond_strength(model, d) for d in model.coupled_distances}


def coupling(model: CouplingModel, i: int, j: int) -> float:
    """Coupling between sites i and j: J_s * d**s when the separation d is a
    power of two, zero otherwise (including i == j)."""
    d = archimedean_distance(model, i, j)
    if d == 0 or not is_power_of_two(d):
        return 0.0
    return _bond_strength(model, d)


def interaction_matrix(model: CouplingModel) -> np.ndarray:
    """Dense symmetric bond matrix W used by every dynamics module.

    W[i, j] sums the coupling over all displacement images of j - i.  On a
    periodic ring only the antipodal separation N/2 has two images (+N/2 and
    -N/2 reach the same site), so that bond carries twice the bare coupling;
    every other bond equals ``coupling(model, i, j)``.  This image-summed
    convention is what reproduces the plane-wave dispersion table exactly.
    """
    n = model.n_sites
    table = coupling_table(model)
    w = np.zeros((n, n))
    for d, val in table.items():
        for i in range(n):
            if model.boundary == PERIODIC:
                # the antipode d == n/2 is visited from both endpoints,
                # accumulating the two images of that displacement
                w[i, (i + d) % n] += val
                w[(i + d) % n, i] += val
            elif i + d < n:
                w[i, i + d] += val
                w[i + d, i] += val
    return w


def monna_map(n_sites: int, i: int) -> int:
    """Bit-reversal permutation of site i in log2(n_sites) bits.

    Maps physical site order to the left-to-right leaf order of the binary
    tree; it is an involution.
    """
    if not is_power_of_two(n_sites):
        raise ValueError("monna_map requires a power-of-two n_sites")
    if not 0 <= i < n_sites:
        raise IndexError(f"site index {i} out of range 0..{n_sites - 1}")
    bits = n_sites.bit_length() - 1
    rev = 0
    for _ in range(bits):
        rev = (rev << 1) | (i & 1)
        i >>= 1
    return rev


def monna_permutation(n_sites: int) -> np.ndarray:
    """All of monna_map at once: perm[i] = bit-reversal of i."""
    return np.array([monna_map(n_sites, i) for i in range(n_sites)], dtype=np.int64)


def two_adic_valuation(x: int) -> int:
    """Exponent of the largest power of two dividing x (x != 0)."""
    if x == 0:
        raise ValueError("valuation of zero is undefined")
    x = abs(x)
    return (x & -x).bit_length() - 1


def two_adic_norm(n_sites: int, i: int, j: int) -> Fraction:
    """2-adic norm |i-j|_2 = 2**(-v) of the site difference, taken mod N.

    The valuation v of (i-j) mod N is representative-independent for N a
    power of 2 and i != j.  Raises on i == j (norm of zero).
    """
    if not is_power_of_two(n_sites):
        raise ValueError("two_adic_norm requires a power-of-two n_sites")
    for idx in (i, j):
        if not 0 <= idx < n_sites:
            raise IndexError(f"site index {idx} out of range 0..{n_sites - 1}")
    x = (i - j) % n_sites
    if x == 0:
        raise ValueError("two_adic_norm undefined for i == j")
    return Fraction(1, 2 ** two_adic_valuation(x))


def tree_distance(n_sites: int, i: int, j: int) -> int:
    """Edge count between leaves i and j of the depth-log2(N) binary tree
    whose leaves are ordered by the Monna map; 0 for i == j.

    Related to the 2-adic norm by |i-j|_2 = 2**(d_tree/2) / N.
    """
    if i == j:
        return 0
    v = two_adic_valuation((i - j) % n_sites)
    depth = n_sites.bit_length() - 1
    return 2 * (depth - v)


def _neighbor_offsets(model: CouplingModel) -> list[int]:
    offs = []
    for d in model.coupled_distances:
        offs.append(d)
        if model.boundary == PERIODIC:
            if d != model.n_sites - d:
                offs.append(model.n_sites - d)
        else:
            offs.append(-d)
    return offs


def graph_distances_from(model: CouplingModel, source: int) -> np.ndarray:
    """Hop counts from source to every site by breadth-first search over the
    coupling graph (edges at all power-of-two separations)."""
    model.check_index(source)
    n = model.n_sites
    offs = _neighbor_offsets(model)
    dist = np.full(n, -1, dtype=np.int64)
    dist[source] = 0
    queue = collections.deque([source])
    while queue:
        u = queue.popleft()
        for off in offs:
            v = u + off
            if model.boundary == PERIODIC:
                v %= n
            elif not 0 <= v < n:
                continue
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def graph_distance(model: CouplingModel, i: int, j: int) -> int:
    """Shortest hop count between i and j on the coupling graph."""
    model.check_index(j)
    return int(graph_distances_from(model, i)[j])


def graph_diameter_bound(n_sites: int) -> int:
    """ceil(log2(N)/2), the guaranteed cap on any graph distance."""
    return -(-(n_sites.bit_length() - 1) // 2)


@dataclass(frozen=True)
class SiteDistance:
    """Bundle of the distance notions for one site pair."""

    archimedean: int
    two_adic: Fraction
    tree: int
    graph: int


def site_distance(model: CouplingModel, i: int, j: int) -> SiteDistance:
    """All distance notions between i and j (2-adic/tree require periodic)."""
    if model.boundary != PERIODIC:
        raise ValueError("2-adic and tree distances are defined for periodic models")
    return SiteDistance(
        archimedean=archimedean_distance(model, i, j),
        two_adic=two_adic_norm(model.n_sites, i, j) if i != j else Fraction(0),
        tree=tree_distance(model.n_sites, i, j),
        graph=graph_distance(model, i, j),
    )
