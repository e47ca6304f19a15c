"""Degree distributions of contact networks.

Provides the synthetic generators (truncated Poisson for Erdos-Renyi-like
networks, truncated power law for scale-free ones), ingestion of empirical
edge lists, the excess-degree transform, and a plain-text serialization
format (`degree probability` per line).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateDistributionError, IngestionError, ParameterError

__all__ = [
    "DegreeDistribution",
    "ExcessDistribution",
    "EdgeListStats",
    "poisson_distribution",
    "power_law_distribution",
    "from_edge_list",
    "load_edge_list",
    "excess_distribution",
    "write_distribution",
    "read_distribution",
]

_MASS_TOL = 1e-12


@dataclass(frozen=True)
class DegreeDistribution:
    """Probability mass over the integer degrees of a network.

    The support is the contiguous range ``k_min..k_max``; interior degrees
    may carry zero mass (sparse empirical histograms) but the bounds are
    tight: ``pmf[0] > 0`` and ``pmf[-1] > 0``.
    """

    k_min: int
    k_max: int
    pmf: np.ndarray

    def __post_init__(self):
        if self.k_min < 1:
            raise ParameterError(f"k_min must be >= 1, got {self.k_min}")
        if self.k_max < self.k_min:
            raise ParameterError(f"k_max={self.k_max} < k_min={self.k_min}")
        pmf = np.asarray(self.pmf, dtype=float)
        object.__setattr__(self, "pmf", pmf)
        if pmf.shape != (self.k_max - self.k_min + 1,):
            raise ParameterError(
                f"pmf length {pmf.shape} does not match degree range "
                f"[{self.k_min}, {self.k_max}]"
            )
        if np.any(pmf < 0):
            raise ParameterError("probabilities must be nonnegative")
        if abs(pmf.sum() - 1.0) > _MASS_TOL:
            raise ParameterError(f"probabilities sum to {pmf.sum()!r}, not 1")
        if pmf[0] <= 0 or pmf[-1] <= 0:
            raise ParameterError("support bounds must carry positive mass")

    @property
    def degrees(self) -> np.ndarray:
        """Integer degrees ``k_min..k_max``."""
        return np.arange(self.k_min, self.k_max + 1)

    @property
    def n_classes(self) -> int:
        """Number of degree classes, ``k_max - k_min + 1``."""
        return self.k_max - self.k_min + 1

    @property
    def mean_degree(self) -> float:
        """Average number of contacts per node."""
        return float(self.degrees @ self.pmf)

    def edge_end_weights(self) -> np.ndarray:
        """Fraction of edge ends attached to each degree class.

        Entry ``k`` is ``k * pmf_k / mean_degree``: the probability that a
        uniformly random edge end lands on a node of degree ``k``. These
        weights drive the infection-pressure sum of the mean-field model
        and sum to one.
        """
        return self.degrees * self.pmf / self.mean_degree


@dataclass(frozen=True)
class ExcessDistribution:
    """Distribution of a random neighbor's degree minus one.

    ``pmf[j]`` is the probability that a node reached along a random edge
    has ``k_min + j`` further contacts, i.e. excess degree ``k_min + j``
    where ``k_min`` here is one less than the underlying distribution's.
    """

    k_min: int
    pmf: np.ndarray
    mean_degree: float

    def __post_init__(self):
        pmf = np.asarray(self.pmf, dtype=float)
        object.__setattr__(self, "pmf", pmf)
        if np.any(pmf < 0) or abs(pmf.sum() - 1.0) > _MASS_TOL:
            raise ParameterError("excess probabilities must be nonnegative and sum to 1")

    @property
    def degrees(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_min + len(self.pmf))


@dataclass(frozen=True)
class EdgeListStats:
    """Summary of an ingested edge list (after filtering)."""

    n_nodes: int
    n_edges: int
    mean_degree: float
    n_classes: int
    n_self_loops: int = 0
    n_duplicates: int = 0


def _normalized(k_min: int, k_max: int, weights: np.ndarray) -> DegreeDistribution:
    """Trim zero-mass tails and normalize raw weights into a distribution."""
    total = weights.sum()
    if not np.isfinite(total) or total <= 0:
        raise DegenerateDistributionError("no probability mass on the requested support")
    nz = np.nonzero(weights)[0]
    lo, hi = nz[0], nz[-1]
    pmf = weights[lo : hi + 1] / weights[lo : hi + 1].sum()
    return DegreeDistribution(k_min + int(lo), k_min + int(hi), pmf)


def poisson_distribution(lam: float, k_min: int, k_max: int) -> DegreeDistribution:
    """Poisson degree distribution truncated to ``[k_min, k_max]``.

    Parameters
    ----------
    lam : float
        Rate of the untruncated Poisson law; for wide supports this is
        essentially the mean degree of the network.
    k_min, k_max : int
        Inclusive support bounds; ``k_min >= 1`` since isolated nodes do
        not take part in the epidemic.

    The probabilities are evaluated in log space so large degrees do not
    overflow ``lam**k / k!``. If the Poisson law leaves less than 1e-12 of
    its mass on the requested support the truncation is meaningless and a
    :class:`DegenerateDistributionError` is raised.
    """
    if not (lam > 0 and np.isfinite(lam)):
        raise ParameterError(f"lambda must be positive and finite, got {lam}")
    _check_bounds(k_min, k_max)
    ks = np.arange(k_min, k_max + 1)
    log_pmf = -lam + ks * math.log(lam) - np.array([math.lgamma(k + 1) for k in ks])
    # Mass retained by the truncation, evaluated without over/underflow.
    shift = log_pmf.max()
    retained = math.exp(shift) * np.exp(log_pmf - shift).sum()
    if retained < 1e-12:
        raise DegenerateDistributionError(
            f"Poisson(lambda={lam}) keeps only {retained:.3e} mass on "
            f"[{k_min}, {k_max}]"
        )
    return _normalized(k_min, k_max, np.exp(log_pmf - shift))


def power_law_distribution(alpha: float, k_min: int, k_max: int) -> DegreeDistribution:
    """Power-law degree distribution ``pmf_k ~ k**-alpha`` on ``[k_min, k_max]``.

    ``alpha = 0`` degenerates to the uniform distribution over the support.
    """
    if not (alpha >= 0 and np.isfinite(alpha)):
        raise ParameterError(f"alpha must be nonnegative and finite, got {alpha}")
    _check_bounds(k_min, k_max)
    ks = np.arange(k_min, k_max + 1, dtype=float)
    return _normalized(k_min, k_max, ks**-alpha if alpha else np.ones_like(ks))


def _check_bounds(k_min, k_max):
    if not (isinstance(k_min, (int, np.integer)) and isinstance(k_max, (int, np.integer))):
        raise ParameterError("degree bounds must be integers")
    if k_min < 1:
        raise ParameterError(f"k_min must be >= 1, got {k_min}")
    if k_max < k_min:
        raise ParameterError(f"k_max={k_max} < k_min={k_min}")


def from_edge_list(edges, dedupe: bool = True) -> tuple[DegreeDistribution, EdgeListStats]:
    """Build the empirical degree distribution of an undirected edge list.

    Parameters
    ----------
    edges : iterable of (node, node) pairs
        Node identifiers are opaque hashable tokens.
    dedupe : bool
        When True (default), self-loops are dropped and repeated edges
        (in either orientation) are counted once. When False their
        presence is an error.

    Returns
    -------
    (DegreeDistribution, EdgeListStats)
        The normalized degree histogram (degree-0 nodes excluded, so the
        epidemic model sees only connected nodes) and ingestion counters.
    """
    seen: set[frozenset] = set()
    degree: dict = {}
    n_self, n_dup = 0, 0
    for a, b in edges:
        if a == b:
            if not dedupe:
                raise IngestionError(f"self-loop at node {a!r}")
            n_self += 1
            continue
        key = frozenset((a, b))
        if key in seen:
            if not dedupe:
                raise IngestionError(f"duplicate edge ({a!r}, {b!r})")
            n_dup += 1
            continue
        seen.add(key)
        degree[a] = degree.get(a, 0) + 1
        degree[b] = degree.get(b, 0) + 1
    if not degree:
        raise DegenerateDistributionError("no edges left after filtering")

    counts = np.bincount(list(degree.values()))
    k_min = int(np.nonzero(counts)[0][0])  # >= 1: every counted node has an edge
    dist = _normalized(k_min, len(counts) - 1, counts[k_min:].astype(float))
    stats = EdgeListStats(
        n_nodes=len(degree),
        n_edges=len(seen),
        mean_degree=2 * len(seen) / len(degree),
        n_classes=dist.n_classes,
        n_self_loops=n_self,
        n_duplicates=n_dup,
    )
    return dist, stats


def load_edge_list(path) -> list[tuple[str, str]]:
    """Read whitespace-separated node-id pairs; ``#`` starts a comment."""
    edges = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise IngestionError(
                    f"{path}:{lineno}: expected two node ids, got {len(parts)} fields"
                )
            edges.append((parts[0], parts[1]))
    if not edges:
        raise IngestionError(f"{path}: no edges found")
    return edges


def excess_distribution(dist: DegreeDistribution) -> ExcessDistribution:
    """Distribution of the excess degree (degree minus one) of a random neighbor.

    The probability of excess degree ``j`` is ``(j+1) * pmf_{j+1} / mean``,
    supported on ``dist.k_min - 1 .. dist.k_max - 1``.
    """
    mean = dist.mean_degree
    q = (dist.degrees * dist.pmf) / mean
    q = q / q.sum()  # analytically 1; keep the invariant exact
    return ExcessDistribution(k_min=dist.k_min - 1, pmf=q, mean_degree=mean)


def write_distribution(dist: DegreeDistribution, path) -> None:
    """Write ``degree probability`` lines, full precision for exact round trips."""
    with open(path, "w") as fh:
        fh.write("# degree probability\n")
        for k, p in zip(dist.degrees, dist.pmf):
            fh.write(f"{k} {float(p)!r}\n")


def read_distribution(path) -> DegreeDistribution:
    """Read the two-column text format written by :func:`write_distribution`."""
    degrees, probs = [], []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise IngestionError(f"{path}:{lineno}: expected 'degree probability'")
            try:
                degrees.append(int(parts[0]))
                probs.append(float(parts[1]))
            except ValueError as exc:
                raise IngestionError(f"{path}:{lineno}: {exc}") from exc
    if not degrees:
        raise IngestionError(f"{path}: empty distribution file")
    k = np.asarray(degrees)
    if np.any(np.diff(k) <= 0):
        raise IngestionError(f"{path}: degrees must be strictly increasing")
    pmf = np.zeros(k[-1] - k[0] + 1)
    pmf[k - k[0]] = probs
    total = pmf.sum()
    if abs(total - 1.0) > 1e-9:
        raise IngestionError(f"{path}: probabilities sum to {total!r}, not 1")
    if abs(total - 1.0) > _MASS_TOL:
        return _normalized(int(k[0]), int(k[-1]), pmf)
    # already normalized: build directly so exact values round-trip untouched
    nz = np.nonzero(pmf)[0]
    lo, hi = int(nz[0]), int(nz[-1])
    return DegreeDistribution(int(k[0]) + lo, int(k[0]) + hi, pmf[lo : hi + 1])
