"""Frequency grids h_0(n), ..., h_n(n)."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import libmp

from .arith import Mode, Scalar, as_scalar, check_uniform_mode, parse_rational
from .errors import DegenerateGrid, DuplicateNodes, InvalidParameter


class Family(enum.Enum):
    UNIFORM = "uniform"
    POWER_DEN = "power-den"
    POWER_NUM = "power-num"
    CUSTOM = "custom"


@dataclass(frozen=True)
class FrequencyGrid:
    """Ordered, pairwise distinct nodes.

    Build through the ``grid_*`` constructors, which validate; the named
    families are stored in generation order (descending).
    """

    nodes: tuple
    family: Family = Family.CUSTOM
    params: dict = field(default_factory=dict, hash=False)
    band_limited: bool = True
    warnings: tuple = ()

    @property
    def n(self) -> int:
        return len(self.nodes) - 1

    @property
    def mode(self) -> Mode:
        return self.nodes[0].mode

    @property
    def bits(self):
        return self.nodes[0].bits

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def __getitem__(self, j):
        return self.nodes[j]

    def vandermonde_determinant(self) -> Scalar:
        """prod_{i<j} (h_j - h_i)."""
        det = Scalar(1) if self.mode is Mode.EXACT else Scalar(1, self.bits)
        for j in range(len(self.nodes)):
            for i in range(j):
                det = det * (self.nodes[j] - self.nodes[i])
        return det

    def to_float(self, bits: int, min_sep=None) -> "FrequencyGrid":
        """Round every node to ``bits``; re-validates distinctness."""
        nodes = [h.round(bits) for h in self.nodes]
        return _build(nodes, self.family, self.params, min_sep=min_sep, allow_degenerate=len(nodes) == 1)

    def permuted(self, order) -> "FrequencyGrid":
        return _build([self.nodes[k] for k in order], Family.CUSTOM, {}, allow_degenerate=len(self.nodes) == 1)

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "family": self.family.value,
            "params": dict(self.params),
            "nodes": [str(h) for h in self.nodes],
            "band_limited": self.band_limited,
        }
        if self.mode is Mode.FLOAT:
            out["bits"] = self.bits
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out


def default_min_sep(bits: int) -> Fraction:
    return Fraction(1, 2 ** (bits // 2))


def _find_duplicate(nodes, min_sep):
    order = sorted(range(len(nodes)), key=lambda k: nodes[k].to_fraction())
    for a, b in zip(order, order[1:]):
        ha, hb = nodes[a], nodes[b]
        if ha == hb:
            return a, b
        if min_sep is not None:
            scale = max(abs(ha.to_fraction()), abs(hb.to_fraction()))
            if abs(hb.to_fraction() - ha.to_fraction()) < min_sep * scale:
                return a, b
    return None


def _build(nodes, family, params, min_sep=None, allow_degenerate=False):
    nodes = tuple(as_scalar(h) for h in nodes)
    if not nodes:
        raise DegenerateGrid("a grid needs at least one node")
    if len(nodes) == 1 and not allow_degenerate:
        raise DegenerateGrid("a single-node grid needs allow_degenerate=True")
    mode = check_uniform_mode(nodes)
    if mode is Mode.FLOAT:
        bits = max(h.bits for h in nodes)
        nodes = tuple(h.round(bits) if h.bits != bits else h for h in nodes)
        if min_sep is None:
            min_sep = default_min_sep(bits)
        min_sep = parse_rational(min_sep)
    else:
        min_sep = None
    dup = _find_duplicate(nodes, min_sep)
    if dup is not None:
        i, j = sorted(dup)
        raise DuplicateNodes(
            f"nodes {i} and {j} coincide ({nodes[i]} vs {nodes[j]})",
            first=i,
            second=j,
        )
    band_limited = all(abs(h) <= 1 for h in nodes)
    warnings = ()
    if not band_limited:
        warnings = ("nodes outside [-1, 1]: the sum is not band-limited to 1",)
    return FrequencyGrid(nodes, family, dict(params), band_limited, warnings)


def _check_np(n, p=1):
    if n < 1:
        raise DegenerateGrid(f"n must be >= 1, got {n}")
    if p < 1:
        raise InvalidParameter(f"p must be >= 1, got {p}")


def grid_uniform_linear(n: int) -> FrequencyGrid:
    """Nodes 1 - 2j/n, j = 0..n."""
    _check_np(n)
    return _build([1 - Fraction(2 * j, n) for j in range(n + 1)], Family.UNIFORM, {})


def grid_power_denominator(n: int, p: int) -> FrequencyGrid:
    """Nodes 1 - 2j/n**p, clustered near 1 for p > 1."""
    _check_np(n, p)
    return _build([1 - Fraction(2 * j, n**p) for j in range(n + 1)], Family.POWER_DEN, {"p": p})


def grid_power_numerator(n: int, p: int) -> FrequencyGrid:
    """Nodes 1 - (2j/n)**p; leaves [-1, 1] when p >= 2."""
    _check_np(n, p)
    return _build([1 - Fraction(2 * j, n) ** p for j in range(n + 1)], Family.POWER_NUM, {"p": p})


def grid_custom(nodes, *, min_sep=None, allow_degenerate=False) -> FrequencyGrid:
    """Validate user nodes (kept in the given order).

    Float nodes closer than ``min_sep`` (relative) are rejected; the
    default is 2**-(bits // 2).
    """
    return _build(list(nodes), Family.CUSTOM, {}, min_sep=min_sep, allow_degenerate=allow_degenerate)


def make_grid(family, n=None, p=None, nodes=None) -> FrequencyGrid:
    family = Family(family) if not isinstance(family, Family) else family
    if family is Family.UNIFORM:
        return grid_uniform_linear(n)
    if family is Family.POWER_DEN:
        return grid_power_denominator(n, 1 if p is None else p)
    if family is Family.POWER_NUM:
        return grid_power_numerator(n, 1 if p is None else p)
    if nodes is None:
        raise InvalidParameter("custom grid needs explicit nodes")
    return grid_custom(nodes)


def grid_from_dict(doc: dict) -> FrequencyGrid:
    """Inverse of :meth:`FrequencyGrid.to_dict`."""
    bits = doc.get("bits")
    if bits is None:
        nodes = [Scalar(parse_rational(s)) for s in doc["nodes"]]
    else:
        nodes = [Scalar._raw(libmp.from_str(str(s), bits, libmp.round_nearest), bits) for s in doc["nodes"]]
    family = Family(doc.get("family", "custom"))
    grid = _build(nodes, family, doc.get("params", {}), allow_degenerate=len(nodes) == 1)
    if "n" in doc and doc["n"] != grid.n:
        raise InvalidParameter(f"grid document says n={doc['n']} but has {len(nodes)} nodes")
    return grid
