"""Systematic polar-style erasure code construction for the erasure channel.

Channel qualities come from the Bhattacharyya recursion on the binary erasure
channel. The k best synthetic channels carry the source packets; the columns
of the frozen (worst) channels, restricted to the information rows, form a
reservoir of parity packets ordered so that the most generally useful column
is transmitted first.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import gf2
from .codec import CodeSpec, SystematicXorCodec
from .gf2 import BitMatrix

BLOCK_CAP = 1 << gf2.KERNEL_POWER_CAP


class ConstructionError(Exception):
    """The algebraic soundness check of the construction failed."""


def bhattacharyya(levels: int, epsilon: float) -> list[float]:
    """Per-channel Bhattacharyya parameters after `levels` polarization steps.

    Parameters
    ----------
    levels : number of recursion levels; produces 2**levels channels.
    epsilon : erasure probability of the underlying channel, in (0, 1).

    Returns
    -------
    List of length 2**levels; entry c-1 is the parameter of channel c.
    Each step replaces a value z by the adjacent pair (2z - z^2, z^2), so
    channel 1 is always the worst and channel 2**levels the best.
    """
    if levels < 1:
        raise ValueError("need at least one level")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    z = [epsilon]
    for _ in range(levels):
        z = [w for v in z for w in (2.0 * v - v * v, v * v)]
    return z


def quality_order(z: Sequence[float]) -> list[int]:
    """Channel indices sorted best first (smallest parameter first).

    Equal parameters are broken in favor of the higher channel index, which
    matters once extreme values round to the same float.
    """
    return sorted(range(1, len(z) + 1), key=lambda c: (z[c - 1], -c))


def channel_split(levels: int, k: int, epsilon: float) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split channels into the k information channels (decreasing quality)
    and the frozen remainder (increasing quality, worst first)."""
    n = 1 << levels
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < 2**levels, got k={k}, n={n}")
    order = quality_order(bhattacharyya(levels, epsilon))
    info = tuple(order[:k])
    frozen = tuple(reversed(order[k:]))
    return info, frozen


@dataclass(frozen=True)
class PolarConstruction:
    """Result of the systematic construction.

    Row t of the reservoir corresponds to source packet t, which rides on
    info_channels[t-1]. Column j of the reservoir is the parity packet for
    parity_channels[j-1], already restricted to the information rows: the
    frozen rows carry no information, so their ones simply disappear from
    the column.
    """

    block_length: int
    k: int
    epsilon: float
    info_channels: tuple[int, ...]
    parity_channels: tuple[int, ...]
    reservoir: BitMatrix
    channel_erasure: tuple[float, ...] = field(repr=False)

    @property
    def parity_count(self) -> int:
        return self.block_length - self.k

    def reservoir_masks(self) -> list[int]:
        """Reservoir columns as k-bit masks, bit t-1 = source packet t."""
        return [self.reservoir.column(j) for j in range(self.parity_count)]

    def raw_degrees(self) -> list[int]:
        """Ones per reservoir column counted over the full kernel power."""
        out = []
        for ch in self.parity_channels:
            col = ch - 1
            out.append(sum(gf2.kernel_entry(r, col) for r in range(self.block_length)))
        return out

    def effective_degrees(self) -> list[int]:
        """Ones per reservoir column after the frozen rows are dropped."""
        return [self.reservoir.column(j).bit_count() for j in range(self.parity_count)]


def construct_systematic(levels: int, k: int, epsilon: float) -> PolarConstruction:
    """Build the systematic code for 2**levels channels and k source packets.

    The k x k submatrix of the kernel power on the information channels is
    checked to be self-inverse; that is the algebraic fact that lets the
    information columns be replaced by the identity while the frozen-channel
    columns keep their kernel entries on the information rows. A failure
    raises ConstructionError rather than producing a quietly wrong code.
    """
    info, frozen = channel_split(levels, k, epsilon)
    n = 1 << levels
    sub = BitMatrix(k, k, [
        sum((1 << s) for s in range(k) if gf2.kernel_entry(info[t] - 1, info[s] - 1))
        for t in range(k)
    ])
    if gf2.multiply(sub, sub) != BitMatrix.identity(k):
        raise ConstructionError(
            f"information submatrix is not self-inverse for levels={levels}, "
            f"k={k}, epsilon={epsilon}")
    reservoir = BitMatrix(k, n - k, [
        sum((1 << j) for j, ch in enumerate(frozen) if gf2.kernel_entry(info[t] - 1, ch - 1))
        for t in range(k)
    ])
    return PolarConstruction(
        block_length=n,
        k=k,
        epsilon=epsilon,
        info_channels=info,
        parity_channels=frozen,
        reservoir=reservoir,
        channel_erasure=tuple(bhattacharyya(levels, epsilon)),
    )


class PolarCodec(SystematicXorCodec):
    """Wire-format codec view of a PolarConstruction."""

    def __init__(self, construction: PolarConstruction):
        super().__init__(construction.k)
        self.construction = construction
        self._masks = construction.reservoir_masks()

    @property
    def spec(self) -> CodeSpec:
        c = self.construction
        return CodeSpec(family="polar", n=c.block_length, k=c.k, epsilon=c.epsilon)

    @property
    def parity_limit(self) -> int | None:
        return len(self._masks)

    def parity_mask(self, j: int) -> int:
        self._check_parity_index(j)
        return self._masks[j - 1]

    def __repr__(self) -> str:
        c = self.construction
        return f"PolarCodec(n={c.block_length}, k={c.k}, epsilon={c.epsilon})"


def polar_for_parity(k: int, p: int, epsilon: float) -> PolarCodec:
    """Codec sized for k source plus p parity packets.

    Uses the smallest power-of-two block that fits k+p packets; the extra
    reservoir columns beyond p exist at no cost and stay available for
    incremental repair.
    """
    if k < 1 or p < 0:
        raise ValueError(f"need k >= 1 and p >= 0, got k={k}, p={p}")
    if k + p > BLOCK_CAP:
        raise ValueError(f"k+p={k + p} exceeds the block cap {BLOCK_CAP}")
    levels = 1
    while (1 << levels) < k + p or (1 << levels) <= k:
        levels += 1
    return PolarCodec(construct_systematic(levels, k, epsilon))
