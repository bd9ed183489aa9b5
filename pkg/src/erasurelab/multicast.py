"""Incremental repair simulation for a multicast group.

Every receiver gets the k source packets, loses some subset, and repair
parity is broadcast one packet per round. The simulation enumerates loss
patterns with their probabilities and reports which fraction of the group
(probability weighted) is fully repaired after each round. Parity packets
themselves are modeled as loss free; the weighting only covers the source
packet losses being repaired.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .analytics import ErasurePattern
from .codec import CodeSpec

PATTERN_CAP = 10**6


@dataclass(frozen=True)
class PatternSet:
    """Enumerated source-loss patterns for one channel."""

    k: int
    e_max: int
    p_e: float
    patterns: tuple[ErasurePattern, ...]


@dataclass(frozen=True)
class RecoveryTable:
    """Per pattern and per round, how many lost packets were repaired."""

    code: CodeSpec
    rounds: int
    lost_sizes: tuple[int, ...]
    recovered: tuple[tuple[int, ...], ...]  # [pattern][round 0..rounds]

    def full_recovery_round(self, pattern_index: int) -> int | None:
        """First round after which the pattern is fully repaired."""
        size = self.lost_sizes[pattern_index]
        for t, count in enumerate(self.recovered[pattern_index]):
            if count == size:
                return t
        return None


@dataclass(frozen=True)
class CdfCurve:
    """Weighted fraction of impaired receivers repaired per round."""

    code: CodeSpec
    p_e: float
    e_max: int
    points: tuple[tuple[int, float], ...]
    partial: bool = False
    parity_lossless: bool = True


def enumerate_patterns(k: int, e_max: int, p_e: float, cap: int = PATTERN_CAP) -> PatternSet:
    """All patterns of 1..e_max losses among the k source packets.

    Each pattern of i losses occurs with probability p_e^i * (1-p_e)^(k-i);
    the zero-loss pattern is deliberately excluded, so the probabilities are
    weights over impaired receivers, not a distribution summing to one.
    """
    if k < 1:
        raise ValueError("need at least one source packet")
    if not 1 <= e_max <= k:
        raise ValueError(f"need 1 <= e_max <= k, got e_max={e_max}")
    if not 0.0 <= p_e <= 1.0:
        raise ValueError(f"erasure probability must be in [0, 1], got {p_e}")
    total = sum(math.comb(k, i) for i in range(1, e_max + 1))
    if total > cap:
        raise ValueError(
            f"{total} patterns exceed the enumeration cap {cap}; lower e_max "
            f"or sample patterns instead of enumerating them")
    patterns = []
    for i in range(1, e_max + 1):
        prob = p_e**i * (1.0 - p_e) ** (k - i)
        for combo in combinations(range(1, k + 1), i):
            patterns.append(ErasurePattern(lost=frozenset(combo), probability=prob))
    return PatternSet(k=k, e_max=e_max, p_e=p_e, patterns=tuple(patterns))


def simulate_incremental(codec, pattern_set: PatternSet, rounds: int | None = None) -> RecoveryTable:
    """Replay incremental repair for every pattern.

    Round t gives each receiver its surviving source packets plus parity
    packets 1..t; the entry records how many of its lost packets decoding
    pins down. Patterns are independent, so this is a pure map over them.
    """
    if codec.k != pattern_set.k:
        raise ValueError(f"codec has k={codec.k}, patterns have k={pattern_set.k}")
    if rounds is None:
        rounds = codec.parity_limit
        if rounds is None:
            raise ValueError("codec has no parity limit; pass rounds explicitly")
    limit = codec.parity_limit
    if limit is not None and rounds > limit:
        raise ValueError(f"rounds {rounds} exceed the parity limit {limit}")
    k = codec.k
    lost_sizes = []
    recovered = []
    for pattern in pattern_set.patterns:
        lost = pattern.lost
        survivors = [i for i in range(1, k + 1) if i not in lost]
        row = []
        for t in range(rounds + 1):
            if row and row[-1] == len(lost):
                row.append(len(lost))
                continue
            received = survivors + [k + j for j in range(1, t + 1)]
            unrec = codec.unrecovered_sources(received)
            row.append(len(lost) - len(unrec))
        lost_sizes.append(len(lost))
        recovered.append(tuple(row))
    return RecoveryTable(code=codec.spec, rounds=rounds,
                         lost_sizes=tuple(lost_sizes), recovered=tuple(recovered))


def weighted_cdf(table: RecoveryTable, pattern_set: PatternSet,
                 partial: bool = False) -> CdfCurve:
    """Probability-weighted repair curve over rounds.

    Full mode counts a pattern once everything it lost is repaired; partial
    mode credits the repaired fraction of each pattern instead.
    """
    if len(pattern_set.patterns) != len(table.lost_sizes):
        raise ValueError("pattern set does not match the recovery table")
    denom = math.fsum(p.probability for p in pattern_set.patterns)
    points = []
    for t in range(table.rounds + 1):
        if partial:
            num = math.fsum(
                p.probability * table.recovered[idx][t] / table.lost_sizes[idx]
                for idx, p in enumerate(pattern_set.patterns))
        else:
            num = math.fsum(
                p.probability
                for idx, p in enumerate(pattern_set.patterns)
                if table.recovered[idx][t] == table.lost_sizes[idx])
        points.append((t, num / denom))
    return CdfCurve(code=table.code, p_e=pattern_set.p_e, e_max=pattern_set.e_max,
                    points=tuple(points), partial=partial)
