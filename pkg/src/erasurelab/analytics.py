"""Packet loss rate evaluation and redundancy planning.

The analytic path models a block of n packets sent over an erasure channel
with loss probability p_e. Residual loss after decoding is summarized as
PLR = (1/k) * sum over i of i * P(exactly i source packets stay lost).
The Monte-Carlo path simulates independent receivers against a real codec.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from . import rng
from .codec import FAMILIES

DEFAULT_RECEIVERS = 50_000
_BATCH = 1 << 18


@dataclass(frozen=True)
class PlrReport:
    """One packet-loss-rate evaluation."""

    family: str
    n: int
    k: int
    p_e: float
    plr: float
    method: str
    receivers: int | None = None
    seed: int | None = None


@dataclass(frozen=True)
class ErasurePattern:
    """A set of lost packet indices with its occurrence probability."""

    lost: frozenset[int]
    probability: float


@dataclass(frozen=True)
class OpCount:
    """Arithmetic cost model for producing parity packets."""

    family: str
    k: int
    p: int
    packet_size: int
    word_bytes: int
    per_column: float
    per_packet: float
    per_block: float


@dataclass(frozen=True)
class ParityPlan:
    """Smallest parity count meeting a loss target, with how it was found."""

    family: str
    k: int
    p: int
    n: int
    plr: float
    method: str
    receivers: int | None = None
    seed: int | None = None
    block_length: int | None = None


def _binomial_pmf(n: int, e: int, p: float) -> float:
    return math.comb(n, e) * p**e * (1.0 - p) ** (n - e)


def systematic_erasures_pmf(e: int, i: int, n: int, k: int) -> float:
    """Probability that i of e block erasures hit the k systematic packets.

    Hypergeometric split C(k,i)*C(n-k,e-i)/C(n,e); arguments outside the
    support are a caller error rather than silently zero.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if not 0 <= e <= n:
        raise ValueError(f"erasure count {e} out of range")
    if not 0 <= i <= min(e, k) or e - i > n - k:
        raise ValueError(f"systematic split i={i} impossible for e={e}, n={n}, k={k}")
    return math.comb(k, i) * math.comb(n - k, e - i) / math.comb(n, e)


def _validate_block(n: int, k: int, p_e: float) -> None:
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if not 0.0 <= p_e <= 1.0:
        raise ValueError(f"erasure probability must be in [0, 1], got {p_e}")


def _analytic_plr(n: int, k: int, p_e: float, failure_prob: Callable[[int], float]) -> float:
    """Shared mixture: erasure count e is binomial, failure_prob(e) is the
    chance decoding cannot repair, and the hypergeometric split says how many
    of the erasures were systematic."""
    terms = []
    for i in range(1, k + 1):
        for e in range(i, min(n, n - k + i) + 1):
            fail = failure_prob(e)
            if fail == 0.0:
                continue
            terms.append(i * fail * _binomial_pmf(n, e, p_e)
                         * systematic_erasures_pmf(e, i, n, k))
    return math.fsum(terms) / k


def plr_mds(n: int, k: int, p_e: float) -> PlrReport:
    """Residual loss of an MDS code: decoding fails exactly when more than
    n-k packets are erased, and then every lost systematic packet stays lost."""
    _validate_block(n, k, p_e)
    plr = _analytic_plr(n, k, p_e, lambda e: 1.0 if e > n - k else 0.0)
    return PlrReport(family="mds", n=n, k=k, p_e=p_e, plr=plr, method="analytic")


def plr_fountain(n: int, k: int, p_e: float) -> PlrReport:
    """Residual loss bound for the random fountain code.

    While the erasure count e fits the parity budget n-k, a random binary
    system with n-k-e spare equations fails with probability at most
    2**-(n-k-e); past the budget failure is certain. This makes the result an
    upper bound on the true loss rate, which is what planning wants.
    """
    _validate_block(n, k, p_e)
    budget = n - k

    def failure(e: int) -> float:
        if e > budget:
            return 1.0
        return 2.0 ** -(budget - e)

    plr = _analytic_plr(n, k, p_e, failure)
    return PlrReport(family="fountain", n=n, k=k, p_e=p_e, plr=plr, method="analytic")


def _count_losses(codec, n: int, masks: np.ndarray, counts: np.ndarray) -> int:
    cache = getattr(codec, "_loss_cache", None)
    if cache is None:
        cache = {}
        setattr(codec, "_loss_cache", cache)
    total = 0
    for mask, cnt in zip(masks.tolist(), counts.tolist()):
        key = (n, mask)
        loss = cache.get(key)
        if loss is None:
            survivors = [t + 1 for t in range(n) if not (mask >> t) & 1]
            loss = len(codec.unrecovered_sources(survivors))
            cache[key] = loss
        total += loss * cnt
    return total


def plr_empirical(codec, n: int, k: int, p_e: float, receivers: int = DEFAULT_RECEIVERS,
                  seed: int = 0, workers: int = 1) -> PlrReport:
    """Monte-Carlo loss rate over independent simulated receivers.

    Receiver r draws its erasures from a stream keyed by (seed, r), so the
    result is bit-identical for any worker count and any batch split.
    """
    _validate_block(n, k, p_e)
    if codec.k != k:
        raise ValueError(f"codec has k={codec.k}, expected {k}")
    limit = codec.parity_limit
    if limit is not None and n - k > limit:
        raise ValueError(f"codec provides {limit} parity packets, n={n} needs {n - k}")
    if receivers < 1:
        raise ValueError("need at least one receiver")
    if workers < 1:
        raise ValueError("need at least one worker")

    def run_range(first: int, count: int) -> int:
        total = 0
        done = 0
        while done < count:
            step = min(_BATCH, count - done)
            batch = rng.erasure_masks(seed, first + done, step, n, p_e)
            uniq, cnts = np.unique(batch, return_counts=True)
            total += _count_losses(codec, n, uniq, cnts)
            done += step
        return total

    bounds = [(receivers * w) // workers for w in range(workers + 1)]
    ranges = [(bounds[w], bounds[w + 1] - bounds[w]) for w in range(workers)
              if bounds[w + 1] > bounds[w]]
    if len(ranges) == 1:
        lost = run_range(*ranges[0])
    else:
        with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
            lost = sum(pool.map(lambda ab: run_range(*ab), ranges))
    plr = lost / (receivers * k)
    return PlrReport(family=getattr(codec, "spec").family, n=n, k=k, p_e=p_e,
                     plr=plr, method="mc", receivers=receivers, seed=seed)


def min_parity(family: str, k: int, p_e: float, plr_target: float, *,
               receivers: int = DEFAULT_RECEIVERS, seed: int = 0, workers: int = 1,
               p_max: int = 128) -> ParityPlan | None:
    """Smallest parity count whose predicted loss rate meets the target.

    MDS and fountain use their analytic expressions; polar has no closed form
    and is measured empirically. Residual loss shrinks as parity grows, so a
    linear scan from zero finds the minimum. Returns None when the target is
    unreachable within the family's limits.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if k < 1:
        raise ValueError("need at least one source packet")
    if not 0.0 <= p_e <= 1.0:
        raise ValueError(f"erasure probability must be in [0, 1], got {p_e}")
    if not 0.0 < plr_target < 1.0:
        raise ValueError(f"loss target must be in (0, 1), got {plr_target}")

    for p in range(p_max + 1):
        n = k + p
        if family == "mds" and n > 256:
            return None
        if p == 0:
            # no parity means no decoder: residual loss is the channel itself
            plr = p_e
            method = "analytic"
            block = None
        elif family == "mds":
            plr = plr_mds(n, k, p_e).plr
            method = "analytic"
            block = None
        elif family == "fountain":
            plr = plr_fountain(n, k, p_e).plr
            method = "analytic"
            block = None
        else:
            from .polar import polar_for_parity

            codec = polar_for_parity(k, p, p_e)
            plr = plr_empirical(codec, n, k, p_e, receivers=receivers, seed=seed,
                                workers=workers).plr
            method = "mc"
            block = codec.construction.block_length
        if plr <= plr_target:
            mc = method == "mc"
            return ParityPlan(family=family, k=k, p=p, n=n, plr=plr, method=method,
                              receivers=receivers if mc else None,
                              seed=seed if mc else None, block_length=block)
    return None


def op_count(family: str, k: int, p: int, packet_size: int = 1500,
             word_bytes: int = 8) -> OpCount:
    """Arithmetic cost of producing parity.

    MDS needs 2k-1 byte operations (k table multiplies, k-1 xors) per output
    byte per column. Binary codes xor on machine words: an average column
    selects half the sources, costing (k-1)/2 word xors per output word.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if k < 1 or p < 0:
        raise ValueError(f"need k >= 1 and p >= 0, got k={k}, p={p}")
    if packet_size < 1 or word_bytes < 1:
        raise ValueError("packet size and word width must be positive")
    if family == "mds":
        per_column = 2.0 * k - 1.0
        per_packet = per_column * packet_size
    else:
        per_column = (k - 1) / 2.0
        per_packet = per_column * (packet_size / word_bytes)
    return OpCount(family=family, k=k, p=p, packet_size=packet_size,
                   word_bytes=word_bytes, per_column=per_column,
                   per_packet=per_packet, per_block=per_packet * p)


def delay_budget(rtt: float, packet_interval: float, k: int, encode_delay: float,
                 decode_delay: float, transmit_delay: float,
                 repair_rounds: int = 0) -> float:
    """End-to-end delay of block repair with optional feedback rounds.

    One-way trip in, k packet intervals to fill the block, encode, transmit,
    then each repair round costs a full round trip plus transmissions both
    ways, and decoding closes the budget.
    """
    if min(rtt, packet_interval, encode_delay, decode_delay, transmit_delay) < 0:
        raise ValueError("delay components must be non-negative")
    if k < 0 or repair_rounds < 0:
        raise ValueError("counts must be non-negative")
    return (rtt / 2.0 + k * packet_interval + encode_delay + transmit_delay
            + repair_rounds * (rtt + 2.0 * transmit_delay) + decode_delay)


def collectable_packets(budget: float, packet_interval: float) -> int:
    """How many packets arrive within a delay budget, counting the packet at
    time zero plus one per full interval."""
    if packet_interval <= 0:
        raise ValueError("packet interval must be positive")
    if budget < 0:
        raise ValueError("budget must be non-negative")
    return int(budget / packet_interval) + 1
