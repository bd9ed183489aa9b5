"""Encode/decode throughput measurement on the monotonic clock.

Inputs are generated up front, timing covers only the codec call, and every
iteration re-checks the round trip so a fast-but-wrong codec cannot win.
The loop runs in a single thread to keep scheduler noise out of the numbers.
"""
from __future__ import annotations

import random
import statistics
import time
from dataclasses import dataclass

from . import rng
from .analytics import OpCount, op_count
from .codec import FAMILIES
from .fountain import FountainCode
from .gf256 import build_mds
from .polar import polar_for_parity

MIN_ITERATIONS = 100
DEFAULT_WARMUP = 10


@dataclass(frozen=True)
class Timing:
    median_ns: float
    p25_ns: float
    p75_ns: float

    @staticmethod
    def of(samples: list[int]) -> "Timing":
        q = statistics.quantiles(samples, n=4, method="inclusive")
        return Timing(median_ns=float(statistics.median(samples)),
                      p25_ns=float(q[0]), p75_ns=float(q[2]))


@dataclass(frozen=True)
class BenchReport:
    family: str
    k: int
    p: int
    packet_size: int
    erasure_count: int
    iterations: int
    encode: Timing
    decode: Timing
    decode_complete: bool
    model: OpCount

    @property
    def encode_packets_per_s(self) -> float:
        return self.p / (self.encode.median_ns * 1e-9) if self.p else 0.0

    @property
    def encode_mbytes_per_s(self) -> float:
        if not self.p:
            return 0.0
        return (self.p * self.packet_size) / (self.encode.median_ns * 1e-9) / 1e6

    @property
    def decode_mbytes_per_s(self) -> float:
        if not self.erasure_count:
            return 0.0
        return (self.erasure_count * self.packet_size) / (self.decode.median_ns * 1e-9) / 1e6


def bench_codec(family: str, k: int, p: int, *, packet_size: int = 1500,
                erasure_count: int | None = None, iterations: int = MIN_ITERATIONS,
                warmup: int = DEFAULT_WARMUP, seed: int = 0,
                epsilon: float = 0.05) -> BenchReport:
    """Measure one codec configuration.

    The decode side is the worst case for a systematic code: erasure_count
    losses (default p), all of them source packets, repaired from parity.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if iterations < MIN_ITERATIONS:
        raise ValueError(f"need at least {MIN_ITERATIONS} iterations")
    if erasure_count is None:
        erasure_count = min(p, k)
    if not 0 <= erasure_count <= min(p, k):
        raise ValueError(f"erasure count {erasure_count} out of range")

    if family == "mds":
        # a zero-parity run still needs a codec for the passthrough decode
        codec = build_mds(k + max(p, 1), k)
    elif family == "fountain":
        codec = FountainCode(k, seed, n=k + max(p, 1))
    else:
        codec = polar_for_parity(k, max(p, 1), epsilon)

    gen = random.Random(rng.substream(seed, rng.STREAM_BENCH))
    source = [gen.randbytes(packet_size) for _ in range(k)]
    lost = sorted(gen.sample(range(1, k + 1), erasure_count))
    parity = codec.encode(source, p)
    received = {i: source[i - 1] for i in range(1, k + 1) if i not in lost}
    received.update({k + j: parity[j - 1] for j in range(1, p + 1)})

    expect_complete = family == "mds"
    reference = codec.decode(received)
    for i, pkt in reference.recovered.items():
        if pkt != source[i - 1]:
            raise AssertionError(f"decoder returned a wrong packet for index {i}")
    if expect_complete and reference.unrecoverable:
        raise AssertionError("MDS decode left packets unrecovered")
    decode_complete = not reference.unrecoverable

    encode_ns: list[int] = []
    for it in range(warmup + iterations):
        t0 = time.perf_counter_ns()
        out = codec.encode(source, p)
        t1 = time.perf_counter_ns()
        if out != parity:
            raise AssertionError("encode output changed between iterations")
        if it >= warmup:
            encode_ns.append(t1 - t0)

    decode_ns: list[int] = []
    for it in range(warmup + iterations):
        t0 = time.perf_counter_ns()
        result = codec.decode(received)
        t1 = time.perf_counter_ns()
        if result.recovered != reference.recovered:
            raise AssertionError("decode output changed between iterations")
        for i in lost:
            if i in result.recovered and result.recovered[i] != source[i - 1]:
                raise AssertionError(f"decoder returned a wrong packet for index {i}")
        if it >= warmup:
            decode_ns.append(t1 - t0)

    return BenchReport(family=family, k=k, p=p, packet_size=packet_size,
                       erasure_count=erasure_count, iterations=iterations,
                       encode=Timing.of(encode_ns), decode=Timing.of(decode_ns),
                       decode_complete=decode_complete,
                       model=op_count(family, k, p, packet_size=packet_size))
