"""GF(2^8) arithmetic and the systematic Vandermonde erasure code.

The field uses the primitive polynomial x^8+x^4+x^3+x^2+1 (0x11D) with
generator 2. Scalar arithmetic goes through log/antilog tables built at
import; packet-sized operations use a full 256x256 product table with numpy
so encoding one parity packet is one table gather per source packet.
"""
from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from .codec import CodeSpec, DecodeResult, normalize_received

PRIMITIVE_POLY = 0x11D
FIELD_SIZE = 256

GF_EXP = [0] * 512
GF_LOG = [0] * 256
_x = 1
for _i in range(255):
    GF_EXP[_i] = _x
    GF_LOG[_x] = _i
    _x <<= 1
    if _x & 0x100:
        _x ^= PRIMITIVE_POLY
for _i in range(255, 512):
    GF_EXP[_i] = GF_EXP[_i - 255]

# MUL_TABLE[a, b] = a*b in the field; row a doubles as the "scale by a" lookup
_exp = np.array(GF_EXP[:255], dtype=np.uint8)
_log = np.array(GF_LOG, dtype=np.int64)
MUL_TABLE = np.zeros((256, 256), dtype=np.uint8)
_nz = np.arange(1, 256)
MUL_TABLE[1:, 1:] = _exp[(_log[_nz][:, None] + _log[_nz][None, :]) % 255]
del _x, _i, _exp, _log, _nz


def gf_mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return GF_EXP[GF_LOG[a] + GF_LOG[b]]


def gf_inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("no inverse of 0")
    return GF_EXP[255 - GF_LOG[a]]


def gf_div(a: int, b: int) -> int:
    return gf_mul(a, gf_inv(b))


def gf_pow(a: int, e: int) -> int:
    if e == 0:
        return 1
    if a == 0:
        return 0
    return GF_EXP[(GF_LOG[a] * e) % 255]


class Gf256Matrix:
    """Matrix over GF(2^8) backed by a numpy uint8 array."""

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.array(data, dtype=np.uint8)
        if arr.ndim != 2:
            raise ValueError("2-D data required")
        self.data = arr

    @classmethod
    def identity(cls, n: int) -> "Gf256Matrix":
        return cls(np.eye(n, dtype=np.uint8))

    @classmethod
    def vandermonde(cls, rows: int, points: Sequence[int]) -> "Gf256Matrix":
        """Row i is the points raised to the power i, with 0**0 = 1."""
        data = [[gf_pow(x, i) for x in points] for i in range(rows)]
        return cls(data)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def matmul(self, other: "Gf256Matrix") -> "Gf256Matrix":
        a, b = self.data, other.data
        if a.shape[1] != b.shape[0]:
            raise ValueError("dimension mismatch")
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.uint8)
        for i in range(a.shape[0]):
            # product row = xor of scaled rows of b
            acc = np.zeros(b.shape[1], dtype=np.uint8)
            for t in range(a.shape[1]):
                c = a[i, t]
                if c:
                    acc ^= MUL_TABLE[c][b[t]]
            out[i] = acc
        return Gf256Matrix(out)

    def columns(self, idx: Sequence[int]) -> "Gf256Matrix":
        return Gf256Matrix(self.data[:, list(idx)])

    def invert(self) -> "Gf256Matrix | None":
        """Gauss-Jordan inverse, or None when singular."""
        n, m = self.data.shape
        if n != m:
            raise ValueError("only square matrices can be inverted")
        a = self.data.copy()
        inv = np.eye(n, dtype=np.uint8)
        for col in range(n):
            pivot = None
            for r in range(col, n):
                if a[r, col]:
                    pivot = r
                    break
            if pivot is None:
                return None
            if pivot != col:
                a[[col, pivot]] = a[[pivot, col]]
                inv[[col, pivot]] = inv[[pivot, col]]
            scale = gf_inv(int(a[col, col]))
            if scale != 1:
                a[col] = MUL_TABLE[scale][a[col]]
                inv[col] = MUL_TABLE[scale][inv[col]]
            for r in range(n):
                if r != col and a[r, col]:
                    f = int(a[r, col])
                    a[r] ^= MUL_TABLE[f][a[col]]
                    inv[r] ^= MUL_TABLE[f][inv[col]]
        return Gf256Matrix(inv)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Gf256Matrix):
            return NotImplemented
        return self.data.shape == other.data.shape and bool((self.data == other.data).all())

    def __repr__(self) -> str:
        return f"Gf256Matrix({self.data.shape[0]}x{self.data.shape[1]})"


class MdsCode:
    """Systematic maximum-distance-separable block code over GF(2^8).

    The generator is [I | P] derived from a Vandermonde matrix on distinct
    evaluation points, so every k-column submatrix is invertible and any k
    received packets reconstruct the block.
    """

    def __init__(self, n: int, k: int, generator: Gf256Matrix):
        self.n = n
        self.k = k
        self.generator = generator

    @property
    def spec(self) -> CodeSpec:
        return CodeSpec(family="mds", n=self.n, k=self.k)

    @property
    def parity_limit(self) -> int:
        return self.n - self.k

    def parity_coefficients(self, j: int) -> np.ndarray:
        """Column of P for parity packet j (1-based)."""
        if not 1 <= j <= self.n - self.k:
            raise ValueError(f"parity index {j} out of range")
        return self.generator.data[:, self.k + j - 1]

    def encode(self, source: Sequence[bytes], p: int) -> list[bytes]:
        """Parity packets 1..p for k equal-length source packets."""
        if len(source) != self.k:
            raise ValueError(f"expected {self.k} source packets, got {len(source)}")
        if not 0 <= p <= self.n - self.k:
            raise ValueError(f"parity count {p} out of range")
        size = len(source[0])
        if any(len(s) != size for s in source):
            raise ValueError("source packets must have equal length")
        src = [np.frombuffer(s, dtype=np.uint8) for s in source]
        out = []
        for j in range(p):
            coeffs = self.generator.data[:, self.k + j]
            acc = np.zeros(size, dtype=np.uint8)
            for i in range(self.k):
                c = coeffs[i]
                if c:
                    acc ^= MUL_TABLE[c][src[i]]
            out.append(acc.tobytes())
        return out

    def decode(self, received) -> DecodeResult:
        """Recover source packets from any subset of (index, packet) pairs.

        With at least k packets the whole block is recovered by solving only
        for the missing systematic packets against that many parity packets.
        With fewer, the received systematic packets are returned as-is.
        """
        packets = normalize_received(received, self.n)
        known = {i: pkt for i, pkt in packets.items() if i <= self.k}
        missing = [i for i in range(1, self.k + 1) if i not in known]
        if not missing or len(packets) < self.k:
            return DecodeResult(recovered=dict(sorted(known.items())),
                                unrecoverable=frozenset(missing))
        parity_in = sorted(i for i in packets if i > self.k)
        e = len(missing)
        use = parity_in[:e]
        # b_r = parity_r minus the known systematic contributions
        size = len(next(iter(packets.values())))
        b = []
        for idx in use:
            coeffs = self.generator.data[:, idx - 1]
            acc = np.frombuffer(packets[idx], dtype=np.uint8).copy()
            for i, pkt in known.items():
                c = coeffs[i - 1]
                if c:
                    acc ^= MUL_TABLE[c][np.frombuffer(pkt, dtype=np.uint8)]
            b.append(acc)
        a = Gf256Matrix([[int(self.generator.data[m - 1, idx - 1]) for m in missing]
                         for idx in use])
        a_inv = a.invert()
        if a_inv is None:
            raise AssertionError("MDS submatrix unexpectedly singular")
        recovered = dict(known)
        for c, m in enumerate(missing):
            acc = np.zeros(size, dtype=np.uint8)
            for r in range(e):
                f = a_inv.data[c, r]
                if f:
                    acc ^= MUL_TABLE[f][b[r]]
            recovered[m] = acc.tobytes()
        return DecodeResult(recovered=dict(sorted(recovered.items())),
                            unrecoverable=frozenset())

    def unrecovered_sources(self, received_indices: Iterable[int]) -> frozenset[int]:
        """Systematic packets left missing after decoding that subset."""
        idx = set(received_indices)
        missing = frozenset(i for i in range(1, self.k + 1) if i not in idx)
        if len(idx) >= self.k:
            return frozenset()
        return missing

    def __repr__(self) -> str:
        return f"MdsCode(n={self.n}, k={self.k})"


def build_mds(n: int, k: int) -> MdsCode:
    """Systematic MDS code for n total and k source packets.

    Evaluation points are 0, 1, g, g^2, ... in index order; reducing the left
    k columns of the Vandermonde matrix to the identity yields [I | P].
    """
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    if n > FIELD_SIZE:
        raise ValueError(f"n={n} exceeds the field size {FIELD_SIZE}")
    points = [0] + [gf_pow(2, j) for j in range(n - 1)]
    v = Gf256Matrix.vandermonde(k, points)
    left = v.columns(range(k))
    left_inv = left.invert()
    if left_inv is None:
        raise AssertionError("Vandermonde block on distinct points cannot be singular")
    g = left_inv.matmul(v)
    return MdsCode(n, k, g)
