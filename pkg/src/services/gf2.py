"""
GF(2) vectors and matrices packed into Python ints (bit i = coordinate i).
DecoderState keeps an incremental row-echelon basis; the RLNC receivers feed
coded rows into it and solve for payloads once the rank is full.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from errors import DimensionMismatch, InvalidParameter, NotDecodable

PAYLOAD_MASK = (1 << 64) - 1


def iter_bits(bits: int):
    """Yield the indices of set bits, lowest first."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


@dataclass(frozen=True)
class Gf2Vector:
    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise InvalidParameter(f"negative vector length {self.length}")
        if self.bits < 0 or self.bits >> self.length:
            raise InvalidParameter(f"bits set beyond length {self.length}")

    @classmethod
    def zero(cls, length: int) -> "Gf2Vector":
        return cls(length, 0)

    @classmethod
    def unit(cls, length: int, index: int) -> "Gf2Vector":
        if not 0 <= index < length:
            raise InvalidParameter(f"unit index {index} outside 0..{length - 1}")
        return cls(length, 1 << index)

    @classmethod
    def from_list(cls, coords: Sequence[int]) -> "Gf2Vector":
        bits = 0
        for i, c in enumerate(coords):
            if c & 1:
                bits |= 1 << i
        return cls(len(coords), bits)

    @classmethod
    def from_string(cls, text: str) -> "Gf2Vector":
        """'110' -> coordinates (1, 1, 0); first character is coordinate 0."""
        return cls.from_list([int(ch) for ch in text])

    def to_list(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.length)]

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __add__(self, other: "Gf2Vector") -> "Gf2Vector":
        if other.length != self.length:
            raise DimensionMismatch(f"cannot add length {self.length} and {other.length}")
        return Gf2Vector(self.length, self.bits ^ other.bits)

    def dot(self, other: "Gf2Vector") -> int:
        if other.length != self.length:
            raise DimensionMismatch(f"cannot dot length {self.length} and {other.length}")
        return (self.bits & other.bits).bit_count() & 1

    def is_zero(self) -> bool:
        return self.bits == 0

    def weight(self) -> int:
        return self.bits.bit_count()


@dataclass(frozen=True)
class Gf2Matrix:
    rows: int
    cols: int
    data: tuple[Gf2Vector, ...]

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise InvalidParameter(f"expected {self.rows} rows, got {len(self.data)}")
        for r in self.data:
            if r.length != self.cols:
                raise DimensionMismatch(f"row of length {r.length} in a {self.cols}-column matrix")

    @classmethod
    def from_vectors(cls, cols: int, vectors: Iterable[Gf2Vector]) -> "Gf2Matrix":
        data = tuple(vectors)
        return cls(len(data), cols, data)

    @classmethod
    def from_bits(cls, cols: int, rows: Iterable[int]) -> "Gf2Matrix":
        return cls.from_vectors(cols, (Gf2Vector(cols, b) for b in rows))

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> "Gf2Matrix":
        if not rows:
            raise InvalidParameter("from_strings needs at least one row")
        return cls.from_vectors(len(rows[0]), (Gf2Vector.from_string(r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls.from_bits(n, (1 << i for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Gf2Matrix":
        return cls.from_bits(cols, (0 for _ in range(rows)))

    def transpose(self) -> "Gf2Matrix":
        out = [0] * self.cols
        for i, r in enumerate(self.data):
            for j in iter_bits(r.bits):
                out[j] |= 1 << i
        return Gf2Matrix.from_bits(self.rows, out)


class DecoderState:
    """
    Incremental row-echelon basis over GF(2)^dim.

    Each basis row's pivot is its lowest set bit and is unique. Incoming rows
    are reduced against pivots lowest-first; a row that survives reduction has
    no existing pivot bits and joins the basis under its lowest set bit.
    Columns whose basis row is a unit vector are cleared with one mask.
    With track_payloads, one 64-bit payload word per basis row is reduced
    alongside and solve() is available. Single writer.
    """

    __slots__ = ("dim", "track_payloads", "_rows", "_payloads", "_pivot_mask", "_unit_mask", "_full_mask")

    def __init__(self, dim: int, track_payloads: bool = True):
        if dim < 0:
            raise InvalidParameter(f"negative dimension {dim}")
        self.dim = dim
        self.track_payloads = track_payloads
        self._rows: dict[int, int] = {}
        self._payloads: dict[int, int] = {}
        self._pivot_mask = 0
        self._unit_mask = 0
        self._full_mask = (1 << dim) - 1

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def is_full(self) -> bool:
        return self._pivot_mask == self._full_mask

    @property
    def basis(self) -> tuple[Gf2Vector, ...]:
        return tuple(Gf2Vector(self.dim, self._rows[c]) for c in sorted(self._rows))

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(sorted(self._rows))

    @property
    def payload_rows(self) -> tuple[int, ...]:
        """Payload words aligned with `basis`; empty when payloads are not tracked."""
        if not self.track_payloads:
            return ()
        return tuple(self._payloads[c] for c in sorted(self._rows))

    def _reduce(self, bits: int, payload: int) -> tuple[int, int]:
        rows = self._rows
        pivots = self._pivot_mask
        units = bits & self._unit_mask
        if not self.track_payloads:
            bits ^= units
            hit = bits & pivots
            while hit:
                bits ^= rows[(hit & -hit).bit_length() - 1]
                hit = bits & pivots
            return bits, 0

        payloads = self._payloads
        for col in iter_bits(units):
            payload ^= payloads[col]
        bits ^= units
        hit = bits & pivots
        while hit:
            col = (hit & -hit).bit_length() - 1
            bits ^= rows[col]
            payload ^= payloads[col]
            hit = bits & pivots
        return bits, payload

    def insert_bits(self, bits: int, payload: int = 0) -> bool:
        """Fast path for packed rows; the caller guarantees bits < 2**dim."""
        bits, payload = self._reduce(bits, payload)
        if not bits:
            return False
        low = bits & -bits
        col = low.bit_length() - 1
        self._rows[col] = bits
        if self.track_payloads:
            self._payloads[col] = payload & PAYLOAD_MASK
        self._pivot_mask |= low
        if bits == low:
            self._unit_mask |= low
        return True

    def insert(self, row: Gf2Vector, payload: int = 0) -> bool:
        if row.length != self.dim:
            raise DimensionMismatch(f"row of length {row.length} into decoder of dimension {self.dim}")
        return self.insert_bits(row.bits, payload)

    def contains(self, row: Gf2Vector) -> bool:
        if row.length != self.dim:
            raise DimensionMismatch(f"row of length {row.length} against decoder of dimension {self.dim}")
        bits, _ = self._reduce(row.bits, 0)
        return bits == 0

    def solve(self) -> list[int]:
        """Payload per column by back-substitution, highest pivot first."""
        if not self.track_payloads:
            raise InvalidParameter("decoder does not track payloads")
        if not self.is_full:
            raise NotDecodable(self.rank, self.dim)
        out = [0] * self.dim
        for col in range(self.dim - 1, -1, -1):
            value = self._payloads[col]
            for j in iter_bits(self._rows[col] ^ (1 << col)):
                value ^= out[j]
            out[col] = value
        return out


def rank(m: Gf2Matrix) -> int:
    state = DecoderState(m.cols, track_payloads=False)
    for r in m.data:
        state.insert_bits(r.bits)
    return state.rank


def mat_vec_mul(m: Gf2Matrix, x: Gf2Vector) -> Gf2Vector:
    if x.length != m.cols:
        raise DimensionMismatch(f"vector of length {x.length} against {m.cols} columns")
    bits = 0
    for i, r in enumerate(m.data):
        if (r.bits & x.bits).bit_count() & 1:
            bits |= 1 << i
    return Gf2Vector(m.rows, bits)


def decoder_insert(s: DecoderState, row: Gf2Vector, payload: int = 0) -> tuple[DecoderState, bool]:
    accepted = s.insert(row, payload)
    return s, accepted


def encode(m: Gf2Matrix, payloads: Sequence[int]) -> list[int]:
    """XOR of the payloads each row selects."""
    if len(payloads) != m.cols:
        raise DimensionMismatch(f"{len(payloads)} payloads for {m.cols} columns")
    out = []
    for r in m.data:
        word = 0
        for j in iter_bits(r.bits):
            word ^= payloads[j]
        out.append(word & PAYLOAD_MASK)
    return out


def solve(m: Gf2Matrix, rhs: Sequence[int]) -> list[int]:
    if len(rhs) != m.rows:
        raise DimensionMismatch(f"{len(rhs)} right-hand words for {m.rows} rows")
    state = DecoderState(m.cols)
    for r, word in zip(m.data, rhs):
        state.insert_bits(r.bits, word)
    return state.solve()
