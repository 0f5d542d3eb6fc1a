"""Sequential big-endian reader for Spine binary data."""
from __future__ import annotations

import struct


class SkelFormatError(ValueError):
    """Malformed or unsupported skeleton data; ``offset`` is the failing byte position."""

    def __init__(self, message: str, offset: int | None = None, section: str | None = None):
        self.offset = offset
        self.section = section
        where = []
        if section:
            where.append(f"section {section}")
        if offset is not None:
            where.append(f"offset {offset}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


def _int32(v: int) -> int:
    v &= 0xFFFFFFFF
    return v - (1 << 32) if v & 0x80000000 else v


class BinaryReader:
    """Cursor over an immutable byte buffer.

    ``section`` is a free-form label attached to every error so callers can
    report where in the file decoding failed.
    """

    def __init__(self, data: bytes, pos: int = 0):
        self.data = bytes(data)
        self.pos = pos
        self.section = "header"
        self.strings: list[str | None] = []

    def error(self, message: str, offset: int | None = None) -> SkelFormatError:
        return SkelFormatError(message, self.pos if offset is None else offset, self.section)

    def _take(self, n: int, what: str) -> bytes:
        if self.pos + n > len(self.data):
            raise self.error(f"unexpected end of data reading {what}")
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    @property
    def remaining(self) -> int:
        return len(self.data) - self.pos

    def read_byte(self) -> int:
        """Signed byte."""
        v = self._take(1, "byte")[0]
        return v - 256 if v > 127 else v

    def read_ubyte(self) -> int:
        return self._take(1, "byte")[0]

    def read_bool(self) -> bool:
        return self._take(1, "bool")[0] != 0

    def read_int(self) -> int:
        return struct.unpack(">i", self._take(4, "int"))[0]

    def read_long(self) -> int:
        return struct.unpack(">q", self._take(8, "long"))[0]

    def read_float(self) -> float:
        return struct.unpack(">f", self._take(4, "float"))[0]

    def read_varint(self, optimize_positive: bool = True) -> int:
        """7-bit groups, low group first; zigzag decoded unless ``optimize_positive``."""
        start = self.pos
        result = 0
        for i in range(5):
            if self.pos >= len(self.data):
                raise self.error("unexpected end of data reading varint", start)
            b = self.data[self.pos]
            self.pos += 1
            result |= (b & 0x7F) << (7 * i)
            if not b & 0x80:
                break
        else:
            raise self.error("varint longer than 5 bytes", start)
        result = _int32(result)
        if not optimize_positive:
            u = result & 0xFFFFFFFF
            result = _int32((u >> 1) ^ -(u & 1))
        return result

    def read_count(self, what: str) -> int:
        """Non-negative varint, bounded by the bytes left so corrupt counts fail fast."""
        start = self.pos
        n = self.read_varint(True)
        if n < 0 or n > self.remaining:
            raise self.error(f"implausible {what} count {n}", start)
        return n

    def read_string(self) -> str | None:
        start = self.pos
        n = self.read_varint(True)
        if n == 0:
            return None
        if n < 0:
            raise self.error("negative string length", start)
        raw = self._take(n - 1, "string")
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise self.error(f"invalid UTF-8 in string: {exc.reason}", start) from None

    def read_string_ref(self) -> str | None:
        start = self.pos
        idx = self.read_varint(True)
        if idx == 0:
            return None
        if idx < 0 or idx > len(self.strings):
            raise self.error(f"string reference {idx} outside pool of {len(self.strings)}", start)
        return self.strings[idx - 1]

    def read_floats(self, n: int) -> list[float]:
        if n < 0 or 4 * n > self.remaining:
            raise self.error(f"unexpected end of data reading {n} floats")
        return list(struct.unpack(f">{n}f", self._take(4 * n, "floats")))

    def read_varints(self, n: int) -> list[int]:
        return [self.read_varint(True) for _ in range(n)]


class BinaryWriter:
    """Inverse of :class:`BinaryReader`; used to author fixtures and for round trips."""

    def __init__(self):
        self.buf = bytearray()

    def getvalue(self) -> bytes:
        return bytes(self.buf)

    def byte(self, v: int) -> "BinaryWriter":
        self.buf += struct.pack(">B", v & 0xFF)
        return self

    def bool(self, v: bool) -> "BinaryWriter":
        return self.byte(1 if v else 0)

    def int(self, v: int) -> "BinaryWriter":
        self.buf += struct.pack(">i", _int32(v))
        return self

    def long(self, v: int) -> "BinaryWriter":
        self.buf += struct.pack(">q", v)
        return self

    def float(self, v: float) -> "BinaryWriter":
        self.buf += struct.pack(">f", v)
        return self

    def varint(self, v: int, optimize_positive: bool = True) -> "BinaryWriter":
        if not optimize_positive:
            v = (v << 1) ^ (v >> 31)
        v &= 0xFFFFFFFF
        while True:
            b = v & 0x7F
            v >>= 7
            if v:
                self.buf.append(b | 0x80)
            else:
                self.buf.append(b)
                return self

    def string(self, s: str | None) -> "BinaryWriter":
        if s is None:
            return self.varint(0)
        raw = s.encode("utf-8")
        self.varint(len(raw) + 1)
        self.buf += raw
        return self

    def raw(self, b: bytes) -> "BinaryWriter":
        self.buf += b
        return self
