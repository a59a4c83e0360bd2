"""GIF-flavoured LZW codec over the 8-bit alphabet.

Wire format: variable-width codes starting at 9 bits over the 256 byte
symbols plus CLEAR=256 and END=257 (first free code 258), growing to 12
bits; when the table fills, the encoder emits CLEAR and starts a fresh
table. Codes are packed LSB-first. Every stream begins with CLEAR and ends
with END.

Code width is tracked from the code stream itself: after a CLEAR both
sides count codes from 257 upward and widen whenever the counter reaches
the current width's capacity. Driving the width off the stream rather than
the string table keeps encoder and decoder in lockstep without the
classic one-entry-lag special case.
"""

from __future__ import annotations

from .errors import CodecError, ParameterError

CLEAR = 256
END = 257
_FIRST_FREE = 258
_MIN_WIDTH = 9
_MAX_WIDTH = 12
_TABLE_LIMIT = 1 << _MAX_WIDTH  # 4096 codes


class _BitPacker:
    """Packs variable-width codes into bytes, LSB-first."""

    def __init__(self):
        self.out = bytearray()
        self._acc = 0
        self._nbits = 0
        self.width = _MIN_WIDTH
        self._seen = _FIRST_FREE - 1  # codes emitted since the last CLEAR

    def put(self, code: int) -> None:
        self._acc |= code << self._nbits
        self._nbits += self.width
        while self._nbits >= 8:
            self.out.append(self._acc & 0xFF)
            self._acc >>= 8
            self._nbits -= 8
        if code == CLEAR:
            self.width = _MIN_WIDTH
            self._seen = _FIRST_FREE - 1
        else:
            if self._seen < _TABLE_LIMIT - 1:
                self._seen += 1
                if self._seen >> self.width:
                    self.width += 1

    def finish(self) -> bytes:
        if self._nbits:
            self.out.append(self._acc & 0xFF)
        return bytes(self.out)


class _BitUnpacker:
    """Mirror of _BitPacker: yields codes with the same width schedule."""

    def __init__(self, data: bytes):
        self._data = data
        self._pos = 0
        self._acc = 0
        self._nbits = 0
        self.width = _MIN_WIDTH
        self._seen = _FIRST_FREE - 1

    def get(self) -> int | None:
        while self._nbits < self.width:
            if self._pos >= len(self._data):
                return None
            self._acc |= self._data[self._pos] << self._nbits
            self._pos += 1
            self._nbits += 8
        code = self._acc & ((1 << self.width) - 1)
        self._acc >>= self.width
        self._nbits -= self.width
        if code == CLEAR:
            self.width = _MIN_WIDTH
            self._seen = _FIRST_FREE - 1
        else:
            if self._seen < _TABLE_LIMIT - 1:
                self._seen += 1
                if self._seen >> self.width:
                    self.width += 1
        return code


def lzw_encode(data: bytes) -> bytes:
    """Compress a byte string; round-trips with lzw_decode."""
    if len(data) == 0:
        raise ParameterError("cannot encode an empty byte string")
    packer = _BitPacker()
    packer.put(CLEAR)
    # Sequences are keyed as (prefix_code << 8) | next_byte for O(1) lookup.
    table: dict[int, int] = {}
    next_code = _FIRST_FREE
    cur = data[0]
    for byte in memoryview(data)[1:]:
        key = (cur << 8) | byte
        entry = table.get(key)
        if entry is not None:
            cur = entry
            continue
        packer.put(cur)
        table[key] = next_code
        next_code += 1
        cur = byte
        if next_code == _TABLE_LIMIT:
            packer.put(CLEAR)
            table.clear()
            next_code = _FIRST_FREE
    packer.put(cur)
    packer.put(END)
    return packer.finish()


def lzw_decode(data: bytes) -> bytes:
    """Inverse of lzw_encode; raises CodecError on malformed streams."""
    if len(data) == 0:
        raise ParameterError("cannot decode an empty byte string")
    unpacker = _BitUnpacker(data)
    singles = [bytes([i]) for i in range(256)]
    table: list[bytes] = []
    prev: bytes | None = None
    chunks: list[bytes] = []
    while True:
        code = unpacker.get()
        if code is None:
            raise CodecError("truncated LZW stream: no END code")
        if code == CLEAR:
            table.clear()
            prev = None
            continue
        if code == END:
            break
        if code < 256:
            entry = singles[code]
        elif _FIRST_FREE <= code < _FIRST_FREE + len(table):
            entry = table[code - _FIRST_FREE]
        elif code == _FIRST_FREE + len(table) and prev is not None:
            entry = prev + prev[:1]  # code used immediately after creation
        else:
            raise CodecError(f"corrupt LZW stream: unknown code {code}")
        if prev is not None and len(table) < _TABLE_LIMIT - _FIRST_FREE:
            table.append(prev + entry[:1])
        chunks.append(entry)
        prev = entry
    return b"".join(chunks)
