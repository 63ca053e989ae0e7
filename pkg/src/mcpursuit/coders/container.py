"""Byte-padded bitstring container (little-endian).

Layout, all integers little-endian:
    bytes  0..15   magic  b"MCPURSUIT-CODE\\x00\\x01"
    byte   16      coder kind (see _KINDS)
    byte   17      flags (reserved, 0)
    bytes  18..33  four u32 coder config fields (kind-specific, else 0)
    bytes  34..37  u32 n
    bytes  38..41  u32 m
    bytes  42..49  u64 payload length in bits
    bytes  50..    payload, zero-padded to a byte boundary

Dictionary files carry the standard composition (sparse + lz78, plus the
configured poly / low-rank members); arbitrary member lists are not
serialized.
"""

from __future__ import annotations

import struct

from .base import Coder
from .bitio import BitString
from .dictionary import DictionaryCoder, standard_dictionary
from .lowrank import LowRankCoder
from .lz78 import LZCoder
from .poly import PiecewisePolyCoder
from .sparse import SparseCoder

__all__ = ["MAGIC", "save_bits", "load_bits", "coder_kind"]

MAGIC = b"MCPURSUIT-CODE\x00\x01"
assert len(MAGIC) == 16

_HEADER = struct.Struct("<16sBB4IIIQ")

_KINDS = {"sparse": 1, "lz78": 2, "piecewise_poly": 3, "low_rank": 4, "dictionary": 5}


def coder_kind(coder: Coder) -> int:
    try:
        return _KINDS[coder.name]
    except KeyError:
        raise ValueError(f"unknown coder kind {coder.name!r}") from None


def _config_fields(coder: Coder) -> tuple[int, int, int, int]:
    if isinstance(coder, PiecewisePolyCoder):
        return (coder.q_max, coder.degree_max, 0, 0)
    if isinstance(coder, LowRankCoder):
        return (coder.rows, coder.cols, 0, 0)
    if isinstance(coder, DictionaryCoder):
        poly = next((c for c in coder.members if isinstance(c, PiecewisePolyCoder)), None)
        lowr = next((c for c in coder.members if isinstance(c, LowRankCoder)), None)
        a, b = (poly.q_max + 1, poly.degree_max + 1) if poly else (0, 0)
        c, d = (lowr.rows, lowr.cols) if lowr else (0, 0)
        return (a, b, c, d)
    return (0, 0, 0, 0)


def _coder_from(kind: int, cfg: tuple[int, int, int, int]) -> Coder:
    if kind == _KINDS["sparse"]:
        return SparseCoder()
    if kind == _KINDS["lz78"]:
        return LZCoder()
    if kind == _KINDS["piecewise_poly"]:
        return PiecewisePolyCoder(cfg[0], cfg[1])
    if kind == _KINDS["low_rank"]:
        return LowRankCoder(cfg[0], cfg[1])
    if kind == _KINDS["dictionary"]:
        poly = PiecewisePolyCoder(cfg[0] - 1, cfg[1] - 1) if cfg[0] else None
        lowr = LowRankCoder(cfg[2], cfg[3]) if cfg[2] else None
        return standard_dictionary(poly=poly, low_rank=lowr)
    raise ValueError(f"unknown coder kind id {kind}")


def save_bits(path, coder: Coder, n: int, m: int, bits: BitString):
    cfg = _config_fields(coder)
    header = _HEADER.pack(MAGIC, coder_kind(coder), 0, *cfg, n, m, bits.nbits)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(bits.data)


def load_bits(path) -> tuple[Coder, int, int, BitString]:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size or raw[:16] != MAGIC:
        raise ValueError(f"{path}: not a mcpursuit code container")
    magic, kind, _flags, c0, c1, c2, c3, n, m, nbits = _HEADER.unpack_from(raw)
    payload = raw[_HEADER.size :]
    if len(payload) != (nbits + 7) // 8:
        raise ValueError(f"{path}: payload length mismatch")
    return _coder_from(kind, (c0, c1, c2, c3)), n, m, BitString(payload, nbits)
