from .base import CodeLength, Coder, KidEstimate, binary_entropy, log_star
from .bitio import BitReader, BitString, BitWriter, elias_delta_len
from .container import load_bits, save_bits
from .dictionary import DictionaryCoder, standard_dictionary
from .lowrank import LowRankCoder, decode_low_rank, encode_low_rank, factor_resolutions
from .lz78 import LZCoder, lz_bits
from .poly import PiecewisePolyCoder, decode_piecewise_poly, encode_piecewise_poly
from .search import kid, phi_m
from .sparse import SparseCoder, sparse_support_bits

__all__ = [
    "BitReader",
    "BitString",
    "BitWriter",
    "CodeLength",
    "Coder",
    "DictionaryCoder",
    "KidEstimate",
    "LZCoder",
    "LowRankCoder",
    "PiecewisePolyCoder",
    "SparseCoder",
    "binary_entropy",
    "decode_low_rank",
    "decode_piecewise_poly",
    "elias_delta_len",
    "encode_low_rank",
    "encode_piecewise_poly",
    "factor_resolutions",
    "kid",
    "load_bits",
    "log_star",
    "lz_bits",
    "phi_m",
    "save_bits",
    "sparse_support_bits",
    "standard_dictionary",
]
