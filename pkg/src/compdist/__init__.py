"""Compression-dictionary dissimilarities and a time-series clustering benchmark."""

__version__ = "0.1.0"

from .compression import (
    CodeStream,
    LzwDictionary,
    dict_entropy,
    dict_huffman_bits,
    dict_size,
    huffman_code_lengths,
    lzw_compressed_length,
    lzw_pass,
)
from .distances import (
    DissimilarityMatrix,
    GcddVector,
    dissimilarity_matrix,
    fcd,
    gcdd,
    ncd,
)
from .embedding import EmbeddingResult, classical_mds

__all__ = [
    "CodeStream",
    "LzwDictionary",
    "dict_entropy",
    "dict_huffman_bits",
    "dict_size",
    "huffman_code_lengths",
    "lzw_compressed_length",
    "lzw_pass",
    "DissimilarityMatrix",
    "GcddVector",
    "dissimilarity_matrix",
    "fcd",
    "gcdd",
    "ncd",
    "EmbeddingResult",
    "classical_mds",
]
