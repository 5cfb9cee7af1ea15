from .block_encoding import (
    BlockEncoding,
    StatePrepPair,
    difference_pair,
    embed_with_new_ancilla,
    encodes,
    lcu,
    lcu_difference,
    pad_ancillas,
    product_block_encodings,
    trivial_encoding,
    verify_block_encoding,
)
from .purification import PurifiedOracle, density_to_block_encoding, purify

__all__ = [
    "BlockEncoding",
    "StatePrepPair",
    "PurifiedOracle",
    "difference_pair",
    "density_to_block_encoding",
    "embed_with_new_ancilla",
    "encodes",
    "lcu",
    "lcu_difference",
    "pad_ancillas",
    "product_block_encodings",
    "purify",
    "trivial_encoding",
    "verify_block_encoding",
]
