"""Face semilattices of cubes: MR-subalgebras, their symmetries and Möbius functions."""

__version__ = "0.1.0"

from .autgroup import SignedPerm, enumerate_aut, group_order
from .faces import Face, all_faces, arrow, caret, delta, join, meet, parse_face
from .mobius import PosetTable, mr_poset
from .subalgebra import MRSubalgebra, TypeVector, enumerate_subalgebras, type_of

__all__ = [
    "Face", "MRSubalgebra", "PosetTable", "SignedPerm", "TypeVector",
    "all_faces", "arrow", "caret", "delta", "enumerate_aut", "enumerate_subalgebras",
    "group_order", "join", "meet", "mr_poset", "parse_face", "type_of",
]
