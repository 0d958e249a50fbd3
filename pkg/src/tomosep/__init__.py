"""Finite-dimensional quantum states as vectors: superoperators, tomograms and separability tests."""

from .errors import TomosepError
from .linalg import herm_eig, partial_trace, partial_transpose, tensor
from .maps import KrausMap, MixedUnitaryMap, apply_kraus, apply_mixed_unitary, superop_of, transpose_superop
from .separability import F_function, F_max, SeparableEnsemble, Verdict, check_decomposition, ppt_test, werner_ensemble
from .starprod import SymbolFrame, reconstruct, star_product, symbol, tomographic_frame
from .states import DensityMatrix, bell, from_bloch, measure_e, random_density, werner
from .tomography import Direction, Tomogram, bipartite_tomogram, spin_tomogram, un_tomogram, wigner_D
from .vectorize import Superoperator, devec, reshuffle_C, superop, vec

__version__ = "0.1.0"
