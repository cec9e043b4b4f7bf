"""Strong-converse error bounds for classical-quantum channels.

.. autosummary::
   :nosignatures:

   hermitian
   channel
   info
   optimizer
   bounds
   verify
   io
   cli
"""

from .bounds import exponent_curve, lemma1_bound, sc_exponent, theorem1_bound
from .channel import CqChannel, Codebook, Povm, average_error, average_state, codeword_state
from .info import e0, mutual_info, trace_functional, trace_functional_grad, von_neumann_entropy
from .optimizer import (
    OptimizerConfig,
    capacity,
    kkt_check,
    maximize_trace_functional,
    min_e0_over_prior,
    multiletter_max_bruteforce,
)

__version__ = "0.1.0"
