"""Decoder comparison for quantum memories stored in perturbed stabilizer groundspaces."""

from .codes import StabilizerCode, builtin_code, codespace, kl_check
from .decoders import generalization_error, naive_observable, qec_observable
from .encoding import CodewordBasis, LogicalSample, NoiseModel, encode, fix_gauge, make_noise_model
from .lab import SweepConfig, fit_exponent, parse_config, run_sweep
from .pauli import PauliString, apply_pauli, pauli_from_string, to_dense
from .qnn import QnnModel, TrainConfig, build_circuit, evaluate, forward, train
from .spectral import (
    Perturbation,
    build_hamiltonian,
    lowest_eigenpairs,
    sample_gue_perturbation,
    stabilizer_sum_perturbation,
    uniform_xz_perturbation,
)

__version__ = "0.1.0"
