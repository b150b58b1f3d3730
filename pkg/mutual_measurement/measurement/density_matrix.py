"""
:Description: Implements a single mutual measurement of the source velocity by the observer as a sequence of
    operations on a 4x4 density matrix.

The basis is `{|f1 S>, |f2 S>, |f1 S1>, |f2 S2>}` (see `Branch`). The photon that carries the Doppler information is
traced out immediately, so emission and absorption are composed into one unitary relabeling (`entangle`). Decoherence
is instantaneous (`decohere`) and the final branch is chosen by sampling the diagonal (`collapse_sample`).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Final, Optional

import numpy as np

from mutual_measurement.measurement.enums import Branch, MeasurementStage
from mutual_measurement.measurement.exceptions import (
    InvalidDensityMatrixError,
    InvalidWeightsError,
    MeasurementStageError,
)
from mutual_measurement.types import NORMALIZATION_TOLERANCE, ComplexArray, IntArray, JsonObjectType

log: Final = logging.getLogger(__name__)

## Constants ##

DIMENSION: Final[int] = len(Branch)

# Ordered basis labels of every matrix handled by this module.
BRANCH_BASIS: Final[tuple[Branch, ...]] = tuple(Branch)

_HERMITIAN_TOLERANCE: Final[float] = 1e-12
_EIGENVALUE_TOLERANCE: Final[float] = 1e-10

# Permutation that moves the `S` block onto the `S1`/`S2` block (and back, so that it stays unitary).
_ENTANGLING_PERMUTATION: Final[tuple[int, ...]] = (
    Branch.F1_S1,
    Branch.F2_S2,
    Branch.F1_S,
    Branch.F2_S,
)

# Macroscopically distinct observer states. Coherences between different sectors do not survive decoherence.
_OBSERVER_SECTOR: Final[tuple[int, ...]] = (0, 0, 1, 2)


## Types ##


@dataclass(frozen=True)
class BranchBasis:
    """
    Ordered labels of the four basis states. The order is fixed and matches the matrix indices.
    """

    labels: tuple[str, ...] = tuple(b.label for b in BRANCH_BASIS)

    def __post_init__(self) -> None:
        if self.labels != tuple(b.label for b in BRANCH_BASIS):
            raise InvalidDensityMatrixError(f"Unsupported basis: {self.labels}")


@dataclass(frozen=True)
class MeasurementState:
    """
    Density matrix of the combined system at some stage of the measurement pipeline. Instances are immutable values;
    all operations return new states.
    """

    rho: ComplexArray
    stage: MeasurementStage
    collapsed_branch: Optional[Branch] = None

    def __post_init__(self) -> None:
        """
        Validates the density matrix and freezes the underlying array.

        :raises InvalidDensityMatrixError: If `rho` is not Hermitian, not of unit trace or not positive semidefinite.
        """
        rho = np.array(self.rho, dtype=np.complex128)
        if rho.shape != (DIMENSION, DIMENSION):
            raise InvalidDensityMatrixError(f"Expected a {DIMENSION}x{DIMENSION} matrix, got shape {rho.shape}")
        if not np.allclose(rho, rho.conj().T, rtol=0.0, atol=_HERMITIAN_TOLERANCE):
            raise InvalidDensityMatrixError("Density matrix is not Hermitian")
        trace: Final = np.trace(rho)
        if abs(trace - 1.0) > NORMALIZATION_TOLERANCE:
            raise InvalidDensityMatrixError(f"Density matrix trace must be 1, got {trace}")
        min_eigenvalue: Final = float(np.min(np.linalg.eigvalsh(rho)))
        if min_eigenvalue < -_EIGENVALUE_TOLERANCE:
            raise InvalidDensityMatrixError(f"Density matrix has a negative eigenvalue: {min_eigenvalue}")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @property
    def probabilities(self) -> np.ndarray:
        """
        :returns: The diagonal of the density matrix as real branch probabilities.
        """
        return np.clip(np.real(np.diag(self.rho)), 0.0, None)

    def to_json(self) -> JsonObjectType:
        """
        Renders the state as a JSON object. The imaginary parts are only reported through their maximum magnitude, as
        every state produced by this pipeline is real.

        :returns: JSON representation of the state.
        """
        return {
            "stage": str(self.stage),
            "basis": list(BranchBasis().labels),
            "rho": [[float(x) for x in row] for row in np.real(self.rho)],
            "max_abs_imag": float(np.max(np.abs(np.imag(self.rho)))),
            "purity": purity(self),
            "collapsed_branch": None if self.collapsed_branch is None else self.collapsed_branch.label,
        }


## Functions ##


def _require_stage(operation: str, state: MeasurementState, expected: MeasurementStage) -> None:
    """
    :raises MeasurementStageError: If the state is not in the expected stage.
    """
    if state.stage != expected:
        raise MeasurementStageError(operation, expected, state.stage)


def purity(state: MeasurementState) -> float:
    """
    Computes the purity `tr(rho^2)` of a state.

    :param state: Target state.
    :returns: The purity, 1 for pure states.
    """
    return float(np.real(np.trace(state.rho @ state.rho)))


def initial_state(weight_f1: float, weight_f2: float) -> MeasurementState:
    """
    Builds the uncorrelated pure initial state `(sqrt(w1) |f1> + sqrt(w2) |f2>) |S>`.

    :param weight_f1: Probability of the first velocity component.
    :param weight_f2: Probability of the second velocity component.
    :raises InvalidWeightsError: If a weight is negative or the weights do not sum to 1.
    :returns: A state in stage `INITIAL`.
    """
    if weight_f1 < 0 or weight_f2 < 0 or abs(weight_f1 + weight_f2 - 1.0) > NORMALIZATION_TOLERANCE:
        raise InvalidWeightsError(weight_f1, weight_f2)
    psi = np.zeros(DIMENSION, dtype=np.complex128)
    psi[Branch.F1_S] = math.sqrt(weight_f1)
    psi[Branch.F2_S] = math.sqrt(weight_f2)
    return MeasurementState(rho=np.outer(psi, psi.conj()), stage=MeasurementStage.INITIAL)


def entangle(state: MeasurementState) -> MeasurementState:
    """
    Emits the Doppler-tagged photon from the source and absorbs it in the observer: `|f1 S> -> |f1 S1>` and
    `|f2 S> -> |f2 S2>`. The map is a permutation, hence unitary, and preserves purity.

    :param state: State in stage `INITIAL`.
    :raises MeasurementStageError: If the state is in another stage.
    :returns: A state in stage `ENTANGLED`.
    """
    _require_stage("entangle", state, MeasurementStage.INITIAL)
    unitary = np.zeros((DIMENSION, DIMENSION), dtype=np.complex128)
    for source, target in enumerate(_ENTANGLING_PERMUTATION):
        unitary[target, source] = 1.0
    return MeasurementState(rho=unitary @ state.rho @ unitary.conj().T, stage=MeasurementStage.ENTANGLED)


def dephase(rho: ComplexArray) -> ComplexArray:
    """
    Removes every coherence between macroscopically distinct observer states (`S`, `S1`, `S2`). This is a pinching
    map: it keeps Hermiticity, trace and positivity, never increases purity and is idempotent.

    :param rho: Density matrix in the branch basis.
    :returns: The dephased matrix.
    """
    sectors: Final = np.asarray(_OBSERVER_SECTOR)
    mask: Final = sectors[:, np.newaxis] == sectors[np.newaxis, :]
    return np.where(mask, rho, 0.0).astype(np.complex128)


def decohere(state: MeasurementState) -> MeasurementState:
    """
    Instantaneous decoherence of the observer's record: the superposition of `|f1 S1>` and `|f2 S2>` becomes a
    classical mixture.

    :param state: State in stage `ENTANGLED`.
    :raises MeasurementStageError: If the state is in another stage.
    :returns: A state in stage `DECOHERED`.
    """
    _require_stage("decohere", state, MeasurementStage.ENTANGLED)
    return MeasurementState(rho=dephase(state.rho), stage=MeasurementStage.DECOHERED)


def _collapsed(branch: Branch) -> MeasurementState:
    rho = np.zeros((DIMENSION, DIMENSION), dtype=np.complex128)
    rho[branch, branch] = 1.0
    return MeasurementState(rho=rho, stage=MeasurementStage.COLLAPSED, collapsed_branch=branch)


def collapse_sample(state: MeasurementState, rng: np.random.Generator) -> tuple[MeasurementState, Branch]:
    """
    Picks one branch with probability equal to its diagonal entry (postselection).

    :param state: State in stage `DECOHERED`.
    :param rng: Caller-provided random stream.
    :raises MeasurementStageError: If the state is in another stage.
    :returns: The collapsed pure state and the chosen branch.
    """
    _require_stage("collapse_sample", state, MeasurementStage.DECOHERED)
    branch: Final = Branch(int(sample_branches(state, rng, 1)[0]))
    return _collapsed(branch), branch


def sample_branches(state: MeasurementState, rng: np.random.Generator, n_samples: int) -> IntArray:
    """
    Vectorized branch sampling from a decohered state, for frequency experiments.

    :param state: State in stage `DECOHERED`.
    :param rng: Caller-provided random stream.
    :param n_samples: Number of independent collapses to draw.
    :raises MeasurementStageError: If the state is in another stage.
    :returns: Array of branch indices.
    """
    _require_stage("sample_branches", state, MeasurementStage.DECOHERED)
    probabilities = state.probabilities
    probabilities = probabilities / probabilities.sum()
    return rng.choice(DIMENSION, size=n_samples, p=probabilities).astype(np.int64)


def branch_frequencies(branches: IntArray) -> np.ndarray:
    """
    :param branches: Sampled branch indices.
    :returns: Empirical frequency of every basis state, in basis order.
    """
    counts: Final = np.bincount(branches, minlength=DIMENSION)
    return counts / max(len(branches), 1)
