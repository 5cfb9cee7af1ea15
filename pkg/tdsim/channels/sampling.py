"""Sample access turned into approximate block-encodings.

The default ``noisy-oracle`` model mixes the exact (4/pi, 3, 0)-block-encoding
unitary of a state with the completely depolarizing channel at weight
delta / 2, which keeps its diamond distance to the unitary within delta.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..encoding.block_encoding import BlockEncoding
from ..exceptions import ArgumentError, UnsupportedChannelError
from ..linalg.density import DensityOperator
from ..linalg.operators import (
    Operator,
    check_qubit_cap,
    contraction_dilation,
    permute_qubits,
    register_swap,
)
from ..metrics.query_ledger import CHANNEL_USES, SAMPLES_RHO, QueryLedger
from ..utils.logger import get_logger
from .channel_model import (
    ChannelModel,
    CircuitForm,
    choi_distance,
    superoperator_to_choi,
    unitary_choi,
)
from .dme import dme_channel

logger = get_logger(__name__)

CHANNEL_ANCILLAS = 3
CHANNEL_ALPHA = 4 / math.pi


def samples_per_use(delta: float) -> int:
    """ceil(ln(1/delta)^2 / delta) fresh copies per channel use; 0 at delta = 0."""
    if delta <= 0:
        return 0
    return math.ceil(math.log(1.0 / delta) ** 2 / delta)


def state_dilation(rho: DensityOperator) -> Operator:
    """Unitary on [3 ancillas, system] whose top-left block is (pi/4) rho."""
    check_qubit_cap(rho.n + CHANNEL_ANCILLAS)
    dilation = contraction_dilation(rho.op / CHANNEL_ALPHA)
    padding = np.eye(2 ** (CHANNEL_ANCILLAS - 1), dtype=np.complex128)
    return np.kron(padding, dilation)


def noisy_oracle_channel(
    U: Operator, delta: float, copies_per_use: int = 0, label: str = "E"
) -> ChannelModel:
    """(1 - delta/2) U . U† + (delta/2) D."""
    if not 0 <= delta < 1:
        raise ArgumentError(f"delta must lie in [0, 1), got {delta}")
    return ChannelModel(U, delta, copies_per_use, "noisy-oracle", label=label)


def sampling_to_block_encoding(
    rho: DensityOperator,
    delta: float,
    mode: str = "noisy-oracle",
    label: str = "E_rho",
    t: float = 1.0,
) -> ChannelModel:
    """Channel delta-close to a (4/pi, 3, 0)-block-encoding unitary of rho.

    ``dme`` mode instead returns the density-matrix-exponentiation channel
    approximating e^{-i rho t}.
    """
    if not rho.normalized:
        raise ArgumentError("sample access needs a normalized state")
    if mode == "dme":
        return dme_channel(rho, t, delta, label=label)
    if mode != "noisy-oracle":
        raise ArgumentError(f"unknown channel mode {mode!r}")
    channel = noisy_oracle_channel(state_dilation(rho), delta, samples_per_use(delta), label)
    channel.metadata.update(
        {"alpha": CHANNEL_ALPHA, "ancillas": CHANNEL_ANCILLAS, "system_qubits": rho.n}
    )
    return channel


def channel_block_encoding(E: ChannelModel) -> BlockEncoding:
    """The block-encoding E stands in for, used as if it were unitary."""
    try:
        alpha = E.metadata["alpha"]
        ancillas = E.metadata["ancillas"]
        n = E.metadata["system_qubits"]
    except KeyError:
        raise UnsupportedChannelError(f"{E.label} does not stand in for a block-encoding")
    return BlockEncoding(
        unitary=E.declared_target,
        alpha=alpha,
        ancillas=ancillas,
        eps=0.0,
        system_qubits=n,
        label=E.label,
        provenance=f"channel({E.mode}, delta={E.delta_budget:g})",
    )


def channel_circuit_form(E: ChannelModel) -> CircuitForm:
    """Explicit circuit for a channel.

    For noisy-oracle channels the environment is a flag qubit in
    diag(1 - delta/2, delta/2) and a maximally mixed register R, and W applies
    U to the target when the flag is 0 and swaps R into the target when it is 1.
    """
    if E.circuit is not None:
        return E.circuit
    if E.mode != "noisy-oracle":
        raise UnsupportedChannelError(f"{E.mode} channel has no circuit form")
    q = E.num_qubits
    check_qubit_cap(1 + 2 * q)
    d = E.dim
    W = np.zeros((2 * d * d, 2 * d * d), dtype=np.complex128)
    W[: d * d, : d * d] = np.kron(np.eye(d), E.declared_target)
    W[d * d:, d * d:] = register_swap(q, 0, q)
    flag = np.diag([1 - E.delta_budget / 2, E.delta_budget / 2]).astype(np.complex128)
    environment = np.kron(flag, np.eye(d, dtype=np.complex128) / d)
    return CircuitForm(W, environment, 1)


def invert_channel(E: ChannelModel) -> ChannelModel:
    """Channel standing in for U†: W† in place of W."""
    target = E.declared_target.conj().T
    label = E.label[:-4] if E.label.endswith("_inv") else E.label + "_inv"
    if E.mode == "noisy-oracle":
        inverse = noisy_oracle_channel(target, E.delta_budget, E.copies_per_use, label)
        inverse.metadata.update(E.metadata)
        return inverse
    if E.circuit is None:
        raise UnsupportedChannelError(f"{E.label} has no circuit form to invert")
    return ChannelModel(
        target,
        E.delta_budget,
        E.copies_per_use,
        E.mode,
        E.workspace_qubits,
        E.circuit.inverse(),
        label,
        dict(E.metadata),
    )


def control_channel(E: ChannelModel) -> ChannelModel:
    """Controlled-W in place of W, standing in for controlled-U.

    The control qubit is prepended to the target register.
    """
    form = channel_circuit_form(E)
    d_env, d = form.env_dim, form.target_dim
    env_qubits = int(round(math.log2(d_env)))
    target_qubits = E.num_qubits
    check_qubit_cap(env_qubits + 1 + target_qubits)

    size = form.W.shape[0]
    controlled = np.zeros((2 * size, 2 * size), dtype=np.complex128)
    controlled[:size, :size] = np.eye(size)
    controlled[size:, size:] = form.W
    # [control, env, target] -> [env, control, target]
    perm = [env_qubits] + list(range(env_qubits)) + [
        env_qubits + 1 + i for i in range(target_qubits)
    ]
    W = permute_qubits(controlled, perm)

    target = np.zeros((2 * d, 2 * d), dtype=np.complex128)
    target[:d, :d] = np.eye(d)
    target[d:, d:] = E.declared_target
    return ChannelModel(
        target,
        E.delta_budget,
        E.copies_per_use,
        "circuit",
        E.workspace_qubits,
        CircuitForm(W, form.environment, form.repetitions),
        "c" + E.label,
    )


def compose_channels(channels: Sequence[ChannelModel], label: str = "E_composite") -> ChannelModel:
    """Sequential composition; channels[0] acts first. Budgets add."""
    if not channels:
        raise ArgumentError("nothing to compose")
    d = channels[0].dim
    if any(E.dim != d for E in channels):
        raise ArgumentError("composed channels must act on one register")
    superoperator = np.eye(d * d, dtype=np.complex128)
    target = np.eye(d, dtype=np.complex128)
    for E in channels:
        superoperator = E.superoperator() @ superoperator
        target = E.declared_target @ target
    return ChannelModel(
        target,
        sum(E.delta_budget for E in channels),
        sum(E.copies_per_use for E in channels),
        "composite",
        label=label,
        _superoperator=superoperator,
    )


@dataclass
class ChannelBudget:
    """Declared diamond budget of ``uses`` applications of channels at ``per_use``."""

    uses: int
    per_use: float
    declared: float
    choi_proxy: Optional[float] = None
    status: str = "ok"


def apply_channel_as_block_encoding(
    E: ChannelModel,
    uses: int,
    ledger: Optional[QueryLedger] = None,
    sample_key: str = SAMPLES_RHO,
    measure: bool = False,
    executions: int = 1,
) -> ChannelBudget:
    """Account for ``uses`` sequential uses of E in place of its unitary.

    The declared budget grows additively; a budget of 1 or more carries no
    guarantee and is reported with status ``overflow``. The ledger is charged
    for ``executions`` independent repetitions of the whole sequence.
    """
    if uses < 0 or executions < 0:
        raise ArgumentError(f"uses and executions must be non-negative, got {uses}, {executions}")
    declared = uses * E.delta_budget
    status = "ok"
    if declared >= 1:
        status = "overflow"
        logger.warning("channel budget overflow", label=E.label, uses=uses, declared=declared)
    if ledger is not None:
        ledger.charge(CHANNEL_USES, uses * executions)
        ledger.charge(sample_key, uses * executions * E.copies_per_use)
    proxy = None
    if measure:
        superoperator = np.linalg.matrix_power(E.superoperator(), uses)
        target = np.linalg.matrix_power(E.declared_target, uses)
        proxy = choi_distance(superoperator_to_choi(superoperator), unitary_choi(target))
    return ChannelBudget(uses, E.delta_budget, declared, proxy, status)
