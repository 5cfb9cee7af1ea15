"""Density matrix exponentiation by repeated partial swaps."""

import math

import numpy as np
from scipy.linalg import expm

from ..exceptions import ArgumentError
from ..linalg.density import DensityOperator
from ..linalg.operators import check_qubit_cap, register_swap
from ..utils.logger import get_logger
from .channel_model import ChannelModel, CircuitForm

logger = get_logger(__name__)


def dme_step(copy: DensityOperator, working: DensityOperator, dt: float) -> DensityOperator:
    """tr_copy(e^{-iS dt} (copy (x) working) e^{iS dt}) for the swap S.

    Closed form: cos^2 w + sin^2 tr(w) c - i sin cos [c, w] (tr c = 1).
    """
    if copy.dim != working.dim:
        raise ArgumentError(f"dimension mismatch: {copy.dim} vs {working.dim}")
    c, w = copy.op, working.op
    cos, sin = math.cos(dt), math.sin(dt)
    result = (
        cos ** 2 * w
        + sin ** 2 * working.trace * c
        - 1j * sin * cos * (c @ w - w @ c)
    )
    return DensityOperator(result, working.n, working.normalized)


def partial_swap(n: int, dt: float) -> np.ndarray:
    """e^{-iS dt} = cos(dt) I - i sin(dt) S on two n-qubit registers."""
    check_qubit_cap(2 * n)
    swap = register_swap(n, 0, n)
    return math.cos(dt) * np.eye(swap.shape[0]) - 1j * math.sin(dt) * swap


def dme_steps(t: float, delta: float) -> int:
    return max(1, math.ceil(4 * t * t / delta))


def dme_channel(rho: DensityOperator, t: float, delta: float, label: str = "E_rho") -> ChannelModel:
    """m = ceil(4 t^2 / delta) partial-swap steps with one fresh copy each, target e^{-i rho t}."""
    if not 0 < delta < 1:
        raise ArgumentError(f"delta must lie in (0, 1), got {delta}")
    if t < 0:
        raise ArgumentError(f"evolution time must be non-negative, got {t}")
    m = dme_steps(t, delta)
    form = CircuitForm(partial_swap(rho.n, t / m), rho.op, m)
    target = expm(-1j * t * rho.op)
    channel = ChannelModel(target, delta, m, "dme", circuit=form, label=label)
    proxy = channel.choi_proxy_distance()
    channel.metadata.update({"t": t, "steps": m, "choi_proxy": proxy})
    logger.debug("dme channel", steps=m, choi_proxy=proxy, delta=delta)
    return channel
