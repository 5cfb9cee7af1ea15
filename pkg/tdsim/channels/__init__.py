from .channel_model import (
    ChannelModel,
    CircuitForm,
    choi_distance,
    kraus_to_choi,
    superoperator_to_choi,
    unitary_choi,
)
from .dme import dme_channel, dme_step
from .sampling import (
    CHANNEL_ALPHA,
    CHANNEL_ANCILLAS,
    ChannelBudget,
    apply_channel_as_block_encoding,
    channel_block_encoding,
    channel_circuit_form,
    compose_channels,
    control_channel,
    invert_channel,
    noisy_oracle_channel,
    samples_per_use,
    sampling_to_block_encoding,
    state_dilation,
)

__all__ = [
    "CHANNEL_ALPHA",
    "CHANNEL_ANCILLAS",
    "ChannelBudget",
    "ChannelModel",
    "CircuitForm",
    "apply_channel_as_block_encoding",
    "channel_block_encoding",
    "channel_circuit_form",
    "choi_distance",
    "compose_channels",
    "control_channel",
    "dme_channel",
    "dme_step",
    "invert_channel",
    "kraus_to_choi",
    "noisy_oracle_channel",
    "samples_per_use",
    "sampling_to_block_encoding",
    "state_dilation",
    "superoperator_to_choi",
    "unitary_choi",
]
