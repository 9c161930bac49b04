"""Beeping-network simulators built on URSC columns."""

from ursc.beeping.blockid import block_id, block_length, decode_block_id, expand_codeword, id_width
from ursc.beeping.broadcast import (
    BroadcastOutcome,
    ExtendedMessage,
    extended_messages,
    reassemble_message,
    simulate_local_broadcast,
    universe,
)
from ursc.beeping.network import (
    CodeTooShort,
    Event,
    Graph,
    NodeRuntime,
    SafetyViolation,
    WakeSchedule,
    connected_graphs,
    discovery_rounds,
    learning_events,
    simulate_neighborhood_learning,
)
from ursc.beeping.sweep import SweepReport, exhaustive_sweep
