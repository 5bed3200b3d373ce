"""Circuit IR, JSON format and dense simulator."""

from qfusion.circuit.ir import (
    Circuit,
    CircuitBuilder,
    CircuitError,
    ClassicalBit,
    DataflowError,
    Discard,
    Fuse,
    Gate,
    Measure,
    Prep,
    Split,
    Wire,
)
from qfusion.circuit.serialize import ParseError, from_dict, parse, serialize, to_dict
from qfusion.circuit.simulate import (
    BranchOutcome,
    channel_of,
    compile_unitary,
    enumerate_branches,
    final_state,
    outcome_distribution,
    sample,
)

__all__ = [
    "BranchOutcome", "Circuit", "CircuitBuilder", "CircuitError", "ClassicalBit",
    "DataflowError", "Discard", "Fuse", "Gate", "Measure", "ParseError", "Prep",
    "Split", "Wire", "channel_of", "compile_unitary", "enumerate_branches",
    "final_state", "from_dict", "outcome_distribution", "parse", "sample",
    "serialize", "to_dict",
]
