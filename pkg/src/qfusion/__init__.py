"""Qubit fusion / qudit fission circuits: dense simulation, identity checks,
|F> distillation analysis and Clifford+T to Clifford+F recompilation."""

__version__ = "0.1.0"
