"""fepsim: deterministic pilot-in-the-loop flight simulation with layered
envelope protection, an incremental-inversion rate controller, and an
emulated active sidestick."""

__version__ = "0.1.0"
