from ._mhdlab import (
    ConfigError,
    FitError,
    SnapshotError,
    bump,
    decay_fit,
    echo_config,
    energy,
    kernel_bound_violations,
    khat,
    pressure,
    read_snapshot,
    run,
    write_snapshot,
)

__all__ = [
    "ConfigError",
    "FitError",
    "SnapshotError",
    "bump",
    "decay_fit",
    "echo_config",
    "energy",
    "kernel_bound_violations",
    "khat",
    "pressure",
    "read_snapshot",
    "run",
    "write_snapshot",
]
