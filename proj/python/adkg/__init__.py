"""Python interface to the asynchronous key generation simulator."""

from ._adkg import *  # noqa: F401,F403
from ._adkg import AdkgError, MODULUS

__all__ = [
    "AdkgError",
    "MODULUS",
    "behavior_names",
    "chunk_size",
    "decode_bytes",
    "encode_bytes",
    "encode_chunks",
    "interpolate",
    "reference_config",
    "replay_trace",
    "run_scenario",
    "scaling",
    "sweep",
    "vc_commit",
    "vc_open_prove",
    "vc_open_verify",
]
