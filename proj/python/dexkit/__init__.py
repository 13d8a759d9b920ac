"""Channel-extension preprocessing for small CNN accelerators."""

from ._core import (
    DexkitError,
    normalize,
    plan,
    profile,
    quantize_q7,
    read_tensor,
    strategies,
    transform,
    write_tensor,
)

__all__ = [
    "DexkitError",
    "normalize",
    "plan",
    "profile",
    "quantize_q7",
    "read_tensor",
    "strategies",
    "transform",
    "write_tensor",
]
__version__ = "0.1.0"
