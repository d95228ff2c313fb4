"""Watermarking of signed distance fields by analytic surface deformation.

The heavy lifting lives in the compiled extension; this package re-exports
the public operations.
"""

from ._funcmark import (
    Field,
    FuncmarkError,
    PartitionLayout,
    __version__,
    align,
    attack,
    bake,
    chamfer,
    decode,
    deform,
    detect,
    embed,
    extract,
    load_grid,
    p2s,
    read_obj,
    sample_surface,
    set_threads,
    shape,
    write_obj,
)

__all__ = [
    "Field",
    "FuncmarkError",
    "PartitionLayout",
    "__version__",
    "align",
    "attack",
    "bake",
    "chamfer",
    "decode",
    "deform",
    "detect",
    "embed",
    "extract",
    "load_grid",
    "p2s",
    "read_obj",
    "sample_surface",
    "set_threads",
    "shape",
    "write_obj",
]
