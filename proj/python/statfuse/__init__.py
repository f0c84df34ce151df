"""Statistical pan-sharpening: LMM, LMVM, RVS and LCM fusion plus quality metrics.

Bands are 2-D float64 arrays indexed (row, column); multi-band images are
(bands, rows, columns).
"""

from ._core import (
    DegenerateInput,
    DimensionError,
    IOError,
    NumericError,
    ParseError,
    RangeError,
    ShapeError,
    correlation,
    degrade,
    deviation_index,
    entropy,
    evaluate,
    fuse,
    fuse_stack,
    local_cov,
    local_mean,
    local_regression,
    local_std,
    make_scene,
    nrmse,
    read_image,
    snr,
    std_dev,
    upsample_nearest,
    write_image,
)

METHODS = ("lmm", "lmvm", "rvs", "lcm")

__all__ = [
    "METHODS",
    "DegenerateInput",
    "DimensionError",
    "IOError",
    "NumericError",
    "ParseError",
    "RangeError",
    "ShapeError",
    "correlation",
    "degrade",
    "deviation_index",
    "entropy",
    "evaluate",
    "fuse",
    "fuse_stack",
    "local_cov",
    "local_mean",
    "local_regression",
    "local_std",
    "make_scene",
    "nrmse",
    "read_image",
    "snr",
    "std_dev",
    "upsample_nearest",
    "write_image",
]
