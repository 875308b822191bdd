"""Edge Wasserstein distance losses for oriented boxes and quadrilaterals."""

from ._core import (
    BoxDef,
    BoxGrad,
    LossConfig,
    LossResult,
    OBox5,
    canonicalize,
    corners,
    egwd,
    fd_gradient,
    fit,
    gradient,
    loss,
    quad_loss,
    rotated_iou,
    sweep_curve,
    __version__,
)

__all__ = [
    "BoxDef",
    "BoxGrad",
    "LossConfig",
    "LossResult",
    "OBox5",
    "canonicalize",
    "corners",
    "egwd",
    "fd_gradient",
    "fit",
    "gradient",
    "loss",
    "quad_loss",
    "rotated_iou",
    "sweep_curve",
    "__version__",
]
