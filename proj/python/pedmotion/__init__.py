"""Python bindings for the pedmotion C++ core.

Documents (motions, clips, scenarios, logs, reports) are passed as JSON text
in their canonical form; rotations and trajectories are numpy arrays.
"""

from ._pedmotion import (
    InputError,
    ProcessingError,
    axis_angle_to_matrix,
    canonicalize,
    classify,
    document_format,
    euler_xyz_to_matrix,
    evaluate,
    generate,
    keyword_filter,
    matrix_to_axis_angle,
    matrix_to_euler_xyz,
    p_mais3,
    reconstruct,
    retarget,
    simulate,
    sixd_to_matrix,
    stem,
    synth_corpus,
    tag_behavior,
)

__all__ = [
    "InputError",
    "ProcessingError",
    "axis_angle_to_matrix",
    "canonicalize",
    "classify",
    "document_format",
    "euler_xyz_to_matrix",
    "evaluate",
    "generate",
    "keyword_filter",
    "matrix_to_axis_angle",
    "matrix_to_euler_xyz",
    "p_mais3",
    "reconstruct",
    "retarget",
    "simulate",
    "sixd_to_matrix",
    "stem",
    "synth_corpus",
    "tag_behavior",
]
