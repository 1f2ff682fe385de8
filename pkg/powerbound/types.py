"""
Shared pydantic field types for complex numpy data.

Complex vectors and matrices are validated into ``numpy`` arrays and
serialized as nested ``[re, im]`` pairs so reports stay plain JSON.
"""

from typing import Annotated, Any

import numpy as np
from pydantic import BeforeValidator, PlainSerializer


def _to_complex_vector(value: Any) -> np.ndarray:
    arr = np.asarray(value)
    if not np.iscomplexobj(arr) and arr.ndim == 2 and arr.shape[-1] == 2:
        arr = arr[..., 0] + 1j * arr[..., 1]
    arr = np.asarray(arr, dtype=complex)
    if arr.ndim != 1:
        raise ValueError(f"expected a vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector entries must be finite")
    return arr


def _to_complex_matrix(value: Any) -> np.ndarray:
    arr = np.asarray(value)
    if not np.iscomplexobj(arr) and arr.ndim == 3 and arr.shape[-1] == 2:
        arr = arr[..., 0] + 1j * arr[..., 1]
    arr = np.asarray(arr, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return arr


def complex_pairs(arr: np.ndarray) -> list:
    """Convert a complex array into nested ``[re, im]`` lists."""
    arr = np.asarray(arr, dtype=complex)
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


ComplexVector = Annotated[
    np.ndarray,
    BeforeValidator(_to_complex_vector),
    PlainSerializer(complex_pairs, return_type=list),
]

ComplexMatrix = Annotated[
    np.ndarray,
    BeforeValidator(_to_complex_matrix),
    PlainSerializer(complex_pairs, return_type=list),
]


def _to_complex_scalar(value: Any) -> complex:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        value = complex(value[0], value[1])
    z = complex(value)
    if not np.isfinite(z):
        raise ValueError("complex value must be finite")
    return z


ComplexScalar = Annotated[
    Any,
    BeforeValidator(_to_complex_scalar),
    PlainSerializer(lambda z: [z.real, z.imag], return_type=list),
]
