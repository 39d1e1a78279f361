# ABOUTME: Operator 2-norm by cyclic Jacobi on M^T M, plus Frobenius and batched variants
# ABOUTME: The batched form serves the conditioning hot loop over many partial products

import logging
import math
from typing import Literal, Union

import numpy as np

from app.config import Config
from app.errors import UsageError
from app.variational.models import ScaledMatrix

log = logging.getLogger(__name__)

NormKind = Literal["2", "fro"]
NORM_KINDS = ("2", "fro")


def symmetric_eigenvalues(
    s: np.ndarray,
    rtol: float = Config.JACOBI_RTOL,
    max_sweeps: int = Config.JACOBI_MAX_SWEEPS,
) -> list[float]:
    """
    Eigenvalues of a small symmetric matrix by the cyclic Jacobi method.

    Sweeps rotate every (p, q) pair in row order until the off-diagonal
    Frobenius mass drops below rtol * ||S||_F.
    """
    a = np.asarray(s, dtype=np.float64).tolist()
    d = len(a)
    total = math.sqrt(sum(v * v for row in a for v in row))
    if total == 0.0:
        return [0.0] * d
    target = rtol * total
    for _ in range(max_sweeps):
        off = math.sqrt(sum(a[i][j] * a[i][j] for i in range(d) for j in range(d) if i != j))
        if off < target:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p][q]
                if apq == 0.0:
                    continue
                theta = (a[q][q] - a[p][p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(1.0 + theta * theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                sn = t * c
                for k in range(d):
                    akp, akq = a[k][p], a[k][q]
                    a[k][p] = c * akp - sn * akq
                    a[k][q] = sn * akp + c * akq
                for k in range(d):
                    apk, aqk = a[p][k], a[q][k]
                    a[p][k] = c * apk - sn * aqk
                    a[q][k] = sn * apk + c * aqk
    else:
        log.warning(f"Jacobi did not converge in {max_sweeps} sweeps (d={d})")
    return [a[i][i] for i in range(d)]


def _matrix_norm2(m: np.ndarray) -> float:
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2:
        raise UsageError(f"Expected a matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise UsageError("norm2 needs finite entries")
    gram = m.T @ m
    return math.sqrt(max(0.0, max(symmetric_eigenvalues(gram))))


def norm2(m: Union[np.ndarray, ScaledMatrix]):
    """
    Operator 2-norm: sqrt of the largest eigenvalue of M^T M.

    Returns:
        float for a plain matrix; (value, log_value) for a ScaledMatrix,
        where value may be inf when the represented norm overflows
    """
    if isinstance(m, ScaledMatrix):
        mantissa_norm = _matrix_norm2(m.mantissa)
        if mantissa_norm == 0.0:
            return 0.0, -math.inf
        log_value = math.log(mantissa_norm) + m.log_scale
        value = math.exp(log_value) if log_value < 709.0 else math.inf
        return value, log_value
    return _matrix_norm2(m)


def frobenius(m: np.ndarray) -> float:
    return float(np.sqrt(np.sum(np.asarray(m, dtype=np.float64) ** 2)))


def matrix_norm(m: np.ndarray, kind: NormKind = "2") -> float:
    """2-norm or Frobenius norm of one matrix."""
    if kind == "2":
        return _matrix_norm2(m)
    if kind == "fro":
        return frobenius(m)
    raise UsageError(f"Unknown norm '{kind}', expected one of {NORM_KINDS}")


def batch_norm(stack: np.ndarray, kind: NormKind = "2") -> np.ndarray:
    """
    Norms of a stack of matrices with shape (k, d, d).

    The 2-norm uses the largest eigenvalue of each Gram matrix M^T M,
    the same quantity norm2 extracts by Jacobi rotations.
    """
    if stack.shape[0] == 0:
        return np.zeros(0)
    if kind == "fro":
        return np.sqrt(np.sum(stack * stack, axis=(1, 2)))
    if kind != "2":
        raise UsageError(f"Unknown norm '{kind}', expected one of {NORM_KINDS}")
    gram = np.matmul(np.swapaxes(stack, 1, 2), stack)
    largest = np.linalg.eigvalsh(gram)[:, -1]
    return np.sqrt(np.maximum(largest, 0.0))
