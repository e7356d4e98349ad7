"""Observed information and standard errors from finite differences of the score."""

import logging
from typing import Optional, Sequence

import numpy as np

from core.dataset import Dataset
from core.errors import BoundaryOptimum, InvalidParameter, SingularInformation
from core.params import Params, validate_params

from .likelihood import gradient

logger = logging.getLogger(__name__)

RELATIVE_STEP = 1e-5
MAX_CONDITION = 1e12


def observed_information(params: Params, data: Dataset) -> np.ndarray:
    """Negative Hessian of the log-likelihood, column j from differences of the score in theta_j.

    Central differences with step 1e-5 * max(|theta_j|, 1); a one-sided
    forward difference is used when the backward point is not a valid
    parameter (interaction parameters at or near zero). The matrix is
    returned as computed, without symmetrizing.
    """
    theta = params.as_array()
    g_mid = gradient(params, data)
    info = np.empty((5, 5))
    for j in range(5):
        h = RELATIVE_STEP * max(abs(theta[j]), 1.0)
        g_up = _shifted_gradient(theta, j, h, data)
        g_down = _shifted_gradient(theta, j, -h, data)
        if g_up is not None and g_down is not None:
            info[:, j] = -(g_up - g_down) / (2.0 * h)
        elif g_up is not None:
            info[:, j] = -(g_up - g_mid) / h
        elif g_down is not None:
            info[:, j] = -(g_mid - g_down) / h
        else:
            raise SingularInformation(f"no valid difference step for {Params.NAMES[j]}")
    return info


def _shifted_gradient(theta: np.ndarray, j: int, h: float, data: Dataset):
    shifted = theta.copy()
    shifted[j] += h
    try:
        return gradient(validate_params(shifted), data)
    except InvalidParameter:
        return None


def std_errors(params: Params, data: Dataset, boundary: Sequence[str] = (),
               info: Optional[np.ndarray] = None) -> np.ndarray:
    """sqrt(diag(inverse information)).

    Raises BoundaryOptimum when any parameter sits on its constraint and
    SingularInformation when the symmetrized matrix is not safely invertible.
    """
    if boundary:
        raise BoundaryOptimum(boundary)
    if info is None:
        info = observed_information(params, data)
    sym = 0.5 * (info + info.T)
    try:
        chol = np.linalg.cholesky(sym)
    except np.linalg.LinAlgError:
        raise SingularInformation("observed information is not positive definite")
    cond = np.linalg.cond(sym)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise SingularInformation(f"observed information is ill-conditioned (condition number {cond:.3g})")
    inv_chol = np.linalg.inv(chol)
    cov = inv_chol.T @ inv_chol
    logger.debug("observed information condition number %.3g", cond)
    return np.sqrt(np.diag(cov))
