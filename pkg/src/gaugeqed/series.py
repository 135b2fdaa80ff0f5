"""Sampled-observable containers shared by the physics modules and the CLI."""

from dataclasses import dataclass
import numpy as np


@dataclass(frozen=True)
class TimeSeries:
    times: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise ValueError("times and values must have equal length")


@dataclass(frozen=True)
class FieldMap:
    t: np.ndarray            # shape (nt,)
    x: np.ndarray            # shape (nx,)
    values: np.ndarray       # shape (nt, nx)
    label: str = ""

    def __post_init__(self):
        if self.values.shape != (len(self.t), len(self.x)):
            raise ValueError("values shape must be (len(t), len(x))")
