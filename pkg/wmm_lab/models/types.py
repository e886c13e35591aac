"""
Reusable annotated types for regularizer hyper-parameters.

Types:
    Probability: A real number in the closed interval [0, 1].
    Coverage:    A real number in the half-open interval (0, 1].
    PositiveInt: An integer >= 1.
"""

from typing import Annotated

from pydantic import Field

Probability = Annotated[float, Field(ge=0.0, le=1.0)]

# Coverage is a per-dimension fraction of the host matrix; zero would select nothing.
Coverage = Annotated[float, Field(gt=0.0, le=1.0)]

PositiveInt = Annotated[int, Field(ge=1)]
