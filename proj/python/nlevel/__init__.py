"""Closed-form and numerical dynamics of laser-driven n-level atoms."""

from ._core import *  # noqa: F401,F403
from ._core import ConditionViolation, NlevelError  # noqa: F401
