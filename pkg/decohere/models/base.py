"""
Shared pydantic base for value types
------------------------------------

All parameter and configuration objects are immutable pydantic models.
Unknown keys are rejected with a validation error.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict


class FrozenModel(BaseModel):
    """Immutable, strictly keyed pydantic model."""

    model_config = ConfigDict(frozen=True, extra="forbid")
