"""Request models shared by the HTTP service and the CLI."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class FbsDemoRequest(BaseModel):
    """Route both logical basis states through the frequency beamsplitter."""

    omega: float = Field(default=1.0, gt=0.0)
    ratio: float = Field(default=100.0, ge=1.0, description="omega^2/sigma for gauss inputs")
    kind: Literal["mono", "gauss"] = "gauss"


class HwpRotateRequest(BaseModel):
    """Rotate a monochromatic qubit and report the extracted 2x2 block."""

    theta: float
    omega: float = Field(default=1.0, gt=0.0)
    mu: str = "1+0j"
    nu: str = "0+0j"


class FidelitySweepRequest(BaseModel):
    ratios: list[float]
    thetas: list[float]
    omega: float = Field(default=1.0, gt=0.0)
    input_index: Literal[0, 1] = 0


class LossBudgetRequest(BaseModel):
    eta_aom: float = Field(ge=0.0, le=1.0)
    eta_mm: float = Field(ge=0.0, le=1.0)


class NetlistRunRequest(BaseModel):
    text: str
    format: Literal["csv", "json"] = "csv"
