"""Validated command-line configuration."""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field

from services.report_service import OutputFormat


class Subcommand(str, Enum):
    CLASSIFY = "classify"
    RANKS = "ranks"
    EQUIV = "equiv"
    CONTRACT_VERIFY = "contract-verify"
    CONTRACT_SEARCH = "contract-search"
    TABLE6 = "table6"
    CATALOG = "catalog"
    STRUCTURE = "structure"
    REALIZE = "realize"
    STACKEL = "stackel"


class CommandConfig(BaseModel):
    """One parsed invocation; unset flags fall back to the configuration."""

    subcommand: Subcommand
    form: Optional[str] = Field(default=None, description="form file, system id or Casimir text")
    source: Optional[str] = None
    target: Optional[str] = None
    witness: Optional[str] = Field(default=None, description="path of a contraction family document")
    bound: Optional[int] = Field(default=None, ge=0, description="exponent bound of the monomial search")
    seed: Optional[int] = None
    k: str = Field(default="1", description="structure constant for the structure subcommand")
    format: OutputFormat = OutputFormat.JSON
    certificates: bool = False
    verbose: bool = False
