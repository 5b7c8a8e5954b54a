"""Request and response models of the HTTP service."""

from __future__ import annotations

from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .classify import EPS_CONN, SCHEMA
from .params import EPS_PARAM, ParameterPoint, parse_number

Number = Union[int, float, str]


class Params(BaseModel):
    model_config = ConfigDict(extra="forbid")

    b0: Number
    b1: Number
    b2: Number
    b3: Number
    c0: Number

    @field_validator("b0", "b1", "b2", "b3", "c0")
    @classmethod
    def _parses(cls, v):
        try:
            parse_number(v)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a number: {v!r}") from exc
        return v

    def point(self) -> ParameterPoint:
        return ParameterPoint.from_dict(self.model_dump())


class Tolerances(BaseModel):
    epsilon_param: float = Field(EPS_PARAM, gt=0)
    epsilon_conn: float = Field(EPS_CONN, gt=0)


class ClassifyRequest(Tolerances):
    params: Params
    with_tracing: bool = False


class RenderRequest(Tolerances):
    params: Params
    format: Literal["svg", "json"] = "svg"


class SweepRequest(Tolerances):
    spec: dict
    samples: Optional[int] = Field(None, ge=0)
    seed: Optional[int] = None
    with_tracing: bool = False
    jobs: Optional[int] = Field(None, ge=1)
    include_samples: bool = False


class Versioned(BaseModel):
    model_config = ConfigDict(extra="allow")

    schema_: str = Field(SCHEMA, alias="schema")


class ClassificationOut(Versioned):
    params: dict
    case: str
    O1: str
    O2: str
    G: str
    R: str
    invariants: list
    flags: list
    traced: Optional[dict] = None


class SkeletonOut(Versioned):
    G: str
    R: str
    invariants: list
    skeleton: dict


class CensusOut(Versioned):
    n: int
    G: dict
    R: dict
    R_support: list
    failures: list
    disagreements: list


class TablesOut(Versioned):
    tables: dict[str, Any]


class ErrorOut(Versioned):
    error: str
    detail: str
