from pydantic import BaseModel, Field, ConfigDict
from typing import Optional, List, Literal
from datetime import datetime

from app.config import settings

TightenMode = Literal["cycles", "cycles+oddwheels"]


class SolveConfig(BaseModel):
    max_iterations: int = Field(default=1000, ge=1, description="Message passing iterations")
    separation_interval: int = Field(default=10, ge=1, description="Iterations between separation rounds")
    rounding_interval: int = Field(default=100, ge=1, description="Iterations between rounding rounds")
    epsilon: float = Field(default=1e-4, gt=0, description="Guaranteed bound increase of separated subproblems")
    tighten: TightenMode = Field(default="cycles+oddwheels", description="Inequality classes to separate")
    time_limit: float = Field(default=3600.0, gt=0, description="Wall-clock limit in seconds")
    seed: Optional[int] = Field(None, description="Reserved for randomized tie-breaking")
    cycle_cap: Optional[int] = Field(None, ge=1, description="Cycles attached per round (None: all)")
    wheel_cap_per_center: int = Field(default=1, ge=1, description="Odd wheels attached per center node per round")
    gap_tolerance: float = Field(default=1e-9, ge=0, description="Gap below which a solution is certified optimal")
    klj_max_passes: int = Field(default=25, ge=1, description="Outer passes of Kernighan-Lin with joins")

    model_config = ConfigDict(extra='forbid')

    @classmethod
    def from_settings(cls, **overrides) -> "SolveConfig":
        """Defaults from the environment; ``None`` overrides are ignored."""
        values = {
            "max_iterations": settings.max_iterations,
            "separation_interval": settings.separation_interval,
            "rounding_interval": settings.rounding_interval,
            "epsilon": settings.epsilon,
            "tighten": settings.tighten,
            "time_limit": settings.time_limit,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)

    @property
    def separates_odd_wheels(self) -> bool:
        return self.tighten == "cycles+oddwheels"


class ConvergenceRecord(BaseModel):
    wall_time: float = Field(..., ge=0, description="Seconds since the solve started")
    iteration: int = Field(..., ge=0)
    lower_bound: float
    best_upper_bound: float
    n_edges: int = Field(..., ge=0)
    n_triangles: int = Field(..., ge=0)
    n_lollipops: int = Field(..., ge=0)

    model_config = ConfigDict(from_attributes=True)


# Run store response schemas
class RunSimple(BaseModel):
    id: int
    instance_name: str
    node_count: int
    edge_count: int
    tighten: str
    status: str
    lower_bound: float
    upper_bound: float
    trivial_lower_bound: float
    iterations: int
    n_triangles: int
    n_lollipops: int
    created_at: datetime

    model_config = ConfigDict(from_attributes=True)


class RunDetail(RunSimple):
    records: List[ConvergenceRecord] = []

    model_config = ConfigDict(from_attributes=True)


class StatusResponse(BaseModel):
    success: bool
    message: str
