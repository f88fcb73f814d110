from typing import List, Optional

from pydantic import BaseModel


class OracleReport(BaseModel):
    name: str
    cases: int
    max_abs_error: float = 0.0
    max_rel_error: float = 0.0
    worst_case: Optional[List[float]] = None
    passed: bool
    detail: str = ""

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = (f"{status} {self.name}: cases={self.cases} max_abs={self.max_abs_error:.3e} "
                f"max_rel={self.max_rel_error:.3e}")
        if self.worst_case is not None:
            line += f" worst={[round(v, 9) for v in self.worst_case]}"
        if self.detail:
            line += f" ({self.detail})"
        return line


class OracleTolerances(BaseModel):
    """Single ledger of oracle tolerances."""
    fd_step: float = 1e-6
    gradient_rel: float = 1e-5
    gradient_abs: float = 1e-7
    panel_gradient_rel: float = 1e-6
    quadrature: float = 1e-8
    geometry_band: float = 1e-9
    direction: float = 1e-12
    lyapunov: float = 1e-6
    projection: float = 1e-12

    class Config:
        allow_mutation = False


tolerances = OracleTolerances()
