from typing import Iterable, Optional


class TubeSwarmError(Exception):
    """Base error. `exit_code` is what the CLI returns when this error escapes a command."""

    exit_code = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail
        self.step: Optional[int] = None
        self.agents: tuple = ()
        # partial run record, set by the simulator when a run stops early
        self.partial = None

    def with_context(self, step: Optional[int] = None, agents: Iterable[int] = ()) -> "TubeSwarmError":
        self.step = step
        self.agents = tuple(agents)
        return self

    def __str__(self) -> str:
        if self.step is None:
            return self.detail
        agents = ", ".join(str(a) for a in self.agents)
        return f"{self.detail} (step {self.step}, agents [{agents}])"


# geometry
class GeometryError(TubeSwarmError):
    exit_code = 3


class NonParallelBases(GeometryError):
    pass


class DegenerateTube(GeometryError):
    pass


class OutOfSlab(GeometryError):
    pass


class OutsideTube(GeometryError):
    exit_code = 4


class DegenerateLegAngle(GeometryError):
    pass


class InvalidIndex(GeometryError):
    pass


class InvalidChain(GeometryError):
    pass


# potentials
class DomainViolation(TubeSwarmError):
    exit_code = 4


class LogDomain(TubeSwarmError):
    exit_code = 4


class ConstraintUnsatisfiable(TubeSwarmError):
    exit_code = 5


# controller
class SafetyBreach(TubeSwarmError):
    exit_code = 4


class TubeBreach(TubeSwarmError):
    exit_code = 4


class Outside(TubeSwarmError):
    exit_code = 4


# verification
class NonFinite(TubeSwarmError):
    exit_code = 5


class WrongLogic(TubeSwarmError):
    exit_code = 5


# cli
class ScenarioParseError(TubeSwarmError):
    exit_code = 2


class ScenarioValidationError(TubeSwarmError):
    exit_code = 3


class MissingTrace(TubeSwarmError):
    exit_code = 2


class OracleFailure(TubeSwarmError):
    exit_code = 5
