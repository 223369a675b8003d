"""
JSON documents of the CLI and the HTTP API
Field names are snake_case in Python and camelCase on the wire
"""

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic.alias_generators import to_camel

CaseName = Literal["nodal", "cuspidal"]
Command = Literal["analyze", "reconstruct", "forward", "roundtrip"]


class CamelModel(BaseModel):
    model_config = ConfigDict(alias_generator=to_camel, populate_by_name=True)

    def to_json_dict(self) -> Dict[str, Any]:
        return self.model_dump(by_alias=True)


# ---------------------------------------------------------------------------
# requests
# ---------------------------------------------------------------------------

class AnalyzeRequest(CamelModel):
    polynomial: str
    seed: int = 0
    guess_limit: Optional[int] = Field(default=None, ge=1)
    isolated_bound: Optional[int] = Field(default=None, ge=0)


class ReconstructRequest(AnalyzeRequest):
    jobs: Optional[int] = Field(default=None, ge=1)


class ForwardRequest(CamelModel):
    seed: int = 0
    case: CaseName = "nodal"
    camera: Optional[List[str]] = Field(default=None, min_length=3, max_length=3)


class RoundtripRequest(CamelModel):
    seed: int = 0
    case: CaseName = "nodal"
    guess_limit: Optional[int] = Field(default=None, ge=1)
    isolated_bound: Optional[int] = Field(default=None, ge=0)
    jobs: Optional[int] = Field(default=None, ge=1)


class RunConfig(CamelModel):
    """Validated command-line options"""

    command: Command
    input_path: Optional[str] = None
    polynomial: Optional[str] = None
    seed: int = 0
    guess_limit: int = Field(default=16, ge=1)
    isolated_bound: int = Field(default=4, ge=0)
    output_path: Optional[str] = None
    jobs: int = Field(default=1, ge=1)
    verbose: int = Field(default=0, ge=0)
    case: CaseName = "nodal"
    camera: Optional[str] = None

    @model_validator(mode="after")
    def _one_input(self):
        if self.command in ("analyze", "reconstruct"):
            if (self.input_path is None) == (self.polynomial is None):
                raise ValueError("give exactly one of --input and --polynomial")
        return self


# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------

class ClusterModel(CamelModel):
    id: str
    kind: str
    resolvent: str
    size: int
    multiplicity: int
    guessable: bool


class AnalysisReport(CamelModel):
    case_tag: CaseName
    k: int
    u1: str = Field(alias="U1")
    rotation: List[List[str]]
    clusters: List[ClusterModel]
    guess_count: int
    pruned_guesses: int
    diagnostics: Dict[str, Any] = {}


class GuessModel(CamelModel):
    index: int
    choices: Dict[str, bool] = {}
    variants: Dict[str, str] = {}


class CandidateModel(CamelModel):
    f: str = Field(alias="F")
    f_canonical: str = Field(alias="FCanonical")
    abc: List[str]


class FailureExplanation(CamelModel):
    line: Optional[int] = None
    stage: str
    message: str
    hint: str


class GuessReport(CamelModel):
    guess: GuessModel
    outcome: Literal["success", "fail"]
    failed_assertion: Optional[str] = None
    f: Optional[str] = Field(default=None, alias="F")
    abc: Optional[List[str]] = None
    candidates: List[CandidateModel] = []
    diagnostics: Dict[str, Any] = {}
    explanation: Optional[FailureExplanation] = None


class ReconstructionRun(CamelModel):
    analysis: AnalysisReport
    reports: List[GuessReport]
    solved: bool
    success_count: int = 0


class CyclideSpecModel(CamelModel):
    l: str = Field(alias="L")
    q: str = Field(alias="Q")
    case_tag: CaseName


class ForwardInstanceModel(CamelModel):
    seed: Optional[int] = None
    attempt: int = 0
    spec: CyclideSpecModel
    camera: List[str]
    f: str = Field(alias="F")
    f_camera: str = Field(alias="FCamera")
    u: str = Field(alias="U")
    case_tag: CaseName
    k: int
    deg_u: int = Field(alias="degU")
    deg_u1: int = Field(alias="degU1")
    no_triple_points: Optional[bool] = None


class RoundtripVerdict(CamelModel):
    seed: int
    case_tag: CaseName
    verdict: bool
    match: Optional[Literal["hidden", "twin"]] = None
    twin_found: bool = False
    witness: Optional[Dict[str, str]] = None
    instance: ForwardInstanceModel
    guess_count: int
    success_count: int
    failures: Dict[str, int] = {}
    timings: Dict[str, float]


class HealthStatus(CamelModel):
    status: str
    version: str
    settings: Dict[str, Any]
