"""
Data models and schemas
"""
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from lpsolve.errors import DomainError, SpecError, UsageError


def _array(value: Any) -> np.ndarray:
    arr = np.asarray(value)
    if np.iscomplexobj(arr):
        return arr.astype(np.complex128)
    return arr.astype(np.float64)


class ArrayModel(BaseModel):
    """Frozen model that may hold numpy arrays"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


# --- matcore -----------------------------------------------------------------


class SvdResult(ArrayModel):
    """Economy singular value decomposition A = U diag(sigma) V^H"""

    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray

    @field_validator("U", "sigma", "V", mode="before")
    @classmethod
    def _coerce(cls, v):
        return _array(v)

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.sigma) @ self.V.conj().T


class CirculantDiagonalization(ArrayModel):
    """Eigenvalues of a circulant and the diagonalization residual"""

    eigenvalues: np.ndarray
    residual: float

    @field_validator("eigenvalues", mode="before")
    @classmethod
    def _coerce(cls, v):
        return _array(v)


# --- pinv --------------------------------------------------------------------


class CaseCode(str, Enum):
    """Shape / rank / span classification of (A, b)"""

    C1A = "1a"
    C1B = "1b"
    C1C = "1c"
    C2A = "2a"
    C2B = "2b"
    C2C = "2c"
    C2D = "2d"
    C3A = "3a"
    C3B = "3b"
    C3C = "3c"


CASE_DESCRIPTIONS: Dict[CaseCode, str] = {
    CaseCode.C1A: "One solution with no error",
    CaseCode.C1B: "Many solutions with no error",
    CaseCode.C1C: "Many solutions with the same minimum error",
    CaseCode.C2A: "One solution with no error",
    CaseCode.C2B: "One solution with minimum error",
    CaseCode.C2C: "Many solutions with no error",
    CaseCode.C2D: "Many solutions with the same minimum error",
    CaseCode.C3A: "Many solutions with no error",
    CaseCode.C3B: "Many solutions with no error",
    CaseCode.C3C: "Many solutions with the same minimum error",
}


def case_code_for(m: int, n: int, r: int, b_in_span: bool) -> CaseCode:
    """Case code for an m x n matrix of rank r"""
    if m == n:
        if r == n:
            return CaseCode.C1A
        return CaseCode.C1B if b_in_span else CaseCode.C1C
    if m > n:
        if r == n:
            return CaseCode.C2A if b_in_span else CaseCode.C2B
        return CaseCode.C2C if b_in_span else CaseCode.C2D
    if r == m:
        return CaseCode.C3A
    return CaseCode.C3B if b_in_span else CaseCode.C3C


class CaseLabel(BaseModel):
    """Classification of a linear system"""

    model_config = ConfigDict(frozen=True)

    code: CaseCode
    m: int = Field(..., gt=0)
    n: int = Field(..., gt=0)
    r: int = Field(..., ge=0)
    b_in_span: bool

    @model_validator(mode="after")
    def _consistent(self):
        if self.r > min(self.m, self.n):
            raise ValueError(f"rank {self.r} exceeds min({self.m}, {self.n})")
        if self.code in (CaseCode.C1A, CaseCode.C3A) and not self.b_in_span:
            raise ValueError(f"case {self.code.value} forces b into the span of A")
        expected = case_code_for(self.m, self.n, self.r, self.b_in_span)
        if expected != self.code:
            raise ValueError(f"code {self.code.value} does not match shape/rank, expected {expected.value}")
        return self

    @property
    def description(self) -> str:
        return CASE_DESCRIPTIONS[self.code]


class PenroseReport(BaseModel):
    """Residuals of the four Penrose conditions"""

    model_config = ConfigDict(frozen=True)

    residuals: List[float] = Field(..., min_length=4, max_length=4)
    tol: float
    passed: bool


class WeightMatrix(ArrayModel):
    """Diagonal weight matrix stored by its diagonal"""

    diag: np.ndarray

    @field_validator("diag", mode="before")
    @classmethod
    def _check(cls, v):
        arr = np.asarray(v, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("weights must be a non-empty vector")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise ValueError("weights must be finite and nonnegative")
        return arr

    @property
    def strictly_positive(self) -> bool:
        return bool(np.all(self.diag > 0))


class Solution(ArrayModel):
    """Pseudoinverse solution of A x = b with its classification"""

    x: np.ndarray
    case: CaseLabel
    residual_norm: float


# --- irls --------------------------------------------------------------------


class IrlsMode(str, Enum):
    OVER = "over"
    UNDER = "under"


class UpdateMode(str, Enum):
    """How each reweighted solution replaces the previous one"""

    FULL = "full"
    PARTIAL = "partial"
    NEWTON = "newton"


# Listing defaults: (p, homotopy factor) per mode
IRLS_DEFAULTS: Dict[IrlsMode, Tuple[float, float]] = {
    IrlsMode.OVER: (10.0, 2.0),
    IrlsMode.UNDER: (1.1, 0.8),
}


class IrlsOptions(BaseModel):
    """Options for the reweighted least squares solvers"""

    model_config = ConfigDict(frozen=True)

    p: Optional[float] = None
    homotopy_factor: Optional[float] = None
    max_iters: int = Field(10, ge=1)
    update_mode: Optional[UpdateMode] = None
    update_factor: float = 0.5
    weight_floor: float = Field(1e-5, ge=0)
    trace: bool = True
    early_stop: bool = False
    stop_tol: float = 1e-12
    convergence_tol: float = 1e-8

    @field_validator("p")
    @classmethod
    def _positive_p(cls, v):
        if v is not None and not (v > 0):
            raise ValueError(f"p must be positive, got {v}")
        return v

    @field_validator("homotopy_factor")
    @classmethod
    def _positive_k(cls, v):
        if v is not None and not (v > 0):
            raise ValueError(f"homotopy factor must be positive, got {v}")
        return v

    @field_validator("update_factor")
    @classmethod
    def _unit_interval(cls, v):
        if not (0 < v < 1):
            raise ValueError(f"partial update factor must lie in (0, 1), got {v}")
        return v

    def resolved(self, mode: IrlsMode) -> "IrlsOptions":
        """Fill listing defaults for the given mode"""
        default_p = IRLS_DEFAULTS[mode][0]
        p = self.p if self.p is not None else default_p
        # the growing factor walks pk up to p, the shrinking one down to it
        default_k = IRLS_DEFAULTS[IrlsMode.OVER][1] if p >= 2 else IRLS_DEFAULTS[IrlsMode.UNDER][1]
        k = self.homotopy_factor if self.homotopy_factor is not None else default_k
        update_mode = self.update_mode
        if update_mode is None:
            update_mode = UpdateMode.NEWTON if p >= 2 else UpdateMode.FULL
        if update_mode == UpdateMode.NEWTON and p <= 1:
            raise DomainError(f"newton update needs p > 1, got {p}", operation="irls")
        return self.model_copy(update={"p": p, "homotopy_factor": k, "update_mode": update_mode})


class IterationRecord(BaseModel):
    """One row of the convergence trace"""

    model_config = ConfigDict(frozen=True)

    iteration: int
    pk: float
    q: float
    error_norm: float
    step: float


class IrlsResult(ArrayModel):
    """Solution and convergence trace of an IRLS run"""

    x: np.ndarray
    iterations: int
    trace: List[IterationRecord] = []
    converged: bool
    p: float
    refined: bool = False

    @field_validator("x", mode="before")
    @classmethod
    def _coerce(cls, v):
        return _array(v)

    @property
    def error_norms(self) -> List[float]:
        return [record.error_norm for record in self.trace]


class MinimaxReport(BaseModel):
    """Equal-magnitude extremal error count of a candidate minimax solution"""

    model_config = ConfigDict(frozen=True)

    max_error: float
    num_max_magnitude_errors: int
    indices: List[int]
    satisfies_characterization: bool

    @model_validator(mode="after")
    def _count_matches(self):
        if self.num_max_magnitude_errors != len(self.indices):
            raise ValueError("count does not match index list")
        return self


# --- frames ------------------------------------------------------------------


TIGHT_TOL = 1e-6


class FrameSystem(ArrayModel):
    """Frame vectors stored as the columns of a synthesis matrix, with the relative gap allowed for tightness"""

    synthesis: np.ndarray
    tight_tol: float = Field(TIGHT_TOL, ge=0)

    @field_validator("synthesis", mode="before")
    @classmethod
    def _check(cls, v):
        arr = _array(v)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("synthesis matrix must be a non-empty 2-D array")
        if not np.all(np.isfinite(arr)):
            raise ValueError("frame vectors must be finite")
        return arr

    @property
    def d(self) -> int:
        return self.synthesis.shape[0]

    @property
    def n(self) -> int:
        return self.synthesis.shape[1]


class FrameReport(BaseModel):
    """Frame bounds and derived properties"""

    model_config = ConfigDict(frozen=True)

    lower: float
    upper: float
    tight: bool
    redundancy: float
    is_orthobasis: bool


class ParsevalReport(BaseModel):
    """Signal energy against coefficient energy"""

    model_config = ConfigDict(frozen=True)

    energy_signal: float
    energy_coeffs: float
    constant: float


# --- partition ---------------------------------------------------------------


class PartitionSpec(BaseModel):
    """Which entries of X and Y are given"""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1)
    known_x_idx: List[int] = []
    known_y_idx: List[int] = []

    @field_validator("known_x_idx", "known_y_idx", mode="before")
    @classmethod
    def _sorted(cls, v):
        return sorted(int(i) for i in v)

    @model_validator(mode="after")
    def _check(self):
        for name, idx in (("known_x_idx", self.known_x_idx), ("known_y_idx", self.known_y_idx)):
            if len(set(idx)) != len(idx):
                raise SpecError(f"{name} has repeated indices", operation="partition")
            if idx and (idx[0] < 0 or idx[-1] >= self.n):
                raise SpecError(f"{name} out of range [0, {self.n})", operation="partition")
        if len(self.known_x_idx) + len(self.known_y_idx) != self.n:
            raise SpecError(
                f"{len(self.known_x_idx)} known X plus {len(self.known_y_idx)} known Y "
                f"must equal n={self.n}",
                operation="partition",
            )
        return self

    @property
    def k(self) -> int:
        return len(self.known_x_idx)

    @property
    def unknown_x_idx(self) -> List[int]:
        known = set(self.known_x_idx)
        return [i for i in range(self.n) if i not in known]

    @property
    def unknown_y_idx(self) -> List[int]:
        known = set(self.known_y_idx)
        return [i for i in range(self.n) if i not in known]


class PartitionedSystem(ArrayModel):
    """Reordered F split into [[A, B], [C, D]]"""

    Abl: np.ndarray
    Bbl: np.ndarray
    Cbl: np.ndarray
    Dbl: np.ndarray
    row_perm: List[int]
    col_perm: List[int]

    def reassemble(self) -> np.ndarray:
        """Undo the permutations and return F"""
        top = np.hstack([self.Abl, self.Bbl])
        bottom = np.hstack([self.Cbl, self.Dbl])
        reordered = np.vstack([top, bottom])
        F = np.empty_like(reordered)
        F[np.ix_(self.row_perm, self.col_perm)] = reordered
        return F


class PartitionSolution(ArrayModel):
    """Unknown entries of Y (first K rows) and X (last n - K columns)"""

    y_unknown: np.ndarray
    x_unknown: np.ndarray

    def assemble(self, spec: PartitionSpec, x_known, y_known) -> Tuple[np.ndarray, np.ndarray]:
        """Full X and Y vectors in original order"""
        dtype = np.result_type(self.y_unknown, self.x_unknown, np.asarray(x_known), np.asarray(y_known))
        X = np.zeros(spec.n, dtype=dtype)
        Y = np.zeros(spec.n, dtype=dtype)
        X[spec.known_x_idx] = x_known
        X[spec.unknown_x_idx] = self.x_unknown
        Y[spec.known_y_idx] = y_known
        Y[spec.unknown_y_idx] = self.y_unknown
        return X, Y


class SparseRecovery(ArrayModel):
    """Recovered spectrum with the size of the reduced system that produced it"""

    spectrum: np.ndarray
    reduced_shape: Tuple[int, int]
    method: str
    condition: float


# --- opfit -------------------------------------------------------------------


class ExperimentSet(ArrayModel):
    """Inputs (columns x_k) and matching outputs (columns b_k)"""

    inputs: np.ndarray
    outputs: np.ndarray

    @field_validator("inputs", "outputs", mode="before")
    @classmethod
    def _matrix(cls, v):
        arr = _array(v)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("experiment data must be non-empty 2-D arrays")
        return arr

    @model_validator(mode="after")
    def _same_columns(self):
        if self.inputs.shape[1] != self.outputs.shape[1]:
            raise ValueError(
                f"{self.inputs.shape[1]} input columns but {self.outputs.shape[1]} output columns"
            )
        return self

    @property
    def num_experiments(self) -> int:
        return self.inputs.shape[1]


class OperatorFit(ArrayModel):
    """Fitted operator with rank diagnostics"""

    operator: np.ndarray
    rank: int
    rank_deficient: bool
    residual_norm: float


# --- cli ---------------------------------------------------------------------


class CommandName(str, Enum):
    PINV = "pinv"
    CLASSIFY = "classify"
    SOLVE = "solve"
    IRLS = "irls"
    MINIMAX = "minimax"
    SPARSE = "sparse"
    FRAME = "frame"
    PARTITION = "partition"
    SPARSE_DFT = "sparse-dft"
    SAMPLE_RECOVER = "sample-recover"
    FIT_OP = "fit-op"
    REGRESS = "regress"
    PENROSE_CHECK = "penrose-check"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


# (required, optional) positional input counts
REQUIRED_INPUTS: Dict[CommandName, Tuple[int, int]] = {
    CommandName.PINV: (1, 0),
    CommandName.CLASSIFY: (2, 0),
    CommandName.SOLVE: (2, 0),
    CommandName.IRLS: (2, 0),
    CommandName.MINIMAX: (2, 0),
    CommandName.SPARSE: (2, 0),
    CommandName.FRAME: (1, 1),
    CommandName.PARTITION: (2, 0),
    CommandName.SPARSE_DFT: (1, 0),
    CommandName.SAMPLE_RECOVER: (1, 0),
    CommandName.FIT_OP: (2, 0),
    CommandName.REGRESS: (2, 0),
    CommandName.PENROSE_CHECK: (2, 0),
}


class CommandConfig(BaseModel):
    """One batch invocation"""

    model_config = ConfigDict(frozen=True)

    command: CommandName
    inputs: List[str] = []
    p: Optional[float] = None
    iters: Optional[int] = None
    homotopy: Optional[float] = None
    tol: Optional[float] = None
    delta: Optional[float] = None
    weights: Optional[str] = None
    mode: IrlsMode = IrlsMode.OVER
    out: Optional[str] = None
    format: OutputFormat = OutputFormat.CSV
    trace: Optional[str] = None

    @model_validator(mode="after")
    def _check(self):
        required, optional = REQUIRED_INPUTS[self.command]
        if not required <= len(self.inputs) <= required + optional:
            raise UsageError(
                f"expects {required}{'-' + str(required + optional) if optional else ''} "
                f"input file(s), got {len(self.inputs)}",
                operation=self.command.value,
            )
        if self.p is not None and not self.p > 0:
            raise UsageError(f"--p must be positive, got {self.p}", operation=self.command.value)
        if self.iters is not None and self.iters < 1:
            raise UsageError(f"--iters must be at least 1, got {self.iters}", operation=self.command.value)
        if self.homotopy is not None and not self.homotopy > 0:
            raise UsageError(f"--homotopy must be positive, got {self.homotopy}", operation=self.command.value)
        if self.tol is not None and not self.tol >= 0:
            raise UsageError(f"--tol must be nonnegative, got {self.tol}", operation=self.command.value)
        if self.delta is not None and not self.delta > 0:
            raise UsageError(f"--delta must be positive, got {self.delta}", operation=self.command.value)
        return self


class CommandOutput(BaseModel):
    """Primary result plus metadata, as written by the CLI"""

    result: Any
    meta: Dict[str, Any] = {}


# --- JSON request bodies -----------------------------------------------------

ComplexLike = Union[float, Tuple[float, float]]


def complex_values(values: List[ComplexLike]) -> np.ndarray:
    """Convert [re, im] pairs and plain numbers to a complex vector"""
    out = np.empty(len(values), dtype=np.complex128)
    for i, v in enumerate(values):
        out[i] = complex(v[0], v[1]) if isinstance(v, (tuple, list)) else complex(v)
    return out


class PartitionRequest(BaseModel):
    n: int
    known_x_idx: List[int]
    known_y_idx: List[int]
    x_known: List[ComplexLike]
    y_known: List[ComplexLike]

    @model_validator(mode="after")
    def _lengths(self):
        if len(self.x_known) != len(self.known_x_idx) or len(self.y_known) != len(self.known_y_idx):
            raise ValueError("each value list must match its index list")
        return self


class SparseDftRequest(BaseModel):
    n: int
    sample_idx: List[int]
    support_idx: List[int]
    samples: List[ComplexLike]

    @model_validator(mode="after")
    def _lengths(self):
        if len(self.samples) != len(self.sample_idx):
            raise ValueError("samples must match sample_idx")
        return self


class SampleRecoverRequest(BaseModel):
    n: int
    sample_idx: List[int]
    band_idx: List[int]
    samples: List[ComplexLike]

    @model_validator(mode="after")
    def _lengths(self):
        if len(self.samples) != len(self.sample_idx):
            raise ValueError("samples must match sample_idx")
        return self
