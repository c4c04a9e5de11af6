"""Parallel solvers for first-order linear recurrences via prefix scans."""

from .signedlog import ONE, ZERO, SignedLog, from_real, sl_add, sl_mul, to_real
from .scan import (
    DEFAULT_ENGINE,
    ScanEngine,
    cumprod,
    cumsum,
    inclusive_scan,
    log_cum_sum_exp,
    signed_log_cum_sum_exp,
)
from .recurrence import (
    CANCELLATION_RTOL,
    FLAG_CANCELLATION_HEAVY,
    FLAG_OVERFLOW_SATURATED,
    IDENTITY_CARRY,
    Carry,
    CoefficientSeries,
    SolveMethod,
    SolveResult,
    UnsupportedInputError,
    chunk_carry,
    compose_carries,
    expand_element,
    solve,
    solve_chunked,
    solve_direct,
    solve_logspace,
    solve_pairscan,
    solve_sequential,
)
from .cli import (
    BenchRecord,
    SeriesFile,
    SeriesFileError,
    generate_series,
    read_series_file,
    run_benchmark,
    write_series_file,
)

__version__ = "0.1.0"

__all__ = [
    "SignedLog", "ZERO", "ONE", "from_real", "to_real", "sl_add", "sl_mul",
    "ScanEngine", "DEFAULT_ENGINE", "inclusive_scan", "cumsum", "cumprod",
    "log_cum_sum_exp", "signed_log_cum_sum_exp",
    "CoefficientSeries", "SolveResult", "SolveMethod", "Carry", "IDENTITY_CARRY",
    "UnsupportedInputError", "FLAG_OVERFLOW_SATURATED", "FLAG_CANCELLATION_HEAVY",
    "CANCELLATION_RTOL", "solve", "solve_sequential", "solve_direct",
    "solve_logspace", "solve_pairscan", "solve_chunked", "compose_carries",
    "chunk_carry", "expand_element",
    "SeriesFile", "SeriesFileError", "BenchRecord", "generate_series",
    "write_series_file", "read_series_file", "run_benchmark",
]
