from .harness import (
    FULL,
    HIDDEN_GRID,
    EvaluationReport,
    RegimeResult,
    SweepPointError,
    SweepResult,
    SweepSpec,
    derive_seed,
    evaluate_point,
    run_full_series,
    run_regimes,
    select_best,
)
from .metrics import mape, rrmse
from .report import (
    BENCHMARKS,
    CSV_HEADER,
    BenchmarkRow,
    compare_benchmarks,
    format_benchmarks,
    read_reports_csv,
    reports_to_csv,
    reports_to_json,
    timings_to_json,
    write_reports_csv,
)
