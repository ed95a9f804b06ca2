"""Over-predictive bandlimited envelopes for distributed signal analytics."""

from .analytics import (
    AnalyticsReport,
    SAErrors,
    SumEnvelope,
    aggregate,
    analyze_sum,
    sa_errors,
    table1_bound,
    theorem1_ratio,
)
from .energy import EnergyModel, EnergyReport, comm_energy, compute_energy, energy_report
from .envelope import (
    EnvelopeResult,
    Scheme,
    Side,
    c0_tail_bound,
    envelope,
    envelope_l1,
    envelope_l2,
    envelope_linf,
    envelope_linf_exact,
    envelope_lower,
    envelope_naive,
)
from .pipeline import DeviceSet, PipelineConfig, ingest_csv, run_pipeline, sweep
from .signal import (
    FourierCoeffs,
    SmoothSignalSpec,
    TimeSeries,
    analyze,
    generate_smooth,
    norms,
    project,
    synthesize,
)
from .solver import LeastDistanceQP, LinearProgram, SolveReport, solve_ldqp, solve_lp

__version__ = "0.1.0"
