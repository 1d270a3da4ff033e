"""Heralded multipartite entanglement transfer: simulator and closed forms.

The compiled core exposes the closed-form expressions for the heralding
probability and the entanglement of the post-selected state, a propagator for
the ladder-register model behind them, and the sweep drivers that produce the
reference tables.  Everything here re-exports from ``heraldsim._core``.
"""

from ._core import (
    HeraldResult,
    IntegratorSpec,
    LocalAmplitudes,
    MismatchKind,
    Model,
    OptimizationResult,
    ScanOptions,
    StepMethod,
    SweepTable,
    SystemConfig,
    __version__,
    alpha_weights,
    beyond_rwa_comparison,
    bloch_siegert_delta_eff,
    conditional_pair_negativities,
    fidelity_perturbed,
    g_optimal,
    gaussian_width_scan,
    herald_after_pulse,
    linspace,
    local_amplitudes,
    logspace,
    mismatch_scan,
    normalized_pathway_weights,
    optimize_pulse_area,
    p_heralding,
    p_max,
    p_max_asymptotic,
    pair_negativity_weighted,
    pairwise_negativity_wn,
    pairwise_pt_eigenvalues,
    resonant_full_config,
    run_checks,
    run_manifest,
    sweep_detuning,
    sweep_pulse_area,
    symmetric_rwa_config,
    time_resolved_trace,
    w_state_fidelity,
    weighted_resource_scan,
    weighted_state_fidelity,
)

__all__ = [
    "HeraldResult",
    "IntegratorSpec",
    "LocalAmplitudes",
    "MismatchKind",
    "Model",
    "OptimizationResult",
    "ScanOptions",
    "StepMethod",
    "SweepTable",
    "SystemConfig",
    "__version__",
    "alpha_weights",
    "beyond_rwa_comparison",
    "bloch_siegert_delta_eff",
    "conditional_pair_negativities",
    "fidelity_perturbed",
    "g_optimal",
    "gaussian_width_scan",
    "herald_after_pulse",
    "linspace",
    "local_amplitudes",
    "logspace",
    "mismatch_scan",
    "normalized_pathway_weights",
    "optimize_pulse_area",
    "p_heralding",
    "p_max",
    "p_max_asymptotic",
    "pair_negativity_weighted",
    "pairwise_negativity_wn",
    "pairwise_pt_eigenvalues",
    "resonant_full_config",
    "run_checks",
    "run_manifest",
    "sweep_detuning",
    "sweep_pulse_area",
    "symmetric_rwa_config",
    "time_resolved_trace",
    "w_state_fidelity",
    "weighted_resource_scan",
    "weighted_state_fidelity",
]
