"""Out-of-time-order correlators and resonances of quantized torus maps."""

from ._core import (
    Channel,
    Kernel,
    LyapunovEstimate,
    LyapunovFit,
    MapSpec,
    Operator,
    OtocSeries,
    QuantumMap,
    ResonanceSpectrum,
    RunError,
    TailFit,
    __version__,
    analytic_cat_otoc,
    apply_dephasing,
    build_kernel,
    cat_lyapunov_exponent,
    cat_matrix_power,
    classical_step,
    dense_spectrum,
    dense_superoperator,
    ehrenfest_time,
    fit_lyapunov_from_otoc,
    fit_tail_rate,
    hermitian_f,
    jacobian,
    krylov_leading,
    leading_nontrivial,
    lyapunov,
    otoc_commutator,
    otoc_family_linear,
    otoc_series,
    quantize,
    random_traceless_hermitian,
    runner,
    sine_momentum,
    sine_position,
    translation,
)


def xp_otoc(spec, n, epsilon=0.0, t_max=20, kick_mode="correspondence"):
    """OTOC series for A = X (evolved) and B = P."""
    channel = Channel(quantize(spec, n, kick_mode), epsilon)
    return otoc_series(channel, sine_position(n), sine_momentum(n), t_max, "XP")


__all__ = [name for name in dir() if not name.startswith("_")]
