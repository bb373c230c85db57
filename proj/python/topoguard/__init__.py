from ._core import (  # noqa: F401
    algebra_check,
    array_gap,
    chain_modes,
    decoherence_rate,
    gap,
    measure,
    ms_verify,
    noise_splitting,
    prepare,
    run_cli,
    set_max_threads,
    spectrum,
)
