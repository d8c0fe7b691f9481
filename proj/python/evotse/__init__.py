"""Evolving target-speaker-enrollment engine (simulation core)."""

try:
    from ._evotse import (  # noqa: F401
        EvotseError,
        cosine_sim,
        normalize,
        nsr,
        relevance_distribution,
        run,
        run_csv,
        si_sdr,
        si_sdri,
        si_sdric,
    )
except ImportError:
    # In-tree builds leave the extension next to the package instead of
    # inside it.
    from _evotse import (  # noqa: F401
        EvotseError,
        cosine_sim,
        normalize,
        nsr,
        relevance_distribution,
        run,
        run_csv,
        si_sdr,
        si_sdri,
        si_sdric,
    )

__all__ = [
    "EvotseError",
    "cosine_sim",
    "normalize",
    "nsr",
    "relevance_distribution",
    "run",
    "run_csv",
    "si_sdr",
    "si_sdri",
    "si_sdric",
]
