from ._core import (
    bgw_threshold,
    min_agents,
    privacy_audit,
    simulate,
    struct_threshold,
    support_sets,
    threshold_closed_form,
    verify_scheme_file,
)

__all__ = [
    "bgw_threshold",
    "min_agents",
    "privacy_audit",
    "simulate",
    "struct_threshold",
    "support_sets",
    "threshold_closed_form",
    "verify_scheme_file",
]
