"""Kernel selection: compiled lane when available, numpy lane otherwise.

Set FINCOV_PURE=1 to force the numpy lane (used by the benchmark and to test
both lanes against each other).
"""

import os

if os.environ.get("FINCOV_PURE"):
    from . import _kernels_py as impl
else:
    try:
        from . import _kernels_c as impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as impl

BACKEND = impl.BACKEND

first_composability_violation = impl.first_composability_violation
first_identity_violation = impl.first_identity_violation
first_assoc_violation = impl.first_assoc_violation
mono_epi_flags = impl.mono_epi_flags
lift_report = impl.lift_report
commuting_spans = impl.commuting_spans
span_verify = impl.span_verify
coequalizer_verify = impl.coequalizer_verify
