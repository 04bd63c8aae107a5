"""Frame admissibility and synthesis for (frame operator, norm sequence) pairs.

Given a positive operator ``S`` and a sequence of squared norms ``c``, decide
whether some frame has frame operator ``S`` and ``||f_k||^2 = c_k``, and build
one when the answer is constructive.
"""

from .errors import (
    DimensionMismatch,
    FrameAdmitError,
    HorizonExceeded,
    InvalidSpec,
    KMismatch,
    NotAdmissible,
    NotMajorized,
    NotPositiveDefinite,
    NotSummable,
    NumericalFailure,
    SufficiencyFailed,
    TruncationInadmissible,
    UnknownExample,
)
from .sequences import (
    ConstantTail,
    Estimate,
    GeneratorTail,
    SequenceModel,
    TailMeta,
    ell1_orbit_closure_member,
    l_k_seq,
    majorizes,
    minus_part,
    plus_part,
    sort_desc,
    u_k_seq,
)
from .operators import (
    DiagonalOperator,
    FiniteHermitian,
    SpectralSummary,
    closure_membership,
    eigenvalues_desc,
    embed_extended,
    l_k_op,
    spectral_summary,
    u_k_op,
)
from .schur_horn import construct_diagonal_unitary, replay_chain, t_transform_chain
from .frames import (
    Frame,
    FrameBounds,
    VerificationReport,
    excess,
    frame_bounds,
    frame_operator,
    is_frame,
    is_parseval,
    is_tight,
    norms_squared,
    verify_pair,
)
from .admissibility import (
    ADMISSIBLE,
    NOT_ADMISSIBLE,
    UNDETERMINED,
    AdmissibilityVerdict,
    ConditionReport,
    Evidence,
    check_finite_finite,
    check_finite_infinite,
    check_necessary,
    check_sufficient,
    classify,
    excess_forced_infinite,
    tight_admissible,
)
from .synthesis import (
    GreedyResult,
    HeadDecomposition,
    greedy_extend,
    head_decompose,
    synthesize_finite,
    synthesize_truncated_summable,
)

__version__ = "0.1.0"
