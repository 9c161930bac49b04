"""Code construction and verification."""

from ursc.codes.cbp import (
    CheckReport,
    Inequality,
    Violation,
    cell_verdicts,
    check_cbp,
    check_collision_weight_inequality,
    check_weight_inequality,
    collision_threshold,
)
from ursc.codes.construct import (
    Construction,
    IterationsExhausted,
    construct_ursc,
    construct_ursc_with_length,
)
from ursc.codes.matrix import (
    CodeMatrix,
    FormatError,
    dumps,
    loads,
    read_code,
    sample_matrix,
    write_code,
)
from ursc.codes.oracle import (
    BudgetExceeded,
    ClassicWitness,
    UrscWitness,
    verify_classic,
    verify_ursc_bruteforce,
)
from ursc.codes.params import (
    ConstructionParams,
    ElongationPair,
    NoSupportedK,
    bit_probability,
    elongation_bounds,
    max_supported_k,
    parse_rational,
)
from ursc.codes.stats import SegmentStats, empirical_segment_stats
