"""Quantitative second-order model counting toolkit.

Evaluates quantitative sum sentences over finite relational structures,
reduces them to propositional counting (disjunction-of-2SAT and monotone
CNF), counts models exactly, and estimates counts of majority-promise
samplers by uniform sampling.
"""

from .approx import (
    CountingSampler,
    EstimateParams,
    MrCheck,
    check_mr,
    estimate_fraction,
    fpras_rp1,
    machine_from_fp,
    miller_rabin_sampler,
    miller_rabin_witness_count,
    rp_decide,
    sampler_from_d2s,
)
from .errors import (
    ApproxError,
    BudgetExceededError,
    EncodingError,
    EvalError,
    FormulaSyntaxError,
    FormulaValidationError,
    NormalizationError,
    PropFormatError,
    PropGuardError,
    QsoError,
    ReductionError,
    StructureSyntaxError,
    StructureValidationError,
)
from .evaluate import EvalBudget, fo_eval, pi2_count, qso_eval
from .formulas import (
    And,
    Atom,
    Base,
    Bottom,
    Const,
    Eq,
    Exists,
    FoPart,
    Forall,
    Implies,
    NormalTerm,
    Not,
    Or,
    Pi2Spec,
    Plus,
    QsoFormula,
    RhClause,
    RhPi1Formula,
    Sigma2TwoSatFormula,
    SoLiteral,
    SumFo,
    SumNormalForm,
    SumSo,
    Top,
    TwoSatClause,
    clause,
    lower_fo,
)
from .normalform import check_sentence, normal_form_to_qso, normalize_qso, rh_to_qso
from .parser import parse_formula
from .printing import print_fo, print_formula, print_pi2, print_qso, print_rh
from .propcount import (
    CountReport,
    Disj2SatFormula,
    MonotoneCnf,
    count_bruteforce,
    count_selfreduce,
    d2s,
    d2s_satisfiable,
    parse_d2s,
    parse_dimacs_monotone,
    restrict,
    sat2_satisfiable,
    serialize_d2s,
    serialize_dimacs,
)
from .reductions import (
    AtomTable,
    ProductResult,
    encode_d2s_as_qso,
    encode_monotone_as_pi2,
    encode_vc,
    reduce_pi2_to_monotone,
    reduce_qso_to_d2s,
)
from .structures import (
    FoAssignment,
    SoAssignment,
    Structure,
    Vocabulary,
    make_structure,
    parse_structure,
    serialize_structure,
)

__version__ = "0.1.0"
