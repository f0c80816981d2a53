"""Milnor-Witt K-theory of fields, by generators and relations.

Exact arithmetic in finite fields and characteristic-2 rational function
fields; symmetric inner product spaces with Witt decomposition; canonical
decision procedures for the Grothendieck-Witt and Witt rings and the powers
of the fundamental ideal; Milnor symbols with the Kato route for mod-2
decisions; and an expression engine with degreewise canonical forms.
"""

from .common import (
    FieldMismatchError,
    InhomogeneousError,
    MembershipError,
    ParseError,
    Verdict,
)
from .fields import FieldSpec, make_field, parse_diagonal, parse_element
from .forms import (
    DiagonalForm,
    GramMatrix,
    WittDecomposition,
    combine,
    diagonalize,
    hyperbolic_gram,
    is_isotropic,
    pfister,
    pfister_pure,
    represents,
    witt_decompose,
)
from .galois import GaloisField, GFElement
from .ratfunc import FrobeniusCoords, RationalFunctionField, RFElement
from .wittring import (
    ChainStep,
    GWCanonical,
    GWElement,
    IFiltClass,
    WittClass,
    chain_equiv_search,
    gw_canonical,
    gw_equal,
    in_ideal_power,
    pfister_decompose,
    s_n,
    witt_class,
    witt_equal,
    witt_is_zero,
)
from .milnor import (
    JElement,
    MilnorSymbolSum,
    eta_act,
    j_add,
    j_equal,
    j_make,
    j_mul,
    kato_equal,
    milnor_equal,
    milnor_normalize,
)
from .expressions import (
    CanonicalKMW,
    GradedIClass,
    LaurentWitt,
    MWExpr,
    MWMonomialSum,
    angle,
    bracket,
    epsilon,
    flatten,
    homogeneous_expand,
    hyperbolic,
    kmw_compare,
    kmw_equal,
    kw_equal,
    localize_eta,
    monomial_expand,
    n_epsilon,
    normalize,
    parse,
    phi_neg,
    print_expr,
    theta,
)

__version__ = "0.1.0"
