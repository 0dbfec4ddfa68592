"""Pattern matching with sequence variables and associative/commutative symbols.

One-to-one matching lives in :mod:`acmatch.one_to_one`, many-to-one matching
with discrimination nets in :mod:`acmatch.vsdn` and
:mod:`acmatch.discrimination`.  The scikit-learn wrapper is
:class:`acmatch.estimator.PatternMatcher`.
"""
from .bipartite import BipartiteGraph, BipartiteMatchGraph, enumerate_maximum_matchings, hopcroft_karp, is_canonical
from .combinatorics import (
    SequenceEquationSystem,
    cached_diophantine,
    solve_linear_diophantine_nonneg,
    solve_sequence_equations,
    weak_compositions,
)
from .discrimination import (
    ADN,
    MLDN,
    ManyToOneMatcher,
    adn_add_pattern,
    adn_match,
    many_to_one_match,
    mldn_add_pattern,
    mldn_match,
)
from .exceptions import *  # noqa: F401,F403
from .flatterm import END_MARK, FlatTerm, flatterm
from .multiset import Multiset
from .one_to_one import match_commutative, match_one_to_one, match_root, match_sequence, syntactic_match
from .parsing import ProblemFile, dump_problem, parse_pattern, parse_problem, parse_term
from .patterns import Guard, HasProperties, NotEqual, Pattern, rename_variables_canonical
from .substitution import Substitution, apply, compatible, union, value_equal
from .terms import (
    END,
    Compound,
    Constant,
    FunctionSymbol,
    SymbolTable,
    Term,
    Variable,
    VariableClass,
    canonicalize,
    compare,
    next_position,
    positions,
    skip_position,
    subterm_at,
)
from .vsdn import OMEGA, VSDN, vsdn_build, vsdn_match

__version__ = "0.1.0"
