"""Propositional deduction in the free idempotent-complement semiring.

Formulas compile to sets of minterm indices; a finite theory entails a
goal iff the intersection of its sets is contained in the goal's set.
"""

from .deduction import (
    AtomStatus,
    EntailmentReport,
    ForcedAtoms,
    Theory,
    conjoin,
    consequences,
    entails,
    forced_atoms,
    implication,
    is_tautology,
)
from .formula import (
    And,
    Atom,
    Bottom,
    Formula,
    FormulaSyntaxError,
    Implies,
    Neg,
    Or,
    Top,
    desugar,
    max_atom,
    parse,
    render,
)
from .minterm import (
    AtomCapError,
    LeveledElement,
    MintermSet,
    atom_set,
    canonicalize,
    compile_formula,
    complement,
    embed,
    equals,
    join,
    meet,
    permute_minterms,
)

__all__ = [
    "And", "Atom", "AtomCapError", "AtomStatus", "Bottom", "EntailmentReport", "ForcedAtoms",
    "Formula", "FormulaSyntaxError", "Implies", "LeveledElement", "MintermSet", "Neg", "Or",
    "Theory", "Top", "atom_set", "canonicalize", "compile_formula", "complement", "conjoin",
    "consequences", "desugar", "embed", "entails", "equals", "forced_atoms", "implication",
    "is_tautology", "join", "max_atom", "meet", "parse", "permute_minterms", "render",
]
