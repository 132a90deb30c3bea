"""Exception taxonomy shared across the engine."""


class EngineError(Exception):
    """Base class for all dpforge errors."""


class ParseError(EngineError):
    """Malformed input text (scalars, spec files, polynomial expressions)."""


class ValidationError(EngineError):
    """Structurally parseable input violating a load-time invariant."""

    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class DimensionMismatch(EngineError):
    """Vector or matrix shape incompatible with the target space."""


class WeightMismatch(EngineError):
    """Operands carry different weights (lambda values)."""


class VariantMismatch(EngineError):
    """Operands mix the weighted and modified differential conventions."""


class QuotientNotContained(EngineError):
    """quotient_basis called with a subspace not contained in the ambient one."""


class NotAnIdeal(EngineError):
    """Quotient requested by a subspace failing one of the stability conditions."""


class MorphismInvalid(EngineError):
    """Morphism fails the homomorphism checks required by the construction."""


class NotWellDefined(EngineError):
    """Cohomology stability condition violated; carries the failing condition."""

    def __init__(self, message, condition=None, witness=None):
        super().__init__(message)
        self.condition = condition
        self.witness = witness


class NotASubmodule(EngineError):
    """Candidate subspace is not stable under the module operations."""


class NotAModuleMorphism(EngineError):
    """Matrix fails to intertwine action, bracket action, or differential."""


class DegreeTooSmall(EngineError):
    """Truncation degree below the minimum required by the operation."""


class DegreeOverflow(EngineError):
    """Operand degree exceeds the truncation bound."""


class PTripleInvalid(EngineError):
    """Target algebra or map shapes unusable for the universal construction."""


class RelationNotKilled(EngineError):
    """A defining relation has a nonzero image under a candidate homomorphism."""

    def __init__(self, relation, image_text):
        super().__init__(f"relation {relation} maps to nonzero element {image_text}")
        self.relation = relation
        self.image_text = image_text
