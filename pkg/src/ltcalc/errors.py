"""Exception hierarchy for the operator-calculus engine.

Every failure mode that a caller can provoke gets its own class so that
verification suites can assert on the exact reason.
"""


class LTCalcError(Exception):
    """Base class for all engine errors."""


# ---- field construction / scalar arithmetic ----

class EvenPrimeUnsupported(LTCalcError):
    """p = 2 is excluded; construction refuses rather than miscomputing."""


class NonEisenstein(LTCalcError):
    """Defining polynomial fails the Eisenstein criterion."""


class DegenerateSpec(LTCalcError):
    """Field specification is malformed (bad degree, reducible poly, ...)."""


class NonUnitInverse(LTCalcError):
    """Inversion of a scalar that is not invertible at its precision."""


class PrecisionExhausted(LTCalcError):
    """An operation would return a value with no significant digits left."""


class ZeroResidue(LTCalcError):
    """Teichmuller lift of the zero residue class."""


# ---- Laurent series ----

class FieldMismatch(LTCalcError):
    """Operands live over different field contexts."""


class IllegalCompositionPoint(LTCalcError):
    """compose(f, g) with g(0) != 0, or principal part with no g inverse."""


class NonUnitLeading(LTCalcError):
    """Series inversion with an indeterminate leading coefficient."""


class ResidueObstruction(LTCalcError):
    """Integration of a series with a nonzero Z^-1 coefficient."""


# ---- formal group ----

class FrobeniusInvariantViolated(LTCalcError):
    """[pi](Z) fails pi*Z mod deg 2 or Z^q mod pi."""


class NonUnitLinearSolve(LTCalcError):
    """Inductive group-law solve hit a non-invertible pivot (corrupt input)."""


# ---- operator context ----

class SingularCompanion(LTCalcError):
    """Constant term of the distinguished polynomial is not unit * W."""


class NotDescended(LTCalcError):
    """A trace value failed to land in the base coefficient ring."""


class NonUnitArgument(LTCalcError):
    """Norm operator applied outside unit * Z^k series."""


class NonUnitGamma(LTCalcError):
    """Gamma action with a non-unit scalar."""


class PrincipalPartUnknown(LTCalcError):
    """Residue requested but the Z^-1 coefficient is not determined."""


class NotInPhiImage(LTCalcError):
    """Substitution-inversion found no preimage under phi."""


# ---- Mellin layer ----

class ModelRequiresPeriod(LTCalcError):
    """Operation needs the multiplicative model (period 1)."""


class PrincipalPartAtZero(LTCalcError):
    """Evaluation at Z = 0 of a series with a pole."""


class NotPsiOne(LTCalcError):
    """Argument is not fixed by psi."""


class NotPsiZero(LTCalcError):
    """Argument is not killed by psi."""


# ---- explicit elements ----

class DescentFailed(LTCalcError):
    """Level-n descent data could not be extracted."""


class SeriesInOperatorDiverged(LTCalcError):
    """Operator series in nabla fails its convergence ledger."""


class IdentityViolation(LTCalcError):
    """A verified identity failed; carries the offending witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# ---- Coleman ----

class NoConvergence(LTCalcError):
    """Norm-operator iteration failed to contract."""


class CompositeClosedFormMismatch(LTCalcError):
    """Regulator composite and closed form disagree."""


class PoleAtZero(LTCalcError):
    """Regulator input has a pole at zero; pass the regular part."""


class DegenerateFactor(LTCalcError):
    """Interpolation factor 1 - pi^r/q vanishes."""


# ---- Koszul ----

class NonCommutingAction(LTCalcError):
    """Supplied automorphisms do not commute."""


class SignViolation(LTCalcError):
    """Self-duality square failed; carries the offending indices."""


class NotChainMap(LTCalcError):
    """Mapping fibre of a non-chain-map."""


# ---- CLI ----

class ConfigError(LTCalcError):
    """Invalid run configuration."""
