"""Toolkit exceptions. Each carries a stable machine-readable code."""


class ToolkitError(Exception):
    code = "toolkit-error"

    def __init__(self, message=""):
        super().__init__(message or self.code)


class EmptyRegionError(ToolkitError):
    code = "empty-region"


class GridMismatchError(ToolkitError):
    code = "grid-mismatch"


class NonFiniteError(ToolkitError):
    """Raised when a plane-model evaluation would need the value of an
    unbounded set whose complement is also unbounded, or an infinite total."""

    code = "non-finite"


class UnsupportedShapeError(ToolkitError):
    code = "unsupported-shape"


class NonFiniteMeasureError(ToolkitError):
    code = "non-finite-measure"


class RequiresTopologicalError(ToolkitError):
    code = "requires-topological"


class NotMonotoneError(ToolkitError):
    code = "not-monotone-input"


class NonnegativeRequiredError(ToolkitError):
    code = "nonnegative-required"


class AmbiguousCoverError(ToolkitError):
    code = "ambiguous-cover"


class InvalidParamsError(ToolkitError):
    code = "invalid-params"


class NotConvexError(ToolkitError):
    code = "not-convex"


class CriteriaDisagreeError(ToolkitError):
    code = "criteria-disagree"


class BadRegionFileError(ToolkitError):
    code = "bad-region-file"


class BadConfigError(ToolkitError):
    code = "bad-config"


class FrameSupportError(ToolkitError):
    """Plane-model sampled functions must vanish on the window frame ring."""

    code = "frame-support"
