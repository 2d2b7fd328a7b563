"""Exception hierarchy shared by all accustripes modules."""


class AccuStripesError(Exception):
    """Base class for every error raised by this package."""


class SchemaError(AccuStripesError):
    """A CSV header or manifest is missing a required column or field."""


class EmptyInputError(AccuStripesError):
    """An operation that needs at least one sample received none."""


class OutOfBoundsError(AccuStripesError):
    """A record or sample lies outside the domain it must fall in."""


class InvalidParameterError(AccuStripesError):
    """A numeric parameter (bin count, bandwidth, p0, range) is out of range."""


class CompositionError(AccuStripesError):
    """A stripe composition is missing a required ingredient (e.g. a curve)."""


class LayoutError(AccuStripesError):
    """Scene layout has zero or negative drawable area."""


class ShapeSpecError(AccuStripesError):
    """A synthetic shape does not fit inside the requested volume."""


class UnknownLabelError(AccuStripesError):
    """A component label does not exist in the label volume."""
