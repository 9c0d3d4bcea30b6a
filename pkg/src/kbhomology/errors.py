"""Exception hierarchy. Parse errors map to CLI exit code 2."""


class KBHError(Exception):
    """Base class for all library errors."""


class PDError(KBHError, ValueError):
    """Malformed diagram input."""


class EmptyInput(PDError):
    pass


class BadArity(PDError):
    pass


class DuplicateEdgeUse(PDError):
    pass


class LetterOutOfRange(PDError):
    pass


class UnknownName(KBHError, KeyError):
    pass


class IllegalSite(KBHError, ValueError):
    pass


class IndexOutOfRange(KBHError, IndexError):
    pass


class EmptyDiagram(KBHError, ValueError):
    pass


class ShapeMismatch(KBHError, ValueError):
    pass


class CompositeNotZero(KBHError, ArithmeticError):
    pass


class NotAComplex(KBHError, ArithmeticError):
    pass
