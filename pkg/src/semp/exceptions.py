# -*- coding: utf-8 -*-


class SempError(Exception):
    """
    Catchall base class for everything raised by semp
    """

    pass


class InvalidProgram(SempError):
    """
    The program text could not be turned into a resolved SourceProgram.
    `diagnostic` is a :class:`semp.diagnostics.Diagnostic` with a span.
    """

    def __init__(self, diagnostic):
        self.diagnostic = diagnostic
        SempError.__init__(self, diagnostic.message)


class InvalidProgram_Lexical(InvalidProgram):
    """
    An illegal character was found while lexing.
    """

    pass


class InvalidProgram_Syntax(InvalidProgram):
    """
    The token stream does not match the grammar.
    `expected` is the set of token names the parser would have accepted.
    """

    def __init__(self, diagnostic, expected=None):
        InvalidProgram.__init__(self, diagnostic)
        self.expected = frozenset(expected or ())


class InvalidProgram_TypeResolution(InvalidProgram):
    """
    A type alias or a `Dual` could not be resolved:
    unknown type name, Dual of a non-session type, non-contractive recursion.
    """

    pass


class TypeCheckFailure(SempError):
    """
    Raised by the algorithmic checker on the first failing rule.
    """

    def __init__(self, diagnostic):
        self.diagnostic = diagnostic
        SempError.__init__(self, diagnostic.message)

    @property
    def code(self):
        return self.diagnostic.code


class IllFormedType(SempError):
    """
    A contextual type violates the level discipline, or a type is not
    contractive / not closed.
    """

    pass


class UnsupportedDuality(SempError):
    """
    `dualize` only supports recursion variables in continuation position.
    """

    pass


class UnknownConstant(SempError):
    pass


class OracleScaleExceeded(SempError):
    """
    The declarative oracle refuses inputs with too many linear bindings.
    """

    pass


class RuntimeFault(SempError):
    """
    The evaluator or the runtime reached a state that typed programs never
    reach.
    """

    pass


class RuntimeFault_Stuck(RuntimeFault):
    """
    A closed term is neither a value, a redex, nor a channel request.
    """

    pass


class RuntimeFault_Linearity(RuntimeFault):
    """
    An endpoint occurs in more than one thread, or belongs to no channel.
    """

    pass


class RuntimeFault_Communication(RuntimeFault):
    """
    The two endpoints of one channel are both subjects of requests that do
    not form a redex, e.g. close against close.
    """

    pass
