class XSLTEvoError(Exception):
    """Base class for errors raised by this package."""


class XMLParseError(XSLTEvoError):
    def __init__(self, message, line, column, source="<string>"):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(f"{source}:{line}:{column}: {message}")


class XPathSyntaxError(XSLTEvoError, ValueError):
    pass


class StylesheetError(XSLTEvoError):
    """A stylesheet uses constructs outside the supported subset."""


class TransformOverflow(XSLTEvoError):
    """Recursion or output size exceeded the transform limits."""


class ConfigError(XSLTEvoError, ValueError):
    pass
