"""Exception types shared across the pipeline.

Each class carries the process exit code the CLI maps it to.
"""


class GazelabError(Exception):
    exit_code = 1


class ValidationError(GazelabError, ValueError):
    """Bad arguments, configuration, or schema."""

    exit_code = 1


class FormatError(GazelabError, ValueError):
    """An input file could not be parsed."""

    exit_code = 2

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)


class NumericError(GazelabError, ArithmeticError):
    """Singular systems, diverging optimisers, non-finite values."""

    exit_code = 3
