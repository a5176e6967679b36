"""Exception hierarchy shared by every module.

Each class carries a short ``category`` string; the CLI prints it so callers
can branch on the failure kind without parsing prose.
"""


class RCCError(ValueError):
    category = "Error"
    line = None


class SelfLoop(RCCError):
    category = "SelfLoop"

    def __init__(self, u):
        super().__init__(f"self-loop on vertex {u}")
        self.u = u


class DuplicateEdge(RCCError):
    category = "DuplicateEdge"

    def __init__(self, u, v):
        super().__init__(f"duplicate edge {{{u}, {v}}}")
        self.u, self.v = u, v


class VertexOutOfRange(RCCError):
    category = "VertexOutOfRange"

    def __init__(self, u, n):
        super().__init__(f"vertex {u} out of range for n={n}")
        self.u, self.n = u, n


class DimensionMismatch(RCCError):
    category = "DimensionMismatch"


class MaskViolation(RCCError):
    category = "MaskViolation"

    def __init__(self, violations):
        violations = list(violations)
        shown = ", ".join(f"{{{u}, {v}}}" for u, v in violations[:5])
        more = f" (+{len(violations) - 5} more)" if len(violations) > 5 else ""
        super().__init__(f"{len(violations)} edge(s) on capacity-0 pairs: {shown}{more}")
        self.violations = violations


class InvalidParams(RCCError):
    category = "InvalidParams"


class SizeLimit(RCCError):
    category = "SizeLimit"


class ParseError(RCCError):
    category = "ParseError"

    def __init__(self, message, line=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


def at_line(exc: RCCError, line: int) -> RCCError:
    """Attach a 1-based input line number to ``exc``."""
    exc.line = line
    exc.args = (f"line {line}: {exc.args[0]}",) + exc.args[1:]
    return exc
