class SchreierLabError(Exception):
    pass


class OrdinalSyntaxError(SchreierLabError, ValueError):
    """Malformed Cantor-normal-form text; ``position`` is a 0-based offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class SpaceSyntaxError(SchreierLabError, ValueError):
    pass


class ContractError(SchreierLabError, ValueError):
    """An operation was called outside its precondition."""


class ConfigError(SchreierLabError, ValueError):
    pass


class CapacityError(SchreierLabError):
    """An enumeration would exceed the configured bound."""
