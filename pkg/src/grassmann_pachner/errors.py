"""Exception types shared across the package."""


class DegenerateError(ValueError):
    """Input is not in general position for the requested computation."""


class RegistryMismatchError(ValueError):
    """Operands live over different generator registries."""


class TriangulationError(ValueError):
    """Malformed or inconsistent simplicial complex."""


class MoveError(ValueError):
    """A bistellar move pattern is absent at the requested location."""


class NotASquareError(ArithmeticError):
    """An exact square root does not exist in the Gaussian rationals."""


class ComponentError(ArithmeticError):
    """An isotropic space lies in the wrong connected component for the requested weights."""
