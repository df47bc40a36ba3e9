"""Exception types shared across the package."""


class BasisMismatchError(ValueError):
    """Arithmetic attempted between operators tagged with different bases."""


class FrequencyCollisionError(ValueError):
    """Two distinct transition channels share the same combined frequency."""


class DegenerateStateError(ValueError):
    """A generator admits more than one stationary state."""
