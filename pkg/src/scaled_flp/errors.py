"""Exception types shared across the package."""


class DomainError(ValueError):
    """A position lies outside the unit interval."""


class ScalingError(ValueError):
    """A scaling function breaks a model invariant."""


class DiscontinuityError(ScalingError):
    pass


class NonPositiveError(ScalingError):
    pass


def check_position(y, name="position"):
    y = float(y)
    if not 0.0 <= y <= 1.0:
        raise DomainError(f"{name} {y!r} lies outside [0, 1]")
    return y
