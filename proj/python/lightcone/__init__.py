"""Light-like points and zero mean curvature graphs in Lorentzian space."""

import json

from ._lightcone import (
    DegenerateMetric,
    DomainError,
    LightconeError,
    NotLightLike,
    ReGraphFailure,
    SingularC,
    Surface,
    SyntaxError,
    WrongSignature,
    describe,
    geodesic,
    jet,
    run,
)

__all__ = [
    "DegenerateMetric",
    "DomainError",
    "LightconeError",
    "NotLightLike",
    "ReGraphFailure",
    "SingularC",
    "Surface",
    "SyntaxError",
    "WrongSignature",
    "describe",
    "geodesic",
    "jet",
    "run",
    "verify",
    "residual_scan",
]


def verify(surface, t0=-1.0, t1=1.0, steps=1000, seed=None):
    """Theorem report for `surface` as a dict (same layout as verify.json)."""
    kwargs = {"t0": t0, "t1": t1, "steps": steps}
    if seed is not None:
        kwargs["seed"] = seed
    return json.loads(surface.verify(**kwargs))


def residual_scan(surface, nodes=21):
    """|A - phi B| scan over the surface domain as a dict (residual.json layout)."""
    return json.loads(surface.residual_scan(nodes))
