from __future__ import annotations

from dataclasses import dataclass, fields, replace

from .errors import ValidationError


@dataclass(frozen=True)
class ModelParams:
    """Model constants.

    ``alpha`` weights the isolation payoff against neighbours, ``delta`` is the
    firms' discount factor. Costs are per unit of seeded consumption (``c_s``)
    and per unit of quality improvement (``c_q``).
    """

    alpha: float = 0.5
    delta: float = 0.5
    q_a: float = 1.0
    q_b: float = 1.0
    c_s: float = 1.0
    c_q: float = 1.0
    K_a: float = 0.0
    K_b: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, float(getattr(self, f.name)))
        if not 0.5 <= self.alpha <= 1.0:
            raise ValidationError(f"alpha must lie in [1/2, 1], got {self.alpha}")
        if not 0.0 <= self.delta < 1.0:
            raise ValidationError(f"delta must lie in [0, 1), got {self.delta}")
        for name in ("q_a", "q_b", "c_s", "c_q"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("K_a", "K_b"):
            if not getattr(self, name) >= 0:
                raise ValidationError(f"{name} must be nonnegative, got {getattr(self, name)}")

    @property
    def spread(self) -> float:
        """Per-step network weight (1 - alpha) / (2 alpha); row sum of W."""
        return (1.0 - self.alpha) / (2.0 * self.alpha)

    def budget(self, firm: str) -> float:
        return self.K_a if _firm(firm) == "a" else self.K_b

    def with_(self, **changes) -> ModelParams:
        return replace(self, **changes)


EXAMPLE1 = ModelParams(alpha=0.5, delta=0.5, q_a=1.0, q_b=1.0, c_s=1.0, c_q=1.0)


def _firm(firm: str) -> str:
    if firm not in ("a", "b"):
        raise ValidationError(f"firm must be 'a' or 'b', got {firm!r}")
    return firm
