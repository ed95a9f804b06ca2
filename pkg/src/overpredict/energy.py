"""Per-device energy: transmitting coefficients and running the solver."""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "EnergyModel",
    "EnergyReport",
    "ETHERNET",
    "WIFI",
    "PRESETS",
    "preset",
    "comm_energy",
    "compute_energy",
    "energy_report",
]

# 100 GFLOP/s per watt
DEFAULT_FLOPS_PER_JOULE = 1e11


@dataclass(frozen=True)
class EnergyModel:
    """``eb`` in J/bit, ``bc`` bits per coefficient, ``flops_per_joule`` ops/J."""

    eb: float
    bc: int = 32
    flops_per_joule: float = DEFAULT_FLOPS_PER_JOULE

    def __post_init__(self):
        if not (self.eb > 0 and self.bc > 0 and self.flops_per_joule > 0):
            raise ValueError("energy model parameters must be positive")


@dataclass(frozen=True)
class EnergyReport:
    comm_joules: float
    compute_joules: float
    flop_count: int

    def to_dict(self) -> dict:
        return {
            "comm_joules": self.comm_joules,
            "comm_nanojoules": self.comm_joules * 1e9,
            "compute_joules": self.compute_joules,
            "flop_count": self.flop_count,
        }


ETHERNET = EnergyModel(eb=0.4279e-9)
WIFI = EnergyModel(eb=5.25e-9)
PRESETS = {"ethernet": ETHERNET, "wifi": WIFI}


def preset(name: str, bits: int = 32) -> EnergyModel:
    base = PRESETS[name.lower()]
    return EnergyModel(base.eb, bits, base.flops_per_joule)


def comm_energy(model: EnergyModel, L: int) -> float:
    """Joules to send the ``2L+1`` coefficients of one envelope."""
    if L < 0:
        raise ValueError("L must be nonnegative")
    return (2 * L + 1) * model.bc * model.eb


def compute_energy(model: EnergyModel, flop_count: int) -> float:
    if flop_count < 0:
        raise ValueError("flop_count must be nonnegative")
    return flop_count / model.flops_per_joule


def energy_report(model: EnergyModel, L: int, flop_count: int = 0) -> EnergyReport:
    return EnergyReport(comm_energy(model, L), compute_energy(model, flop_count), int(flop_count))
