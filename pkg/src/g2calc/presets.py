"""Registry of named structures: ``phi0``, ``star_phi0``, ``cst``, ``symplectic_std:n``."""

from .g2 import G2Structure, preset_cst, preset_phi0, preset_star_phi0
from .symplectic import SymplecticStructure, preset_omega_std

NAMES = ("phi0", "star_phi0", "cst", "symplectic_std:n")


def get_preset(name):
    """Resolve a preset name to a G2Structure, SymplecticStructure or DifferentialForm."""
    if name == "phi0":
        return preset_phi0()
    if name == "star_phi0":
        return preset_star_phi0()
    if name == "cst":
        return preset_cst()
    if name.startswith("symplectic_std:"):
        _, _, n = name.partition(":")
        if not n.isdigit() or int(n) < 1:
            raise KeyError(f"bad symplectic preset {name!r}; use symplectic_std:n with n >= 1")
        return preset_omega_std(int(n))
    raise KeyError(f"unknown preset {name!r}; known: {', '.join(NAMES)}")


def preset_form(name):
    """The distinguished differential form of a preset."""
    obj = get_preset(name)
    if isinstance(obj, G2Structure):
        return obj.phi
    if isinstance(obj, SymplecticStructure):
        return obj.omega
    return obj


def preset_dim(name):
    return preset_form(name).dim
