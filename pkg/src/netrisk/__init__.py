"""netrisk: attack-plan based network risk assessment and patch prioritization."""

__version__ = "0.1.0"
