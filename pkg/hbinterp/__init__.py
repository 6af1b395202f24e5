"""
hbinterp - interpolating sequences for de Branges-Rovnyak spaces.

Numerical toolkit and batch CLI for H(b) spaces with rational non-extreme
b: Pythagorean mates, decompositions and local Dirichlet energies,
Carleson and boundary sum conditions, Nevanlinna-Pick solutions and
Steinhaus random sequences.
"""

__version__ = "0.1.0"
__license__ = "MIT"

from hbinterp.core.config import HbConfig
from hbinterp.core.runner import JobConfig, JobRunner

__all__ = ["HbConfig", "JobConfig", "JobRunner"]
