"""Physical constants used across the package.

CODATA 2018 values, hard-coded rather than imported so that results are
bit-reproducible regardless of the installed scipy version.  c and h are
exact by SI definition.
"""
from typing import Final

SPEED_OF_LIGHT: Final[float] = 299_792_458.0  # m/s, exact
PLANCK: Final[float] = 6.626_070_15e-34  # J*s, exact
VACUUM_PERMITTIVITY: Final[float] = 8.854_187_8128e-12  # F/m

# Relative permittivity of high-resistivity silicon, used when estimating
# substrate-guided modes.
SILICON_EPS_R: Final[float] = 11.45
