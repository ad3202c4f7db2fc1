"""Efficiency of a Stirling cycle whose working medium is a qubit pair coupled to one boson mode."""
from .errors import (ConvergenceError, CriticalPointError, DegenerateCycleError, DomainError,
                     NotAnEngineError, RabiStirlingError, SizeError)
from .medium import (EffectiveSpectrum, MediumParams, Phase, effective_coupling, effective_spectrum,
                     lambda_for_g)
from .thermo import (SpectrumThermo, ThermoPoint, heat_capacity_C, isochoric_entropy_integral,
                     isochoric_heat_integral, spectrum_thermo, thermo_point)
from .cycle import (CycleResult, StirlingSpec, asymptotic_efficiency, carnot_efficiency,
                    run_cycle)

__version__ = "0.1.0"
