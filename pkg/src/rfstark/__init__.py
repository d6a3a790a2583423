"""Simulation toolkit for a coupled two-level system in a static-plus-RF field.

Subpackages by capability:

* ``core`` — drive/Stark-model types, unit conventions, named parameter sets
* ``besselx`` — regular and generalized Bessel functions, two routes each
* ``floquet`` — sideband spectra, resonance conditions, coupling maps
* ``classical`` — classical-limit field and energy densities
* ``lzs`` — transfer-matrix propagation and interference factors
* ``timedomain`` — direct RK4 integration of the coupled amplitudes
* ``ensemble`` — seeded Monte-Carlo atom-pair simulations
* ``cli`` — CSV-emitting command-line front end (``rfstark`` entry point)
"""

__version__ = "0.1.0"
