"""Higher-order vertical and complete lifts of time-dependent complex
Hamiltonian systems on extended complex product manifolds."""

__version__ = "0.1.0"
