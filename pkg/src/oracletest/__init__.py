"""Black-box testing of oracle quantum programs on a statevector simulator."""

__version__ = "0.1.0"
