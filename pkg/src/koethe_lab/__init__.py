"""Decision procedures and finite-dimensional experiments for Köthe matrices."""

from .verdict import Certificate, State, Verdict, Witness, conjunction

__version__ = "0.1.0"

__all__ = ["Certificate", "State", "Verdict", "Witness", "conjunction", "__version__"]
