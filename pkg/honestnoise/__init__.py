"""
honestnoise: honest Pauli and mixed-Clifford approximations of quantum channels
"""
__version__ = "1.0.0"
