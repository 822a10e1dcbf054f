"""semikernel: a desk-scale computer algebra kernel for semirings, semimodules,
semicorings and semicomodules.

All values are immutable after construction and every operation is pure, so
concurrent reads are safe everywhere; derived flags are computed eagerly.
"""

__version__ = "0.1.0"
