"""seltrace: regularized Mellin/Plancherel calculus and trace-formula Laurent data.

Layered as: special functions -> charged meromorphic core -> multiplicative
torus calculus -> level-1 modular surface -> trace-formula assembly, with a
verification harness on top (`seltrace.suites`, CLI `seltrace`).
"""

__version__ = "0.1.0"
