"""Scheme-plan workbench: a DSL for railway scheme plans, derived control and
release tables, executable movement-authority semantics, safety verification,
and CASL specification emission."""

__version__ = "0.1.0"
