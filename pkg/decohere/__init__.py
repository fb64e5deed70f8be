"""Vacuum-induced decoherence of a free charge: closed forms, oracle and CLI."""

__version__ = "0.1.0"
