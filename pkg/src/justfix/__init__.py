"""Proof workbench for justification, modal, and timed epistemic logics
with explicit fixed-point operators."""

__version__ = "0.1.0"
