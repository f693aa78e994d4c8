"""Corpus toolkit and experiment harness for pro/opp argument unit classification."""

__version__ = "0.1.0"
