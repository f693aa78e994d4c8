"""Fine-tune a pretrained bidirectional encoder for pro/opp unit classification."""

__version__ = "0.1.0"
