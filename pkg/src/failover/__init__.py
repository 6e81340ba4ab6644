"""Static local fast-failover routing: patterns, verification, attacks and topology classification."""

__version__ = "0.1.0"
