"""Berge-F-free hypergraphs: containment, shadow embeddings, constructions and bounds."""

__version__ = "0.1.0"
