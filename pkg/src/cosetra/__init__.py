"""Coset relation algebras built from group triples."""

__version__ = "0.1.0"
