"""Hyperquadratic continued fractions over finite fields and automaticity of their
leading-coefficient sequences."""

__version__ = "0.1.0"
