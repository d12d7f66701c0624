"""Blowup algebras of graded ideals: Rees algebra, fiber cone, associated graded ring."""
__version__ = "0.1.0"
