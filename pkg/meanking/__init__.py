"""Maximally entangled line states over two prime-dimension qudits, and the
Mean King / Tracking-the-King protocols built on them."""

__version__ = "0.1.0"
