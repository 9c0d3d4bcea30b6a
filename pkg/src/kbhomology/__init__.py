"""Framed-link homology and classical Khovanov homology over the integers.

The submodules are meant to be imported directly, e.g.
``from kbhomology.framedcube import framed_homology``.
"""

__version__ = "0.1.0"
