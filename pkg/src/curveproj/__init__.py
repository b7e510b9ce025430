"""Detect whether one rational space curve projects onto a planar one."""
__version__ = "0.1.0"
