"""Exact computations with (a,b)-modules, frescos and themes."""
