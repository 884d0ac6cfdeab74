"""Scenario-oriented dataset metadata tooling.

Catalog types and parsing live in ``model``/``documents``, variable
translation in ``translator``, connectivity maps in ``keygraph``/
``layout``/``exporters``, concept wrapping in ``coevolution``, reports in
``analytics``, and the live session service under ``service``.
"""

__version__ = "0.1.0"
