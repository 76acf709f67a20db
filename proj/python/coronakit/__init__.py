"""Python bindings for the corona problem toolkit."""

from ._coronakit import CoronaError, carleson, certify_min_modulus, run_cli, solve, verify

__all__ = ["CoronaError", "carleson", "certify_min_modulus", "run_cli", "solve", "verify"]
