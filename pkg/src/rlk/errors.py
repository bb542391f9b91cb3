"""Error types shared across the kernel.

UsageError marks caller mistakes (bad modulus, unknown op, malformed file);
the CLI maps it to exit code 2.  Genuine internal inconsistencies raise
RuntimeError and are never caught.
"""


class UsageError(Exception):
    """Invalid input or request: wrong modulus, unknown op/pmap, parse error."""


class DomainError(UsageError):
    """Arithmetic outside the domain, e.g. inverse of zero."""
