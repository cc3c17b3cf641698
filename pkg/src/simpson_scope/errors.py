"""Shared error type for metric domain violations."""


class MetricDomainError(ValueError):
    """A metric was evaluated outside its domain.

    Raised for zero denominators, smoothing constants that are inadmissible
    for the contingency rows actually present in the data, and malformed
    input records. Messages name the offending sample, row, or file line so
    callers can surface them directly.
    """
