"""Shared record of acceptance verdicts, printed at the end of the run."""
RESULTS = []


def record(number, status, detail):
    RESULTS.append((number, status, detail))
    line = f"criterion {number}: {status} - {detail}"
    return line
