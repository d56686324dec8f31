"""Error taxonomy.

InputError: the caller handed us inconsistent data (bad degrees, unknown
labels, mismatched spaces).  Maps to CLI exit code 2.

StructureError: the data parsed fine but a mathematical precondition failed
(relations do not hold, pairing degenerate, S_0 != 0, ...).  These are
reported with witnesses; a check that *ran* and failed is not an error at
all, it is a failing report.
"""


class InputError(ValueError):
    pass


class StructureError(RuntimeError):
    pass
