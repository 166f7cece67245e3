"""Default tolerances and enumeration caps.

Every cap can be overridden through an environment variable named
``KWGAUGE_<NAME>`` (for example ``KWGAUGE_SPIN_CAP=1048576``).
"""

import os

TOL = 1e-9

_DEFAULT_CAPS = {
    "GROUP_ORDER_CAP": 120,
    "SPIN_CAP": 2**24,
    "HOM_CAP": 2**24,
    "TRANSFER_CAP": 2**16,
    "STATE_CAP": 2**16,
    "CLASS_ENUM_CAP": 4096,
    "CELL_CAP": 20000,
}


def cap(name):
    """Return the effective value of a named cap."""
    env = os.environ.get("KWGAUGE_" + name)
    if env is not None:
        return int(env)
    return _DEFAULT_CAPS[name]


def all_caps():
    return {name: cap(name) for name in _DEFAULT_CAPS}


def default_threads():
    return int(os.environ.get("KWGAUGE_THREADS", "1"))
