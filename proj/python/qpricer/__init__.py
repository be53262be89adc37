"""Python interface to the qpricer C++ core.

Exposes the closed-form two-class M/G/1 wait formulas, the finite-step
revenue optimizer, the provider/user-set game helpers, and the
discrete-event simulation oracle.
"""

from ._qpricer import *  # noqa: F401,F403
