"""The eleven acceptance criteria, one test each, in full mode.

Set TUBEKNOTS_FAST=1 for the reduced census (n <= 14) and shorter walks.
Each result line is repeated in the terminal summary.
"""

import os

import pytest
from conftest import ACCEPTANCE_LINES

from tubeknots import verify

CFG = verify.VerifyConfig(fast=os.environ.get("TUBEKNOTS_FAST") == "1")


@pytest.mark.parametrize("number,check", list(enumerate(verify.CHECKS, 1)), ids=[f.__name__ for f in verify.CHECKS])
def test_criterion(number, check):
    c = verify.run_check(check, CFG)
    assert c.number == number
    line = c.line() + f"  ({c.seconds}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert c.passed, line
