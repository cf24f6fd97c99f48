import os
import sys
from datetime import datetime, timedelta

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from conflict_lens.core import ServiceEvent, TimeInterval  # noqa: E402

ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(line)


DAY0 = datetime(2011, 6, 15)


def at(day, hhmm, seconds=0):
    h, m = map(int, hhmm.split(":"))
    return DAY0 + timedelta(days=day, hours=h, minutes=m, seconds=seconds)


def make_event(start, end, user="R1", service="tv", location="living_room", **attrs):
    return ServiceEvent(service, attrs, TimeInterval(start, end), location, user)


@pytest.fixture
def event_factory():
    return make_event
