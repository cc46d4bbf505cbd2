"""
Bundled example sessions with their expected reports, plus the widened graded
model used for scaling checks.
"""
import json
import logging
from dataclasses import dataclass
from importlib import resources
from typing import Dict, List, Tuple

from seqcm.config import DEFAULT_SETTINGS, SearchSettings
from seqcm.exceptions import SeqcmError
from seqcm.kernel import RingDescriptor
from seqcm.monomial import MonomialIdeal
from seqcm.report import run_command
from seqcm.session import parse_input

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Fixture:
    name: str
    title: str

    @property
    def filename(self) -> str:
        return f"{self.name}.seq"

    @property
    def text(self) -> str:
        return (resources.files("seqcm") / "data" / self.filename).read_text(encoding="utf-8")

    @property
    def expected(self) -> Dict:
        """ The pinned subset of the report; nested dicts pin only the keys they list. """
        data = resources.files("seqcm") / "data" / f"{self.name}.expected.json"
        return json.loads(data.read_text(encoding="utf-8"))


FIXTURES = (
    Fixture("remark-2.5c", "(x,y) and (z,t) intersected in Q[x,y,z,t,w]; regular w with a gCM quotient"),
    Fixture("remark-2.5d", "(x) and (y,z) and (x^2,y^2,z) intersected in Q[x,y,z]"),
    Fixture("example-3.9-graded", "(x^2y,xy^2) in Q[x,y,z,t], sequentially CM but not CM"),
    Fixture("skew-lines", "two skew lines (xz,xt,yz,yt) in Q[x,y,z,t], generalized CM"),
)


def fixtures() -> List[Fixture]:
    return list(FIXTURES)


def get_fixture(name: str) -> Fixture:
    for fixture in FIXTURES:
        if fixture.name == name:
            return fixture
    raise SeqcmError(f"unknown fixture '{name}', expected one of {', '.join(f.name for f in FIXTURES)}")


def _matches(want, have) -> bool:
    """ Dicts match on their pinned keys, lists element by element, anything else exactly. """
    if isinstance(want, dict):
        return isinstance(have, dict) and all(_matches(v, have.get(k)) for k, v in want.items())
    if isinstance(want, list):
        return (isinstance(have, list) and len(want) == len(have)
                and all(_matches(w, h) for w, h in zip(want, have)))
    return want == have


def compare_report(expected: Dict, actual: Dict) -> List[Tuple[int, str, object, object]]:
    """ (result index, key, expected, actual) for every pinned key that differs. """
    mismatches = []
    wanted, got = expected.get("results", []), actual.get("results", [])
    if len(wanted) != len(got):
        mismatches.append((-1, "results", len(wanted), len(got)))
    for index, (want, have) in enumerate(zip(wanted, got)):
        for key, value in want.items():
            if not _matches(value, have.get(key)):
                mismatches.append((index, key, value, have.get(key)))
    return mismatches


def replay(fixture: Fixture, settings: SearchSettings = DEFAULT_SETTINGS):
    """ Run a fixture and compare it against its expected report. """
    session = parse_input(fixture.text)
    doc = run_command(session, settings, source=fixture.filename)
    mismatches = compare_report(fixture.expected, json.loads(doc.to_json()))
    for index, key, want, have in mismatches:
        logger.warning(f"{fixture.name}: result {index} key {key} expected {want!r}, got {have!r}")
    return doc, mismatches


def widened_example(r: int) -> MonomialIdeal:
    """ (x^2y, xy^2) in Q[x,y,z,t,u1..ur]; dimension 3 + r. """
    if r < 0:
        raise SeqcmError(f"cannot widen by {r} variables")
    ring = RingDescriptor(["x", "y", "z", "t"] + [f"u{k}" for k in range(1, r + 1)])
    x, y = ring.gens[0], ring.gens[1]
    return MonomialIdeal.from_polys(ring, [x ** 2 * y, x * y ** 2])
