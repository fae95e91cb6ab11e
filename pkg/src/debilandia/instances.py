"""Problem instances and the certificate list grammar.

An instance is a set A of positive integers avoiding the six reserved marker
values. A certificate is a flat integer list over B = A + markers:

    2  a b  7  a b  7 ... a b  5  4 4 ... 4  25|43

* it opens with 2,
* then coordinate pairs drawn from A, a 7 after every pair except the last,
* a 5 closes the pairs; the pairs must enumerate A x A exactly, no repeats,
* a run of E fours claims the game runs E generations,
* one final marker: 25 claims the spawned machine stops, 43 that it doesn't,
* nothing may follow the marker.

Each pair (a, b) places the lattice point x=a, y=b. For a valid certificate
len(L) = 3T + E + 2 where T is the pair count, while the verifier's input
measure is N = P + E + T + 4 = 3T + E + 4; both are exposed, the two counts
simply differ by 2 by construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from itertools import product
from pathlib import Path
from typing import Iterable, Sequence

from .tiles import Point

MARKER_START = 2
MARKER_SEP = 7
MARKER_END_TUPLES = 5
MARKER_GENERATION = 4
MARKER_STOPS = 25
MARKER_RUNS = 43
RESERVED = frozenset({MARKER_START, MARKER_SEP, MARKER_END_TUPLES, MARKER_GENERATION, MARKER_STOPS, MARKER_RUNS})


class RejectReason(Enum):
    """Which structural condition a bad certificate violates."""

    CONDITION_1 = "condition_1"  # first element is not 2
    CONDITION_2 = "condition_2"  # malformed pair (wrong length or non-A member)
    CONDITION_3 = "condition_3"  # repeated pair, or pairs do not cover A x A
    CONDITION_4 = "condition_4"  # no 5 where one is required
    CONDITION_5 = "condition_5"  # non-4 in the generation run before the marker
    CONDITION_7 = "condition_7"  # missing or invalid final marker
    NOT_A_TM = "not_a_turing_machine"  # step-6 structural check (verifier only)
    VERDICT_MISMATCH = "verdict_mismatch"  # marker disagrees with the game outcome
    TRAILING_INPUT = "trailing_input"  # data after the final marker


class RejectedCertificate(Exception):
    def __init__(self, reason: RejectReason, position: int, detail: str = ""):
        super().__init__(f"{reason.value} at position {position}" + (f": {detail}" if detail else ""))
        self.reason = reason
        self.position = position


@dataclass(frozen=True)
class Instance:
    """The set A, canonically ascending. B = A plus the six markers."""

    a_values: tuple[int, ...]

    def __post_init__(self) -> None:
        values = self.a_values
        if not values:
            raise ValueError("set A must not be empty")
        if any(not isinstance(v, int) or isinstance(v, bool) or v < 1 for v in values):
            raise ValueError("set A must contain positive integers")
        if len(set(values)) != len(values):
            raise ValueError("set A must not repeat values")
        if set(values) & RESERVED:
            raise ValueError(f"set A must avoid the reserved values {sorted(RESERVED)}")
        object.__setattr__(self, "a_values", tuple(sorted(values)))

    @property
    def b_values(self) -> frozenset[int]:
        return frozenset(self.a_values) | RESERVED

    @property
    def size(self) -> int:
        return len(self.a_values)


@dataclass(frozen=True)
class ParsedCertificate:
    tuples: tuple[tuple[int, int], ...]
    gen_count: int
    marker: int

    @property
    def t_count(self) -> int:
        return len(self.tuples)

    @property
    def p_count(self) -> int:
        return 2 * len(self.tuples)

    @property
    def n_input(self) -> int:
        return self.p_count + self.gen_count + self.t_count + 4


def enumerate_tuples(a_values: Iterable[int]) -> list[tuple[int, int]]:
    """All ordered pairs over A, lexicographic in A's ascending order."""
    ordered = sorted(set(a_values))
    return list(product(ordered, repeat=2))


def tuples_to_points(tuples: Iterable[tuple[int, int]]) -> set[Point]:
    """First pair element is the x coordinate, second is y."""
    return {(a, b) for a, b in tuples}


def group_tuples(inst: Instance, items: Sequence[int], start: int) -> tuple[list[tuple[int, int]], int, int]:
    """Read ``a b 7 a b 7 ... a b 5`` from items[start:].

    Returns (pairs, index one past the 5, tokens touched). Raises
    RejectedCertificate for shape violations; pair coverage is not checked
    here.
    """
    members = set(inst.a_values)
    pairs: list[tuple[int, int]] = []
    current: list[int] = []
    touched = 0
    i = start
    while i < len(items):
        token = items[i]
        touched += 1
        if token == MARKER_SEP:
            if len(current) != 2:
                raise RejectedCertificate(RejectReason.CONDITION_2, i, "pair must have exactly two members")
            pairs.append((current[0], current[1]))
            current = []
        elif token == MARKER_END_TUPLES:
            if len(current) == 2:
                pairs.append((current[0], current[1]))
                return pairs, i + 1, touched
            if not current and not pairs:
                return pairs, i + 1, touched  # zero pairs; coverage rejects later
            raise RejectedCertificate(RejectReason.CONDITION_2, i, "pair must have exactly two members")
        elif token in members:
            if len(current) == 2:
                raise RejectedCertificate(RejectReason.CONDITION_4, i, "expected 7 or 5 after a pair")
            current.append(token)
        else:
            reason = RejectReason.CONDITION_4 if len(current) == 2 else RejectReason.CONDITION_2
            raise RejectedCertificate(reason, i, f"{token} cannot appear inside the pair section")
        i += 1
    raise RejectedCertificate(RejectReason.CONDITION_4, len(items), "no 5 terminates the pair section")


def check_coverage(inst: Instance, pairs: Sequence[tuple[int, int]], end_pos: int) -> int:
    """Pairs must be distinct and enumerate A x A; returns tokens touched."""
    seen: set[tuple[int, int]] = set()
    for k, pair in enumerate(pairs):
        if pair in seen:
            raise RejectedCertificate(RejectReason.CONDITION_3, 1 + 3 * k, "repeated pair")
        seen.add(pair)
    expected = set(enumerate_tuples(inst.a_values))
    if seen != expected:
        raise RejectedCertificate(RejectReason.CONDITION_3, end_pos, "pairs must enumerate all of A x A")
    return len(pairs)


def scan_tail(items: Sequence[int], start: int) -> tuple[int, int, int]:
    """Read ``4 ... 4 marker`` from items[start:].

    Returns (E, marker, tokens touched scanning fours). Trailing data is the
    caller's concern.
    """
    i = start
    gens = 0
    while i < len(items) and items[i] == MARKER_GENERATION:
        gens += 1
        i += 1
    if i >= len(items):
        raise RejectedCertificate(RejectReason.CONDITION_7, len(items), "missing final 25/43 marker")
    marker = items[i]
    if marker not in (MARKER_STOPS, MARKER_RUNS):
        raise RejectedCertificate(RejectReason.CONDITION_5, i, "only 4s may precede the final marker")
    return gens, marker, gens


def parse_certificate(inst: Instance, items: Sequence[int]) -> ParsedCertificate:
    """Full structural parse; raises RejectedCertificate on the first violation."""
    if not items or items[0] != MARKER_START:
        raise RejectedCertificate(RejectReason.CONDITION_1, 0, "certificate must open with 2")
    pairs, after_five, _ = group_tuples(inst, items, 1)
    check_coverage(inst, pairs, after_five - 1)
    gens, marker, _ = scan_tail(items, after_five)
    marker_pos = after_five + gens
    if marker_pos + 1 != len(items):
        raise RejectedCertificate(RejectReason.TRAILING_INPUT, marker_pos + 1, "data after the final marker")
    return ParsedCertificate(tuple(pairs), gens, marker)


def serialize_certificate(cert: ParsedCertificate) -> list[int]:
    items = [MARKER_START]
    for k, (a, b) in enumerate(cert.tuples):
        if k:
            items.append(MARKER_SEP)
        items.extend((a, b))
    items.append(MARKER_END_TUPLES)
    items.extend([MARKER_GENERATION] * cert.gen_count)
    items.append(cert.marker)
    return items


def build_candidate(inst: Instance, gen_count: int, marker: int) -> list[int]:
    """The canonical certificate skeleton: all pairs in order, E fours, marker."""
    if marker not in (MARKER_STOPS, MARKER_RUNS):
        raise ValueError("marker must be 25 or 43")
    if gen_count < 0:
        raise ValueError("gen_count must be >= 0")
    cert = ParsedCertificate(tuple(enumerate_tuples(inst.a_values)), gen_count, marker)
    return serialize_certificate(cert)


def certificate_text(items: Sequence[int]) -> str:
    return " ".join(str(v) for v in items)


def instance_to_json_obj(inst: Instance, items: Sequence[int]) -> dict:
    return {"A": list(inst.a_values), "L": list(items)}


def load_instance_file(path: str | Path) -> tuple[Instance, list[int]]:
    obj = json.loads(Path(path).read_text())
    if not isinstance(obj, dict) or "A" not in obj or "L" not in obj:
        raise ValueError("instance file must be a JSON object with keys A and L")
    values = obj["A"]
    items = obj["L"]
    if not isinstance(values, list) or not isinstance(items, list):
        raise ValueError("A and L must be JSON arrays")
    if any(not isinstance(v, int) or isinstance(v, bool) for v in items):
        raise ValueError("L must contain integers only")
    return Instance(tuple(values)), list(items)
