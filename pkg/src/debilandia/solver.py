"""Desk-scale certificate construction and growth measurement.

Conditions 1-4 force the certificate skeleton completely (the opening 2, all
|A|^2 coordinate pairs in canonical order, the closing 5), so the only free
choices are the generation count and the final marker. The solver therefore
constructs rather than enumerates: place the forced points, recognize, check
the machine structure, run the game, and read the answer off the run.

Note the built-in floor: a recognized machine needs one rule packet spanning
the five cell columns right of the tip, so A must populate at least six
consecutive 4-wide blocks - any instance with |A| <= 5 is unsolvable no
matter how the points land. The exponential claim about solving is measured
empirically by growth_probe; searching smarter is out of scope.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .embedding import NotATuringMachine, extract_tm
from .engine import RunStatus, run
from .grid import recognize
from .instances import (
    MARKER_RUNS,
    MARKER_STOPS,
    RESERVED,
    Instance,
    build_candidate,
    enumerate_tuples,
    tuples_to_points,
)
from .tiles import TileAtlas
from .verifier import verify

DEFAULT_CAP = 4


class SolverCapError(ValueError):
    """Refused: the search cost grows exponentially with |A|."""


@dataclass
class SolveStats:
    cells_placed: int
    cells_scanned: int
    generations: int


@dataclass
class SolveOutcome:
    certificate: list[int] | None
    reason: str | None
    stats: SolveStats

    @property
    def found(self) -> bool:
        return self.certificate is not None


def construct_certificate(
    inst: Instance, max_gens: int, atlas: TileAtlas, cap: int = DEFAULT_CAP
) -> SolveOutcome:
    """Build the unique skeleton and decide its generation count and marker.

    Markers: a halt witnessed within max_gens yields 25 with the earliest
    budget that witnesses it; a detected cycle also stabilizes the game, so
    it yields 25 with the earliest budget that exposes the repeat; a run
    that survives max_gens without repeating yields 43 with max_gens, which
    certifies exactly what the checker checks (no stabilization within the
    claimed generations). No machine structure means no certificate at all.
    """
    if max_gens < 1:
        raise ValueError("max_gens must be >= 1")
    if inst.size > cap:
        raise SolverCapError(
            f"|A| = {inst.size} exceeds the cap of {cap}: certificate search "
            f"cost grows exponentially with |A|"
        )
    tuples = enumerate_tuples(inst.a_values)
    points = tuples_to_points(tuples)
    state = recognize(points, atlas)
    stats = SolveStats(
        cells_placed=len(points),
        cells_scanned=len(state.tiles) + state.junk_cells,
        generations=0,
    )
    try:
        extract_tm(state)
    except NotATuringMachine as exc:
        return SolveOutcome(None, f"not_a_turing_machine:{exc.reason.value}", stats)

    result = run(state, max_gens)
    stats.generations = result.generations_run
    if result.status is RunStatus.HALTED:
        gen_count, marker = result.generations_run + 1, MARKER_STOPS
    elif result.status is RunStatus.CYCLE:
        gen_count, marker = result.first_index + result.period, MARKER_STOPS
    else:
        gen_count, marker = max_gens, MARKER_RUNS
    return SolveOutcome(build_candidate(inst, gen_count, marker), None, stats)


def sweep_candidates(
    inst: Instance, max_gens: int, atlas: TileAtlas, cap: int = DEFAULT_CAP
) -> list[tuple[int, int]]:
    """Every (gen_count, marker) skeleton candidate the checker accepts.

    Exhausts gen_count 0..max_gens against both markers; used to confirm
    that a no-certificate answer really has no accepted candidate.
    """
    if inst.size > cap:
        raise SolverCapError(f"|A| = {inst.size} exceeds the cap of {cap}")
    accepted = []
    for gen_count in range(max_gens + 1):
        for marker in (MARKER_STOPS, MARKER_RUNS):
            items = build_candidate(inst, gen_count, marker)
            if verify(inst, items, atlas).accepted:
                accepted.append((gen_count, marker))
    return accepted


@dataclass
class GrowthRow:
    size_m: int
    trial: int
    a_values: tuple[int, ...]
    cells_placed: int
    factorial_sq_claim: int
    generations: int
    cells_scanned: int
    found: bool


def random_instance(rng: random.Random, size: int, upper: int = 200) -> Instance:
    pool = [v for v in range(1, upper + 1) if v not in RESERVED]
    return Instance(tuple(rng.sample(pool, size)))


def growth_probe(
    sizes: list[int],
    trials: int,
    atlas: TileAtlas,
    max_gens: int = 32,
    seed: int = 0,
    cap: int = DEFAULT_CAP,
) -> list[GrowthRow]:
    """Measure construction cost over random instances of each size.

    cells_placed is always M^2 (the skeleton forces every pair); the
    factorial_sq_claim column carries (M!)^2 alongside for comparison with
    the much larger advertised figure.
    """
    rng = random.Random(seed)
    rows = []
    for size in sizes:
        for trial in range(trials):
            inst = random_instance(rng, size)
            outcome = construct_certificate(inst, max_gens, atlas, cap=cap)
            rows.append(
                GrowthRow(
                    size_m=size,
                    trial=trial,
                    a_values=inst.a_values,
                    cells_placed=outcome.stats.cells_placed,
                    factorial_sq_claim=math.factorial(size) ** 2,
                    generations=outcome.stats.generations,
                    cells_scanned=outcome.stats.cells_scanned,
                    found=outcome.found,
                )
            )
    return rows
