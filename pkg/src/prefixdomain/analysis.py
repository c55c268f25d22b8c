"""Offline checks over finished traces."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from prefixdomain.dyadic import BasicSet, Dyadic
from prefixdomain.errors import NotFired
from prefixdomain.game import AliceConfig, GameState, GameTrace


@dataclass
class AuditReport:
    c: int
    l: int  # noqa: E741
    L: int
    n_targets: int
    served: int
    passed: bool
    fraction_at_fire: Dyadic
    epsilon: Dyadic
    served_short: int = 0

    @property
    def bound(self) -> int:
        """``N - 2**l``: free allowed level-L strings Bob would have needed."""
        return self.n_targets - (1 << self.l)

    def summary(self) -> str:
        verdict = "pass" if self.passed else "VIOLATION"
        return (
            f"counting c={self.c} window=[{self.l},{self.L}] N={self.n_targets} "
            f"served<=L={self.served} fraction@fire={self.fraction_at_fire} "
            f"eps={self.epsilon} {verdict}"
        )


def state_at(trace: GameTrace, clock: int) -> GameState:
    state = GameState(trace.universe, trace.depth_max)
    for ev in trace.events:
        if ev.clock > clock:
            break
        state.apply_event(ev)
    return state


def counting_lemma_audit(trace: GameTrace, c: int) -> AuditReport:
    """Check that Bob did not describe every target within the trigger level.

    A violation can only come from a buggy engine or a forged trace; the
    report then carries the free allowed fraction at level L recomputed at
    fire time, which the counting argument says must be at least epsilon.
    """
    ledger = trace.ledgers.get(c)
    if ledger is None or ledger.fired is None:
        raise NotFired(f"no fire record for c={c}")
    fire = ledger.fired
    l, L = fire.window.l, fire.window.L
    final = trace.state
    served = sum(1 for x in fire.targets if final.c_of(x) <= L)
    served_short = sum(1 for x in fire.targets if final.c_of(x) < l)
    all_served = len(fire.targets) >= fire.n_targets and served == len(fire.targets)
    fraction = state_at(trace, fire.clock).free_allowed_fraction(L)
    return AuditReport(
        c=c,
        l=l,
        L=L,
        n_targets=fire.n_targets,
        served=served,
        passed=not all_served,
        fraction_at_fire=fraction,
        epsilon=AliceConfig(c).epsilon,
        served_short=served_short,
    )


def density_check(trace: GameTrace, sets: list[BasicSet]) -> list[tuple[BasicSet, bool]]:
    """For each set, whether the covered region of the final domain meets it."""
    covered = trace.state.covered_set()
    return [(b, not covered.disjoint(b)) for b in sets]


@dataclass
class BStep:
    block_index: int
    level: int
    basic_set: BasicSet
    measure: Dyadic


@dataclass
class BSequenceReport:
    epsilon: Dyadic
    steps: list[BStep] = field(default_factory=list)
    examined: list[int] = field(default_factory=list)
    cumulative: Dyadic = field(default_factory=lambda: Dyadic(0))
    stop_reason: str = ""

    @property
    def sets(self) -> list[BasicSet]:
        return [s.basic_set for s in self.steps]

    def pairwise_disjoint(self) -> bool:
        sets = self.sets
        return all(
            sets[i].disjoint(sets[j])
            for i in range(len(sets))
            for j in range(i + 1, len(sets))
        )

    def lines(self) -> list[str]:
        out = [
            f"B{i} block={s.block_index} level={s.level} measure={s.measure} set={s.basic_set.serialize()}"
            for i, s in enumerate(self.steps)
        ]
        out.append(
            f"cumulative={self.cumulative} disjoint={self.pairwise_disjoint()} stop={self.stop_reason}"
        )
        return out


def b_sequence(
    trace: GameTrace, cfg: AliceConfig, threshold: Fraction = Fraction(1, 3)
) -> BSequenceReport:
    """Walk the blocks reachable within the trace depth and collect the sets
    of free allowed vertices at their bottom levels.

    The frozen final state stands in for the stabilized one.  After the
    first block, only blocks whose allowed set avoids everything collected
    so far are used, so the collected sets are disjoint.  The walk stops when
    the union reaches ``threshold`` (where the covered region would have to
    miss a large basic set), when a bottom level is already below epsilon
    (the trigger condition), or when blocks run out.
    """
    state = trace.state
    report = BSequenceReport(epsilon=cfg.epsilon)
    acc = BasicSet.empty()
    blocks = [b for b in state.universe.blocks_until(state.depth_max)]
    for block in blocks:
        bottom = min(block.hi, state.depth_max)
        report.examined.append(block.index)
        if report.steps and not block.basic_set.disjoint(acc):
            continue
        found = state.free_allowed_set(bottom)
        m = found.measure()
        if m < cfg.epsilon:
            report.stop_reason = f"block {block.index} below epsilon at level {bottom}"
            return report
        report.steps.append(BStep(block.index, bottom, found, m))
        acc = acc.union(found)
        report.cumulative = acc.measure()
        if report.cumulative >= threshold:
            report.stop_reason = "threshold reached"
            return report
    report.stop_reason = "blocks exhausted"
    return report
