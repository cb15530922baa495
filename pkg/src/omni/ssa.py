"""Self-modifying policy learner with checkpointed self-evaluation.

The agent's policy is a probability vector over a closed action set.  Some
actions nudge the vector itself up or down; those edits only count when a
checkpoint is open, and every edit stores the exact pre-edit vector so it
can be undone.  At each checkpoint boundary the agent asks one question:
reading the surviving checkpoint times oldest to newest, is the reward per
step earned since each one strictly increasing?  Any checkpoint breaking
that chain is popped and its edits rolled back, newest first.  What remains
is a success story: every surviving self-modification has so far paid for
itself, measured from the moment it was made.

The bundled environment is a two-armed bandit whose good arm flips every
`period` steps, so the story is never allowed to settle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

BASE_ACTIONS = ["arm0", "arm1", "begin_pmp", "end_pmp", "wait"]
ACTIONS = (
    BASE_ACTIONS
    + ["up:" + a for a in BASE_ACTIONS]
    + ["down:" + a for a in BASE_ACTIONS]
)
_ACTION_INDEX = {a: i for i, a in enumerate(ACTIONS)}

STATE = "B"
PROB_FLOOR = 1e-4
GAMMA_UP = 2.0
GAMMA_DOWN = 0.5
_GAMMA_MIN, _GAMMA_MAX = 0.25, 4.0


def floor_renormalize(vec: list[float], floor: float = PROB_FLOOR) -> list[float]:
    """Scale to sum 1 while keeping every entry at least `floor`.

    Entries that would fall below the floor are pinned there and the rest
    are rescaled into the remaining mass; repeats until stable.
    """
    n = len(vec)
    if floor * n > 1.0:
        raise ValueError("floor too large for vector length")
    pinned = [False] * n
    out = list(vec)
    while True:
        free_mass = 1.0 - floor * sum(pinned)
        s = sum(v for v, p in zip(out, pinned) if not p)
        changed = False
        for i in range(n):
            if pinned[i]:
                continue
            out[i] = (out[i] / s) * free_mass if s > 0 else free_mass / (n - sum(pinned))
            if out[i] < floor:
                pinned[i] = True
                changed = True
        if not changed:
            break
    for i in range(n):
        if pinned[i]:
            out[i] = floor
    return out


class Policy:
    """Per-state probability vector over ACTIONS."""

    def __init__(self, vectors: dict[str, list[float]]):
        self.vectors = vectors

    @classmethod
    def uniform(cls, states: tuple[str, ...] = (STATE,)) -> "Policy":
        n = len(ACTIONS)
        return cls({s: [1.0 / n] * n for s in states})

    def probs(self, state: str) -> list[float]:
        return self.vectors[state]

    def clone(self) -> "Policy":
        return Policy({s: list(v) for s, v in self.vectors.items()})


def select_action(policy: Policy, state: str, rng: random.Random) -> str:
    r = rng.random()
    cum = 0.0
    vec = policy.vectors[state]
    for i, p in enumerate(vec):
        cum += p
        if r < cum:
            return ACTIONS[i]
    return ACTIONS[-1]


def apply_pla(policy: Policy, state: str, action: str, gamma: float) -> list[float]:
    """Multiply one action's probability by gamma (clamped to [1/4, 4]) and
    floor-renormalize.  Returns the exact pre-edit vector for rollback."""
    gamma = min(_GAMMA_MAX, max(_GAMMA_MIN, gamma))
    old = list(policy.vectors[state])
    vec = list(old)
    vec[_ACTION_INDEX[action]] *= gamma
    policy.vectors[state] = floor_renormalize(vec)
    return old


@dataclass
class StackEntry:
    s: int  # step count when opened
    reward_at: float  # cumulative reward at that point
    modifications: list[tuple[str, list[float]]] = field(default_factory=list)
    e: int | None = None  # step count when closed, None while open


def ssc_holds(t: int, reward_t: float, checkpoints: list[tuple[int, float]]) -> bool:
    """Success-story criterion at time t.

    checkpoints is [(v_i, R(v_i))] oldest first.  Requires
    R(t)/t < (R(t)-R(v_1))/(t-v_1) < ... strictly; a checkpoint at v_i >= t
    or a tie anywhere is a violation.
    """
    if t <= 0:
        return not checkpoints
    prev = reward_t / t
    for v, r_v in checkpoints:
        if v >= t:
            return False
        slope = (reward_t - r_v) / (t - v)
        if slope <= prev:
            return False
        prev = slope
    return True


def ssc_evaluate(
    stack: list[StackEntry], t: int, reward_t: float, policy: Policy
) -> int:
    """Pop checkpoints, newest first, until the criterion holds for what is
    left, rolling back each popped entry's edits in reverse order.  Returns
    the number popped."""
    popped = 0
    while stack:
        if ssc_holds(t, reward_t, [(en.s, en.reward_at) for en in stack]):
            break
        entry = stack.pop()
        for state, vec in reversed(entry.modifications):
            policy.vectors[state] = vec
        popped += 1
    return popped


class SwitchingBandit:
    """Two arms, one observation.  Arm arm0 pays 1.0 while (t // period) is
    even, arm1 while odd; everything else pays 0.  Every action advances the
    clock, so idling has a real opportunity cost."""

    def __init__(self, period: int):
        if period < 1:
            raise ValueError("period must be >= 1")
        self.period = period
        self.t = 0

    @property
    def state(self) -> str:
        return STATE

    def good_arm(self, t: int) -> str:
        return "arm0" if (t // self.period) % 2 == 0 else "arm1"

    def act(self, action: str) -> float:
        reward = 1.0 if action == self.good_arm(self.t) else 0.0
        self.t += 1
        return reward


@dataclass
class LearnerTrace:
    total_steps: int
    seed: int
    learn: bool
    total_reward: float
    actions: list[int] | None  # indices into ACTIONS, None if not recorded
    rewards: list[float] | None
    events: list[dict]
    final_policy: dict[str, list[float]]
    story: list[tuple[int, float]]  # surviving (s, R(s)) checkpoints
    pops: int

    @property
    def mean_reward(self) -> float:
        return self.total_reward / self.total_steps if self.total_steps else 0.0

    def jsonl_rows(self):
        if self.actions is None:
            return
        cum = 0.0
        for i, (a, r) in enumerate(zip(self.actions, self.rewards)):
            cum += r
            yield {
                "t": i + 1,
                "state": STATE,
                "action": ACTIONS[a],
                "reward": r,
                "R": cum,
            }

    def summary_json(self) -> dict:
        return {
            "steps": self.total_steps,
            "seed": self.seed,
            "learn": self.learn,
            "total_reward": self.total_reward,
            "mean_reward": self.mean_reward,
            "pops": self.pops,
            "story": [[s, r] for s, r in self.story],
            "events": len(self.events),
            "final_policy": {s: v for s, v in self.final_policy.items()},
        }


def run_learner(
    env,
    total_steps: int,
    seed: int,
    learn: bool = True,
    record_steps: bool = True,
    policy: Policy | None = None,
) -> LearnerTrace:
    """Run the agent for total_steps actions and evaluate the story one last
    time at the horizon, so the returned checkpoint chain always satisfies
    the criterion at t = total_steps."""
    if total_steps < 1:
        raise ValueError("total_steps must be >= 1")
    rng = random.Random(seed)
    policy = policy if policy is not None else Policy.uniform()
    stack: list[StackEntry] = []
    events: list[dict] = []
    actions: list[int] | None = [] if record_steps else None
    rewards: list[float] | None = [] if record_steps else None
    total = 0.0
    pops = 0

    def open_entry() -> StackEntry | None:
        if stack and stack[-1].e is None:
            return stack[-1]
        return None

    for t in range(1, total_steps + 1):
        state = env.state
        action = select_action(policy, state, rng)
        reward = env.act(action)
        total += reward
        if record_steps:
            actions.append(_ACTION_INDEX[action])
            rewards.append(reward)
        if not learn:
            continue
        if action == "begin_pmp":
            entry = open_entry()
            if entry is not None:
                entry.e = t
            n = ssc_evaluate(stack, t, total, policy)
            pops += n
            if n:
                events.append({"event": "pop", "t": t, "stack_depth": len(stack), "popped": n})
            stack.append(StackEntry(t, total))
            events.append({"event": "begin", "t": t, "stack_depth": len(stack)})
        elif action == "end_pmp":
            entry = open_entry()
            if entry is None:
                events.append({"event": "noop", "t": t, "stack_depth": len(stack)})
            else:
                entry.e = t
                n = ssc_evaluate(stack, t, total, policy)
                pops += n
                if n:
                    events.append({"event": "pop", "t": t, "stack_depth": len(stack), "popped": n})
                events.append({"event": "end", "t": t, "stack_depth": len(stack)})
        elif action.startswith(("up:", "down:")):
            entry = open_entry()
            if entry is None:
                events.append({"event": "noop", "t": t, "stack_depth": len(stack)})
            else:
                kind, _, target = action.partition(":")
                gamma = GAMMA_UP if kind == "up" else GAMMA_DOWN
                entry.modifications.append(
                    (state, apply_pla(policy, state, target, gamma))
                )

    if learn:
        entry = open_entry()
        if entry is not None:
            entry.e = total_steps
        n = ssc_evaluate(stack, total_steps, total, policy)
        pops += n
        events.append(
            {"event": "final", "t": total_steps, "stack_depth": len(stack), "popped": n}
        )

    return LearnerTrace(
        total_steps=total_steps,
        seed=seed,
        learn=learn,
        total_reward=total,
        actions=actions,
        rewards=rewards,
        events=events,
        final_policy={s: list(v) for s, v in policy.vectors.items()},
        story=[(en.s, en.reward_at) for en in stack],
        pops=pops,
    )


def uniform_baseline(env, total_steps: int, seed: int, record_steps: bool = False) -> LearnerTrace:
    """Same action sampler, learning disabled: the policy stays uniform and
    modifier actions do nothing.  Expected reward is 1/15 per step."""
    return run_learner(env, total_steps, seed, learn=False, record_steps=record_steps)


# ---------------------------------------------------------------------------
# Searching over edit programs.

EDIT_TOKENS = ["U0", "U1", "D0", "D1"]
_EDIT_TARGET = {"U0": "arm0", "U1": "arm1", "D0": "arm0", "D1": "arm1"}
_EDIT_GAMMA = {"U0": GAMMA_UP, "U1": GAMMA_UP, "D0": GAMMA_DOWN, "D1": GAMMA_DOWN}


def edit_programs(max_len: int):
    """All token strings up to max_len in shortlex order, empty first."""
    frontier: list[tuple[str, ...]] = [()]
    yield ()
    for _ in range(max_len):
        nxt = []
        for p in frontier:
            for tok in EDIT_TOKENS:
                q = p + (tok,)
                yield q
                nxt.append(q)
        frontier = nxt


def apply_edit_program(policy: Policy, edits: tuple[str, ...]) -> StackEntry:
    """Apply an edit string inside a fresh checkpoint and close it, so the
    edits are attributable and reversible like any other modification."""
    entry = StackEntry(0, 0.0)
    for tok in edits:
        entry.modifications.append(
            (STATE, apply_pla(policy, STATE, _EDIT_TARGET[tok], _EDIT_GAMMA[tok]))
        )
    entry.e = 0
    return entry


@dataclass
class LevinResult:
    program: tuple[str, ...] | None
    phase: int
    trials: int
    found: bool

    def to_json(self) -> dict:
        return {
            "program": list(self.program) if self.program is not None else None,
            "phase": self.phase,
            "trials": self.trials,
            "found": self.found,
        }


def _trial(
    edits: tuple[str, ...], predicate, env_factory, trial_steps: int, seed: int
) -> bool:
    policy = Policy.uniform()
    apply_edit_program(policy, edits)
    trace = run_learner(
        env_factory(), trial_steps, seed, learn=False, record_steps=True, policy=policy
    )
    return bool(predicate(trace))


def levin_search_pmp(
    predicate,
    env_factory,
    trial_steps: int,
    max_phase: int,
    dsl_max_len: int | None = None,
    seed: int = 0,
) -> LevinResult:
    """Phased search over edit programs.  Phase i admits programs of length
    at most i/2 whose budget 2^i * 4^-|p| covers the trial length; each
    program is tried once (trials are deterministic given the seed) and the
    first success, scanning phases outward and shortlex within a phase, is
    returned.  Because shorter programs are admitted in earlier phases and
    failures are cached, the returned program is the shortlex-least success
    among everything admitted."""
    cache: dict[tuple[str, ...], bool] = {}
    trials = 0
    for phase in range(1, max_phase + 1):
        top = phase // 2
        if dsl_max_len is not None:
            top = min(top, dsl_max_len)
        for p in edit_programs(top):
            if (1 << phase) < trial_steps * (4 ** len(p)):
                continue
            if p in cache:
                continue
            ok = _trial(p, predicate, env_factory, trial_steps, seed)
            cache[p] = ok
            trials += 1
            if ok:
                return LevinResult(p, phase, trials, True)
    return LevinResult(None, max_phase, trials, False)
