"""
Check registry: stable names, task expansion and task execution.
"""

import logging
from typing import Callable, Dict, List, Optional

from qcong.config import settings
from qcong.errors import UsageError
from qcong.models.schemas import (
    CLASSICAL_CHECKS,
    SERIES_CHECKS,
    CheckId,
    CheckResult,
    CheckTask,
    ClassicalParams,
    ProofSection,
    RunConfig,
)
from qcong.services.carlitz import carlitz_check, carlitz_grid, carlitz_random_specializations
from qcong.services.classical import classical_check, q_to_1_consistency
from qcong.services.cyclotomic import CyclotomicCache, is_prime
from qcong.services.proof_steps import STEPS, proof_chain, proof_step
from qcong.services.qseries import MonomialParam
from qcong.services.series_checks import check_series, wang_yu_parameters

logger = logging.getLogger(__name__)

PROOF_CHAIN_S2 = "proof-chain-s2"
PROOF_CHAIN_S3 = "proof-chain-s3"

# Steps that only exist for one residue of n mod 4
CASE_STEPS = {
    CheckId.B16: 1,
    CheckId.B18: 1,
    CheckId.C8: 1,
    CheckId.C9: 1,
    CheckId.B19: 3,
    CheckId.B20: 3,
    CheckId.C10: 3,
    CheckId.C11: 3,
}

Runner = Callable[[CheckTask, Optional[CyclotomicCache]], List[CheckResult]]


# ============================================================================
# Runners
# ============================================================================


def _run_series(task: CheckTask, cache: Optional[CyclotomicCache]) -> List[CheckResult]:
    d = int(task.params.get("d", 0))
    return [check_series(CheckId(task.check), task.n, task.power, d=d, cache=cache)]


def _run_step(task: CheckTask, cache: Optional[CyclotomicCache]) -> List[CheckResult]:
    k = task.params.get("k")
    s = task.params.get("s")
    return [
        proof_step(
            CheckId(task.check),
            task.n,
            k=None if k is None else int(k),
            s=None if s is None else int(s),
            cache=cache,
        )
    ]


def _run_chain(section: ProofSection) -> Runner:
    def run(task: CheckTask, cache: Optional[CyclotomicCache]) -> List[CheckResult]:
        return proof_chain(task.n, section, cache)

    return run


def _run_carlitz(task: CheckTask, cache: Optional[CyclotomicCache]) -> List[CheckResult]:
    if "a" not in task.params:
        return carlitz_grid(task.n)
    return [
        carlitz_check(
            task.n,
            MonomialParam.parse(str(task.params["a"])),
            MonomialParam.parse(str(task.params["b"])),
            int(task.params.get("base_power", 1)),
        )
    ]


def _run_carlitz_random(task: CheckTask, cache: Optional[CyclotomicCache]) -> List[CheckResult]:
    count = task.params.get("count")
    seed = task.params.get("seed")
    return [
        carlitz_random_specializations(
            count=None if count is None else int(count),
            max_n=task.n,
            seed=None if seed is None else int(seed),
        )
    ]


def _run_classical(task: CheckTask, cache: Optional[CyclotomicCache]) -> List[CheckResult]:
    power = task.power or settings.native_power(task.check)
    params = ClassicalParams(p=int(task.params["p"]), r=int(task.params.get("r", 1)), power=power)
    return [classical_check(params)]


def _run_q_to_1(task: CheckTask, cache: Optional[CyclotomicCache]) -> List[CheckResult]:
    return [
        q_to_1_consistency(
            CheckId(str(task.params["target"])),
            int(task.params["p"]),
            int(task.params.get("r", 1)),
            task.power,
        )
    ]


def _build_registry() -> Dict[str, Runner]:
    registry: Dict[str, Runner] = {}
    for check in SERIES_CHECKS:
        registry[check.value] = _run_series
    for step in STEPS:
        registry[step.value] = _run_step
    for check in CLASSICAL_CHECKS:
        registry[check.value] = _run_classical
    registry[CheckId.CARLITZ.value] = _run_carlitz
    registry[CheckId.CARLITZ_SPECIALIZATION.value] = _run_carlitz_random
    registry[CheckId.Q_TO_1.value] = _run_q_to_1
    registry[PROOF_CHAIN_S2] = _run_chain(ProofSection.S2)
    registry[PROOF_CHAIN_S3] = _run_chain(ProofSection.S3)
    return registry


REGISTRY: Dict[str, Runner] = _build_registry()


def check_names() -> List[str]:
    """Every registered name, sorted."""
    return sorted(REGISTRY)


def run_task(task: CheckTask, cache: Optional[CyclotomicCache] = None) -> List[CheckResult]:
    """
    Run one task.

    Raises:
        UsageError: If the task names no registered check
    """
    runner = REGISTRY.get(task.check)
    if runner is None:
        raise UsageError(f"unknown check {task.check!r}")
    logger.debug(f"Running {task.label()}")
    return runner(task, cache)


# ============================================================================
# Task expansion
# ============================================================================


def _odd(config: RunConfig, minimum: int = 1) -> List[int]:
    return [n for n in range(max(config.n_start, minimum), config.n_end + 1) if n % 2 == 1]


def _series_tasks(check: CheckId, config: RunConfig) -> List[CheckTask]:
    tasks = []
    for n in _odd(config):
        if check != CheckId.WANG_YU:
            tasks.append(CheckTask(check=check.value, n=n, power=config.power))
            continue
        values = wang_yu_parameters(n) if config.d is None else [config.d]
        tasks += [
            CheckTask(check=check.value, n=n, power=config.power, params={"d": d})
            for d in values
            if n > 2 * abs(d) - 1
        ]
    return tasks


def _step_tasks(step: CheckId, config: RunConfig) -> List[CheckTask]:
    params: Dict[str, int] = {}
    if config.k is not None:
        params["k"] = config.k
    if config.s is not None:
        params["s"] = config.s
    tasks = []
    for n in _odd(config, minimum=3):
        if step in CASE_STEPS and n % 4 != CASE_STEPS[step]:
            continue
        if "k" in params and params["k"] > n - 1:
            continue
        tasks.append(CheckTask(check=step.value, n=n, params=params))
    return tasks


def _carlitz_tasks(config: RunConfig) -> List[CheckTask]:
    if (config.a is None) != (config.b is None):
        raise UsageError("carlitz needs both --a and --b, or neither for the default grid")
    params: Dict[str, object] = {}
    if config.a is not None:
        params = {"a": config.a, "b": config.b, "base_power": config.base_power or 1}
    return [
        CheckTask(check=CheckId.CARLITZ.value, n=n, params=params)
        for n in range(max(config.n_start, 0), config.n_end + 1)
    ]


def _classical_tasks(check: str, config: RunConfig) -> List[CheckTask]:
    return [
        CheckTask(check=check, n=p**config.r, power=config.power, params={"p": p, "r": config.r})
        for p in range(max(config.n_start, 3), config.n_end + 1)
        if is_prime(p)
    ]


def _q_to_1_tasks(config: RunConfig) -> List[CheckTask]:
    return [
        CheckTask(
            check=CheckId.Q_TO_1.value,
            n=p**config.r,
            power=config.power,
            params={"target": target, "p": p, "r": config.r},
        )
        for p in range(max(config.n_start, 3), config.n_end + 1)
        if is_prime(p) and p**config.r <= settings.Q_TO_1_MAX_MODULUS
        for target in settings.Q_TO_1_TARGETS
    ]


def expand_tasks(config: RunConfig) -> List[CheckTask]:
    """
    Turn a run configuration into the ordered task list.

    q-checks run on odd n in range, classical checks on the odd primes in
    range, Carlitz on every n; case steps skip n of the other residue mod 4.

    Raises:
        UsageError: For unknown names or a configuration that yields no tasks
    """
    unknown = [name for name in config.checks if name not in REGISTRY]
    if unknown:
        raise UsageError(f"unknown checks {unknown}; use --list to see the registered names")

    tasks: List[CheckTask] = []
    for name in config.checks:
        if name in (PROOF_CHAIN_S2, PROOF_CHAIN_S3):
            tasks += [CheckTask(check=name, n=n) for n in _odd(config)]
            continue
        check = CheckId(name)
        if check in SERIES_CHECKS:
            tasks += _series_tasks(check, config)
        elif check in STEPS:
            tasks += _step_tasks(check, config)
        elif check == CheckId.CARLITZ:
            tasks += _carlitz_tasks(config)
        elif check == CheckId.CARLITZ_SPECIALIZATION:
            params = {key: value for key, value in (("count", config.count), ("seed", config.seed)) if value is not None}
            tasks.append(CheckTask(check=name, n=config.n_end, params=params))
        elif check in CLASSICAL_CHECKS:
            tasks += _classical_tasks(name, config)
        else:
            tasks += _q_to_1_tasks(config)

    if not tasks:
        raise UsageError(f"checks {config.checks} have nothing to run for n in {config.n_start}..={config.n_end}")
    logger.info(f"Expanded {len(config.checks)} check names into {len(tasks)} tasks")
    return tasks
