import zlib
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

import numpy as np

from ..utils.circuit import QpeInstance
from ..utils.configuration import RunConfig, Tolerances
from ..utils.instances import PhaseKind, diagonal_instance, phase_grid, random_instance
from ..utils.linalg import MAX_QUBITS
from ..utils.phase import Phase


@dataclass(frozen=True)
class CheckContext:
    """What a check runner gets: the run config and a seed derived for its node."""

    config: RunConfig
    seed: int
    base_seed: int = 0

    @staticmethod
    def for_node(config: RunConfig, base_seed: int, name: str) -> "CheckContext":
        # the node name keys the stream so results do not depend on scheduling
        sequence = np.random.SeedSequence([base_seed, zlib.crc32(name.encode("utf-8"))])
        return CheckContext(config=config, seed=int(sequence.generate_state(1)[0]), base_seed=base_seed)

    @property
    def tol(self) -> Tolerances:
        return self.config.tolerances

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def t_values(self, lowest: int = 1, highest: Optional[int] = None) -> range:
        top = self.config.t_max if highest is None else min(highest, self.config.t_max)
        return range(lowest, top + 1)

    def formula_t_values(self, lowest: int = 1, highest: Optional[int] = None) -> range:
        top = self.config.formula_t_max if highest is None else min(highest, self.config.formula_t_max)
        return range(lowest, top + 1)

    def phases(self, t: int, kind: Optional[PhaseKind] = None) -> List[Phase]:
        kinds = [kind] if kind is not None else [PhaseKind.from_label(label) for label in self.config.phase_kinds]
        seen, phases = set(), []
        for k in kinds:
            for phase in phase_grid(t, k):
                if phase not in seen:
                    seen.add(phase)
                    phases.append(phase)
        return phases

    def instances(self, t: int, phases: List[Phase], diagonal_only: bool = False) -> Iterator[Tuple[dict, QpeInstance]]:
        """Diagonal and seeded random instances for every s and phase, in a fixed order."""
        for s in self.config.s_values:
            if t + s > MAX_QUBITS:
                continue
            for index, phase in enumerate(phases):
                yield dict(t=t, s=s, phi=phase, kind="diagonal"), diagonal_instance(s, phase, t=t)
                if diagonal_only:
                    continue
                for draw in range(self.config.random_instances):
                    seed = self.instance_seed(t, s, index, draw)
                    yield dict(t=t, s=s, phi=phase, kind="random", seed=seed), random_instance(s, phase, seed, t=t)

    def instance_seed(self, t: int, s: int, index: int, draw: int) -> int:
        sequence = np.random.SeedSequence([self.base_seed, t, s, index, draw])
        return int(sequence.generate_state(1)[0])
