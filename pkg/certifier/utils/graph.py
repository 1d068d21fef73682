import logging
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Iterable, List, Optional, Set, Tuple

logger = logging.getLogger(__name__)


class GraphError(Exception):
    pass


@dataclass(frozen=True)
class CheckNode:
    name: str
    prerequisites: Tuple[str, ...]
    runner: Callable
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "prerequisites", tuple(self.prerequisites))


@dataclass(frozen=True)
class CheckGraph:
    """Named checks with prerequisite edges; acyclic unless built with validate=False."""

    nodes: Tuple[CheckNode, ...]
    validate: bool = True

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        if self.validate:
            self.topological_order()

    @property
    def names(self) -> List[str]:
        return [node.name for node in self.nodes]

    def node(self, name: str) -> CheckNode:
        for node in self.nodes:
            if node.name == name:
                return node
        raise GraphError(f"no check named {name!r}")

    def __contains__(self, name: str) -> bool:
        return any(node.name == name for node in self.nodes)

    def __len__(self) -> int:
        return len(self.nodes)

    def topological_order(self) -> List[str]:
        """Kahn's algorithm, ties broken by declaration order."""
        names = self.names
        if len(set(names)) != len(names):
            duplicates = sorted({name for name in names if names.count(name) > 1})
            raise GraphError(f"duplicate check names: {', '.join(duplicates)}")

        known = set(names)
        in_degree: Dict[str, int] = {name: 0 for name in names}
        dependents: Dict[str, List[str]] = {name: [] for name in names}

        for node in self.nodes:
            for prerequisite in node.prerequisites:
                if prerequisite not in known:
                    raise GraphError(f"{node.name} depends on unknown check {prerequisite!r}")
                in_degree[node.name] += 1
                dependents[prerequisite].append(node.name)

        queue = deque(name for name in names if in_degree[name] == 0)
        order = []

        while queue:
            name = queue.popleft()
            order.append(name)
            for dependent in dependents[name]:
                in_degree[dependent] -= 1
                if in_degree[dependent] == 0:
                    queue.append(dependent)

        if len(order) != len(names):
            stuck = sorted(name for name in names if in_degree[name] > 0)
            raise GraphError(f"prerequisite cycle through: {', '.join(stuck)}")

        return order

    def prerequisite_closure(self, names: Iterable[str]) -> Set[str]:
        pending = list(names)
        closure: Set[str] = set()
        while pending:
            name = pending.pop()
            if name in closure:
                continue
            closure.add(name)
            pending.extend(self.node(name).prerequisites)
        return closure

    def dependent_closure(self, names: Iterable[str]) -> Set[str]:
        closure = set(names)
        for name in closure:
            self.node(name)
        changed = True
        while changed:
            changed = False
            for node in self.nodes:
                if node.name not in closure and closure.intersection(node.prerequisites):
                    closure.add(node.name)
                    changed = True
        return closure

    def restricted(self, include: Optional[Iterable[str]] = None, exclude: Optional[Iterable[str]] = None) -> "CheckGraph":
        """Keeps the included checks with their prerequisites, then drops excluded ones and their dependents."""
        keep = set(self.names)
        if include:
            keep = self.prerequisite_closure(include)
        if exclude:
            dropped = self.dependent_closure(exclude)
            if dropped - set(exclude):
                logger.info("excluding dependents as well: %s", ", ".join(sorted(dropped - set(exclude))))
            keep -= dropped
        return CheckGraph(tuple(node for node in self.nodes if node.name in keep), self.validate)

    def with_runner(self, name: str, runner: Callable) -> "CheckGraph":
        self.node(name)
        nodes = tuple(replace(node, runner=runner) if node.name == name else node for node in self.nodes)
        return CheckGraph(nodes, self.validate)

    def with_edge(self, name: str, prerequisite: str, validate: Optional[bool] = None) -> "CheckGraph":
        self.node(name)
        nodes = tuple(
            replace(node, prerequisites=node.prerequisites + (prerequisite,)) if node.name == name else node
            for node in self.nodes
        )
        return CheckGraph(nodes, self.validate if validate is None else validate)
