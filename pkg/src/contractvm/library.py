"""
Registry of host-provided contract bodies
"""
from typing import Callable, Dict, List, Mapping, Optional

from .state import ContractFunction


class ContractLibrary:
    """Named contract bodies, each a set of functions with declared arity"""

    def __init__(self):
        self._bodies: Dict[str, Dict[str, ContractFunction]] = {}

    def function(self, body: str, name: str, arity: int) -> Callable:
        def register(fn: Callable[..., Optional[int]]) -> Callable[..., Optional[int]]:
            self._bodies.setdefault(body, {})[name] = ContractFunction(name=name, arity=arity, body=fn)
            return fn
        return register

    def functions(self, body: str) -> Mapping[str, ContractFunction]:
        if body not in self._bodies:
            raise KeyError(f"unknown contract body '{body}'")
        return self._bodies[body]

    def __contains__(self, body: str) -> bool:
        return body in self._bodies

    def names(self) -> List[str]:
        return sorted(self._bodies)


LIBRARY = ContractLibrary()
