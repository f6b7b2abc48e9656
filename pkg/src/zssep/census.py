"""Deterministic sweep over all supports of size at most rank + 1.

Workers are plain top-level functions ``worker(G, subset) -> result`` so they
can run in a process pool.  Results always come back in canonical subset
order, so reports do not depend on the number of workers.

With ``symmetric=True`` only one representative per orbit under the
coordinate-permuting automorphisms is evaluated.  Each entry then lists the
whole orbit together with the index permutation carrying the representative
onto each member; callers transport results along those permutations.
"""
from __future__ import annotations

import functools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Iterator

from .group import Group, GroupElement, coordinate_permutations, count_subsets_up_to_size, subsets_up_to_size

DEFAULT_BUDGET = 5_000_000

Subset = tuple[GroupElement, ...]


class BudgetExceeded(RuntimeError):
    """The census would visit more supports than the configured budget."""


@dataclass(frozen=True)
class CensusEntry:
    subset: Subset
    result: Any
    orbit: tuple[tuple[Subset, tuple[int, ...] | None], ...]

    @property
    def weight(self) -> int:
        return len(self.orbit)


def support_bound(G: Group) -> int:
    return min(G.rank + 1, G.order)


def census_size(G: Group) -> int:
    return count_subsets_up_to_size(G.order, support_bound(G))


def check_budget(G: Group, budget: int | None) -> None:
    if budget is None:
        return
    size = census_size(G)
    if size > budget:
        raise BudgetExceeded(
            f"census of {G} needs {size} supports, above the budget of {budget}; "
            "raise --budget or use beta-sep-formula for a closed form"
        )


def census_subsets(G: Group) -> Iterator[Subset]:
    return subsets_up_to_size(G, support_bound(G))


def map_element(G: Group, perm: tuple[int, ...] | None, g: GroupElement) -> GroupElement:
    if perm is None:
        return g
    return G.element_at(perm[G.index(g)])


def _image(G: Group, perm: tuple[int, ...], subset: Subset) -> Subset:
    return tuple(sorted(G.element_at(perm[G.index(g)]) for g in subset))


def _orbits(G: Group, subsets: list[Subset]):
    perms = coordinate_permutations(G)
    reps = []
    for S in subsets:
        images: dict[Subset, tuple[int, ...]] = {}
        for p in perms:
            images.setdefault(_image(G, p, S), p)
        if min(images) == S:
            reps.append((S, tuple(sorted(images.items()))))
    return reps


def sweep(
    G: Group,
    worker: Callable[[Group, Subset], Any],
    *,
    jobs: int = 1,
    symmetric: bool = False,
    budget: int | None = DEFAULT_BUDGET,
    subsets: list[Subset] | None = None,
) -> list[CensusEntry]:
    """Evaluate ``worker`` on every census support, in canonical order."""
    if subsets is None:
        check_budget(G, budget)
        subsets = list(census_subsets(G))
    if symmetric:
        reps = _orbits(G, subsets)
    else:
        reps = [(S, ((S, None),)) for S in subsets]
    todo = [S for S, _ in reps]
    fn = functools.partial(worker, G)
    if jobs > 1 and len(todo) > 1:
        chunk = max(1, len(todo) // (8 * jobs))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(fn, todo, chunksize=chunk))
    else:
        results = [fn(S) for S in todo]
    return [CensusEntry(S, res, orbit) for (S, orbit), res in zip(reps, results)]
