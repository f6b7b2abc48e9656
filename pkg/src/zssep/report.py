"""The per-group result bundle and its formula cross-checks."""
from __future__ import annotations

from dataclasses import dataclass

from .census import DEFAULT_BUDGET
from .formulas import beta_sep_closed_form, beta_sep_lower_bound, cyclic_min, lambda1, lambda2, lambda3, mu
from .group import Group, is_prime_power, prime_factors
from .separating import (
    BetaSepResult,
    OmegaResult,
    PropertyPCensus,
    atom_json,
    beta_sep,
    build_omega,
    build_sreg,
    property_p_census,
)
from .sequences import ZsSequence


@dataclass(frozen=True)
class FormulaCheck:
    name: str
    formula: int
    computed: int
    relation: str  # how formula relates to computed: "==", "<=" or ">="

    @property
    def match(self) -> bool:
        if self.relation == "==":
            return self.formula == self.computed
        if self.relation == "<=":
            return self.formula <= self.computed
        return self.formula >= self.computed

    def to_json(self) -> dict:
        return {"formula": self.formula, "computed": self.computed, "relation": self.relation, "match": self.match}


def _prime_power(n: int) -> tuple[int, int] | None:
    if not is_prime_power(n):
        return None
    p = prime_factors(n)[0]
    k = 0
    while n > 1:
        n //= p
        k += 1
    return p, k


def formula_checks(G: Group, beta: int, min_size: int) -> list[FormulaCheck]:
    """Every closed form or bound that applies to G, against the census values."""
    n = G.invariant_factors
    r = G.rank
    checks = [FormulaCheck("beta_sep_lower_bound", beta_sep_lower_bound(G), beta, "<=")]
    closed = beta_sep_closed_form(G)
    if closed is not None:
        checks.append(FormulaCheck(f"beta_sep_closed_form[{closed.case}]", closed.value, beta, "=="))
    if r == 1:
        checks.append(FormulaCheck("cyclic_min", cyclic_min(n[0]), min_size, "=="))
    pk = _prime_power(n[-1])
    if pk is not None:
        p, k = pk
        if n[0] == n[-1]:
            if k == 1 and r >= 2:
                checks.append(FormulaCheck("lambda1", lambda1(p, r), min_size, "=="))
            checks.append(FormulaCheck("lambda2", lambda2(p, k, r), min_size, "<="))
        elif r == 2:
            k1 = _prime_power(n[0])[1]
            if p**k1 >= 3:
                checks.append(FormulaCheck("lambda3", lambda3(p, k1, k), min_size, "<="))
    checks.append(FormulaCheck("mu", mu(G.order, r), min_size, ">="))
    return checks


@dataclass(frozen=True)
class SepReport:
    group: Group
    beta: BetaSepResult
    census: PropertyPCensus
    omega: OmegaResult
    sreg: tuple[ZsSequence, ...]
    checks: tuple[FormulaCheck, ...]

    @property
    def beta_sep(self) -> int:
        return self.beta.value

    @property
    def min_sep_size(self) -> int:
        return self.census.total

    @property
    def all_match(self) -> bool:
        return all(c.match for c in self.checks)

    def to_json(self) -> dict:
        return {
            "group": str(self.group),
            "invariant_factors": list(self.group.invariant_factors),
            "beta_sep": self.beta.value,
            "beta_sep_witnesses": [atom_json(A) for A in self.beta.witnesses],
            "min_sep_size": self.census.total,
            "property_p_census": {str(k): v for k, v in self.census.per_size.items()},
            "property_p_methods": self.census.method_counts(),
            "omega_set": [atom_json(A) for A in self.omega.atoms],
            "divisibility_findings": [f.to_json() for f in self.omega.findings],
            "sreg": [atom_json(A) for A in self.sreg],
            "formula_checks": {c.name: c.to_json() for c in self.checks},
        }


def build_report(
    G: Group,
    *,
    fast_filters: bool = True,
    jobs: int = 1,
    symmetric: bool = False,
    budget: int | None = DEFAULT_BUDGET,
) -> SepReport:
    kw = dict(jobs=jobs, symmetric=symmetric, budget=budget)
    beta = beta_sep(G, **kw)
    census = property_p_census(G, fast_filters=fast_filters, **kw)
    omega = build_omega(G, census)
    sreg = build_sreg(G, **kw)
    if len(omega.atoms) != census.total:
        raise AssertionError("omega size differs from the Property (P) count")
    checks = formula_checks(G, beta.value, census.total)
    return SepReport(G, beta, census, omega, tuple(sreg), tuple(checks))
