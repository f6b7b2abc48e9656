"""Closed forms for the separating Noether number and for minimal separating-set sizes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .group import (
    Group,
    coprime_split_count,
    d_star,
    divisors,
    euler_phi,
    is_prime_power,
    least_prime_divisor,
    prime_factors,
    scaled_group_factors,
)

# groups up to this order get their Davenport constant from the exact search
DIRECT_DAVENPORT_MAX_ORDER = 64


def _require_prime(p: int) -> None:
    if p < 2 or prime_factors(p) != [p]:
        raise ValueError(f"{p} is not prime")


def cyclic_min(n: int) -> int:
    """Minimal monomial separating-set size for the cyclic group of order n."""
    if n < 2:
        raise ValueError("cyclic_min needs n >= 2")
    coprime_pairs = sum(coprime_split_count(d) * euler_phi(d) for d in divisors(n) if d > 1)
    return n + math.comb(n, 2) - coprime_pairs


def lambda1(p: int, r: int) -> int:
    """Exact minimal separating-set size for the elementary abelian group C_p^r."""
    _require_prime(p)
    if r < 2:
        raise ValueError("lambda1 needs r >= 2")
    q = p**r
    total = q + (q - 1) * (p - 2) // 2
    for i in range(3, r + 2):
        num = math.prod(q - p**j for j in range(0, i - 1)) * (p - 1) ** (i - 1)
        total += num // math.factorial(i)
    return total


def lambda2(p: int, k: int, r: int) -> int:
    """Lower bound for the minimal separating-set size of C_{p^k}^r.

    The pair term counts, for each of the (p^r-1)/(p-1) subgroups of order p,
    the elements whose cyclic group contains it: (p^{kr}-1)(p-1)/(p^r-1) each.
    """
    _require_prime(p)
    if k < 1 or r < 1:
        raise ValueError("lambda2 needs k >= 1 and r >= 1")
    order = p ** (k * r)
    subgroups = (p**r - 1) // (p - 1)
    per_subgroup = (order - 1) * (p - 1) // (p**r - 1)
    total = order + subgroups * math.comb(per_subgroup, 2)
    top = order - p ** ((k - 1) * r)
    for i in range(3, r + 2):
        choices_last = (p**k - 1) ** (i - 1) - (p ** (k - 1) - 1) ** (i - 1)
        chain = math.prod(top - (p ** (k * (j - 1)) - p ** ((k - 1) * (j - 1))) for j in range(1, i))
        total += choices_last * chain // math.factorial(i)
    return total


def lambda3(p: int, k1: int, k2: int) -> int:
    """Lower bound for the minimal separating-set size of C_{p^k1} + C_{p^k2}."""
    _require_prime(p)
    if not 1 <= k1 < k2 or p**k1 < 3:
        raise ValueError("lambda3 needs 1 <= k1 < k2 and p^k1 >= 3")
    top = p ** (k1 + k2) - p ** (k1 + k2 - 1)
    step = p**k2 - p ** (k2 - 1)
    return p ** (k1 + k2) + math.comb(top, 2) + top * (top - step) * (top - 2 * step) // 6


def mu(group_order: int, r: int) -> int:
    """Number of supports of size 1..r+1: the trivial upper bound."""
    if r < 1:
        raise ValueError("mu needs r >= 1")
    return sum(math.comb(group_order, i) for i in range(1, r + 2))


# -- separating Noether number -----------------------------------------------------

def beta_sep_lower_bound(G: Group) -> int:
    n = G.invariant_factors
    r = G.rank
    s = (r + 1) // 2
    tail = sum(n[s:])
    if r % 2:
        return n[s - 1] + tail
    return n[s - 1] // least_prime_divisor(n[0]) + tail


def davenport_equals_dstar(factors: tuple[int, ...]) -> tuple[bool | None, str]:
    """Is D(H) = D*(H) for the group H with these invariant factors?

    Small groups are decided by the exact search; larger ones only when a
    classical theorem covers them (rank <= 2, p-groups).
    """
    if not factors:
        return True, "trivial"
    H = Group(factors)
    if H.order <= DIRECT_DAVENPORT_MAX_ORDER:
        from .sequences import davenport_group

        return davenport_group(H) == d_star(H), "search"
    if H.rank <= 2:
        return True, "rank<=2"
    if is_prime_power(H.exponent):
        return True, "p-group"
    return None, "unknown"


@dataclass(frozen=True)
class ClosedForm:
    value: int
    case: str
    hypotheses: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"value": self.value, "case": self.case, "hypotheses": self.hypotheses}


def beta_sep_closed_form(G: Group) -> ClosedForm | None:
    """The exact value when a known theorem applies, else None.

    Cases, in order: cyclic groups; rank 4; odd rank with equal invariant
    factors or D(n_s G) = D*(n_s G); even rank with equal factors; even rank
    with D(n_i G) = D*(n_i G) for every i >= s.  In each case the value
    coincides with :func:`beta_sep_lower_bound`.
    """
    n = G.invariant_factors
    r = G.rank
    s = (r + 1) // 2
    value = beta_sep_lower_bound(G)
    if r == 1:
        return ClosedForm(value, "cyclic")
    if r == 4:
        return ClosedForm(value, "rank-four")
    if r % 2:
        if n[0] == n[-1]:
            return ClosedForm(value, "odd-rank", {"equal_factors": True})
        scaled = scaled_group_factors(G, n[s - 1])
        ok, source = davenport_equals_dstar(scaled)
        hyp = {"scaled_by": n[s - 1], "factors": list(scaled), "davenport_is_dstar": ok, "source": source}
        return ClosedForm(value, "odd-rank", hyp) if ok else None
    if n[0] == n[-1]:
        return ClosedForm(value, "equal-factors")
    checks = []
    for i in range(s, r + 1):
        scaled = scaled_group_factors(G, n[i - 1])
        ok, source = davenport_equals_dstar(scaled)
        checks.append({"scaled_by": n[i - 1], "factors": list(scaled), "davenport_is_dstar": ok, "source": source})
        if not ok:
            return None
    return ClosedForm(value, "even-rank", {"scaled": checks})
