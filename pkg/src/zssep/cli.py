"""Command-line front end.

Every command produces an :class:`Output`: a JSON document, a table (column
names plus rows) and a few summary lines.  ``--format`` picks the rendering.
Outputs are cached whole, so a cache hit renders byte-identically.

Exit status: 0 on success, 1 on usage, parse or budget errors, 2 when a
formula or fixture check does not match.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import re
import sys
from dataclasses import asdict, dataclass, field

from . import __version__
from .cache import cache_from, request_key
from .census import DEFAULT_BUDGET, BudgetExceeded
from .fixtures import fixture_checks, non_transfer_fixture, redundant_sreg_fixture
from .formulas import beta_sep_closed_form, beta_sep_lower_bound
from .group import Group, GroupSpecError, d_star, format_element, parse_elements, parse_group
from .report import formula_checks
from .separating import (
    SubsetSizeError,
    atom_json,
    beta_sep,
    build_omega,
    build_sreg,
    check_inverse_rank2,
    check_support_conjecture,
    has_property_p,
    property_p,
    property_p_census,
    separating_atoms,
)
from .sequences import SupportContext, ZsSequence, davenport, enumerate_atoms, sigma
from .zerosumfree import max_zero_sum_free_length

FORMATS = ("table", "json", "csv")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class CliConfig:
    command: str
    groups: list[str]
    fmt: str = "table"
    cache_dir: str | None = None
    budget: int = DEFAULT_BUDGET
    jobs: int = 1
    fast_filters: bool = True
    symmetric: bool = False
    support: str | None = None
    subset: str | None = None

    def census_kw(self) -> dict:
        return {"jobs": self.jobs, "symmetric": self.symmetric, "budget": self.budget}


@dataclass
class Output:
    doc: dict
    columns: list[str] = field(default_factory=list)
    rows: list[list] = field(default_factory=list)
    summary: list[str] = field(default_factory=list)
    status: int = 0


# -- helpers -----------------------------------------------------------------------

def _support_text(support) -> str:
    return " ".join(format_element(g) for g in support)


def _mult_text(mult) -> str:
    return "(" + ",".join(str(m) for m in mult) + ")"


def _atom_row(A: ZsSequence) -> list:
    return [_support_text(A.context.support), _mult_text(A.mult), A.length, A.render_elements()]


ATOM_COLUMNS = ["support", "mult", "length", "sequence"]


def _one_group(cfg: CliConfig) -> Group:
    if len(cfg.groups) != 1:
        raise UsageError(f"{cfg.command} takes exactly one group")
    return parse_group(cfg.groups[0])


def _context(cfg: CliConfig, G: Group, text: str | None, flag: str) -> SupportContext:
    if not text:
        raise UsageError(f"{cfg.command} needs {flag}")
    return SupportContext(G, tuple(parse_elements(text, G)))


# -- commands ----------------------------------------------------------------------

def cmd_atoms(cfg: CliConfig) -> Output:
    G = _one_group(cfg)
    ctx = _context(cfg, G, cfg.support, "--support")
    atoms = enumerate_atoms(ctx)
    doc = {"group": str(G), "support": [list(g) for g in ctx.support], "atoms": [list(A.mult) for A in atoms]}
    rows = [[_mult_text(A.mult), A.length, A.render(), A.render_elements()] for A in atoms]
    return Output(doc, ["mult", "length", "monomial", "sequence"], rows, [f"{len(atoms)} atoms over {_support_text(ctx.support)} in {G}"])


def cmd_davenport(cfg: CliConfig) -> Output:
    G = _one_group(cfg)
    if cfg.support:
        ctx = _context(cfg, G, cfg.support, "--support")
        atoms = enumerate_atoms(ctx)
        value = max(A.length for A in atoms)
        witness = next(A for A in atoms if A.length == value)
    else:
        res = max_zero_sum_free_length(G)
        value = res.length + 1
        witness = ZsSequence.from_elements(G, list(res.witness) + [G.neg(G.combine([1] * res.length, res.witness))])
    doc = {"group": str(G), "davenport": value, "d_star": d_star(G), "witness": atom_json(witness)}
    return Output(doc, ATOM_COLUMNS, [_atom_row(witness)], [f"D = {value}, D* = {d_star(G)}"])


def cmd_sep_atoms(cfg: CliConfig) -> Output:
    G = _one_group(cfg)
    table = separating_atoms(_context(cfg, G, cfg.support, "--support"))
    rows = [[_mult_text(A.mult), A.length, A.render(), f] for A, f in zip(table.atoms, table.separating_flags)]
    doc = {
        "group": str(G),
        "support": [list(g) for g in table.context.support],
        "atoms": [{"mult": list(A.mult), "separating": f} for A, f in zip(table.atoms, table.separating_flags)],
        "max_separating_length": table.max_separating_length(),
    }
    return Output(doc, ["mult", "length", "monomial", "separating"], rows, [f"max separating length {table.max_separating_length()}"])


def cmd_beta_sep(cfg: CliConfig) -> Output:
    G = _one_group(cfg)
    res = beta_sep(G, **cfg.census_kw())
    return Output(res.to_json(), ATOM_COLUMNS, [_atom_row(A) for A in res.witnesses], [f"beta_sep({G}) = {res.value}"])


def cmd_beta_sep_formula(cfg: CliConfig) -> Output:
    G = _one_group(cfg)
    lower = beta_sep_lower_bound(G)
    closed = beta_sep_closed_form(G)
    doc = {"group": str(G), "lower_bound": lower, "closed_form": closed.to_json() if closed else None}
    rows = [["lower_bound", lower, ""]]
    if closed:
        rows.append(["closed_form", closed.value, closed.case])
    summary = [f"no closed form applies to {G}"] if closed is None else [f"beta_sep({G}) = {closed.value} ({closed.case})"]
    return Output(doc, ["quantity", "value", "case"], rows, summary)


def cmd_property_p(cfg: CliConfig) -> Output:
    G = _one_group(cfg)
    if not cfg.subset:
        raise UsageError("property-p needs --subset")
    subset = parse_elements(cfg.subset, G)
    verdict = property_p(subset, G, cfg.fast_filters)
    doc = verdict.to_json()
    doc["group"] = str(G)
    if verdict.method != "direct-lattice":
        doc["direct_holds"] = has_property_p(subset, G).holds
    rows = [[_support_text(verdict.subset), verdict.holds, verdict.method]]
    return Output(doc, ["subset", "holds", "method"], rows)


def cmd_min_sep_size(cfg: CliConfig) -> Output:
    G = _one_group(cfg)
    census = property_p_census(G, fast_filters=cfg.fast_filters, **cfg.census_kw())
    doc = {
        "group": str(G),
        "min_sep_size": census.total,
        "per_size": {str(k): v for k, v in census.per_size.items()},
        "methods": census.method_counts(),
    }
    rows = [[k, v] for k, v in census.per_size.items()]
    return Output(doc, ["size", "property_p_count"], rows, [f"min_sep_size({G}) = {census.total}"])


def cmd_build_omega(cfg: CliConfig) -> Output:
    G = _one_group(cfg)
    census = property_p_census(G, fast_filters=cfg.fast_filters, **cfg.census_kw())
    omega = build_omega(G, census)
    doc = {
        "group": str(G),
        "size": len(omega.atoms),
        "omega": [atom_json(A) for A in omega.atoms],
        "divisibility_findings": [f.to_json() for f in omega.findings],
    }
    summary = [f"{len(omega.atoms)} sequences; {len(omega.findings)} divisibility findings"]
    return Output(doc, ATOM_COLUMNS, [_atom_row(A) for A in omega.atoms], summary)


def cmd_sreg(cfg: CliConfig) -> Output:
    G = _one_group(cfg)
    sreg = build_sreg(G, **cfg.census_kw())
    longest = max(A.length for A in sreg)
    doc = {"group": str(G), "size": len(sreg), "max_length": longest, "sreg": [atom_json(A) for A in sreg]}
    return Output(doc, ATOM_COLUMNS, [_atom_row(A) for A in sreg], [f"{len(sreg)} sequences, max length {longest}"])


_RANGE = re.compile(r"^C(\d+)\.\.C?(\d+)$")


def expand_groups(specs: list[str]) -> list[Group]:
    """Group specs, where ``C2..C12`` expands to the cyclic groups in that range."""
    out = []
    for spec in specs:
        m = _RANGE.match(spec.strip())
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            if lo < 2 or hi < lo:
                raise UsageError(f"bad range {spec!r}")
            out += [Group((n,)) for n in range(lo, hi + 1)]
        else:
            out.append(parse_group(spec))
    return out


def cmd_verify_formulas(cfg: CliConfig) -> Output:
    if not cfg.groups:
        raise UsageError("verify-formulas needs at least one group or range")
    groups = expand_groups(cfg.groups)
    docs, rows = [], []
    ok = True
    for G in groups:
        beta = beta_sep(G, **cfg.census_kw())
        census = property_p_census(G, fast_filters=cfg.fast_filters, **cfg.census_kw())
        checks = formula_checks(G, beta.value, census.total)
        ok &= all(c.match for c in checks)
        docs.append(
            {
                "group": str(G),
                "beta_sep": beta.value,
                "min_sep_size": census.total,
                "formula_checks": {c.name: c.to_json() for c in checks},
            }
        )
        rows += [[str(G), c.name, c.formula, c.computed, c.relation, c.match] for c in checks]
    doc = {"groups": docs, "all_match": ok}
    columns = ["group", "check", "formula", "computed", "relation", "match"]
    return Output(doc, columns, rows, ["all checks match" if ok else "MISMATCH"], 0 if ok else 2)


def cmd_inverse_rank2(cfg: CliConfig) -> Output:
    G = _one_group(cfg)
    if G.rank != 2:
        raise UsageError(f"inverse-rank2 needs a rank-2 group, got {G}")
    rep = check_inverse_rank2(G, **cfg.census_kw())
    rows = [[_support_text(v["atom"]["support"]), v["orders"], "; ".join(v["problems"])] for v in rep.violations]
    summary = [f"{rep.checked} maximal atoms checked, {len(rep.violations)} violations"]
    return Output(rep.to_json(), ["support", "orders", "problems"], rows, summary)


def cmd_conjecture_supp(cfg: CliConfig) -> Output:
    G = _one_group(cfg)
    rep = check_support_conjecture(G, **cfg.census_kw())
    rows = [[_support_text(c["atom"]["support"]), c["support_size"], c["rendered"]] for c in rep.counterexamples]
    verdict = "holds" if rep.holds else f"COUNTEREXAMPLES: {len(rep.counterexamples)}"
    summary = [f"{rep.checked} maximal atoms, expected support size {rep.expected_support}: {verdict}"]
    return Output(rep.to_json(), ["support", "support_size", "sequence"], rows, summary)


def cmd_examples(cfg: CliConfig) -> Output:
    checks = fixture_checks()
    doc = {
        "non_transfer": _jsonable(non_transfer_fixture()),
        "redundant_sreg": _jsonable(redundant_sreg_fixture()),
        "checks": checks,
    }
    ok = all(checks.values())
    rows = [[name, passed] for name, passed in checks.items()]
    return Output(doc, ["check", "pass"], rows, ["all fixture checks pass" if ok else "FIXTURE MISMATCH"], 0 if ok else 2)


def _jsonable(obj):
    return json.loads(json.dumps(obj))


COMMANDS = {
    "atoms": cmd_atoms,
    "davenport": cmd_davenport,
    "sep-atoms": cmd_sep_atoms,
    "beta-sep": cmd_beta_sep,
    "beta-sep-formula": cmd_beta_sep_formula,
    "property-p": cmd_property_p,
    "min-sep-size": cmd_min_sep_size,
    "build-omega": cmd_build_omega,
    "sreg": cmd_sreg,
    "verify-formulas": cmd_verify_formulas,
    "inverse-rank2": cmd_inverse_rank2,
    "conjecture-supp": cmd_conjecture_supp,
    "examples": cmd_examples,
}


# -- parsing and rendering ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=FORMATS, default="table")
    common.add_argument("--cache-dir", default=None, help="cache directory (default: $ZSSEP_CACHE_DIR, else no cache)")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximum number of census supports")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for the census")
    common.add_argument("--no-fast-filters", dest="fast_filters", action="store_false")
    common.add_argument("--symmetry", dest="symmetric", action="store_true", help="census over coordinate-permutation orbits")
    common.add_argument("--support", default=None, help='support elements, e.g. "[1,1],[3,1]"')
    common.add_argument("--subset", default=None, help='subset elements, e.g. "[1,0],[0,1],[1,1]"')
    parser = _Parser(prog="zssep", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "verify-formulas":
            p.add_argument("groups", nargs="+")
        elif name != "examples":
            p.add_argument("groups", nargs=1)
    return parser


def parse_config(argv: list[str]) -> CliConfig:
    ns = build_parser().parse_args(argv)
    if ns.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    if ns.budget < 1:
        raise UsageError("--budget must be >= 1")
    return CliConfig(
        command=ns.command,
        groups=list(getattr(ns, "groups", []) or []),
        fmt=ns.fmt,
        cache_dir=ns.cache_dir,
        budget=ns.budget,
        jobs=ns.jobs,
        fast_filters=ns.fast_filters,
        symmetric=ns.symmetric,
        support=ns.support,
        subset=ns.subset,
    )


def render(out: Output, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(out.doc, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(out.columns)
        w.writerows(out.rows)
        return buf.getvalue()
    lines = list(out.summary)
    if out.columns:
        cells = [out.columns] + [[str(c) for c in row] for row in out.rows]
        widths = [max(len(r[i]) for r in cells) for i in range(len(out.columns))]
        for row in cells:
            lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def _cache_params(cfg: CliConfig) -> dict:
    # jobs never changes results, so it is not part of the key
    return {
        "fast_filters": cfg.fast_filters,
        "symmetric": cfg.symmetric,
        "budget": cfg.budget,
        "support": cfg.support,
        "subset": cfg.subset,
    }


def run(argv: list[str], stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg = parse_config(argv)
        cache = cache_from(cfg.cache_dir)
        key = request_key(cfg.command, "|".join(cfg.groups), _cache_params(cfg))
        stored = cache.get(key) if cache else None
        if stored is not None:
            out = Output(**stored)
        else:
            out = COMMANDS[cfg.command](cfg)
            out = Output(**_jsonable(asdict(out)))
            if cache:
                cache.put(key, asdict(out))
    except (UsageError, GroupSpecError, SubsetSizeError, BudgetExceeded, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    stdout.write(render(out, cfg.fmt))
    return out.status


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
