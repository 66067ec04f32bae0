"""Command-line front end.

Exit codes: 0 when a result was computed (whatever the verdict), 2 on invalid
input, 3 when a resource cap stops the computation.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from . import __version__
from .adequacy import (
    COND3_BUDGET,
    PreconditionError,
    StreamTooLarge,
    adequacy_report,
    q2_screen,
)
from .cache import active_cache
from .catalog import NAMED, cohomology_groups, int_matrix, matrix_group, named_case
from .cohomology import CohomologyBudgetExceeded, h1_dimension, h1_trivial_module_oracle
from .constructions import (
    ConstructionError,
    NoWitness,
    a4_subgroup_psl2,
    build_example1,
    build_taylor_example,
    build_wreath_example,
    dihedral_subgroup_psl2,
    make_certificate,
    psl2,
    psl2_family_scan,
    scan_coset_witness,
    witness_listing,
)
from .fieldarith import FieldError, field_create, is_prime, splitting_degree
from .groups import (
    DEFAULT_CAP,
    FiniteGroup,
    GroupError,
    GroupTooLarge,
    Permutations,
    SearchBudgetExceeded,
    count_p_regular,
    enumerate_group,
    find_p_complement,
    is_p_solvable,
    subgroup,
    sylow_subgroup,
    trivial_subgroup,
    upper_p_series,
)
from .linalg import LinalgError, Matrix
from .modrep import RepresentationError, adjoint_rep, restrict_rep, rep_from_generator_images, trivial_rep

SCENARIO_KEYS = {"kind", "p", "r", "a", "q", "q_max", "H_gens", "seed", "cap"}
KINDS = {"example1", "wreath", "taylor_odd", "taylor_even", "psl2_scan", "custom"}
EXIT_OK, EXIT_INVALID, EXIT_CAP = 0, 2, 3


class InvalidInput(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column


@dataclass
class RunConfig:
    subcommand: str
    scenario_path: str | None = None
    scenario: dict | None = None
    group: str | None = None
    p: int | None = None
    format: str = "json"
    seed: int = 0
    max_group_order: int = DEFAULT_CAP
    cache_dir: str | None = None
    threads: int = 1
    q_max: int = 200
    count: int | None = None
    dims: list[int] = field(default_factory=list)
    groups: list[str] = field(default_factory=list)
    cond3_budget: int = COND3_BUDGET


# --------------------------------------------------------------------------
# scenario files


def _key_position(text: str, key: str) -> tuple[int | None, int | None]:
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    if not m:
        return None, None
    line = text.count("\n", 0, m.start()) + 1
    col = m.start() - (text.rfind("\n", 0, m.start()) + 1) + 1
    return line, col


def parse_scenario(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise InvalidInput("scenario must be a JSON object", 1, 1)
    for key in data:
        if key not in SCENARIO_KEYS:
            raise InvalidInput(f"unknown key {key!r}", *_key_position(text, key))

    def need(key: str, kind=int):
        if key not in data:
            raise InvalidInput(f"kind {data.get('kind')!r} requires {key!r}")
        if kind is int and (not isinstance(data[key], int) or isinstance(data[key], bool)):
            raise InvalidInput(f"{key!r} must be an integer", *_key_position(text, key))

    if "kind" not in data:
        raise InvalidInput("missing 'kind'", 1, 1)
    kind = data["kind"]
    if kind not in KINDS:
        raise InvalidInput(f"kind must be one of {sorted(KINDS)}", *_key_position(text, "kind"))
    for key in ("p", "r", "a", "q", "q_max", "seed", "cap"):
        if key in data:
            need(key)
    for key in ("p", "r", "q"):
        if key in data and not is_prime(data[key]):
            raise InvalidInput(f"{key!r} must be prime", *_key_position(text, key))
    if "H_gens" in data:
        gens = data["H_gens"]
        ok = isinstance(gens, list) and gens and all(
            isinstance(m, list) and m and all(isinstance(row, list) and len(row) == len(m) for row in m) for m in gens
        )
        ok = ok and len({len(m) for m in gens}) == 1
        ok = ok and all(isinstance(v, int) and not isinstance(v, bool) for m in gens for row in m for v in row)
        if not ok:
            raise InvalidInput("'H_gens' must be a nonempty list of square integer matrices of one size", *_key_position(text, "H_gens"))

    if kind == "example1":
        for key in ("p", "r", "a", "H_gens"):
            need(key, int if key != "H_gens" else list)
        if len(data["H_gens"][0]) != data["a"]:
            raise InvalidInput("'H_gens' matrices must be a x a", *_key_position(text, "H_gens"))
    elif kind == "wreath":
        need("p")
    elif kind == "taylor_even":
        if data.get("p", 2) != 2:
            raise InvalidInput("taylor_even requires p = 2", *_key_position(text, "p"))
    elif kind == "taylor_odd":
        need("p")
        if data["p"] == 2:
            raise InvalidInput("taylor_odd requires an odd prime", *_key_position(text, "p"))
    elif kind == "psl2_scan":
        need("p")
    elif kind == "custom":
        need("p")
        need("H_gens", list)
    return data


def load_scenario(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read scenario: {exc.strerror}") from None
    return parse_scenario(text)


# --------------------------------------------------------------------------
# group and module resolution


def _cap(cfg: RunConfig) -> int:
    if cfg.scenario and "cap" in cfg.scenario:
        return min(cfg.scenario["cap"], cfg.max_group_order)
    return cfg.max_group_order


def _p(cfg: RunConfig, default: int | None = None) -> int:
    p = cfg.p if cfg.p is not None else (cfg.scenario or {}).get("p", default)
    if p is None:
        raise InvalidInput("a prime p is required (--p or scenario 'p')")
    if not is_prime(p):
        raise InvalidInput(f"p = {p} is not prime")
    return p


def _custom_group(sc: dict, p: int, cap: int):
    r = sc.get("r", p)
    Fr = field_create(r)
    gens = [int_matrix(Fr, m) for m in sc["H_gens"]]
    for a in gens:
        if Matrix(Fr, a).rank() < a.shape[0]:
            raise InvalidInput("'H_gens' contains a singular matrix")
    from .groups import MatrixDomain

    D = MatrixDomain(Fr, gens[0].shape[0])
    G = enumerate_group(D, [D.from_array(a) for a in gens], cap=cap, name="H")
    if r == p:
        V = rep_from_generator_images(G, [Matrix(Fr, a) for a in gens], name="natural")
    else:
        V = trivial_rep(G, field_create(p))
    return G, V


def _named_group(name: str, cap: int) -> FiniteGroup:
    m = re.fullmatch(r"L2\((\d+)\)", name)
    if m:
        return psl2(int(m.group(1)), cap)
    for G, _ in cohomology_groups():
        if G.name == name:
            return G
    if name in NAMED:
        return named_case(name).group
    raise InvalidInput(f"unknown group {name!r}")


def _wreath(sc: dict, p: int, cap: int):
    """L = C_r (r default 2) as permutations, T = S_3, T1 = trivial; W a faithful character of L."""
    r = sc.get("r", 2)
    if r == p:
        raise InvalidInput("wreath needs |L| = r prime to p")
    L = enumerate_group(Permutations(r), [tuple((i + 1) % r for i in range(r))], name=f"C{r}")
    k = field_create(p, splitting_degree(p, r))
    W = rep_from_generator_images(L, [Matrix(k, [[k.root_of_unity(r)]])], name="W")
    S = Permutations(3)
    T = enumerate_group(S, [S.from_cycles((0, 1, 2)), S.from_cycles((0, 1))], name="S3")
    return build_wreath_example(L, W, T, trivial_subgroup(T), p, cap=cap)


def resolve_module(cfg: RunConfig):
    """(G, V, p, inducing subgroup or None, extra report fields)."""
    cap = _cap(cfg)
    if cfg.group is not None:
        if cfg.group not in NAMED:
            raise InvalidInput(f"unknown catalog entry {cfg.group!r}; known: {', '.join(sorted(NAMED))}")
        case = named_case(cfg.group)
        p = _p(cfg, case.p)
        if p != case.rep.field.p:
            raise InvalidInput(f"catalog entry {cfg.group} is defined in characteristic {case.rep.field.p}")
        return case.group, case.rep, p, None, {"module": case.name}
    sc = cfg.scenario
    if sc is None:
        raise InvalidInput("--scenario or --group is required")
    kind = sc["kind"]
    p = _p(cfg)
    if kind == "example1":
        ex = build_example1(sc["r"], sc["a"], sc["H_gens"], p, cap=cap)
        extra = {"character": list(ex.character), "orbit_sizes": ex.orbit_sizes, "certificate": ex.certificate.to_json()}
        return ex.group, ex.rep, p, ex.A, extra
    if kind == "wreath":
        res = _wreath(sc, p, cap)
        if res.rep is None:
            raise InvalidInput("wreath scenario is beyond the explicit range; use construct")
        return res.group, res.rep, p, res.K, {"m": res.m, "certificate": res.certificate.to_json()}
    if kind == "custom":
        G, V = _custom_group(sc, p, cap)
        return G, V, p, None, {"module": "natural" if sc.get("r", p) == p else "trivial"}
    raise InvalidInput(f"kind {kind!r} has no explicit module; use construct")


# --------------------------------------------------------------------------
# subcommands


def cmd_analyze(cfg: RunConfig) -> dict:
    G, V, p, K, extra = resolve_module(cfg)
    report = adequacy_report(V, p, inducing_subgroup=K, cond3_budget=cfg.cond3_budget).to_json()
    out: dict[str, Any] = {"report": report}
    out.update(extra)
    if G.order <= 10_000:
        solvable = is_p_solvable(G, p)
        out["p_solvable"] = solvable
        if solvable and G.order % p == 0:
            comp = find_p_complement(G, p, seed=cfg.seed)
            R = restrict_rep(V, comp.subgroup)
            from .adequacy import is_absolutely_irreducible, is_weakly_adequate

            irr = is_absolutely_irreducible(R)
            out["p_complement"] = {
                **comp.certificate(),
                "restriction_absolutely_irreducible": irr,
                "restriction_span_rank": is_weakly_adequate(R, p, check_irreducible=False).rank,
            }
    return out


def _coset_result(T: FiniteGroup, T1: FiniteGroup, p: int, threads: int) -> dict:
    out: dict[str, Any] = {"T": T.name, "T_order": T.order, "T1": T1.name, "T1_order": T1.order, "p": p}
    if T.order % p:
        out.update(status="absent", reason=f"p = {p} does not divide |T| = {T.order}: every element is p-regular")
        return out
    x = scan_coset_witness(T, T1, p, threads=threads)
    if x is None:
        out.update(status="absent", reason=f"every coset of {T1.name} contains a p-regular element")
        return out
    cert = make_certificate(T, T1, x, p)
    out.update(status="witness", witness=cert.witness, members=witness_listing(T, T1, x), certificate=cert.to_json())
    return out


def cmd_coset_search(cfg: RunConfig) -> dict:
    sc = cfg.scenario
    if sc is None:
        raise InvalidInput("--scenario is required")
    cap = _cap(cfg)
    kind = sc["kind"]
    if kind == "taylor_even":
        T = psl2(sc.get("q", 137), cap)
        return _coset_result(T, a4_subgroup_psl2(T), 2, cfg.threads)
    if kind == "taylor_odd":
        if "q" not in sc:
            raise InvalidInput("coset-search on taylor_odd needs 'q'")
        p = _p(cfg)
        T = psl2(sc["q"], cap)
        try:
            T1 = dihedral_subgroup_psl2(T, p)
        except (ConstructionError, GroupError) as exc:
            raise InvalidInput(str(exc)) from None
        return _coset_result(T, T1, p, cfg.threads)
    if kind == "custom":
        p = _p(cfg)
        T, _ = _custom_group(sc, p, cap)
        if "a" in sc:
            T1 = subgroup(T, T.gen_indices[: sc["a"]], name=f"<first {sc['a']} generators>")
        elif T.order % p:
            T1 = trivial_subgroup(T)
        else:
            T1 = sylow_subgroup(T, p)
        return _coset_result(T, T1, p, cfg.threads)
    if kind == "example1":
        p = _p(cfg)
        ex = build_example1(sc["r"], sc["a"], sc["H_gens"], p, cap=cap)
        return _coset_result(ex.group, ex.A, p, cfg.threads)
    raise InvalidInput(f"coset-search does not accept kind {kind!r}")


def cmd_h1(cfg: RunConfig) -> dict:
    G, V, p, _, extra = resolve_module(cfg)
    k = field_create(p)
    out: dict[str, Any] = {
        "group_order": G.order,
        "p": p,
        "h1_trivial": h1_dimension(G, trivial_rep(G, k)),
        "h1_trivial_oracle": h1_trivial_module_oracle(G, p),
        "module_dim": V.dim,
        "h1_module": h1_dimension(G, V),
    }
    try:
        out["h1_adjoint"] = h1_dimension(G, adjoint_rep(V), budget=cfg.cond3_budget)
    except CohomologyBudgetExceeded as exc:
        out["h1_adjoint"] = None
        out["skips"] = [f"adjoint: {exc}"]
    out.update({k2: v for k2, v in extra.items() if k2 == "module"})
    return out


def cmd_census(cfg: RunConfig) -> dict:
    p = _p(cfg)
    dims = sorted(set(cfg.dims)) or [1, 2, 3, 4]
    rows = []
    if cfg.count is not None:
        rows.append({"name": "literal", "order": None, "p_regular": cfg.count, "flags": {str(d): q2_screen(cfg.count, d) for d in dims}})
    for name in cfg.groups:
        G = _named_group(name, _cap(cfg))
        c = count_p_regular(G, p)
        rows.append({"name": name, "order": G.order, "p_regular": c, "flags": {str(d): q2_screen(c, d) for d in dims}})
    if not rows:
        raise InvalidInput("census needs --count or at least one --group")
    return {"p": p, "dims": dims, "rows": rows}


def cmd_construct(cfg: RunConfig) -> dict:
    sc = cfg.scenario
    if sc is None:
        raise InvalidInput("--scenario is required")
    cap = _cap(cfg)
    kind = sc["kind"]
    if kind == "example1":
        p = _p(cfg)
        ex = build_example1(sc["r"], sc["a"], sc["H_gens"], p, cap=cap)
        return {
            "group_order": ex.group.order,
            "A_order": ex.A.order,
            "H_order": ex.H.order,
            "dim": ex.rep.dim,
            "field": str(ex.field.q),
            "character": list(ex.character),
            "orbit_sizes": {str(k): v for k, v in ex.orbit_sizes.items()},
            "obstructions": [ex.group.domain.encode(ex.group.elements[i]).hex() for i in ex.obstructions],
            "certificate": ex.certificate.to_json(),
        }
    if kind == "wreath":
        return _wreath(sc, _p(cfg), cap).to_json()
    if kind == "taylor_even":
        return build_taylor_example(2, sc.get("q_max", cfg.q_max), cap=cap, threads=cfg.threads)
    if kind == "taylor_odd":
        return build_taylor_example(_p(cfg), sc.get("q_max", cfg.q_max), cap=cap, threads=cfg.threads)
    if kind == "psl2_scan":
        return psl2_family_scan(_p(cfg), sc.get("q_max", cfg.q_max), cap=cap, threads=cfg.threads)
    p = _p(cfg)
    G, V = _custom_group(sc, p, cap)
    return {
        "group_order": G.order,
        "order_profile": {str(k): v for k, v in G.order_profile().items()},
        "module_dim": V.dim,
        "p_solvable": is_p_solvable(G, p),
        "upper_p_series": [list(t) for t in upper_p_series(G, p)],
    }


def cmd_scan_psl2(cfg: RunConfig) -> dict:
    return psl2_family_scan(_p(cfg), cfg.q_max, cap=cfg.max_group_order, threads=cfg.threads)


COMMANDS = {
    "analyze": cmd_analyze,
    "construct": cmd_construct,
    "coset-search": cmd_coset_search,
    "h1": cmd_h1,
    "census": cmd_census,
    "scan-psl2": cmd_scan_psl2,
}


# --------------------------------------------------------------------------
# rendering


def render_text(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(v)}")
    else:
        lines.append(f"{pad}{json.dumps(obj)}")
    return "\n".join(lines)


def _config_echo(cfg: RunConfig) -> dict:
    d = asdict(cfg)
    return {k: v for k, v in d.items() if v is not None and v != []}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="modadequacy", description="Adequacy checks for finite-group modules.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="subcommand", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--scenario", help="scenario JSON file")
        if name == "census":
            sp.add_argument("--group", action="append", default=[], help="group name, repeatable")
        else:
            sp.add_argument("--group", help="catalog entry")
        sp.add_argument("--p", type=int)
        sp.add_argument("--format", choices=["json", "text"], default="json")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--max-group-order", type=int, default=DEFAULT_CAP)
        sp.add_argument("--cache-dir")
        sp.add_argument("--threads", type=int, default=None, help="worker processes (default: available cores)")
        sp.add_argument("--q-max", type=int, default=200)
        sp.add_argument("--cond3-budget", type=int, default=COND3_BUDGET)
        if name == "census":
            sp.add_argument("--count", type=int, help="literal p-regular element count")
            sp.add_argument("--dim", type=int, action="append", default=[])
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    threads = ns.threads if ns.threads is not None else (os.cpu_count() or 1)
    if threads < 1:
        raise InvalidInput("--threads must be positive")
    if ns.max_group_order < 1:
        raise InvalidInput("--max-group-order must be positive")
    cfg = RunConfig(
        subcommand=ns.subcommand,
        scenario_path=ns.scenario,
        group=None if ns.subcommand == "census" else ns.group,
        p=ns.p,
        format=ns.format,
        seed=ns.seed,
        max_group_order=ns.max_group_order,
        cache_dir=ns.cache_dir or os.environ.get("ADEQUACY_CACHE_DIR"),
        threads=threads,
        q_max=ns.q_max,
        cond3_budget=ns.cond3_budget,
    )
    if ns.subcommand == "census":
        cfg.count = ns.count
        cfg.dims = list(ns.dim)
        cfg.groups = list(ns.group)
    if ns.scenario:
        cfg.scenario = load_scenario(ns.scenario)
        if cfg.scenario.get("seed") is not None and ns.seed == 0:
            cfg.seed = cfg.scenario["seed"]
    return cfg


def _emit_error(kind: str, message: str, cfg_path: str | None = None, line=None, column=None) -> None:
    where = ""
    if line is not None:
        where = f"{cfg_path or '<input>'}:{line}:{column}: "
    payload = {"error": kind, "message": message, "line": line, "column": column}
    print(f"{where}{message}", file=sys.stderr)
    print(json.dumps(payload), file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        with active_cache(cfg.cache_dir):
            result = COMMANDS[cfg.subcommand](cfg)
    except InvalidInput as exc:
        _emit_error("invalid_input", str(exc), ns.scenario, exc.line, exc.column)
        return EXIT_INVALID
    except (GroupTooLarge, CohomologyBudgetExceeded, StreamTooLarge, SearchBudgetExceeded) as exc:
        _emit_error("resource_cap", str(exc))
        return EXIT_CAP
    except (ConstructionError, NoWitness, PreconditionError, GroupError, FieldError, LinalgError, RepresentationError) as exc:
        _emit_error("invalid_input", str(exc))
        return EXIT_INVALID
    envelope = {"tool": "modadequacy", "version": __version__, "config": _config_echo(cfg), "result": result}
    if cfg.format == "json":
        print(json.dumps(envelope, indent=2))
    else:
        print(render_text(envelope))
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
