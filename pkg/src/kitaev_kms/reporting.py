"""Configuration-driven verification runner.

Parses a flat TOML run configuration, executes the selected verification
suites over the (group, patch, betas) grid, and emits machine-readable
reports.  Reports are deterministic: randomized cases draw from a seeded
generator recorded in the record inputs, and records are order-normalized
before emission, so identical (config, seed) produce byte-identical
files.
"""

from __future__ import annotations

import csv
import io
import json
import math
import random
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import dense, transfer
from .configs import (
    SiteConfig,
    compose_factors,
    decompose_gamma,
    elementary_delta,
    is_gauge,
    kms_measure_check,
    pi_hat,
)
from .errors import ConfigError, SizeGuardError
from .groups import GroupSpec
from .lattice import Edge, LatticePatch
from .operators import EXPANSION_GUARD, OperatorAlgebra, random_operator, verify_relation_suite

SUITES = ("algebra", "gibbs", "measure", "transfer", "ltqo", "gamma", "zerot")

CSV_COLUMNS = [
    "suite",
    "case",
    "group",
    "patch",
    "beta",
    "label_class",
    "site_kind",
    "s_beta",
    "pf_lambda",
    "det_B_residual",
    "recursion_residual",
    "expected",
    "computed",
    "residual",
    "passed",
]


@dataclass
class RunConfig:
    group: tuple[int, ...]
    patch: tuple[int, int]
    betas: tuple[float, ...]
    suites: tuple[str, ...]
    seed: int
    output: str

    @property
    def spec(self) -> GroupSpec:
        return GroupSpec(self.group)

    def lattice(self) -> LatticePatch:
        return LatticePatch(*self.patch)


@dataclass
class ReportRecord:
    suite: str
    case: str
    inputs: dict
    expected: object
    computed: object
    residual: float
    passed: bool
    seconds: float = 0.0

    def to_json(self) -> dict:
        # wall time deliberately excluded: reports must be byte-stable
        return {
            "suite": self.suite,
            "case": self.case,
            "inputs": self.inputs,
            "expected": self.expected,
            "computed": self.computed,
            "residual": self.residual,
            "passed": self.passed,
        }


def parse_config(text: str) -> RunConfig:
    """Validate a TOML run configuration; every guard that a selected
    suite relies on is checked here, before any heavy work."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    known = {"group", "patch", "betas", "suites", "seed", "output"}
    for key in raw:
        if key not in known:
            raise ConfigError(f"unknown config key '{key}'")
    for key in ("group", "patch", "betas"):
        if key not in raw:
            raise ConfigError(f"missing config key '{key}'")

    group = raw["group"]
    if not isinstance(group, list) or not group or any(not isinstance(n, int) for n in group):
        raise ConfigError("'group' must be a non-empty list of integers")
    if any(n < 2 for n in group):
        raise ConfigError("'group': every cyclic order must be >= 2 (the group is non-trivial)")

    patch = raw["patch"]
    if not isinstance(patch, list) or len(patch) != 2 or any(not isinstance(v, int) or v < 1 for v in patch):
        raise ConfigError("'patch' must be [width, height] with positive integers")

    betas = raw["betas"]
    if not isinstance(betas, list) or not betas:
        raise ConfigError("'betas' must be a non-empty list")
    try:
        betas = [float(b) for b in betas]
    except (TypeError, ValueError):
        raise ConfigError("'betas' must be numeric") from None
    if any(b < 0 for b in betas):
        raise ConfigError("'betas' must be >= 0")

    suites = raw.get("suites", list(SUITES))
    if not isinstance(suites, list) or not suites:
        raise ConfigError("'suites' must be a non-empty list")
    for s in suites:
        if s not in SUITES:
            raise ConfigError(f"unknown suite '{s}' (choose from {', '.join(SUITES)})")

    seed = raw.get("seed", 0)
    if not isinstance(seed, int):
        raise ConfigError("'seed' must be an integer")
    output = raw.get("output", "reports")
    if not isinstance(output, str):
        raise ConfigError("'output' must be a path string")

    cfg = RunConfig(
        group=tuple(group),
        patch=(patch[0], patch[1]),
        betas=tuple(betas),
        suites=tuple(s for s in SUITES if s in suites),
        seed=seed,
        output=output,
    )
    _check_guards(cfg)
    return cfg


def _check_guards(cfg: RunConfig) -> None:
    spec = cfg.spec
    n = spec.order
    if n > 10**6:
        raise ConfigError(f"|G| = {n} exceeds the enumeration guard")
    if "transfer" in cfg.suites and n**2 > transfer.TRANSFER_GUARD:
        raise ConfigError(f"|G|^2 = {n ** 2} exceeds the transfer-matrix guard")
    if {"gibbs", "ltqo"} & set(cfg.suites):
        sites = len(cfg.lattice().interior_sites())
        if n**sites > EXPANSION_GUARD:
            raise ConfigError(
                f"|G|^{sites} projector expansion exceeds guard {EXPANSION_GUARD}"
            )


# -- suites -------------------------------------------------------------


def _record(suite, case, inputs, expected, computed, residual, tol, t0) -> ReportRecord:
    return ReportRecord(
        suite=suite,
        case=case,
        inputs=inputs,
        expected=expected,
        computed=computed,
        residual=residual,
        passed=residual <= tol,
        seconds=time.perf_counter() - t0,
    )


def _suite_algebra(cfg: RunConfig) -> list[ReportRecord]:
    t0 = time.perf_counter()
    alg = OperatorAlgebra(cfg.spec, cfg.lattice())
    out = []
    for check in verify_relation_suite(alg):
        out.append(
            _record(
                "algebra",
                check.name,
                {"group": list(cfg.group), "patch": list(cfg.patch)},
                "exact identity",
                "holds" if check.ok else "violated",
                0.0 if check.ok else 1.0,
                0.0,
                t0,
            )
        )
        t0 = time.perf_counter()
    return out


def _suite_gibbs(cfg: RunConfig) -> list[ReportRecord]:
    out = []
    spec = cfg.spec
    patch = cfg.lattice()
    alg = OperatorAlgebra(spec, patch)
    sites = []
    if patch.interior_vertices():
        sites.append(patch.interior_vertices()[0])
    sites.append(patch.interior_faces()[0])
    for beta in cfg.betas:
        par = transfer.build_measure_params(beta, spec)
        for w in sites:
            labels = [
                ("neutral", spec.neutral_character() if w.kind == "vertex" else spec.neutral_element(), par.neutral_weight),
            ]
            excited = (
                spec.characters()[1] if w.kind == "vertex" else spec.elements()[1]
            )
            labels.append(("excited", excited, par.excited_weight))
            for cls, label, want in labels:
                t0 = time.perf_counter()
                got = alg.gibbs_expectation(alg.site_projector(w, label), beta).real
                out.append(
                    _record(
                        "gibbs",
                        f"s_beta[{w}][{cls}][beta={beta:g}]",
                        {
                            "group": list(cfg.group),
                            "patch": list(cfg.patch),
                            "beta": beta,
                            "site_kind": w.kind,
                            "label_class": cls,
                            "s_beta": got,
                        },
                        want,
                        got,
                        abs(got - want),
                        1e-10,
                        t0,
                    )
                )
    return out


def _window_sites(patch: LatticePatch, size: int = 4):
    vs = list(patch.vertices)[:2]
    fs = list(patch.faces)[:2]
    return tuple((vs + fs)[:size])


def random_gauge_element(spec: GroupSpec, vertices, faces, rng: random.Random) -> SiteConfig:
    """Seeded random element of the gauge group supported on the given
    sites: values are drawn freely and the last site of each kind absorbs
    the inverse product, so the total charge is neutral by construction."""
    vals = {}
    for pool, make in ((list(vertices), spec.character), (list(faces), spec.element)):
        if len(pool) == 1:
            pool = []
        acc = make([0] * len(spec.orders))
        for s in pool[:-1]:
            v = make([rng.randrange(n) for n in spec.orders])
            vals[s] = v
            acc = acc * v
        if pool:
            vals[pool[-1]] = acc.inverse()
    return SiteConfig.from_mapping(spec, vals)


def _suite_measure(cfg: RunConfig) -> list[ReportRecord]:
    out = []
    spec = cfg.spec
    patch = cfg.lattice()
    rng = random.Random(cfg.seed)
    window = _window_sites(patch)
    vs = [s for s in window if s.kind == "vertex"]
    fs = [s for s in window if s.kind == "face"]
    for beta in cfg.betas:
        for k in range(20):
            t0 = time.perf_counter()
            gamma = random_gauge_element(spec, vs, fs, rng)
            res = kms_measure_check(beta, window, gamma, spec)
            out.append(
                _record(
                    "measure",
                    f"radon-nikodym[beta={beta:g}][{k}]",
                    {
                        "group": list(cfg.group),
                        "beta": beta,
                        "generator": "random.Random",
                        "seed": cfg.seed,
                        "gamma": gamma.to_json(),
                    },
                    0.0,
                    res,
                    res,
                    1e-12,
                    t0,
                )
            )
    return out


def _suite_transfer(cfg: RunConfig) -> list[ReportRecord]:
    out = []
    spec = cfg.spec
    for beta in cfg.betas:
        t0 = time.perf_counter()
        dc = transfer.det_closed_form_check(beta, spec)
        base = {"group": list(cfg.group), "beta": beta, "det_B_residual": dc.residual}
        if beta == 0:
            # singular at infinite temperature is the documented expectation
            out.append(
                _record(
                    "transfer",
                    f"det-singular[beta=0]",
                    base,
                    0.0,
                    dc.det_b,
                    abs(dc.det_b),
                    1e-10,
                    t0,
                )
            )
            continue
        out.append(
            _record("transfer", f"det-closed-form[beta={beta:g}]", base, dc.closed_form, dc.det_b, dc.residual, 1e-10, t0)
        )
        t0 = time.perf_counter()
        tm = transfer.build_transfer(beta, spec)
        pf = transfer.pf_eigen(tm)
        par = transfer.build_measure_params(beta, spec)
        vec_res = float(np.max(np.abs(pf.vector - np.kron(par.table(spec), par.table(spec)))))
        out.append(
            _record(
                "transfer",
                f"pf-eigenvector[beta={beta:g}]",
                {**base, "pf_lambda": pf.value},
                "nu x nu",
                "power iteration",
                vec_res,
                1e-10,
                t0,
            )
        )
        t0 = time.perf_counter()
        out.append(
            _record(
                "transfer",
                f"pf-gap[beta={beta:g}]",
                {**base, "pf_lambda": pf.value},
                "< 1",
                pf.gap_ratio,
                0.0 if pf.gap_ratio < 1 else pf.gap_ratio,
                0.0,
                t0,
            )
        )
        t0 = time.perf_counter()
        rc = transfer.recursion_check(beta, spec, n_max=6)
        out.append(
            _record(
                "transfer",
                f"recursion[beta={beta:g}]",
                {**base, "recursion_residual": rc.residual},
                0.0,
                rc.residual,
                max(rc.residual, rc.enumeration_residual, abs(rc.level_one_mass - 1.0)),
                1e-12,
                t0,
            )
        )
    return out


def _central_edges(patch: LatticePatch) -> list[Edge]:
    """Edges of a cell as deep inside the patch as possible."""
    x = (patch.width - 1) // 2
    y = (patch.height - 1) // 2
    return [
        Edge("h", x, y),
        Edge("v", x + 1, y),
        Edge("h", x, y + 1),
        Edge("v", x, y),
    ]


def _suite_ltqo(cfg: RunConfig) -> list[ReportRecord]:
    out = []
    spec = cfg.spec
    patch = cfg.lattice()
    alg = OperatorAlgebra(spec, patch)
    rng = random.Random(cfg.seed)
    edges = _central_edges(patch)
    norm = dense.operator_norm if alg.dimension <= dense.DENSE_GUARD else None
    # compression to a scalar is only asserted for observables sitting one
    # ring inside the patch; cases without that margin are not generated
    cases = []
    for e in edges:
        if any(patch.is_interior(f) for f, _ in patch.edge_faces(e)):
            for g in spec.elements()[1:]:
                cases.append((f"T[{e}][{g}]", alg.edge_translation(e, g)))
        if any(patch.is_interior(v) for v, _ in patch.edge_vertices(e)):
            for chi in spec.characters()[1:]:
                cases.append((f"M[{e}][{chi}]", alg.edge_character(e, chi)))
    full_margin = [
        e
        for e in edges
        if all(patch.is_interior(s) for s, _ in patch.edge_vertices(e))
        and all(patch.is_interior(s) for s, _ in patch.edge_faces(e))
    ]
    if full_margin:
        for k in range(10):
            cases.append(
                (
                    f"random-two-edge[{k}]",
                    random_operator(alg, rng, n_edges=2, n_terms=3, edges=full_margin),
                )
            )
    for name, x in cases:
        t0 = time.perf_counter()
        res = alg.ltqo_residual(x, norm=norm)
        out.append(
            _record(
                "ltqo",
                name,
                {
                    "group": list(cfg.group),
                    "patch": list(cfg.patch),
                    "generator": "random.Random",
                    "seed": cfg.seed,
                },
                0.0,
                res,
                res,
                1e-10,
                t0,
            )
        )
    return out


def _suite_gamma(cfg: RunConfig) -> list[ReportRecord]:
    out = []
    spec = cfg.spec
    patch = cfg.lattice()
    rng = random.Random(cfg.seed)
    for k in range(50):
        t0 = time.perf_counter()
        nv = rng.choice([0, 2, 3])
        nf = rng.choice([0, 2, 3] if nv else [2, 3])
        vs = rng.sample(list(patch.vertices), nv)
        fs = rng.sample(list(patch.faces), nf)
        gamma = random_gauge_element(spec, vs, fs, rng)
        factors = decompose_gamma(gamma, patch)
        ok = compose_factors(factors, patch, spec) == gamma
        kernel_ok = all(is_gauge(elementary_delta(e, lab, patch)) for e, lab in factors)
        charge = pi_hat(gamma)
        out.append(
            _record(
                "gamma",
                f"roundtrip[{k}]",
                {
                    "group": list(cfg.group),
                    "patch": list(cfg.patch),
                    "generator": "random.Random",
                    "seed": cfg.seed,
                    "support": len(gamma.support),
                    "factors": len(factors),
                },
                "recomposes, all factors neutral",
                "ok" if (ok and kernel_ok) else "mismatch",
                0.0 if (ok and kernel_ok and charge[0].is_neutral and charge[1].is_neutral) else 1.0,
                0.0,
                t0,
            )
        )
    return out


def _suite_zerot(cfg: RunConfig) -> list[ReportRecord]:
    out = []
    t0 = time.perf_counter()
    scan = transfer.zero_t_scan(cfg.spec, range(0, 21))
    for row in scan.rows:
        out.append(
            _record(
                "zerot",
                f"defect[beta={row.beta:g}]",
                {"group": list(cfg.group), "beta": row.beta, "s_beta": row.neutral_expectation},
                f"<= {row.bound:.3e}",
                row.defect,
                0.0 if row.defect <= row.bound else row.defect - row.bound,
                0.0,
                t0,
            )
        )
        t0 = time.perf_counter()
    out.append(
        _record(
            "zerot",
            "defect-monotone-decreasing",
            {"group": list(cfg.group)},
            True,
            scan.monotone,
            0.0 if scan.monotone else 1.0,
            0.0,
            t0,
        )
    )
    return out


_SUITE_RUNNERS = {
    "algebra": _suite_algebra,
    "gibbs": _suite_gibbs,
    "measure": _suite_measure,
    "transfer": _suite_transfer,
    "ltqo": _suite_ltqo,
    "gamma": _suite_gamma,
    "zerot": _suite_zerot,
}


def run_suite(cfg: RunConfig) -> list[ReportRecord]:
    """Execute every selected suite; module errors become failed records
    rather than crashes, and the result is order-normalized."""
    records: list[ReportRecord] = []
    for name in cfg.suites:
        try:
            records.extend(_SUITE_RUNNERS[name](cfg))
        except (SizeGuardError, ValueError, RuntimeError) as exc:
            records.append(
                ReportRecord(
                    suite=name,
                    case="suite-error",
                    inputs={"group": list(cfg.group), "patch": list(cfg.patch)},
                    expected="completed suite",
                    computed=f"error: {exc}",
                    residual=math.inf,
                    passed=False,
                )
            )
    records.sort(key=lambda r: (r.suite, r.case))
    return records


# -- emission -------------------------------------------------------------


def render_json(records: list[ReportRecord]) -> str:
    return json.dumps([r.to_json() for r in records], sort_keys=True, indent=2) + "\n"


def render_csv(records: list[ReportRecord]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for r in records:
        row = {
            "suite": r.suite,
            "case": r.case,
            "expected": r.expected,
            "computed": r.computed,
            "residual": r.residual,
            "passed": r.passed,
        }
        for key in ("group", "patch", "beta", "label_class", "site_kind", "s_beta", "pf_lambda", "det_B_residual", "recursion_residual"):
            if key in r.inputs:
                val = r.inputs[key]
                row[key] = " ".join(map(str, val)) if isinstance(val, list) else val
        writer.writerow(row)
    return buf.getvalue()


def emit(records: list[ReportRecord], fmt: str, path) -> Path:
    """Write the report file (report.csv or report.json) under `path`."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown format '{fmt}'")
    out_dir = Path(path)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        target = out_dir / f"report.{fmt}"
        target.write_text(render_json(records) if fmt == "json" else render_csv(records))
    except OSError as exc:
        raise OSError(f"cannot write report under '{path}': {exc}") from exc
    return target
