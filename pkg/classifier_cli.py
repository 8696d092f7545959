"""lieclass command line: check, classify, build and tabulate metric Lie algebras.

Algebras live in small JSON files:

    {"basis": ["X", "Y", "Z", "W"], "scalars": "rational",
     "brackets": [{"pair": ["W", "Z"], "coeffs": {"W": "1"}}],
     "metadata": {"name": "...", "family": "g2", "params": {"lam": "1"}}}

Exit status: 0 ok, 1 mathematical failure, 2 input error, 3 not adapted.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Optional, Sequence

from tqdm import tqdm

from algebra_core import (
    EXACT,
    LieClassError,
    Scalar,
    ScalarField,
    ScalarModeError,
    ScalarParseError,
    Vec4,
    approx,
    load_config,
    session_tolerance,
)
from families import (
    FAMILIES,
    MODES,
    AdaptedParams,
    ConstraintViolation,
    Family,
    FamilyParams,
    Mode,
    NoFamilyMatch,
    NotAdapted,
    SamplingConfig,
    UnachievableMode,
    Verdict,
    adapted_params,
    build,
    conditions,
    extract_adapted,
    get_family,
    identify,
    params_from_text,
    sample,
    subfamily,
    validate,
    verify_witness,
)
from gray_hervella import ClassLabel, WDecomposition, WTensor, class_from_decomposition, project_fine
from hermitian import (
    AlmostComplexJ,
    d_omega_general,
    is_almost_kahler,
    is_integrable,
    nabla_omega,
    nijenhuis_coefficients,
)
from lie_metric import (
    LABELS,
    AntisymmetryError,
    LieAlgebra4,
    W,
    X,
    Y,
    Z,
    derived_series,
    foliation_data,
    jacobi_defect,
    levi_civita,
    ricci_tensor,
    scalar_curvature,
    sectional_curvature,
    structure_label,
)

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_MATH, EXIT_INPUT, EXIT_NOT_ADAPTED = 0, 1, 2, 3

# Orientation used when writing brackets, matching the adapted relations
BRACKET_ORDER = ((W, Z), (Z, X), (Z, Y), (W, X), (W, Y), (Y, X))
D_OMEGA_TRIPLES = ((X, Y, Z), (X, Y, W), (X, Z, W), (Y, Z, W))
ROUTES = ("closed_form", "direct", "gray_hervella", "table1")
CSV_COLUMNS = ("family", "mode", "samples", "jacobi_pass", "route_agreement", "table1_match")
NEVER_VERIFIED = "never true — verified"


class AlgebraFileError(LieClassError):
    """Unreadable or malformed algebra file"""

    def __init__(self, path, message: str):
        self.path = Path(path)
        super().__init__(f"{path}: {message}")


# -- settings ----------------------------------------------------------------------------


@dataclass
class TableConfig:
    samples: int = 20
    seed: int = 0

    @classmethod
    def from_config(cls, config: dict) -> "TableConfig":
        section = config.get("table", {})
        return cls(samples=int(section.get("samples", cls.samples)),
                   seed=int(section.get("seed", cls.seed)))


@dataclass
class CliSettings:
    tolerance: float
    table: TableConfig
    sampling: SamplingConfig
    format: str = "md"
    out: Optional[Path] = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "CliSettings":
        config = load_config()
        table = TableConfig.from_config(config)
        if args.samples is not None:
            table.samples = args.samples
        if args.seed is not None:
            table.seed = args.seed
        return cls(
            tolerance=session_tolerance(args.tolerance, config),
            table=table,
            sampling=SamplingConfig.from_config(config),
            format=args.format,
            out=Path(args.out) if args.out else None,
        )

    def scalars(self, name: str) -> ScalarField:
        return EXACT if name == "rational" else approx(self.tolerance)

    def emit(self, text: str) -> None:
        if self.out is None:
            print(text)
        else:
            self.out.write_text(text + "\n")
            logger.info("wrote %s", self.out)


# -- algebra files -----------------------------------------------------------------------


@dataclass
class AlgebraFile:
    algebra: LieAlgebra4
    basis: tuple[str, ...] = LABELS
    metadata: dict = field(default_factory=dict)

    @property
    def scalars(self) -> ScalarField:
        return self.algebra.scalars


def _literal(value) -> str:
    if isinstance(value, bool) or not isinstance(value, (str, int, float)):
        raise ScalarParseError(f"coefficient {value!r} is not a scalar literal")
    return value if isinstance(value, str) else str(value)


def read_algebra_file(path, tolerance: Optional[float] = None) -> AlgebraFile:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except OSError as e:
        raise AlgebraFileError(path, f"cannot read file ({e.strerror})") from e
    except json.JSONDecodeError as e:
        raise AlgebraFileError(path, f"invalid JSON: {e}") from e
    if not isinstance(raw, dict):
        raise AlgebraFileError(path, "top level must be an object")
    unknown = set(raw) - {"basis", "scalars", "brackets", "metadata"}
    if unknown:
        raise AlgebraFileError(path, f"unknown fields {sorted(unknown)}")

    basis = raw.get("basis", list(LABELS))
    if (not isinstance(basis, list) or len(basis) != 4
            or not all(isinstance(label, str) for label in basis) or len(set(basis)) != 4):
        raise AlgebraFileError(path, "basis must list 4 distinct labels")
    mode = raw.get("scalars", "rational")
    if mode not in ("rational", "float"):
        raise AlgebraFileError(path, f"scalars must be 'rational' or 'float', got {mode!r}")
    scalars = EXACT if mode == "rational" else approx(session_tolerance(tolerance))
    metadata = raw.get("metadata", {})
    if not isinstance(metadata, dict):
        raise AlgebraFileError(path, "metadata must be an object")
    brackets = raw.get("brackets", [])
    if not isinstance(brackets, list):
        raise AlgebraFileError(path, "brackets must be a list")

    def index(label):
        if label not in basis:
            raise AlgebraFileError(path, f"unknown basis label {label!r}")
        return basis.index(label)

    entries: dict[tuple[int, int], list[Scalar]] = {}
    for n, item in enumerate(brackets):
        if not isinstance(item, dict) or set(item) != {"pair", "coeffs"}:
            raise AlgebraFileError(path, f"bracket #{n} must have exactly 'pair' and 'coeffs'")
        pair, coeffs = item["pair"], item["coeffs"]
        if not isinstance(pair, list) or len(pair) != 2:
            raise AlgebraFileError(path, f"bracket #{n}: pair must list two labels")
        if not isinstance(coeffs, dict):
            raise AlgebraFileError(path, f"bracket #{n}: coeffs must map labels to scalars")
        i, j = index(pair[0]), index(pair[1])
        values = [scalars.zero] * 4
        for label, literal in coeffs.items():
            try:
                values[index(label)] = scalars.parse(_literal(literal))
            except ScalarParseError as e:
                raise AlgebraFileError(path, f"bracket #{n}: {e}") from e
        name = f"[{pair[0]},{pair[1]}]"
        if i == j:
            if any(not scalars.is_zero(v) for v in values):
                raise AlgebraFileError(path, f"{name} must vanish")
            continue
        if (i, j) in entries:
            raise AlgebraFileError(path, f"{name} listed twice")
        if (j, i) in entries:
            if not all(scalars.equal(a, -b) for a, b in zip(entries[(j, i)], values)):
                raise AlgebraFileError(path, f"{name} is inconsistent with [{pair[1]},{pair[0]}]")
            continue
        entries[(i, j)] = values
    logger.debug("read %d brackets from %s", len(entries), path)
    return AlgebraFile(LieAlgebra4.from_brackets(entries, scalars), tuple(basis), metadata)


def parse_algebra(path, tolerance: Optional[float] = None) -> LieAlgebra4:
    return read_algebra_file(path, tolerance).algebra


def algebra_document(L: LieAlgebra4, metadata: Optional[dict] = None) -> dict:
    s = L.scalars
    brackets = []
    for i, j in BRACKET_ORDER:
        coeffs = {LABELS[k]: s.format(v) for k, v in enumerate(L.structure(i, j))
                  if not s.is_zero(v)}
        if coeffs:
            brackets.append({"pair": [LABELS[i], LABELS[j]], "coeffs": coeffs})
    document = {"basis": list(LABELS), "scalars": s.name, "brackets": brackets}
    if metadata:
        document["metadata"] = metadata
    return document


def write_algebra(path, L: LieAlgebra4, metadata: Optional[dict] = None) -> None:
    Path(path).write_text(json.dumps(algebra_document(L, metadata), indent=2) + "\n")


def _term(value: Scalar, label: str, s: ScalarField, first: bool) -> str:
    sign = "-" if value < 0 else "+"
    magnitude = abs(value)
    if s.equal(magnitude, s.one):
        text = label
    elif s.exact and magnitude.denominator != 1:
        text = f"({magnitude}){label}"
    else:
        text = f"{s.format(magnitude)}{label}"
    if first:
        return text if sign == "+" else "-" + text
    return f" {sign} {text}"


def render_bracket(L: LieAlgebra4, i: int, j: int) -> str:
    """"[Y,X] = -2W" in the layout of the adapted relations"""
    s = L.scalars
    terms = [(v, LABELS[k]) for k, v in enumerate(L.structure(i, j)) if not s.is_zero(v)]
    rhs = "".join(_term(v, label, s, n == 0) for n, (v, label) in enumerate(terms)) or "0"
    return f"[{LABELS[i]},{LABELS[j]}] = {rhs}"


def render_brackets(L: LieAlgebra4) -> list[str]:
    lines = [render_bracket(L, i, j) for i, j in BRACKET_ORDER
             if not L.structure(i, j).is_zero()]
    return lines or ["(abelian)"]


# -- classification ----------------------------------------------------------------------


def _gh_decomposition(L: LieAlgebra4, J: AlmostComplexJ) -> WDecomposition:
    return project_fine(WTensor.from_nabla_omega(nabla_omega(L, J)))


def _label_verdict(label: ClassLabel) -> Verdict:
    return Verdict(ak=label in (ClassLabel.AK, ClassLabel.K),
                   i=label in (ClassLabel.I, ClassLabel.K),
                   k=label is ClassLabel.K)


def route_verdicts(L: LieAlgebra4, ap: Optional[AdaptedParams] = None,
                   decomposition: Optional[WDecomposition] = None) -> dict[str, Verdict]:
    """AK/I/K from the closed forms, from dω and N_J directly, and from the W-projections"""
    J = AlmostComplexJ.adapted(L.scalars)
    ap = ap or extract_adapted(L)
    decomposition = decomposition or _gh_decomposition(L, J)
    ak, i = is_almost_kahler(L, J), is_integrable(L, J)
    return {
        "closed_form": Verdict(ap.is_almost_kahler(), ap.is_integrable(), ap.is_kahler()),
        "direct": Verdict(ak, i, ak and i),
        "gray_hervella": _label_verdict(class_from_decomposition(decomposition)),
    }


@dataclass
class ClassificationResult:
    scalars: ScalarField
    minimal: bool
    conformal: bool
    riemannian: bool
    totally_geodesic: bool
    ak: bool
    i: bool
    k: bool
    routes: dict[str, Verdict]
    adapted: AdaptedParams
    d_omega: tuple[Scalar, ...]
    nijenhuis: tuple[Scalar, ...]
    gh_norms: tuple[Scalar, ...]
    k_vertical: Scalar
    k_horizontal: Optional[Scalar]
    scalar_curvature: Scalar
    structure: str
    derived_series: list[int]
    family_matches: list[tuple[str, FamilyParams]] = field(default_factory=list)

    @property
    def agree(self) -> bool:
        return len({verdict for verdict in self.routes.values()}) == 1

    def as_dict(self) -> dict:
        fmt = self.scalars.format
        return {
            "foliation": {"minimal": self.minimal, "conformal": self.conformal,
                          "riemannian": self.riemannian,
                          "totally_geodesic": self.totally_geodesic},
            "ak": self.ak, "i": self.i, "k": self.k,
            "routes": {name: {"ak": v.ak, "i": v.i, "k": v.k}
                       for name, v in self.routes.items()},
            "routes_agree": self.agree,
            "adapted": {name: fmt(v) for name, v in self.adapted.as_dict().items()},
            "d_omega": {"".join(LABELS[n] for n in t): fmt(v)
                        for t, v in zip(D_OMEGA_TRIPLES, self.d_omega)},
            "nijenhuis_zx": dict(zip(LABELS, map(fmt, self.nijenhuis))),
            "gray_hervella_norms": {f"W{n}": fmt(v) for n, v in enumerate(self.gh_norms, 1)},
            "curvature": {
                "vertical": fmt(self.k_vertical),
                "horizontal": None if self.k_horizontal is None else fmt(self.k_horizontal),
                "scalar": fmt(self.scalar_curvature),
            },
            "structure": self.structure,
            "derived_series": self.derived_series,
            "family_matches": [{"family": fid, "params": params.formatted()}
                               for fid, params in self.family_matches],
        }


def classify_algebra(L: LieAlgebra4) -> ClassificationResult:
    s = L.scalars
    ap = extract_adapted(L)
    C = levi_civita(L)
    foliation = foliation_data(C)
    J = AlmostComplexJ.adapted(s)
    decomposition = _gh_decomposition(L, J)
    routes = route_verdicts(L, ap, decomposition)
    try:
        matches = identify(ap)
    except NoFamilyMatch as e:
        logger.info("%s", e)
        matches = []
    if matches:
        fid, params = matches[0]
        routes["table1"] = conditions(fid, params)
    e = [Vec4.basis(n, s) for n in range(4)]
    flat = s.is_zero(ap.theta1) and s.is_zero(ap.theta2)
    direct = routes["direct"]
    return ClassificationResult(
        scalars=s,
        minimal=foliation.minimal,
        conformal=foliation.conformal,
        riemannian=foliation.riemannian,
        totally_geodesic=foliation.totally_geodesic,
        ak=direct.ak, i=direct.i, k=direct.k,
        routes=routes,
        adapted=ap,
        d_omega=tuple(d_omega_general(L, J, e[a], e[b], e[c]) for a, b, c in D_OMEGA_TRIPLES),
        nijenhuis=nijenhuis_coefficients(L, J),
        gh_norms=decomposition.norms,
        k_vertical=sectional_curvature(C, L, e[Z], e[W]),
        k_horizontal=sectional_curvature(C, L, e[X], e[Y]) if flat else None,
        scalar_curvature=scalar_curvature(C, L),
        structure=structure_label(L),
        derived_series=derived_series(L),
        family_matches=matches,
    )


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def render_classification(result: ClassificationResult, name: str = "") -> str:
    d = result.as_dict()
    lines = [f"# Classification{' of ' + name if name else ''}", ""]
    lines.append("foliation: " + ", ".join(f"{k}={_yes(v)}" for k, v in d["foliation"].items()))
    lines.append(f"structure: {result.structure} (derived series {result.derived_series})")
    matches = ", ".join(m["family"] for m in d["family_matches"]) or "none"
    lines += [f"family: {matches}", "", "| route | AK | I | K |", "|---|---|---|---|"]
    for route, v in result.routes.items():
        lines.append(f"| {route} | {_yes(v.ak)} | {_yes(v.i)} | {_yes(v.k)} |")
    lines += ["", f"routes agree: {_yes(result.agree)}", ""]
    lines.append("dω: " + ", ".join(f"{k}={v}" for k, v in d["d_omega"].items()))
    lines.append("N_J(Z,X): " + ", ".join(f"{k}={v}" for k, v in d["nijenhuis_zx"].items()))
    lines.append("|W_n|²: " + ", ".join(f"{k}={v}" for k, v in d["gray_hervella_norms"].items()))
    curvature = d["curvature"]
    lines.append(f"K(Z,W) = {curvature['vertical']}")
    if curvature["horizontal"] is not None:
        lines.append(f"K(X,Y) = {curvature['horizontal']}")
    lines.append(f"scalar curvature = {curvature['scalar']}")
    return "\n".join(lines)


# -- condition table ---------------------------------------------------------------------


@dataclass
class TableCell:
    family: str
    mode: str
    samples: int = 0
    jacobi_pass: int = 0
    route_agreement: int = 0
    table1_match: int = 0
    never: bool = False

    @property
    def passed(self) -> bool:
        return self.samples == self.jacobi_pass == self.route_agreement == self.table1_match

    def status(self) -> str:
        if self.never:
            return NEVER_VERIFIED if self.passed else "never true — FAIL"
        return "PASS" if self.passed else "FAIL"

    def row(self) -> dict:
        return {name: getattr(self, name) for name in CSV_COLUMNS}


def _holds(verdict: Verdict, mode: Mode) -> bool:
    return {Mode.AK: verdict.ak, Mode.I: verdict.i, Mode.K: verdict.k}[mode]


def _check_sample(family: Family, params: FamilyParams) -> tuple[bool, dict[str, Verdict]]:
    L = build(family, params)
    jacobi_ok = L.scalars.is_zero(jacobi_defect(L))
    routes = route_verdicts(L, adapted_params(family, params))
    routes["table1"] = conditions(family, params)
    return jacobi_ok, routes


def run_cell(family: Family, mode: Mode, config: TableConfig, sampling: SamplingConfig,
             scalars: ScalarField = EXACT) -> TableCell:
    condition = family.condition(mode)
    never = condition is not None and condition.never
    cell = TableCell(family.id, mode.value, never=never)
    witnesses = ()
    if never:
        witnesses = (condition.witness,)
    elif mode is Mode.I:
        witnesses = family.forced
    for n in range(config.samples):
        draw_mode = Mode.GENERIC if never else mode
        params = sample(family, config.seed + n, draw_mode, scalars, sampling)
        jacobi_ok, routes = _check_sample(family, params)
        direct = routes["direct"]
        cell.samples += 1
        cell.jacobi_pass += jacobi_ok
        cell.route_agreement += len(set(routes.values())) == 1
        if never:
            matched = not _holds(direct, mode)
        elif mode is Mode.GENERIC:
            matched = routes["table1"] == direct
        else:
            matched = _holds(direct, mode) and _holds(routes["table1"], mode)
        matched = matched and all(verify_witness(family, w, params) for w in witnesses)
        cell.table1_match += matched
    return cell


def run_table(config: TableConfig, sampling: SamplingConfig,
              scalars: ScalarField = EXACT, progress: bool = True) -> list[TableCell]:
    cells = [(family, mode) for family in FAMILIES.values() for mode in MODES]
    results = []
    for family, mode in tqdm(cells, desc="conditions", file=sys.stderr, disable=not progress):
        cell = run_cell(family, mode, config, sampling, scalars)
        if not cell.passed:
            logger.warning("%s/%s failed: %s", family.id, mode.value, cell.row())
        results.append(cell)
    return results


def render_table(cells: Sequence[TableCell], fmt: str) -> str:
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(cell.row() for cell in cells)
        return buffer.getvalue().rstrip("\n")
    if fmt == "json":
        return json.dumps([{**cell.row(), "status": cell.status()} for cell in cells], indent=2)
    by_family: dict[str, dict[str, TableCell]] = {}
    for cell in cells:
        by_family.setdefault(cell.family, {})[cell.mode] = cell
    lines = ["| Family | Case | Generic | Almost Kähler | Integrable | Kähler |",
             "|---|---|---|---|---|---|"]
    for fid, row in by_family.items():
        family = get_family(fid)
        columns = [row[Mode.GENERIC.value].status()]
        for mode in (Mode.AK, Mode.I, Mode.K):
            cell = row[mode.value]
            text = family.condition(mode).text
            columns.append(cell.status() if cell.never else f"{text}: {cell.status()}")
        lines.append(f"| {fid} | {family.case.value} | " + " | ".join(columns) + " |")
    return "\n".join(lines)


# -- commands ----------------------------------------------------------------------------


def cmd_check(args: argparse.Namespace, settings: CliSettings) -> int:
    L = parse_algebra(args.path, settings.tolerance)
    s = L.scalars
    antisymmetry, jacobi = L.antisymmetry_defect(), jacobi_defect(L)
    settings.emit(f"antisymmetry defect: {s.format(antisymmetry)}\n"
                  f"jacobi defect: {s.format(jacobi)}")
    return EXIT_OK if s.is_zero(antisymmetry) and s.is_zero(jacobi) else EXIT_MATH


def cmd_classify(args: argparse.Namespace, settings: CliSettings) -> int:
    document = read_algebra_file(args.path, settings.tolerance)
    L = document.algebra
    defect = jacobi_defect(L)
    if not L.scalars.is_zero(defect):
        print(f"lieclass: not a Lie algebra (jacobi defect {L.scalars.format(defect)})",
              file=sys.stderr)
        return EXIT_MATH
    result = classify_algebra(L)
    expected = document.metadata.get("family")
    if expected and expected not in [fid for fid, _ in result.family_matches]:
        logger.warning("file says %s but the brackets match %s", expected,
                       [fid for fid, _ in result.family_matches])
    if settings.format == "json":
        settings.emit(json.dumps(result.as_dict(), indent=2))
    else:
        settings.emit(render_classification(result, document.metadata.get("name", "")))
    return EXIT_OK if result.agree else EXIT_MATH


def cmd_family(args: argparse.Namespace, settings: CliSettings) -> int:
    family = get_family(args.id)
    scalars = settings.scalars(args.scalars)
    mode = Mode(args.subfamily) if args.subfamily else Mode.GENERIC
    if args.params is None:
        params = sample(family, settings.table.seed, mode, scalars, settings.sampling)
    else:
        params = params_from_text(family, args.params, scalars)
        params = subfamily(family, mode, params) if args.subfamily else validate(family, params)
    L = build(family, params)
    verdict = conditions(family, params)
    name = family.id + (args.subfamily.upper() if args.subfamily else "")
    lines = [f"# {name} (Case {family.case.value}, {family.structure})", ""]
    lines.append("params: " + ", ".join(f"{k}={v}" for k, v in params.formatted().items()))
    lines += [""] + render_brackets(L) + [""]
    for label, mode_ in (("AK", Mode.AK), ("I", Mode.I), ("K", Mode.K)):
        holds = {"AK": verdict.ak, "I": verdict.i, "K": verdict.k}[label]
        lines.append(f"{label}: {family.condition(mode_).text} -> {_yes(holds)}")
    if family.kahler_note:
        lines.append(f"Kähler structure: {family.kahler_note}")
    print("\n".join(lines))
    if settings.out is not None:
        metadata = {"name": name, "family": family.id, "params": params.formatted()}
        if args.subfamily:
            metadata["subfamily"] = args.subfamily
        write_algebra(settings.out, L, metadata)
        logger.info("wrote %s", settings.out)
    return EXIT_OK


def cmd_table(args: argparse.Namespace, settings: CliSettings) -> int:
    cells = run_table(settings.table, settings.sampling, settings.scalars(args.scalars),
                      progress=not args.quiet)
    settings.emit(render_table(cells, settings.format))
    if args.csv:
        Path(args.csv).write_text(render_table(cells, "csv") + "\n")
        logger.info("wrote %s", args.csv)
    return EXIT_OK if all(cell.passed for cell in cells) else EXIT_MATH


def cmd_curvature(args: argparse.Namespace, settings: CliSettings) -> int:
    document = read_algebra_file(args.path, settings.tolerance)
    L, s = document.algebra, document.scalars
    C = levi_civita(L)
    e = [Vec4.basis(n, s) for n in range(4)]
    lines = []
    if args.plane:
        u, v = args.plane
        for label in (u, v):
            if label not in document.basis:
                raise AlgebraFileError(args.path, f"unknown basis label {label!r}")
        if u == v:
            raise AlgebraFileError(args.path, f"plane needs two distinct labels, got {u!r} twice")
        i, j = document.basis.index(u), document.basis.index(v)
        lines.append(s.format(sectional_curvature(C, L, e[i], e[j])))
    if args.all:
        for i, j in combinations(range(4), 2):
            value = sectional_curvature(C, L, e[i], e[j])
            lines.append(f"K({document.basis[i]},{document.basis[j]}) = {s.format(value)}")
        ric = ricci_tensor(C, L)
        for i in range(4):
            lines.append("Ric[" + document.basis[i] + "] = "
                         + " ".join(s.format(ric[i, j]) for j in range(4)))
        lines.append(f"scalar curvature = {s.format(scalar_curvature(C, L))}")
    settings.emit("\n".join(lines))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float,
                        help="Float comparison tolerance (default: LIECLASS_TOLERANCE, "
                             "then lieclass_config.toml, then 1e-9)")
    common.add_argument("--seed", type=int, help="Base seed for random samples")
    common.add_argument("--samples", type=int, help="Samples per family and mode")
    common.add_argument("--format", choices=["md", "csv", "json"], default="md",
                        help="Report format")
    common.add_argument("--out", help="Write the report (or the algebra file) here")
    common.add_argument("--verbose", action="store_true", help="Debug logging on stderr")

    parser = argparse.ArgumentParser(
        prog="lieclass",
        description="Classify 4-dimensional metric Lie algebras carrying a minimal conformal "
                    "foliation into almost Kähler, integrable and Kähler classes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", parents=[common], help="Antisymmetry and Jacobi defects")
    check.add_argument("path")
    check.set_defaults(handler=cmd_check)

    classify = sub.add_parser("classify", parents=[common],
                              help="Foliation, AK/I/K by three routes, curvature, family")
    classify.add_argument("path")
    classify.set_defaults(handler=cmd_classify)

    family = sub.add_parser("family", parents=[common], help="Build one family instance")
    family.add_argument("id", help="g1 .. g20")
    family.add_argument("--params", help="e.g. alpha=1,beta=0,w1=1/2 (omit to sample)")
    family.add_argument("--subfamily", choices=["ak", "i", "k"],
                        help="Solve the class condition for the dependent parameters")
    family.add_argument("--scalars", choices=["rational", "float"], default="rational")
    family.set_defaults(handler=cmd_family)

    table = sub.add_parser("table", parents=[common], help="Check every family's class conditions by sampling")
    table.add_argument("--scalars", choices=["rational", "float"], default="rational")
    table.add_argument("--quiet", action="store_true", help="No progress bar")
    table.add_argument("--csv", metavar="PATH", help="Also write the per-cell counts as CSV")
    table.set_defaults(handler=cmd_table)

    curvature = sub.add_parser("curvature", parents=[common], help="Sectional curvature")
    curvature.add_argument("path")
    curvature.add_argument("plane", nargs="*", metavar="LABEL", help="Two basis labels")
    curvature.add_argument("--all", action="store_true",
                           help="All coordinate planes, Ricci and scalar curvature")
    curvature.set_defaults(handler=cmd_curvature)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "curvature" and len(args.plane) not in ((0, 2) if args.all else (2,)):
        parser.error("curvature needs exactly two labels or --all")
    if args.samples is not None and args.samples < 1:
        parser.error("--samples must be at least 1")
    try:
        settings = CliSettings.from_args(args)
        return args.handler(args, settings)
    except NotAdapted as e:
        print("lieclass: not in adapted normal form:", file=sys.stderr)
        for violation in e.violations:
            print(f"  {violation}", file=sys.stderr)
        return EXIT_NOT_ADAPTED
    except (AlgebraFileError, ScalarParseError, ScalarModeError, ConstraintViolation,
            UnachievableMode, AntisymmetryError, OSError) as e:
        print(f"lieclass: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except LieClassError as e:
        print(f"lieclass: {e}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
