"""``cubekit`` command line.

Exit codes: 0 success, 2 a mathematical check failed (axioms, C3, k-graph
validation), 1 usage or IO error. Output is deterministic for identical
input and flags; wall-clock timings are only printed with ``--timings``.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .cellular import CellularError, barycentric_subdivision, build_cube_complex, cellular_homology
from .covers import CoverSpecError, cover_ktheory, double_cover_matrices, parse_spec
from .cubes import check_c3, enumerate_cubes
from .fixtures import builtin_text, load_builtin
from .groups import parse_group
from .homology import DENSE_LIMIT, build_chain_complex, element_order_in_cokernel, homology_groups
from .ktheory import identity_order_bounds, ktheory_report
from .presentation import PresentationError, close_square_set, parse_presentation, verify_vh_axioms
from .rank_graph import adjacency_matrices, validate_k_graph, write_matrix_text

COMMANDS = ("verify", "cubes", "kgraph", "homology", "ktheory", "cellular", "cover", "all")


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    def __init__(self, report):
        super().__init__("check failed")
        self.report = report


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def threads() -> int:
    raw = os.environ.get("CUBEKIT_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise UsageError(f"CUBEKIT_THREADS must be an integer, got {raw!r}") from None
    return min(4, os.cpu_count() or 1)


# --- stages (each returns a JSON-ready dict)


class Context:
    """Lazily computed pipeline state for one presentation."""

    def __init__(self, p, seed=0, exhaustive_uce=False, timings=None, method="auto", prime_bound=100):
        self.p = p
        self.seed = seed
        self.exhaustive_uce = exhaustive_uce
        self.method = method
        self.prime_bound = prime_bound
        self.timings = timings if timings is not None else {}
        self._sq = self._cubes = self._mats = self._complex = self._hom = None

    def _timed(self, name, fn):
        t0 = time.perf_counter()
        out = fn()
        self.timings[name] = round(time.perf_counter() - t0, 3)
        return out

    @property
    def sq(self):
        if self._sq is None:
            self._sq = close_square_set(self.p)
        return self._sq

    def cubes(self):
        if self._cubes is None:
            self._cubes = self._timed("cubes", lambda: enumerate_cubes(self.p, self.p.k, self.sq))
        return self._cubes

    def mats(self):
        if self._mats is None:
            self._mats = self._timed("adjacency", lambda: adjacency_matrices(self.cubes(), self.p))
        return self._mats

    def complex(self):
        if self._complex is None:
            self._complex = build_chain_complex(self.p.k, self.mats().mats)
        return self._complex

    def homology(self):
        if self._hom is None:
            keep = () if self.method == "modular" else (1,)
            self._hom = self._timed("homology", lambda: homology_groups(
                self.complex(), threads(), transforms_for=keep, method=self.method,
                prime_bound=self.prime_bound))
        return self._hom


def stage_verify(ctx: Context) -> dict:
    ax = ctx._timed("verify", lambda: verify_vh_axioms(ctx.p))
    out = {"axioms": ax.to_dict(), "passed": ax.passed}
    if ax.passed and ctx.p.k >= 3:
        c3 = ctx._timed("c3", lambda: check_c3(ctx.p, ctx.sq))
        out["c3"] = c3.to_dict()
        out["passed"] = c3.passed
    return out


def stage_cubes(ctx: Context, dim: int | None = None) -> dict:
    dims = [dim] if dim else list(range(2, ctx.p.k + 1))
    counts = {}
    for n in dims:
        cs = ctx.cubes() if n == ctx.p.k else enumerate_cubes(ctx.p, n, ctx.sq)
        counts[str(n)] = len(cs)
    return {"counts": counts}


def stage_kgraph(ctx: Context, dump_dir=None) -> dict:
    m = ctx.mats()
    sample = "all" if ctx.exhaustive_uce else 1000
    rep = ctx._timed("kgraph", lambda: validate_k_graph(m, sample, ctx.seed, ctx.p))
    if dump_dir:
        d = Path(dump_dir)
        d.mkdir(parents=True, exist_ok=True)
        for i in range(m.k):
            write_matrix_text(d / f"M_{i + 1}.txt", m.mats[i])
    out = rep.to_dict()
    out["vertices"] = m.n
    out["seed"] = ctx.seed
    return out


def stage_homology(ctx: Context, dump_matrices=None, dump_snf=None) -> dict:
    h = ctx.homology()
    c = ctx.complex()
    if dump_matrices:
        d = Path(dump_matrices)
        d.mkdir(parents=True, exist_ok=True)
        for p in range(1, c.k + 1):
            write_matrix_text(d / f"d_{p}.txt", c.boundary(p))
    if dump_snf:
        d = Path(dump_snf)
        d.mkdir(parents=True, exist_ok=True)
        for p, s in enumerate(h.snf, start=1):
            with open(d / f"snf_d_{p}.json", "w", encoding="utf-8") as fh:
                json.dump({"shape": list(s.shape), "rank": s.rank,
                           "multiplicities": {str(k): v for k, v in sorted(s.multiplicities().items())}},
                          fh, indent=1)
    return h.to_dict()


def stage_ktheory(ctx: Context, k0=None, k1=None) -> dict:
    h = ctx.homology()
    rep = ktheory_report(ctx.p.k, h.groups, k0, k1)
    d1 = ctx.complex().boundary(1)
    order = None
    # the order needs the row transform of d_1; without it, only redo small cases
    if h.snf[0].U is not None or d1.shape[0] * d1.shape[1] <= DENSE_LIMIT:
        ones = np.ones(ctx.complex().dim(0), dtype=np.int64)
        order = element_order_in_cokernel(d1, ones, h.snf[0])
    ident = identity_order_bounds(ctx.p.sizes, order)
    out = rep.to_dict()
    d = ident.to_dict()
    if d["computed_order"] == float("inf"):
        d["computed_order"] = "infinite"
    out["identity_order"] = d
    if h.prime_bound is not None:
        out["torsion_primes_up_to"] = h.prime_bound
    return out


def stage_cellular(p, relaxed=False, dim=None, dump_dir=None) -> dict:
    cx = build_cube_complex(p, max_dim=dim, relaxed=relaxed)
    s = barycentric_subdivision(cx)
    hs = cellular_homology(s)
    if dump_dir:
        d = Path(dump_dir)
        d.mkdir(parents=True, exist_ok=True)
        with open(d / "counts.txt", "w", encoding="utf-8") as fh:
            fh.write(" ".join(map(str, s.counts())) + "\n")
        for m, b in enumerate(s.boundaries, start=1):
            write_matrix_text(d / f"d_{m}.txt", b)
    out = cx.to_dict()
    out["simplex_counts"] = s.counts()
    out["loop_free"] = not s.has_loops()
    out["homology"] = {f"H_{i}": str(g) for i, g in enumerate(hs)}
    return out


def stage_cover(spec_text: str, with_k: bool) -> dict:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        spec = parse_spec(spec_text)
    m = double_cover_matrices(spec)
    out = {
        "spec": str(spec),
        "k": spec.k,
        "a": list(spec.a),
        "g": spec.g,
        "matrices": [m.dense(i).tolist() for i in range(m.k)],
        "warnings": [str(w.message) for w in caught],
    }
    rep = cover_ktheory(spec)
    out["exact_g"] = rep.exact_g
    out["homology"] = {f"H_{p}": str(g) for p, g in enumerate(rep.homologies)}
    out["closed_form_consistent"] = rep.consistent
    if with_k:
        out["ktheory"] = rep.to_dict()
    return out


# --- rendering


def render_text(obj, indent=0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for key, val in obj.items():
            if isinstance(val, (dict, list)) and val and not _flat_list(val):
                lines.append(f"{pad}{key}:")
                lines.append(render_text(val, indent + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(val)}")
    elif isinstance(obj, list):
        for val in obj:
            if isinstance(val, (dict, list)) and not _flat_list(val):
                lines.append(f"{pad}-")
                lines.append(render_text(val, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(val)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return "\n".join(x for x in lines if x)


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) or _flat_list(x) for x in v)


def _scalar(v) -> str:
    if isinstance(v, list):
        return json.dumps(v, ensure_ascii=False)
    if isinstance(v, dict):
        return "{}"
    if v is None:
        return "-"
    return str(v)


# --- argument handling


_HELP = {
    "verify": "check the presentation axioms and C3",
    "cubes": "enumerate pointed cubes",
    "kgraph": "build M_1..M_k and validate the k-graph",
    "homology": "homology of the chain complex D_k",
    "ktheory": "K-theory sequences, rank interval and identity order",
    "cellular": "cellular homology via barycentric subdivision",
    "cover": "two-vertex double covers from a T/D spec",
    "all": "every stage for one presentation",
}


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="cubekit", description="k-cube groups, k-rank graphs and their K-theory")
    ap.add_argument("--version", action="version", version=f"cubekit {__version__}")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name, help=_HELP[name])
        sp.add_argument("--format", choices=("json", "text"), default="text", help="report format (default text)")
        sp.add_argument("--out", help="write the report here instead of standard output")
        sp.add_argument("--timings", action="store_true", help="include wall-clock timings")
        if name == "cover":
            sp.add_argument("--spec", required=True, help='e.g. "T:3,D:2,D:4"')
            sp.add_argument("--k-theory", action="store_true", help="also print the closed-form K-theory")
            continue
        sp.add_argument("file", nargs="?", help="presentation JSON file")
        sp.add_argument("--builtin", metavar="NAME", help="gamma357, gamma234, gamma1234, torus, F2^3, ...")
        sp.add_argument("--seed", type=int, default=0, help="seed for sampled UCE checks")
        sp.add_argument("--dim", type=int, help="cube or cell dimension (default k)")
        sp.add_argument("--exhaustive-uce", action="store_true", help="check every UCE triple instead of a sample")
        sp.add_argument("--dump-matrices", metavar="DIR", help="write M_i or boundary matrices as text")
        sp.add_argument("--dump-snf", metavar="DIR", help="write the SNF diagonal of each boundary as JSON")
        sp.add_argument("--dump-complex", metavar="DIR", help="cellular: write simplex counts and boundaries")
        sp.add_argument("--kunneth-k0", metavar="EXPR", help='known K_0, e.g. "Z^32", used to resolve the G_i')
        sp.add_argument("--kunneth-k1", metavar="EXPR", help="known K_1, same syntax")
        sp.add_argument("--relaxed", action="store_true", help="cellular: skip the axiom checks")
        sp.add_argument("--method", choices=("auto", "dense", "sparse", "modular"), default="auto",
                        help="SNF route for homology (modular: torsion only at primes <= --prime-bound)")
        sp.add_argument("--prime-bound", type=int, default=100, metavar="N",
                        help="largest prime examined by --method modular (default 100)")
    return ap


def _load(args):
    if bool(args.file) == bool(args.builtin):
        raise UsageError("give exactly one of FILE or --builtin NAME")
    if args.builtin:
        text = builtin_text(args.builtin)
        p = load_builtin(args.builtin)
        label = args.builtin
    else:
        try:
            raw = Path(args.file).read_bytes()
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
        text = raw.decode("utf-8")
        p = parse_presentation(text)
        label = args.file
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return p, {"source": label, "name": p.name, "sha256": digest, "k": p.k, "sizes": list(p.sizes)}


def _group_arg(text):
    if text is None:
        return None
    try:
        return parse_group(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def execute(args) -> tuple:
    """Returns (report dict, exit code)."""
    timings: dict = {}
    report: dict = {"tool": "cubekit", "version": __version__, "command": args.command}
    if args.command == "cover":
        try:
            report["cover"] = stage_cover(args.spec, args.k_theory)
        except CoverSpecError as exc:
            raise UsageError(str(exc)) from None
        return report, 0

    p, info = _load(args)
    report["input"] = info
    report["seed"] = args.seed
    if args.prime_bound < 2:
        raise UsageError("--prime-bound must be at least 2")
    ctx = Context(p, args.seed, args.exhaustive_uce, timings, args.method, args.prime_bound)
    k0, k1 = _group_arg(args.kunneth_k0), _group_arg(args.kunneth_k1)
    cmd = args.command
    code = 0

    def gate(section, passed):
        nonlocal code
        if not passed:
            code = 2
            raise CheckFailed(report)

    try:
        if cmd == "cellular":
            try:
                report["cellular"] = stage_cellular(p, args.relaxed, args.dim, args.dump_complex)
            except CellularError as exc:
                report["cellular"] = {"error": str(exc)}
                gate("cellular", False)
            return _finish(report, timings, args), code

        v = stage_verify(ctx)
        report["verify"] = v
        gate("verify", v["passed"])
        if cmd == "verify":
            return _finish(report, timings, args), code
        report["cubes"] = stage_cubes(ctx, args.dim)
        if cmd == "cubes":
            return _finish(report, timings, args), code
        kg = stage_kgraph(ctx, args.dump_matrices)
        report["kgraph"] = kg
        gate("kgraph", kg["is_k_graph"])
        if cmd == "kgraph":
            return _finish(report, timings, args), code
        report["homology"] = stage_homology(ctx, args.dump_matrices, args.dump_snf)
        if cmd == "homology":
            return _finish(report, timings, args), code
        report["ktheory"] = stage_ktheory(ctx, k0, k1)
        if cmd == "ktheory":
            return _finish(report, timings, args), code
        if p.k <= 3:
            report["cellular"] = ctx._timed(
                "cellular", lambda: stage_cellular(p, dump_dir=args.dump_complex))
        else:
            report["cellular"] = {"skipped": "subdivision is implemented up to dimension 3"}
        return _finish(report, timings, args), code
    except CheckFailed:
        return _finish(report, timings, args), 2


def _finish(report, timings, args):
    if args.timings:
        report["timings"] = dict(timings)
    return report


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("missing command; choose one of " + ", ".join(COMMANDS))
        report, code = execute(args)
    except UsageError as exc:
        print(f"cubekit: error: {exc}", file=sys.stderr)
        return 1
    except (PresentationError, UnicodeDecodeError) as exc:
        print(f"cubekit: error: {exc}", file=sys.stderr)
        return 1
    if args.format == "json":
        text = json.dumps(report, indent=2, ensure_ascii=False)
    else:
        text = render_text(report)
    if args.out:
        try:
            Path(args.out).write_text(text + "\n", encoding="utf-8")
        except OSError as exc:
            print(f"cubekit: error: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
            return 1
    else:
        stdout.write(text + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
