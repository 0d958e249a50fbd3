"""Command line front end: ``tomosep gen | tomogram | separability | channel``.

States travel as QMX files (see :mod:`tomosep.qmx`); a ``# dims: 2 2``
comment carries the subsystem signature. Reports are ``key: value`` lines
(or JSON with ``--json``). Exit codes: 0 success, 1 usage, 2 parse error,
3 numerical failure, 4 invalid input.
"""

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import qmx
from .errors import InvalidInput, NumericFailure, ParseError, TomosepError
from .linalg import haar_unitary, herm_eig, partial_transpose
from .maps import KrausMap, MixedUnitaryMap, epsilon_map, superop_of
from .separability import (
    WITNESS_TOL,
    F_max,
    block_inequalities,
    positive_map_criterion,
    ppt_test,
    sample_map_pool,
)
from .states import DensityMatrix, bell, from_bloch, random_density, werner
from .tomography import Direction, bipartite_tomogram, spin_tomogram, un_tomogram

SEED_ENV = "TOMOSEP_SEED"
EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_NUMERIC, EXIT_INVALID = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _fmt(x) -> str:
    if isinstance(x, float):
        return "%.12g" % x
    if isinstance(x, (list, tuple)):
        return " ".join(_fmt(v) for v in x)
    return str(x)


def _report(fields: list[tuple[str, object]], as_json: bool) -> str:
    if as_json:
        return json.dumps(dict(fields), indent=2, sort_keys=False) + "\n"
    return "".join(f"{k}: {_fmt(v)}\n" for k, v in fields)


def _dims_meta(dims) -> str:
    return " ".join(str(d) for d in dims)


def _load_state(path, dims=None) -> DensityMatrix:
    M, meta = qmx.read(path)
    if dims is None and "dims" in meta:
        try:
            dims = [int(t) for t in meta["dims"].split()]
        except ValueError:
            raise ParseError(f"bad dims comment {meta['dims']!r}") from None
    return DensityMatrix(M, tuple(dims) if dims else ())


def _emit_state(M, meta: dict, out) -> None:
    text = qmx.emit(M, meta)
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# gen ------------------------------------------------------------------------


def cmd_gen(args) -> int:
    meta = {"kind": args.kind}
    if args.kind == "bell":
        rho = bell(args.which)
        meta["which"] = args.which
    elif args.kind == "werner":
        if args.p is None:
            raise UsageError("gen werner needs --p")
        rho = werner(args.p)
        meta["p"] = _fmt(args.p)
    elif args.kind == "bloch":
        if args.n is None:
            raise UsageError("gen bloch needs --n")
        rho = from_bloch(args.n)
        meta["n"] = _fmt(args.n)
    else:
        if args.dim is None:
            raise UsageError("gen random needs --dim")
        dims = tuple(args.dims) if args.dims else None
        rho = random_density(args.dim, args.rank, rng=args.seed, dims=dims)
        meta.update(dim=args.dim, rank=args.rank or args.dim, seed=args.seed)
    meta["dims"] = _dims_meta(rho.dims)
    _emit_state(rho.mat, meta, args.out)
    return EXIT_OK


# tomogram -------------------------------------------------------------------


def _spin_j(d: int) -> float:
    return (d - 1) / 2


def cmd_tomogram(args) -> int:
    rho = _load_state(args.state, args.dims)
    fields: list[tuple[str, object]] = [("mode", args.mode), ("dims", list(rho.dims))]
    if args.mode == "spin":
        o = Direction(args.theta[0], args.phi[0])
        tomo = spin_tomogram(rho, _spin_j(rho.n), o)
        fields += [("j", _spin_j(rho.n)), ("theta", o.theta), ("phi", o.phi)]
        rows = [(f"W(m={_fmt(m)})", p) for m, p in zip(tomo.labels, tomo.probs.tolist())]
    elif args.mode == "bipartite":
        if len(rho.dims) != 2:
            raise UsageError("bipartite tomogram needs --dims with two factors")
        thetas = args.theta * 2 if len(args.theta) == 1 else args.theta
        phis = args.phi * 2 if len(args.phi) == 1 else args.phi
        if len(thetas) != 2 or len(phis) != 2:
            raise UsageError("bipartite tomogram takes one or two angles per option")
        j1, j2 = (_spin_j(d) for d in rho.dims)
        o1, o2 = Direction(thetas[0], phis[0]), Direction(thetas[1], phis[1])
        tomo = bipartite_tomogram(rho, j1, j2, o1, o2)
        fields += [("j", [j1, j2]), ("theta", [o1.theta, o2.theta]), ("phi", [o1.phi, o2.phi])]
        rows = [(f"W(m1={_fmt(a)},m2={_fmt(b)})", p) for (a, b), p in zip(tomo.labels, tomo.probs.tolist())]
    else:
        if args.unitary:
            U, _ = qmx.read(args.unitary)
            fields.append(("unitary", args.unitary))
        else:
            U = haar_unitary(rho.n, args.seed)
            fields += [("unitary", "haar"), ("seed", args.seed)]
        tomo = un_tomogram(rho, rho.dims, U)
        rows = [(f"w(m={','.join(map(str, lab))})", p) for lab, p in zip(tomo.labels, tomo.probs.tolist())]
    fields += rows
    fields.append(("normalization", float(tomo.probs.sum())))
    sys.stdout.write(_report(fields, args.json))
    return EXIT_OK


# separability ---------------------------------------------------------------


def cmd_separability(args) -> int:
    rho = _load_state(args.state, args.dims)
    if len(rho.dims) < 2:
        raise UsageError("separability needs --dims (or a dims comment) with at least two factors")
    fields: list[tuple[str, object]] = [("method", args.method), ("dims", list(rho.dims)), ("tolerance", args.tol)]
    if args.method == "ppt":
        _, verdict = ppt_test(rho, rho.dims, tol=args.tol)
    elif args.method == "blocks":
        verdict = block_inequalities(rho, tol=args.tol)
    elif args.method == "posmap":
        pool = sample_map_pool(rho.dims, args.budget, np.random.default_rng(args.seed))
        verdict = positive_map_criterion(rho, rho.dims, pool, tol=args.tol)
        fields += [("budget", args.budget), ("seed", args.seed)]
    else:
        res = F_max(rho, rho.dims, n_maps=args.budget, n_unitaries=args.unitaries, rng=args.seed)
        excess = res.value - 1.0
        flag = "ENTANGLED-WITNESSED" if excess > args.tol else "SEPARABLE-CONSISTENT"
        fields += [("budget", args.budget), ("unitaries", args.unitaries), ("seed", args.seed)]
        fields += [("value", res.value), ("verdict", flag), ("margin", excess)]
        fields.append(("witness", res.witness if flag == "ENTANGLED-WITNESSED" else ""))
        sys.stdout.write(_report(fields, args.json))
        return EXIT_OK
    fields += [("verdict", verdict.flag), ("margin", verdict.margin), ("witness", verdict.witness)]
    sys.stdout.write(_report(fields, args.json))
    return EXIT_OK


# channel --------------------------------------------------------------------


def _load_spec(path) -> tuple[dict, Path]:
    try:
        spec = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ParseError("channel spec must be a JSON object with a 'kind' field")
    return spec, Path(path).resolve().parent


def _matrices(spec: dict, key: str, base: Path) -> list[np.ndarray]:
    out = []
    for item in spec.get(key, []):
        if isinstance(item, str):
            out.append(qmx.read(base / item)[0])
        else:
            try:
                arr = np.asarray(item, dtype=float)
                out.append(arr[..., 0] + 1j * arr[..., 1] if arr.ndim == 3 else arr.astype(complex))
            except (TypeError, ValueError):
                raise ParseError(f"cannot read inline matrix under {key!r}") from None
    return out


def _apply_channel(spec: dict, base: Path, rho: DensityMatrix) -> tuple[np.ndarray, str]:
    kind = spec["kind"]
    M = rho.mat
    if kind == "identity":
        return M.copy(), "identity"
    if kind == "transpose":
        which = spec.get("which")
        if which is None:
            return M.T.copy(), "transpose"
        if len(rho.dims) < 2:
            raise InvalidInput("partial transpose needs subsystem dims")
        return partial_transpose(M, rho.dims, which), f"partial transpose on {which}"
    if kind == "epsilon":
        eps = float(spec.get("eps", 0.0))
        return epsilon_map(eps, rho.n).apply(M), f"epsilon map eps={_fmt(eps)}"
    if kind == "mixed_unitary":
        ch = MixedUnitaryMap(tuple(spec.get("weights", ())), tuple(_matrices(spec, "unitaries", base)))
        return superop_of(ch).apply(M), f"mixed unitary ({len(ch.weights)} terms)"
    if kind == "kraus":
        ch = KrausMap(tuple(_matrices(spec, "kraus", base)))
        return superop_of(ch).apply(M), f"kraus ({len(ch.kraus_ops)} operators)"
    raise InvalidInput(f"unknown channel kind {kind!r}")


def cmd_channel(args) -> int:
    rho = _load_state(args.state, args.dims)
    spec, base = _load_spec(args.spec)
    out, desc = _apply_channel(spec, base, rho)
    out = (out + out.conj().T) / 2
    min_eig = float(herm_eig(out).eigenvalues[-1])
    positive = min_eig >= -WITNESS_TOL
    if not positive and not args.allow_nonpositive:
        raise InvalidInput(f"output has eigenvalue {min_eig:.6g}; pass --allow-nonpositive to keep it")
    meta = {"channel": desc, "dims": _dims_meta(rho.dims), "min_eig": _fmt(min_eig)}
    if not positive:
        meta["nonpositive"] = "yes"
    _emit_state(out, meta, args.out)
    if args.out not in (None, "-"):
        fields = [("channel", desc), ("output", args.out), ("trace", float(np.trace(out).real))]
        fields += [("min_eig", min_eig), ("positive", "yes" if positive else "no"), ("tolerance", WITNESS_TOL)]
        sys.stdout.write(_report(fields, args.json))
    return EXIT_OK


# entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help=f"RNG seed (default: ${SEED_ENV} or 0)")
    common.add_argument("--json", action="store_true", help="emit the report as JSON")
    common.add_argument("--dims", type=_ints, default=None, help="subsystem dims, e.g. 2,2")

    p = _Parser(prog="tomosep", description="Quantum state tomograms and separability tests.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", parents=[common], help="write a density matrix")
    g.add_argument("kind", choices=["bell", "werner", "bloch", "random"])
    g.add_argument("--which", default="phi+", help="Bell state: phi+, phi-, psi+, psi-")
    g.add_argument("--p", type=float, help="Werner parameter in [-1/3, 1]")
    g.add_argument("--n", type=_floats, help="Bloch vector, e.g. 0,0,1")
    g.add_argument("--dim", type=int)
    g.add_argument("--rank", type=int)
    g.add_argument("-o", "--out", default=None)
    g.set_defaults(func=cmd_gen)

    t = sub.add_parser("tomogram", parents=[common], help="tabulate a tomogram")
    t.add_argument("state")
    t.add_argument("--mode", choices=["spin", "bipartite", "un"], default="spin")
    t.add_argument("--theta", type=_floats, default=[0.0])
    t.add_argument("--phi", type=_floats, default=[0.0])
    t.add_argument("--unitary", help="QMX file with the unitary for --mode un (default: Haar sample)")
    t.set_defaults(func=cmd_tomogram)

    s = sub.add_parser("separability", parents=[common], help="run a separability test")
    s.add_argument("state")
    s.add_argument("--method", choices=["ppt", "posmap", "fmax", "blocks"], default="ppt")
    s.add_argument("--budget", type=int, default=50, help="number of sampled local maps")
    s.add_argument("--unitaries", type=int, default=10, help="Haar unitaries per map for fmax")
    s.add_argument("--tol", type=float, default=WITNESS_TOL)
    s.set_defaults(func=cmd_separability)

    c = sub.add_parser("channel", parents=[common], help="apply a map described by a JSON spec")
    c.add_argument("state")
    c.add_argument("spec")
    c.add_argument("-o", "--out", default=None)
    c.add_argument("--allow-nonpositive", action="store_true")
    c.set_defaults(func=cmd_channel)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.seed is None:
            args.seed = _default_seed()
        return args.func(args)
    except UsageError as exc:
        print(f"tomosep: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"tomosep: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NumericFailure as exc:
        print(f"tomosep: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InvalidInput, TomosepError, ValueError) as exc:
        print(f"tomosep: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
