"""Command-line front end.

Subcommands: ``classify``, ``rep``, ``verify``, ``enum`` and ``random``.
Every command writes JSON lines to stdout and a short summary to stderr.

Exit codes: 0 when every result verified, 1 for usage, parse or
precondition errors, 2 when a verification failed (including precision that
ran out before a certificate could be produced).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from .affperm import AffinePermutation
from .coeff import ApproxField, get_field
from .enumerate import EnumSpec, IndexingSet, enum_indexing_set
from .errors import AffineOrbitError, DetNotSquare, PrecisionExhausted
from .laurent import working_precision
from .linalg import (Residual, SeriesMatrix, congruence, random_iwahori, random_orthogonal,
                     random_symplectic, residual)
from .orbits_on import build_gw_On, classify_On, det_is_square, reduce_symmetric
from .orbits_so import (Sign, build_gw_SOn, canonical_form, classify_SOn,
                        reduce_symmetric_sl)
from .orbits_sp import build_gw_Sp, build_h_sk, classify_Sp, reduce_skew, sp_form

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2

GROUPS = ("O", "SO", "Sp")
INDEXING = {"O": IndexingSet.eSymAPM, "SO": IndexingSet.iSymAPM, "Sp": IndexingSet.SkewAPM}


@dataclass(frozen=True)
class RunConfig:
    backend: str = "approx"
    precision: int = 32
    tolerance: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.backend not in ("exact", "approx"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.precision < 8:
            raise ValueError("precision must be at least 8")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")

    @property
    def field(self):
        if self.backend == "exact":
            return get_field("exact")
        return ApproxField(self.tolerance)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(obj):
    sys.stdout.write(json.dumps(obj) + "\n")


def _note(text: str):
    sys.stderr.write(text + "\n")


def _residual_json(res: Residual, depth: int | None = None) -> dict:
    first = next((k for k, _ in res.profile), None)
    out = {"max_abs": res.max_abs, "lowest_nonzero_degree": first, "min_prec": res.min_prec}
    if depth is not None:
        out["certified_depth"] = depth
        out["max_abs_to_depth"] = res.max_abs_upto(depth)
    return out


# --------------------------------------------------------------------------
# input


def _read_records(path: str | None):
    """JSON from a file or stdin: one document, or one document per line."""
    text = sys.stdin.read() if path in (None, "-") else open(path, encoding="utf-8").read()
    text = text.strip()
    if not text:
        return []
    try:
        doc = json.loads(text)
        return doc if isinstance(doc, list) and doc and isinstance(doc[0], dict) else [doc]
    except json.JSONDecodeError:
        pass
    out = []
    for k, line in enumerate(text.splitlines(), start=1):
        if line.strip():
            try:
                out.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise UsageError(f"line {k}: not JSON ({exc.msg})") from exc
    return out


def _matrix(obj, field) -> SeriesMatrix:
    try:
        return SeriesMatrix.from_json(obj, field)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"cannot read a matrix: {exc}") from exc


def _parse_w(text: str) -> AffinePermutation:
    try:
        return AffinePermutation.parse(text)
    except ValueError as exc:
        raise UsageError(f"bad --w {text!r}: {exc}") from exc


# --------------------------------------------------------------------------
# classify


def _classify_one(group: str, kind: str, m: SeriesMatrix, tol: float) -> dict:
    if group == "O":
        if kind == "h":
            if not det_is_square(m):
                raise UsageError("DetNotSquare: det(h) has odd order, so h is not g^T g")
            res = reduce_symmetric(m, tol)
            h = m
        else:
            res = classify_On(m, tol)
            h = m.T @ m
        w, sign, canon_m = res.w, None, res.canon.to_matrix()
    elif group == "SO":
        res = reduce_symmetric_sl(m, tol) if kind == "h" else classify_SOn(m, tol)
        h = m if kind == "h" else m.T @ m
        w, sign, canon_m = res.canon.w, res.canon.sign.value, res.canon.form.to_matrix()
    else:
        res = reduce_skew(m, tol) if kind == "h" else classify_Sp(m, tol)
        h = m if kind == "h" else m.T @ sp_form(m.n // 2, m.field) @ m
        w, sign, canon_m = res.canon.w, None, res.canon.form.to_matrix()
    rsd = residual(congruence(res.witness, h), canon_m)
    depth = max(w.shifts)
    verified = rsd.certifies(0.0 if m.field.exact else tol, depth)
    if not verified:
        # never report a canonical form the witness does not certify
        return {"group": group, "error": "witness residual above tolerance",
                "residual": _residual_json(rsd, depth), "verified": False}
    out = {"group": group, "w": str(w)}
    if sign is not None:
        out["sign"] = sign
    out["witness"] = res.witness.to_json()
    out["residual"] = _residual_json(rsd, depth)
    out["verified"] = True
    return out


def cmd_classify(args, cfg: RunConfig) -> int:
    if args.input and args.from_g:
        raise UsageError("give either --in or --from-g, not both")
    field = cfg.field
    default_kind = "g" if args.from_g else "h"
    records = _read_records(args.from_g or args.input)
    if not records:
        raise UsageError("no input")
    verified = matched = expected = failed = 0
    usage = False
    for k, rec in enumerate(records, start=1):
        kind, body = default_kind, rec
        if isinstance(rec, dict) and ("g" in rec or "h" in rec):
            kind = "g" if "g" in rec else "h"
            body = rec[kind]
        try:
            m = _matrix(body, field)
            out = {"input": k, **_classify_one(args.group, kind, m, cfg.tolerance)}
        except (UsageError, DetNotSquare) as exc:
            if isinstance(exc, DetNotSquare) and kind == "g":
                out = {"input": k, "error": f"DetNotSquare: {exc}", "verified": False}
                failed += 1
            else:
                out = {"input": k, "error": str(exc)}
                usage = True
            _emit(out)
            continue
        except PrecisionExhausted as exc:
            _emit({"input": k, "error": f"PrecisionExhausted: {exc}", "verified": False})
            failed += 1
            continue
        except AffineOrbitError as exc:
            _emit({"input": k, "error": f"{type(exc).__name__}: {exc}"})
            usage = True
            continue
        if isinstance(rec, dict) and "expected" in rec and out["verified"]:
            expected += 1
            ok = out["w"] == str(AffinePermutation.parse(rec["expected"]))
            if "sign" in rec and rec["sign"] is not None:
                ok = ok and out.get("sign") == rec["sign"]
            out["matches_expected"] = ok
            matched += ok
        verified += out["verified"]
        if not out["verified"]:
            failed += 1
        _emit(out)
    summary = f"classify --group {args.group}: {verified}/{len(records)} verified"
    if expected:
        summary += f", {matched}/{expected} match the expected w"
    _note(summary)
    if usage:
        return EXIT_USAGE
    if failed or matched < expected:
        return EXIT_FAILED
    return EXIT_OK


# --------------------------------------------------------------------------
# rep and verify


def _sign_arg(group: str, w: AffinePermutation, sign):
    if group != "SO":
        if sign is not None:
            raise UsageError("--sign only applies to --group SO")
        return None
    if w.fixed_points():
        if sign not in (None, "none"):
            raise UsageError(f"{w} has fixed points and carries no sign")
        return Sign.none
    if sign not in ("+", "-"):
        raise UsageError(f"{w} is fixed-point-free: pass --sign + or --sign -")
    return Sign(sign)


def _representative(group: str, w: AffinePermutation, sign, field) -> SeriesMatrix:
    if group == "O":
        return build_gw_On(w, field)
    if group == "SO":
        return build_gw_SOn(w, sign, field)
    return build_gw_Sp(w, field)


def _target(group: str, w: AffinePermutation, sign, field) -> tuple:
    if group == "O":
        return "g^T g = w", w.to_matrix(field)
    if group == "SO":
        return "g^T g = h_w", canonical_form(w, sign, field).to_matrix()
    return "g^T J g = h^sk_w", build_h_sk(w, field).to_matrix()


def cmd_rep(args, cfg: RunConfig) -> int:
    w = _parse_w(args.w)
    sign = _sign_arg(args.group, w, args.sign)
    g = _representative(args.group, w, sign, cfg.field)
    out = {"group": args.group, "w": str(w)}
    if sign is not None:
        out["sign"] = sign.value
    out["g"] = g.to_json()
    _emit(out)
    _note(g.format(max_terms=3))
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    w = _parse_w(args.w)
    sign = _sign_arg(args.group, w, args.sign)
    records = _read_records(args.g)
    if len(records) != 1:
        raise UsageError("--g must hold exactly one matrix")
    g = _matrix(records[0].get("g", records[0]) if isinstance(records[0], dict) else records[0],
                cfg.field)
    if g.n != w.n:
        raise UsageError(f"g is {g.n}x{g.n} but w has size {w.n}")
    label, target = _target(args.group, w, sign, cfg.field)
    lhs = g.T @ sp_form(g.n // 2, g.field) @ g if args.group == "Sp" else g.T @ g
    rsd = residual(lhs, target)
    tol = 0.0 if cfg.field.exact else cfg.tolerance
    ok = rsd.ok(tol)
    out = {"group": args.group, "w": str(w), "identity": label, "residual": _residual_json(rsd)}
    if args.group == "SO":
        d = g.det() - 1
        out["det_one"] = d.is_zero if cfg.field.exact else d.max_abs_coeff() <= tol
        ok = ok and out["det_one"]
    out["verified"] = ok
    _emit(out)
    _note(f"verify {label}: {'ok' if ok else 'FAILED'} (max residual {rsd.max_abs:.3g})")
    return EXIT_OK if ok else EXIT_FAILED


# --------------------------------------------------------------------------
# enum and random


def cmd_enum(args, cfg: RunConfig) -> int:
    try:
        spec = EnumSpec(args.n, args.bound, args.set)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    field = cfg.field
    count = 0
    for m in enum_indexing_set(spec, field):
        count += 1
        if args.count_only:
            continue
        out = {"w": str(m.affine()), **m.to_json()}
        if spec.filter is IndexingSet.iSymAPM and not m.affine().fixed_points():
            out["sign"] = "+" if field.close(m.units[0], field.i) else "-"
        _emit(out)
    if args.count_only:
        _emit({"set": spec.filter.value, "n": spec.n, "bound": spec.max_abs_exp, "count": count})
    _note(f"{spec.filter.value}, n = {spec.n}, |shift| <= {spec.max_abs_exp}: {count} elements")
    return EXIT_OK


def random_group_element(group: str, n: int, rng: random.Random, field) -> SeriesMatrix:
    """A random element of SO_n (for O and SO) or Sp_n with Laurent polynomial entries."""
    if group == "Sp":
        return random_symplectic(n, rng, field)
    return random_orthogonal(n, rng, field)


def cmd_random(args, cfg: RunConfig) -> int:
    group, n = args.group, args.n
    if group == "Sp" and n % 2:
        raise UsageError("--group Sp needs an even --n")
    field = cfg.field
    rng = random.Random(cfg.seed)
    pool = list(enum_indexing_set(EnumSpec(n, args.bound, INDEXING[group]), field))
    for _ in range(args.count):
        m = rng.choice(pool)
        w = m.affine()
        sign = None
        if group == "SO":
            sign = Sign.none if w.fixed_points() else (
                Sign.plus if field.close(m.units[0], field.i) else Sign.minus)
        k = random_group_element(group, n, rng, field)
        b = random_iwahori(n, rng, field, det_one=(group == "SO"))
        g = k @ _representative(group, w, sign, field) @ b
        out = {"group": group, "expected": str(w)}
        if sign is not None:
            out["sign"] = sign.value
        out["g"] = g.to_json()
        _emit(out)
    _note(f"random --group {group}: {args.count} instances, seed {cfg.seed}")
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="affine-orbits",
                description="Iwahori orbits of O_n, SO_n and Sp_2n on affine flag varieties.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, backend):
        sp.add_argument("--backend", choices=("exact", "approx"), default=backend)
        sp.add_argument("--prec", type=int, default=32, help="series terms kept (>= 8)")
        sp.add_argument("--tolerance", type=float, default=1e-8,
                        help="approximate zero test and residual tolerance")
        sp.add_argument("--seed", type=int, default=0)

    c = sub.add_parser("classify", help="canonical form and witness for g or h")
    c.add_argument("--group", choices=GROUPS, required=True)
    c.add_argument("--in", dest="input", help="matrix h (g^T g or g^T J g) as JSON; '-' for stdin")
    c.add_argument("--from-g", help="matrix g as JSON; '-' for stdin")
    common(c, "approx")
    c.set_defaults(func=cmd_classify)

    r = sub.add_parser("rep", help="the representative g_w")
    r.add_argument("--group", choices=GROUPS, required=True)
    r.add_argument("--w", required=True, help='e.g. "(2 4) ; 4,-2,-5,-2,3"')
    r.add_argument("--sign", choices=("+", "-", "none"))
    common(r, "exact")
    r.set_defaults(func=cmd_rep)

    v = sub.add_parser("verify", help="check the defining identity for a given g")
    v.add_argument("--group", choices=GROUPS, required=True)
    v.add_argument("--w", required=True)
    v.add_argument("--sign", choices=("+", "-", "none"))
    v.add_argument("--g", default="-", help="matrix g as JSON (default stdin)")
    common(v, "exact")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("enum", help="list a bounded indexing set")
    e.add_argument("--set", choices=[s.value for s in IndexingSet], required=True)
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--bound", type=int, default=1)
    e.add_argument("--count-only", action="store_true")
    common(e, "exact")
    e.set_defaults(func=cmd_enum)

    q = sub.add_parser("random", help="random (g, expected w) pairs k g_w b")
    q.add_argument("--group", choices=GROUPS, required=True)
    q.add_argument("--n", type=int, required=True, help="matrix size")
    q.add_argument("--count", type=int, default=10)
    q.add_argument("--bound", type=int, default=1, help="largest |shift| of the sampled w")
    common(q, "approx")
    q.set_defaults(func=cmd_random)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(args.backend, args.prec, args.tolerance, args.seed)
    except ValueError as exc:
        _note(f"error: {exc}")
        return EXIT_USAGE
    try:
        with working_precision(cfg.precision):
            return args.func(args, cfg)
    except UsageError as exc:
        _note(f"error: {exc}")
        return EXIT_USAGE
    except PrecisionExhausted as exc:
        _note(f"error: PrecisionExhausted: {exc}")
        return EXIT_FAILED
    except (AffineOrbitError, ValueError, OSError) as exc:
        _note(f"error: {type(exc).__name__}: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
