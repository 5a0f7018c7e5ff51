"""Command line front end.

Subcommands: basis, ibn, twist, inner, group, closure, separate, verify.
Narrative reports go to stdout and are deterministic for a fixed seed;
timing goes to stderr.  Certificates are versioned JSON documents written
next to the reports (--output overrides the default file name) and any of
them can be rechecked later with `repgeo verify FILE`, which needs nothing
but the file.

Exit codes: 0 all checks passed, 1 a check failed, 2 bad config or input,
3 certification inconclusive at the configured bounds.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import certificates as certs
from .config import (ConfigError, RunConfig, build_free, build_target,
                     build_variety, load_config, parse_automorphism,
                     parse_system_file)
from .field import FieldDescriptor, MixedFields, NotSquareFree
from .freealg import word_key
from .freelie import witt_dimension
from .geometry import (DEFAULT_SEED, CertificationFailed, EmptyHomSet,
                       EquationSystem, FixedScalar, Parameterized, Sampled,
                       closure, separation_example)
from .linalg import Echelon
from .parser import TermSyntaxError, parse_scalar
from .representation import ibn_invariants
from .verbal import (NotIsomorphism, WordSystem, is_inner,
                     quotient_group_description, s_map)

EXIT_PASS = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_INCONCLUSIVE = 3


def _load_or_default(args) -> RunConfig:
    if getattr(args, "variety", None):
        cfg = load_config(args.variety)
    else:
        cfg = RunConfig(field=FieldDescriptor.rationals(), cap=6,
                        lie_generators=2, module_generators=1)
    if getattr(args, "field", None):
        cfg = cfg.with_overrides(field=FieldDescriptor.parse(args.field))
    if getattr(args, "n1", None):
        cfg = cfg.with_overrides(lie_generators=args.n1)
    if getattr(args, "n2", None):
        cfg = cfg.with_overrides(module_generators=args.n2)
    if getattr(args, "cap", None):
        cfg = cfg.with_overrides(cap=args.cap)
    if getattr(args, "seed", None) is not None:
        cfg = cfg.with_overrides(seed=args.seed)
    return cfg


def _write(args, kind: str, cfg: RunConfig, payload: dict) -> None:
    path = getattr(args, "output", None) or f"{kind}-certificate.json"
    certs.write_document(path, certs.make_document(kind, cfg, payload))
    print(f"certificate written to {path}")


# ---------------------------------------------------------------------------
# report payloads shared with `verify`

def basis_payload(cfg: RunConfig) -> dict:
    from .freelie import LyndonBasis
    basis = LyndonBasis(cfg.lie_generators, cfg.cap, cfg.field)
    degrees = []
    for d in range(1, cfg.cap + 1):
        elements = basis.elements(d)
        ech = Echelon(word_key)
        ech.extend([dict(e.poly.terms) for e in elements])
        degrees.append([d, len(elements),
                        witt_dimension(d, cfg.lie_generators), ech.dim])
    return {
        "alphabet": cfg.lie_generators,
        "cap": cfg.cap,
        "degrees": degrees,
        "passed": all(n == w == r for _, n, w, r in degrees),
    }


def ibn_payload(cfg: RunConfig) -> dict:
    rep = build_free(cfg)
    computed = ibn_invariants(rep)
    return {
        "declared": [cfg.lie_generators, cfg.module_generators],
        "computed": list(computed),
        "passed": computed == (cfg.lie_generators, cfg.module_generators),
    }


def twist_payload(cfg: RunConfig, system: WordSystem,
                  samples: int, seed: int) -> dict:
    rep = build_free(cfg)
    s = s_map(rep, system, verify=False)
    try:
        executed = s.check_laws(samples=samples, seed=seed)
        passed, failure = True, None
    except NotIsomorphism as exc:
        executed, passed, failure = [], False, str(exc)
    return {
        "system": certs.word_system_to_json(system),
        "samples": samples,
        "seed": seed,
        "laws": executed,
        "passed": passed,
        "failure": failure,
    }


def recompute_report(kind: str, cfg: RunConfig, payload: dict) -> dict:
    """Rebuild a report payload from its config; `verify` compares these."""
    if kind == "basis":
        return basis_payload(cfg)
    if kind == "ibn":
        return ibn_payload(cfg)
    if kind == "twist-battery":
        system = certs.word_system_from_json(payload["system"], cfg.field)
        return twist_payload(cfg, system, payload["samples"], payload["seed"])
    raise certs.BadCertificate(f"unknown report kind {kind!r}")


# ---------------------------------------------------------------------------
# subcommands

def cmd_basis(args) -> int:
    cfg = _load_or_default(args)
    payload = basis_payload(cfg)
    print(f"free Lie algebra on {payload['alphabet']} generator(s), "
          f"degrees 1..{payload['cap']}")
    for d, n, w, r in payload["degrees"]:
        print(f"  degree {d}: {n} basis elements, Witt number {w}, "
              f"independent image rank {r}")
    print("all degrees match" if payload["passed"] else "MISMATCH found")
    _write(args, "basis", cfg, payload)
    return EXIT_PASS if payload["passed"] else EXIT_CHECK_FAILED


def cmd_ibn(args) -> int:
    cfg = _load_or_default(args)
    payload = ibn_payload(cfg)
    a, b = payload["computed"]
    print(f"invariants recovered from the free representation: ({a}, {b})")
    print("generator counts are determined" if payload["passed"]
          else "MISMATCH against the declared counts")
    _write(args, "ibn", cfg, payload)
    return EXIT_PASS if payload["passed"] else EXIT_CHECK_FAILED


def _parse_system_arg(args, cfg: RunConfig) -> WordSystem:
    a = parse_scalar(args.a, cfg.field)
    phi = parse_automorphism(args.phi, cfg.field)
    return WordSystem(a, phi)


def cmd_twist(args) -> int:
    cfg = _load_or_default(args)
    system = _parse_system_arg(args, cfg)
    seed = cfg.seed if cfg.seed is not None else DEFAULT_SEED
    payload = twist_payload(cfg, system, args.random, seed)
    print(f"substitution map for the system {system}")
    if payload["passed"]:
        print(f"semilinearity battery passed: {len(payload['laws'])} checks "
              f"({args.random} random samples, seed {seed})")
    else:
        print(f"battery FAILED: {payload['failure']}")
    _write(args, "twist-battery", cfg, payload)
    return EXIT_PASS if payload["passed"] else EXIT_CHECK_FAILED


def cmd_inner(args) -> int:
    cfg = _load_or_default(args)
    system = _parse_system_arg(args, cfg)
    verdict = is_inner(system, build_variety(cfg))
    print(str(verdict))
    _write(args, "inner", cfg, certs.inner_verdict_to_json(verdict))
    return EXIT_PASS


def cmd_group(args) -> int:
    cfg = _load_or_default(args)
    desc = quotient_group_description(build_variety(cfg))
    print(str(desc))
    _write(args, "group", cfg, certs.group_to_json(desc))
    return EXIT_PASS


def cmd_closure(args) -> int:
    cfg = load_config(args.variety)
    target_cfg = load_config(args.target) if args.target else cfg
    for key in ("field", "cap", "lie_generators", "module_generators",
                "identities"):
        if getattr(cfg, key) != getattr(target_cfg, key):
            raise ConfigError(f"variety and target configs disagree on {key}")
    if args.seed is not None:
        target_cfg = target_cfg.with_overrides(seed=args.seed)
    src = build_free(target_cfg)
    target = build_target(target_cfg)
    with open(args.system, "r", encoding="utf-8") as fh:
        elements = parse_system_file(fh.read(), src, source=args.system)
    seed = target_cfg.seed if target_cfg.seed is not None else DEFAULT_SEED
    sampled = Sampled(args.strata, seed, args.max_points)
    parameterized = Parameterized(target_cfg.degree_bound)
    T = EquationSystem(src, elements)
    con, cert = closure(T, target, sampled, parameterized)
    lie_dim, mod_dim = con.dims
    print(f"closure of {len(elements)} equation(s): module dimension "
          f"{mod_dim} (sampled Lie bound {lie_dim})")
    print(f"certified {len(cert.congruence_basis)} basis elements at "
          f"degree bound {cert.degree_bound}")
    _write(args, "closure", target_cfg, certs.closure_cert_to_json(cert))
    return EXIT_PASS


def _section5_config(d: int, seed: int) -> RunConfig:
    return RunConfig(field=FieldDescriptor.quadratic(d), cap=6,
                     lie_generators=2, module_generators=1,
                     identities=("x1*x2*x3*x4*x5*x6",), seed=seed)


def cmd_separate(args) -> int:
    field = FieldDescriptor.quadratic(args.d)
    lam = parse_scalar(args.lam, field) if args.lam else None
    seed = args.seed if args.seed is not None else DEFAULT_SEED
    report = separation_example(args.d, lam, seed,
                                correspondence_samples=args.correspondence,
                                cross_check_samples=args.cross_check)
    for line in report.summary_lines()[:-1]:
        print(line)
    print(f"overall: {'pass' if report.passed else 'FAIL'}")
    print(f"elapsed: {report.elapsed:.1f}s", file=sys.stderr)
    cfg = _section5_config(args.d, seed)
    payload = {
        "d": report.d,
        "lam": certs.scalar_to_json(report.lam),
        "dims": report.dims,
        "items": [{"key": i.key, "title": i.title, "passed": i.passed,
                   "detail": i.detail} for i in report.items],
        "closed_certificate": certs.closure_cert_to_json(report.closed_certificate),
        "open_certificate": certs.closure_cert_to_json(report.open_certificate),
        "correspondence": report.correspondence,
        "anomalies": report.anomalies,
    }
    _write(args, "separation", cfg, payload)
    return EXIT_PASS if report.passed else EXIT_CHECK_FAILED


def cmd_verify(args) -> int:
    all_ok = True
    for path in args.files:
        doc = certs.load_document(path)
        ok, lines = certs.verify_document(doc)
        status = "ok" if ok else "FAILED"
        print(f"{path}: {doc['kind']} certificate {status}")
        for line in lines:
            print(f"  {line}")
        all_ok = all_ok and ok
    return EXIT_PASS if all_ok else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# argument parsing

def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="repgeo",
        description="exact closure computations for two-sorted "
                    "representations of Lie algebras")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, variety_required=False):
        p.add_argument("--variety", required=variety_required,
                       metavar="CFG", help="variety config file")
        p.add_argument("--output", metavar="PATH",
                       help="certificate file (default <kind>-certificate.json)")
        p.add_argument("--seed", type=int, default=None,
                       help=f"sampling seed (default {DEFAULT_SEED})")

    p = sub.add_parser("basis", help="Lyndon basis counts vs Witt numbers")
    common(p)
    p.add_argument("--field", help="ground field, e.g. \"Q(sqrt 2)\"")
    p.add_argument("--n1", type=int, help="Lie generator count")
    p.add_argument("--cap", type=int, help="degree cap")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("ibn", help="recover generator counts from the free "
                                   "representation")
    common(p, variety_required=True)
    p.add_argument("--n1", type=int, help="Lie generator count override")
    p.add_argument("--n2", type=int, help="module generator count override")
    p.set_defaults(func=cmd_ibn)

    p = sub.add_parser("twist", help="substitution-map semilinearity battery")
    common(p, variety_required=True)
    p.add_argument("--a", required=True, help="scaling constant term")
    p.add_argument("--phi", required=True, help="field automorphism: id or conj")
    p.add_argument("--random", type=int, default=100,
                   help="random sample count (default 100)")
    p.set_defaults(func=cmd_twist)

    p = sub.add_parser("inner", help="decide whether a twist system is inner")
    common(p, variety_required=True)
    p.add_argument("--a", required=True, help="scaling constant term")
    p.add_argument("--phi", required=True, help="field automorphism: id or conj")
    p.set_defaults(func=cmd_inner)

    p = sub.add_parser("group", help="twist classes modulo inner systems")
    common(p, variety_required=True)
    p.add_argument("--field", help="ground field override")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("closure", help="certified closure of an equation system")
    common(p, variety_required=True)
    p.add_argument("--system", required=True, metavar="FILE",
                   help="equations, one module term per line")
    p.add_argument("--target", metavar="CFG",
                   help="target config (default: the free representation)")
    p.add_argument("--strata", type=int, default=10,
                   help="sampling strata (default 10)")
    p.add_argument("--max-points", type=int, default=None,
                   help="cap on kernel points per stratum")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("separate",
                       help="the closedness separation between a quotient "
                            "and its conjugation twist")
    p.add_argument("--d", type=int, default=2,
                   help="radicand of the quadratic field (default 2)")
    p.add_argument("--lambda", dest="lam", default=None,
                   help="twist scalar term (default sqrt(d))")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--correspondence", type=int, default=20,
                   help="sampled closed congruences to transport (default 20)")
    p.add_argument("--cross-check", type=int, default=1000,
                   help="sampled solutions for spot checks (default 1000)")
    p.add_argument("--output", metavar="PATH")
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("verify", help="revalidate certificate files")
    p.add_argument("files", nargs="+", metavar="FILE")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)
    start = time.monotonic()
    try:
        code = args.func(args)
    except (ConfigError, TermSyntaxError, certs.BadCertificate, NotSquareFree,
            MixedFields, FixedScalar, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (CertificationFailed, EmptyHomSet) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    print(f"total time: {time.monotonic() - start:.1f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
