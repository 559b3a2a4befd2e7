"""
Command line front end.

Exit status: 0 on success, 1 when a verification suite reports a failing
case, 2 on invalid arguments.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import mpmath

from . import asymptotics as asy
from . import fusion, genfun, rootsum
from .fusion import InvalidPrime, NotATiltingCharacter

SUITES = ("recurrences", "multiplicativity", "cs", "single_digit", "estimates")


class UsageError(Exception):
    pass


def _prime(text: str) -> int:
    try:
        return fusion.check_prime(int(text))
    except (ValueError, InvalidPrime) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def _precision(text: str) -> int:
    v = int(text)
    if v < 64:
        raise argparse.ArgumentTypeError("precision must be at least 64 bits")
    return v


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _tilting(text: str):
    try:
        return asy.parse_tilting(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _dec(x, bits: int) -> str:
    return mpmath.nstr(x, max(6, int(bits * math.log10(2)) - 2), strip_zeros=False)


# --- subcommands ---------------------------------------------------------------

def cmd_decompose(a) -> tuple[str, int]:
    dec = fusion.tensor_by_V(_need(a, "n"), a.p)
    if a.format == "text":
        return f"T({a.n}) (x) V = {dec.to_string()}", 0
    return json.dumps({"summands": [list(e) for e in dec.summands()]}), 0


def cmd_char(a) -> tuple[str, int]:
    if a.tilting is not None:
        T = a.tilting
        chi = T.character(a.p)
        label = asy.format_tilting(T)
    else:
        label = str(_need(a, "n"))
        chi = fusion.tilting_character(a.n, a.p)
    if a.format == "text":
        return f"chi[{label}] = {chi.to_string()}  (dim {chi.at_one()})", 0
    return json.dumps({"p": a.p, "T": label, "dim": chi.at_one(),
                       "coeffs": [[m, c] for m, c in chi.items()]}), 0


def cmd_graph(a) -> tuple[str, int]:
    g = fusion.fusion_graph(a.p, _need(a, "nmax"))
    if a.format == "json":
        return g.to_json(), 0
    if a.format == "text":
        return "\n".join(f"{n} -> {m}" + (f" x{c}" if c > 1 else "") for n, m, c in g.edges), 0
    return g.to_dot().rstrip("\n"), 0


def cmd_count(a) -> tuple[str, int]:
    T = a.tilting or fusion.V
    k = _need(a, "k")
    if k < 0:
        raise UsageError("k must be non-negative")
    dec = fusion.tensor_power_multiplicities(T, k, a.p)
    if a.format == "text":
        return str(dec.total()), 0
    return json.dumps({"p": a.p, "T": asy.format_tilting(T), "k": k, "b_k": str(dec.total()),
                       "summands": [[n, str(c)] for n, c in dec.summands()]}), 0


def cmd_genfun(a) -> tuple[str, int]:
    n = _need(a, "n")
    if n < 1:
        raise UsageError("genfun needs n >= 1 (Z_0 = 1/t)")
    f = genfun.Z_closed(genfun.GenFunQuery(a.p, n))
    if a.format == "json":
        return json.dumps({"p": a.p, "n": n, **f.to_json(), "text": f.to_string()}), 0
    return f"Z_{n} = {f.to_string()}", 0


def _report_output(reports, extra=None) -> tuple[str, int]:
    payload = {"reports": [r.to_json() for r in reports],
               "passed": all(r.passed for r in reports)}
    if extra:
        payload.update(extra)
    return json.dumps(payload), 0 if payload["passed"] else 1


def cmd_verify(a) -> tuple[str, int]:
    suites = SUITES if a.suite == "all" else (a.suite,)
    reports, extra = [], {}
    jobs = a.jobs
    for suite in suites:
        if suite == "recurrences":
            reports.append(genfun.verify_linear_recurrences(a.p, a.nmax or a.p ** 3, jobs=jobs))
        elif suite == "multiplicativity":
            reports.append(genfun.verify_multiplicativity(a.p, a.smax or 3, seed=a.seed, jobs=jobs))
        elif suite == "cs":
            reports.append(genfun.verify_cs_identities(a.p, a.smax or 2, jobs=jobs))
        elif suite == "single_digit":
            reports.append(genfun.verify_single_digit(a.p, a.smax or 2))
        elif suite == "estimates":
            for s in range((a.smax if a.smax is not None else 2) + 1):
                rep = rootsum.verify_estimates(a.p, s, a.samples, seed=a.seed, precision=a.precision)
                reports.append(rep)
                extra.setdefault("estimate_summary", {})[str(s)] = rootsum.estimate_summary(rep)
    if a.format == "text":
        out, code = _report_output(reports, extra)
        lines = [r.summary() for r in reports]
        return "\n".join(lines), code
    return _report_output(reports, extra)


def cmd_coeff(a) -> tuple[str, int]:
    n = _need(a, "n")
    L = a.lmax if a.lmax is not None else 20
    rep = genfun.coeffs_vs_oracle(a.p, n, L)
    series = genfun.taylor_coeffs(genfun.Z_closed((a.p, n)), L)
    if a.format == "text":
        return f"{rep.summary()}\n{series}", 0 if rep.passed else 1
    return _report_output([rep], {"coeffs": [str(c) for c in series]})


def cmd_rootsum(a) -> tuple[str, int]:
    plan = rootsum.RootSumPlan(a.p, _need(a, "n"), a.precision)
    ls = [a.l] if a.l is not None else rootsum.admissible_ls(plan, 1)
    rows = []
    for l in ls:
        res = rootsum.mu_rootsum(plan, l)
        rows.append({"n": plan.n, "l": l, **res.to_json()})
    if a.format == "text":
        return "\n".join(f"mu_{r['n'] - 1}(x^{r['l']}) = {r['rounded']}  (value {r['value']}, "
                         f"residual {r['residual']}, {r['precision_bits_used']} bits, "
                         f"{r['n_roots']} roots)" for r in rows), 0
    return json.dumps(rows[0] if len(rows) == 1 else rows), 0


def cmd_alpha(a) -> tuple[str, int]:
    val = asy.alpha_p(a.p, a.precision)
    text = _dec(val, a.precision)
    if a.format == "text":
        return text, 0
    return json.dumps({"p": a.p, "alpha_p": text, "precision_bits": a.precision}), 0


def cmd_growth(a) -> tuple[str, int]:
    T = a.tilting or fusion.V
    ks = a.k if a.k is not None else [2 ** i for i in range(4, 11)]
    if min(ks) < 1:
        raise UsageError("growth needs k >= 1")
    samples = asy.growth_table(T, a.p, ks, a.precision)
    if a.format == "json":
        return json.dumps(asy.growth_summary(samples, T, a.p, a.precision)), 0
    return asy.growth_csv(samples, T, a.p, a.precision).rstrip("\n"), 0


def cmd_tail(a) -> tuple[str, int]:
    T = a.tilting or fusion.V
    spec = asy.spec_from_tilting(T, a.p)
    ks = a.k if a.k is not None else [64, 128, 256, 512]
    rows = []
    for k in ks:
        if k < 1:
            raise UsageError("tail needs k >= 1")
        cutoff = a.cutoff if a.cutoff is not None else math.sqrt(k) * math.log(k)
        mass, ratio = asy.weight_tail_mass(spec, k, cutoff, a.precision)
        rows.append({"k": k, "cutoff": repr(float(cutoff)), "mass": str(mass),
                     "ratio": _dec(ratio, a.precision), "precision_bits": a.precision})
    if a.format == "text":
        return "\n".join(f"k={r['k']} cutoff={r['cutoff']} mass={r['mass']} ratio={r['ratio']}"
                         for r in rows), 0
    return json.dumps({"p": a.p, "T": asy.format_tilting(T), "rows": rows}), 0


COMMANDS = {
    "decompose": (cmd_decompose, "decompose T(n) (x) V", ("json", "text")),
    "char": (cmd_char, "formal character of T(n) or of --tilting", ("json", "text")),
    "graph": (cmd_graph, "fusion graph for sources n < nmax", ("dot", "json", "text")),
    "count": (cmd_count, "b_k, the number of summands of T^k", ("json", "text")),
    "genfun": (cmd_genfun, "closed form of Z_n", ("text", "json")),
    "verify": (cmd_verify, "run identity / estimate suites", ("json", "text")),
    "coeff": (cmd_coeff, "Taylor coefficients of Z_n against the DP oracle", ("json", "text")),
    "rootsum": (cmd_rootsum, "multiplicity from the root-sum formula", ("json", "text")),
    "alpha": (cmd_alpha, "the growth exponent alpha_p", ("text", "json")),
    "growth": (cmd_growth, "b_k k^alpha / (dim T)^k table", ("csv", "json")),
    "tail": (cmd_tail, "weight tail mass of T^k", ("json", "text")),
}


def _need(a, name):
    v = getattr(a, name, None)
    if v is None:
        raise UsageError(f"--{name} is required for {a.command}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tiltfuse", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    default_prec = rootsum.default_precision()
    for name, (_, help_text, formats) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--p", type=_prime, required=True, help="odd prime characteristic")
        sp.add_argument("--format", choices=formats, default=formats[0])
        sp.add_argument("--precision", type=_precision, default=default_prec,
                        help="working precision in bits (env TILTFUSE_PRECISION)")
        sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tilting", type=_tilting, default=None,
                        help='module as "n:mult,...", "n" or "V"')
        sp.add_argument("--n", type=_nonneg)
        sp.add_argument("--nmax", type=_nonneg)
        sp.add_argument("--k", type=_int_list, help="k or comma-separated list of k")
        sp.add_argument("--lmax", type=_nonneg)
        if name == "verify":
            sp.add_argument("--suite", choices=SUITES + ("all",), default="all")
            sp.add_argument("--smax", type=_nonneg)
            sp.add_argument("--samples", type=_nonneg, default=10000)
        if name == "rootsum":
            sp.add_argument("--l", type=_nonneg)
        if name == "tail":
            sp.add_argument("--cutoff", type=float)
    return parser


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "count" and args.k is not None:
        if len(args.k) != 1:
            err.write("tiltfuse: count takes a single --k\n")
            return 2
        args.k = args.k[0]
    handler = COMMANDS[args.command][0]
    try:
        text, code = handler(args)
    except (UsageError, InvalidPrime, rootsum.RegimeViolation, ValueError) as exc:
        err.write(f"tiltfuse {args.command}: {exc}\n")
        return 2
    except (NotATiltingCharacter, rootsum.RootSumPrecisionError, asy.InvariantViolation) as exc:
        err.write(f"tiltfuse {args.command}: {exc}\n")
        return 1
    out.write(text + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
