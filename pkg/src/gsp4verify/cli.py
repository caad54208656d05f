"""Suite runner for the verification library.

Sweeps the exact-identity checks over configurable parameter grids,
collects one record per case, and emits a deterministic report in JSON,
TSV or human-readable form.  Exit code 0 means every case passed, 1
means at least one case failed or errored, and 2 means the
configuration was invalid.
"""

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .symcore import as_ratfunc, ell_pow, sym

SUITE_NAMES = ("gl2", "hecke", "parahoric", "bessel", "tame-norm",
               "wild-norm", "branching", "local-data", "frobrecip")

_SMALL_PRIMES = (2, 3, 5, 7)

JOBS_ENV = "GSP4VERIFY_JOBS"
TIMINGS_ENV = "GSP4VERIFY_TIMINGS"


class ConfigError(ValueError):
    """Invalid runner configuration."""


@dataclass
class SuiteConfig:
    suites: tuple = SUITE_NAMES
    primes: tuple = None              # None -> per-suite defaults
    a_max: int = 3
    b_max: int = 4
    k_max: int = 2
    t_max: int = 3
    m_max: int = 2
    n_max: int = 2
    series_order: int = 9
    parallelism: int = 1
    fmt: str = "human"
    out: str = None
    timings: bool = False

    def validate(self):
        for s in self.suites:
            if s not in SUITE_NAMES:
                raise ConfigError("unknown suite: %s" % s)
        if self.primes is not None:
            for p in self.primes:
                if p not in _SMALL_PRIMES:
                    raise ConfigError(
                        "prime %s outside supported range (2..7)" % p)
        for name in ("a_max", "b_max", "k_max", "t_max", "m_max", "n_max"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ConfigError("%s must be a non-negative integer" % name)
        if 6 ** self.a_max > 6 ** 3 * 4 ** 4 or 4 ** self.b_max > 6 ** 3 * 4 ** 4:
            raise ConfigError("weight bounds exceed the size budget")
        if self.series_order < 3:
            raise ConfigError("series order must be at least 3")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be positive")
        if self.fmt not in ("json", "tsv", "human"):
            raise ConfigError("unknown format: %s" % self.fmt)


def _canon(x):
    """Canonical string form of a case side (sorted-monomial repr)."""
    if x is None:
        return None
    return repr(x) if not isinstance(x, str) else x


# ---------------------------------------------------------------------------
# suite case builders: each yields (case_id, params, fn) where fn() returns
# (ok, lhs, rhs) with lhs/rhs optional.
# ---------------------------------------------------------------------------

def _boolcase(fn):
    def run():
        ok = fn()
        if ok:
            return True, None, None
        return False, "check returned False", "check returned True"
    return run


def _eqcase(lhs_fn, rhs_fn):
    def run():
        lhs, rhs = lhs_fn(), rhs_fn()
        return lhs == rhs, lhs, rhs
    return run


def _primes(config, default):
    if config.primes is not None:
        return tuple(config.primes)
    return default


def _cases_gl2(config):
    from .padic import SchwartzFn, fourier
    from . import gl2local as gl

    def phi_t(p, t):
        if t == 0:
            return SchwartzFn.lattice_product(p, 0, 0)
        return SchwartzFn.unit_column(p, t)

    w = ((0, 1), (-1, 0))
    i2 = ((1, 0), (0, 1))
    for p in _primes(config, (2, 3)):
        al, be, x = sym("alpha", p), sym("beta", p), sym("X", p)
        ac, ap = al * x, be / x
        one = as_ratfunc(1, p)
        linv = one - (al / be) * x * x * ell_pow(-2, p)
        for t in range(min(config.t_max, 3) + 1):
            expected = one if t == 0 else linv
            yield ("value-l%d-t%d" % (p, t), {"ell": p, "t": t},
                   _eqcase(lambda p=p, t=t, ac=ac, ap=ap:
                           gl.eval_siegel(phi_t(p, t), ac, ap, i2),
                           lambda e=expected: e))
            yield ("support-l%d-t%d" % (p, t), {"ell": p, "t": t},
                   _boolcase(lambda p=p, t=t, ac=ac, ap=ap:
                             gl.support_check(phi_t(p, t), ac, ap, t)))
        phis = [SchwartzFn.lattice_product(p, 0, 0),
                SchwartzFn.unit_column(p, 1),
                SchwartzFn.coset(p, 0, 1, 1)]
        from fractions import Fraction as _Q
        points = [i2, w, ((p, 0), (0, 1)), ((1, 0), (_Q(1, p), 1))]
        for i, phi in enumerate(phis):
            for j, g in enumerate(points):
                yield ("intertwine-l%d-phi%d-pt%d" % (p, i, j),
                       {"ell": p, "phi": i, "point": j},
                       _eqcase(lambda phi=phi, g=g, ac=ac, ap=ap:
                               gl.intertwine(phi, ac, ap, g, "closed"),
                               lambda phi=phi, g=g, ac=ac, ap=ap:
                               gl.intertwine(phi, ac, ap, g, "direct")))
        for i, phi1 in enumerate(phis):
            for j, phi2 in enumerate(phis):
                def adj(phi1=phi1, phi2=phi2, ac=ac, ap=ap, p=p, one=one):
                    f1 = (phi1, ac, ap)
                    f2 = (phi2, one / ap, one / ac)
                    lf = one - (ac / ap) * ell_pow(-2, p)
                    mf1 = (fourier(phi1), ap, ac)
                    mf2 = (fourier(phi2), one / ac, one / ap)
                    lhs = lf * gl.dual_pairing(mf1, f2, 1, p)
                    rhs = lf * gl.dual_pairing(f1, mf2, 1, p)
                    return lhs == rhs, lhs, rhs
                yield ("adjoint-l%d-phi%d%d" % (p, i, j),
                       {"ell": p, "phi1": i, "phi2": j}, adj)


def _cases_hecke(config):
    from .gsp4local import PrincipalSeriesG, hecke_poly_check
    for p in _primes(config, (2, 3, 5)):
        yield ("polynomial-l%d" % p, {"ell": p},
               lambda p=p: hecke_poly_check(PrincipalSeriesG.formal(p)))


def _cases_parahoric(config):
    from .gsp4local import (PrincipalSeriesG, spin_reciprocal,
                            u_matrix_char_poly)
    for p in _primes(config, (2, 3)):
        sigma = PrincipalSeriesG.formal(p)
        x = sym("x", p)
        yield ("u-charpoly-l%d" % p, {"ell": p},
               _eqcase(lambda sigma=sigma, x=x: u_matrix_char_poly(sigma, x),
                       lambda sigma=sigma, x=x: spin_reciprocal(sigma, x)))


def _cases_bessel(config):
    from .besselzeta import (BesselDatum, zeta, zeta_spherical_closed,
                             zeta_ul_closed)
    datum = BesselDatum.formal(None)
    order = config.series_order
    yield ("zeta-spherical", {"order": order},
           _eqcase(lambda: zeta("spherical", datum, order),
                   lambda: zeta_spherical_closed(datum)))
    yield ("zeta-ul", {"order": order},
           _eqcase(lambda: zeta("ul", datum, order),
                   lambda: zeta_ul_closed(datum)))


def _cases_tame_norm(config):
    from .besselzeta import (tame_norm_check, tame_norm_final_check,
                             tame_norm_ul_check)
    kmax = min(config.k_max, 2)
    for t in range(1, min(config.t_max, 3) + 1):
        for k1 in range(kmax + 1):
            for k2 in range(kmax + 1):
                yield ("depth-t%d-k%d%d" % (t, k1, k2),
                       {"t": t, "k1": k1, "k2": k2},
                       lambda t=t, k1=k1, k2=k2:
                       tame_norm_check(t, k1, k2))
    for k1 in range(kmax + 1):
        for k2 in range(kmax + 1):
            yield ("ul-k%d%d" % (k1, k2), {"k1": k1, "k2": k2},
                   lambda k1=k1, k2=k2: tame_norm_ul_check(k1, k2))
    for k1 in range(1, kmax + 1):
        for k2 in range(1, kmax + 1):
            yield ("final-k%d%d" % (k1, k2), {"k1": k1, "k2": k2},
                   lambda k1=k1, k2=k2: tame_norm_final_check(k1, k2))


def _cases_wild_norm(config):
    from .normrel import indept_identity, wild_coset_identity
    for p in _primes(config, (2, 3)):
        for m in range(min(config.m_max, 2) + 1):
            for n in range(1, min(config.n_max, 2) + 1):
                if n < max(m, 1):
                    continue
                def wild(p=p, m=m, n=n):
                    ok, report = wild_coset_identity(p, m, n)
                    if ok:
                        return True, None, None
                    return False, json.dumps(report, default=str), None
                yield ("coset-l%d-m%d-n%d" % (p, m, n),
                       {"ell": p, "m": m, "n": n}, wild)
        for big_t in range(2, min(config.t_max, 3) + 1):
            # transversal size p^{4(t-T)}: pairwise checks are quadratic,
            # so keep the sweep at desk scale
            if p ** (4 * (big_t - 1)) > 1024:
                continue
            def indep(p=p, big_t=big_t):
                ok, size = indept_identity(p, 1, big_t)
                want = p ** (4 * (big_t - 1))
                return ok and size == want, size, want
            yield ("indept-l%d-T1-t%d" % (p, big_t),
                   {"ell": p, "T": 1, "t": big_t}, indep)


def _cases_branching(config):
    from .branching import (build_rep, branch_decompose,
                            central_character_check, dual_character_check,
                            grid, hw_vector, rep_dimension_formula,
                            twist_lemma_check)
    pairs = [(a, b) for (a, b) in grid()
             if a <= config.a_max and b <= config.b_max]
    for a, b in pairs:
        yield ("dimension-a%d-b%d" % (a, b), {"a": a, "b": b},
               _eqcase(lambda a=a, b=b: build_rep(a, b).dimension,
                       lambda a=a, b=b: rep_dimension_formula(a, b)))
        yield ("decompose-a%d-b%d" % (a, b), {"a": a, "b": b},
               _boolcase(lambda a=a, b=b:
                         sum((c + 1) * (d + 1)
                             for c, d, q in branch_decompose(a, b))
                         == rep_dimension_formula(a, b)))
        yield ("dual-a%d-b%d" % (a, b), {"a": a, "b": b},
               _boolcase(lambda a=a, b=b: dual_character_check(a, b)))
        yield ("central-a%d-b%d" % (a, b), {"a": a, "b": b},
               _boolcase(lambda a=a, b=b: central_character_check(a, b)))
    for a, b in pairs:
        if 6 ** a * 4 ** b > 200:
            continue
        for q in range(a + 1):
            for r in range(b + 1):
                def hw(a=a, b=b, q=q, r=r):
                    vec = hw_vector(a, b, q, r)
                    return bool(vec), None, None
                yield ("hw-a%d-b%d-q%d-r%d" % (a, b, q, r),
                       {"a": a, "b": b, "q": q, "r": r}, hw)
                for h in (1, -1):
                    yield ("twist-a%d-b%d-q%d-r%d-h%d" % (a, b, q, r, h),
                           {"a": a, "b": b, "q": q, "r": r, "h": h},
                           lambda a=a, b=b, q=q, r=r, h=h:
                           twist_lemma_check(a, b, q, r, h))


def _cases_local_data(config):
    from .normrel import make_local_data, sufficiency_check
    for p in _primes(config, (2, 3)):
        yield ("good-l%d" % p, {"ell": p},
               _boolcase(lambda p=p: make_local_data("good", p) is not None))
        yield ("tame-l%d" % p, {"ell": p},
               _boolcase(lambda p=p: make_local_data("tame", p) is not None))
        for m in range(min(config.m_max, 2) + 1):
            for n in range(1, min(config.n_max, 2) + 1):
                if n < max(m, 1):
                    continue
                # entry construction validates a depth-(n+2m) table; keep
                # the sweep at desk scale
                if p ** (n + 2 * m) <= 100:
                    yield ("wild-l%d-m%d-n%d" % (p, m, n),
                           {"ell": p, "m": m, "n": n},
                           _boolcase(lambda p=p, m=m, n=n:
                                     make_local_data("wild", p, m=m, n=n)
                                     is not None))
                def suff(p=p, m=m, n=n):
                    t = sufficiency_check(p, m, n)
                    return t <= n + 2 * m, t, n + 2 * m
                yield ("sufficient-l%d-m%d-n%d" % (p, m, n),
                       {"ell": p, "m": m, "n": n}, suff)


def _cases_frobrecip(config):
    from .normrel import frobrecip_pairing_check
    kmax = max(min(config.k_max, 2), 1)
    for k1 in range(1, kmax + 1):
        for k2 in range(1, kmax + 1):
            yield ("pairing-k%d%d" % (k1, k2), {"k1": k1, "k2": k2},
                   lambda k1=k1, k2=k2: frobrecip_pairing_check(k1, k2))
    yield ("pairing-concrete-l2", {"ell": 2, "k1": 1, "k2": 1},
           lambda: frobrecip_pairing_check(1, 1, p=2))
    yield ("pairing-scalar", {"k1": 1, "k2": 1},
           lambda: frobrecip_pairing_check(1, 1, scalar=1))


_BUILDERS = {
    "gl2": _cases_gl2,
    "hecke": _cases_hecke,
    "parahoric": _cases_parahoric,
    "bessel": _cases_bessel,
    "tame-norm": _cases_tame_norm,
    "wild-norm": _cases_wild_norm,
    "branching": _cases_branching,
    "local-data": _cases_local_data,
    "frobrecip": _cases_frobrecip,
}


# ---------------------------------------------------------------------------
# runner
# ---------------------------------------------------------------------------

def build_cases(config):
    cases = []
    for suite in config.suites:
        for case_id, params, fn in _BUILDERS[suite](config):
            cases.append((suite, case_id, params, fn))
    return cases


def _run_case(suite, case_id, params, fn, timings):
    start = time.monotonic()
    try:
        result = fn()
    except Exception as exc:  # a case never aborts the run
        elapsed = (time.monotonic() - start) * 1000.0
        return {"suite": suite, "case": case_id, "params": params,
                "status": "error",
                "lhs": "%s: %s" % (type(exc).__name__, exc), "rhs": None,
                "ms": round(elapsed, 3) if timings else 0}
    elapsed = (time.monotonic() - start) * 1000.0
    if isinstance(result, tuple):
        ok, lhs, rhs = result
    else:
        ok, lhs, rhs = bool(result), None, None
    record = {"suite": suite, "case": case_id, "params": params,
              "status": "pass" if ok else "fail",
              "lhs": None if ok else _canon(lhs),
              "rhs": None if ok else _canon(rhs),
              "ms": round(elapsed, 3) if timings else 0}
    return record


def run(config: SuiteConfig):
    """Execute all selected suites and return the sorted record list."""
    config.validate()
    cases = build_cases(config)
    timings = config.timings
    if config.parallelism == 1:
        records = [_run_case(s, c, p, f, timings) for s, c, p, f in cases]
    else:
        with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
            futures = [pool.submit(_run_case, s, c, p, f, timings)
                       for s, c, p, f in cases]
            records = [fut.result() for fut in futures]
    records.sort(key=lambda r: (r["suite"], r["case"]))
    return records


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------

def emit(records, fmt):
    if fmt == "json":
        return json.dumps(records, indent=2, sort_keys=True) + "\n"
    if fmt == "tsv":
        cols = ("suite", "case", "params", "status", "lhs", "rhs", "ms")
        lines = ["\t".join(cols)]
        for r in records:
            row = []
            for c in cols:
                v = r[c]
                if c == "params":
                    v = json.dumps(v, sort_keys=True)
                row.append("" if v is None else str(v))
            lines.append("\t".join(row))
        return "\n".join(lines) + "\n"
    # human
    lines = []
    counts = {"pass": 0, "fail": 0, "error": 0}
    for r in records:
        counts[r["status"]] += 1
        line = "[%-5s] %s / %s" % (r["status"].upper(), r["suite"], r["case"])
        if r["status"] != "pass":
            line += "\n    lhs: %s\n    rhs: %s" % (r["lhs"], r["rhs"])
        lines.append(line)
    lines.append("%d passed, %d failed, %d errors"
                 % (counts["pass"], counts["fail"], counts["error"]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# configuration parsing
# ---------------------------------------------------------------------------

def _split_list(value):
    return [v for v in value.replace(",", " ").split() if v]


def read_config_file(path):
    """Flat key-value configuration: one `key = value` per line, `#`
    comments allowed.  Returns a dict of raw string values."""
    raw = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError("%s:%d: expected key = value"
                                  % (path, lineno))
            key, _, value = line.partition("=")
            raw[key.strip()] = value.strip()
    return raw


_INT_KEYS = {"a": "a_max", "b": "b_max", "k1": "k_max", "k2": "k_max",
             "t": "t_max", "m": "m_max", "n": "n_max",
             "order": "series_order", "jobs": "parallelism"}


def build_config(args):
    config = SuiteConfig()
    env_jobs = os.environ.get(JOBS_ENV)
    if env_jobs is not None:
        try:
            config.parallelism = int(env_jobs)
        except ValueError:
            raise ConfigError("%s must be an integer" % JOBS_ENV)
    config.timings = os.environ.get(TIMINGS_ENV, "") not in ("", "0")

    def apply(key, value):
        if key == "suite":
            suites = _split_list(value) if isinstance(value, str) else value
            config.suites = tuple(s for s in suites)
        elif key == "ell":
            vals = _split_list(value) if isinstance(value, str) else value
            try:
                config.primes = tuple(int(v) for v in vals)
            except ValueError:
                raise ConfigError("ell values must be integers")
        elif key in _INT_KEYS:
            try:
                setattr(config, _INT_KEYS[key], int(value))
            except ValueError:
                raise ConfigError("%s must be an integer" % key)
        elif key == "format":
            config.fmt = value
        elif key == "out":
            config.out = value
        else:
            raise ConfigError("unknown configuration key: %s" % key)

    if args.config:
        for key, value in read_config_file(args.config).items():
            apply(key, value)
    if args.suite:
        flat = []
        for chunk in args.suite:
            flat.extend(_split_list(chunk))
        apply("suite", flat)
    if args.ell:
        flat = []
        for chunk in args.ell:
            flat.extend(_split_list(chunk))
        apply("ell", flat)
    for key in _INT_KEYS:
        value = getattr(args, key)
        if value is not None:
            apply(key, str(value))
    if args.format:
        apply("format", args.format)
    if args.out:
        apply("out", args.out)
    config.validate()
    return config


def make_parser():
    parser = argparse.ArgumentParser(
        prog="gsp4verify",
        description="Run the exact-identity verification suites.")
    parser.add_argument("--suite", action="append",
                        help="suite name(s), comma separated; repeatable "
                             "(default: all suites)")
    parser.add_argument("--config", help="flat key-value configuration file")
    parser.add_argument("--ell", action="append",
                        help="prime(s) to sweep, comma separated")
    for key in ("a", "b", "k1", "k2", "t", "m", "n", "order", "jobs"):
        parser.add_argument("--" + key, type=int)
    parser.add_argument("--format", choices=("json", "tsv", "human"))
    parser.add_argument("--out", help="write the report to this file")
    return parser


def main(argv=None):
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        config = build_config(args)
    except (ConfigError, OSError) as exc:
        print("configuration error: %s" % exc, file=sys.stderr)
        return 2
    records = run(config)
    text = emit(records, config.fmt)
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all(r["status"] == "pass" for r in records) else 1


if __name__ == "__main__":
    sys.exit(main())
