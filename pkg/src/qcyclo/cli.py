"""Command line front end.

Subcommands: compile (emit DCR JSON), eval (single amplitude), sweep
(one compile, many projections over a q grid), diag (conditioning
diagnostics), table (reference-table reproduction with deviation
columns), tv (partition sum over a triangulation file).

Spins are always entered as twice-spins: j = 30 is --spins 60,60,...
Exit codes: 0 success, 1 internal error or unreadable file, 2 invalid
usage or inadmissible input (bad triad, pole at the requested root).
"""

import argparse
import cmath
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass

import numpy as np
from mpmath import mp

from . import diagnostics, statesum
from .compiler import (AdmissibilityError, SixJLabels, compile_count,
                       compile_sixj, dcr_to_json)
from .projection import (ComplexDouble, ComplexExtended, PoleError,
                         ProjectionRangeError, RootOfUnityExact,
                         SweepEvaluator, amplitude_to_complex, evaluate,
                         classical_project, make_context, unit_circle_q)

ENGINES = ("dcr-f64", "dcr-mp", "lse-f64", "lse-mp", "exact", "classical")
_MP_ENGINES = ("dcr-mp", "lse-mp", "exact")

# published reference values, tagged by table of origin
T3_ROWS = (30, 50, 70, 90, 110)
T3_LEVEL = 500
T3_TRUTH = {30: -1.0930e-3, 50: +9.1082e-4, 70: -7.6283e-4,
            90: -6.4428e-4, 110: +2.8290e-4}
T3_LSE_F64 = {30: -1.0930e-3, 50: +9.1082e-4, 70: -7.6406e-4,
              90: +3.5642e-4, 110: -9.6881e-1}
T1_ROWS = ((50, 200), (100, 400))
T1_REF = {50: (6.03e3, 2.19e-3, 6.4), 100: (2.96e10, 7.80e-4, 13.6)}
T4_ROWS = ((10, 40), (50, 200), (100, 400), (200, 800))
T4_LOG10_KAPPA = {10: 1.27, 50: 7.10, 100: 14.39, 200: 28.97}
T4_GAMMA = {10: (61.1, 19.0), 50: (560.1, 104.5), 100: (1352.7, 212.5)}


@dataclass(frozen=True)
class RunConfig:
    command: str
    spins: tuple = None
    level: int = None
    engine: str = "dcr-mp"
    bits: int = None
    sweep_start: float = None
    sweep_stop: float = None
    sweep_count: int = None
    unit_circle: bool = True
    fmt: str = "text"
    output: str = None
    parts: bool = False
    which: str = None
    triangulation: str = None
    weights: bool = True

    def resolved_bits(self):
        if self.bits is not None:
            return self.bits
        return {"dcr-mp": 256, "lse-mp": 256, "exact": 256}.get(self.engine)


def _parse_spins(text):
    parts = text.split(",")
    if len(parts) != 6:
        raise argparse.ArgumentTypeError(
            "expected six comma-separated twice-spins, got %d" % len(parts))
    try:
        tj = tuple(int(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))
    return tj


def _build_parser():
    top = argparse.ArgumentParser(
        prog="qcyclo",
        description="Compile q-hypergeometric 6j series into a deferred "
                    "cyclotomic representation and project it.")
    sub = top.add_subparsers(dest="command", required=True)

    def add_common(p, spins=True, level=True):
        if spins:
            p.add_argument("--spins", type=_parse_spins, required=True,
                           help="six twice-spins, e.g. 60,60,60,60,60,60 for j=30")
        if level:
            p.add_argument("--level", type=int, required=True,
                           help="level k; evaluation root is h = k + 2")
        p.add_argument("--format", dest="fmt", choices=("text", "csv", "json"),
                       default="text")
        p.add_argument("--output", help="write to file instead of stdout")

    p = sub.add_parser("compile", help="emit the compiled DCR as JSON")
    add_common(p, level=False)

    p = sub.add_parser("eval", help="evaluate one amplitude")
    add_common(p)
    p.add_argument("--engine", choices=ENGINES, default="dcr-mp")
    p.add_argument("--bits", type=int)
    p.add_argument("--parts", action="store_true",
                   help="also print the a and sqrt-radicand parts")

    p = sub.add_parser("sweep", help="project one DCR over a q grid")
    add_common(p, level=False)
    p.add_argument("--engine", choices=("dcr-f64", "dcr-mp"), default="dcr-f64")
    p.add_argument("--bits", type=int)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--unit-circle", dest="unit_circle", action="store_true",
                   default=True,
                   help="grid is q = exp(i theta), theta from start to stop")
    p.add_argument("--real-axis", dest="unit_circle", action="store_false",
                   help="grid is real q from start to stop")

    p = sub.add_parser("diag", help="term-level conditioning diagnostics")
    add_common(p)
    p.add_argument("--bits", type=int, default=512)

    p = sub.add_parser("table", help="reproduce a reference table")
    p.add_argument("which", choices=("t1", "t3", "t4"))
    p.add_argument("--bits", type=int, default=2048,
                   help="precision of the truth column (t3)")
    p.add_argument("--format", dest="fmt", choices=("text", "csv", "json"),
                   default="text")
    p.add_argument("--output")

    p = sub.add_parser("tv", help="partition sum over a triangulation file")
    p.add_argument("--triangulation", required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--bits", type=int)
    p.add_argument("--no-weights", dest="weights", action="store_false",
                   help="drop the per-edge quantum-dimension factors")
    p.add_argument("--format", dest="fmt", choices=("text", "csv", "json"),
                   default="text")
    p.add_argument("--output")
    return top


def _config_from_args(args):
    cfg = RunConfig(
        command=args.command,
        spins=getattr(args, "spins", None),
        level=getattr(args, "level", None),
        engine=getattr(args, "engine", "dcr-mp"),
        bits=getattr(args, "bits", None),
        sweep_start=getattr(args, "start", None),
        sweep_stop=getattr(args, "stop", None),
        sweep_count=getattr(args, "count", None),
        unit_circle=getattr(args, "unit_circle", True),
        fmt=getattr(args, "fmt", "text"),
        output=getattr(args, "output", None),
        parts=getattr(args, "parts", False),
        which=getattr(args, "which", None),
        triangulation=getattr(args, "triangulation", None),
        weights=getattr(args, "weights", True),
    )
    if cfg.command in ("eval", "sweep") and cfg.bits is not None \
            and cfg.engine not in _MP_ENGINES:
        raise ConfigError("--bits only applies to engines %s"
                          % ", ".join(_MP_ENGINES))
    if cfg.command == "sweep" and cfg.sweep_count < 1:
        raise ConfigError("--count must be >= 1")
    return cfg


class ConfigError(ValueError):
    pass


def _emit(cfg, text):
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _rows_to_csv(header, rows, footer=()):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    for line in footer:
        buf.write("# %s\n" % line)
    return buf.getvalue()


def _rows_to_text(header, rows, footer=()):
    cols = [max(len(str(header[i])), *(len(str(r[i])) for r in rows)) if rows
            else len(str(header[i])) for i in range(len(header))]
    lines = ["  ".join(str(h).ljust(c) for h, c in zip(header, cols)).rstrip()]
    for r in rows:
        lines.append("  ".join(str(v).ljust(c) for v, c in zip(r, cols)).rstrip())
    lines.extend(footer)
    return "\n".join(lines) + "\n"


def _cx(z):
    return {"re": float(z.real), "im": float(z.imag)}


def cmd_compile(cfg):
    dcr = compile_sixj(SixJLabels(*cfg.spins))
    _emit(cfg, dcr_to_json(dcr) + "\n")
    return 0


def _eval_amplitude(cfg):
    """(amplitude complex, parts dict or None, dcr or None)"""
    labels = SixJLabels(*cfg.spins)
    h = cfg.level + 2
    bits = cfg.resolved_bits()
    if cfg.engine == "lse-f64":
        return complex(diagnostics.lse_eval_sixj(labels, h, "double")), None, None
    if cfg.engine == "lse-mp":
        return complex(diagnostics.lse_eval_sixj(labels, h, bits)), None, None
    dcr = compile_sixj(labels)
    if cfg.engine == "classical":
        out = classical_project(dcr)
        amp = complex(out.a) * math.sqrt(float(out.r))
        return amp, {"a": str(out.a), "r": str(out.r)}, dcr
    if cfg.engine == "exact":
        ctx = make_context(RootOfUnityExact(h), dcr.d_max)
        out = evaluate(dcr, ctx)
        amp = complex(amplitude_to_complex(out, ctx, bits=bits))
        parts = {"a_coeffs": [str(c) for c in out.a.coeffs],
                 "r_coeffs": [str(c) for c in out.r.coeffs]}
        return amp, parts, dcr
    tag = ComplexDouble() if cfg.engine == "dcr-f64" else ComplexExtended(bits)
    ctx = make_context(tag, dcr.d_max, q=unit_circle_q(h, tag))
    out = evaluate(dcr, ctx)
    amp = complex(amplitude_to_complex(out, ctx))
    parts = {"a": _cx(out.a), "r": _cx(out.r)}
    return amp, parts, dcr


def cmd_eval(cfg):
    amp, parts, dcr = _eval_amplitude(cfg)
    bits = cfg.resolved_bits()
    if cfg.fmt == "json":
        obj = {"spins": list(cfg.spins), "level": cfg.level,
               "engine": cfg.engine, "bits": bits,
               "amplitude": _cx(amp)}
        if parts is not None and cfg.parts:
            obj["parts"] = parts
        if dcr is not None:
            obj["dcr"] = json.loads(dcr_to_json(dcr))
        _emit(cfg, json.dumps(obj, indent=2) + "\n")
        return 0
    if cfg.fmt == "csv":
        header = ("spins", "level", "engine", "bits", "amp_re", "amp_im")
        row = (",".join(map(str, cfg.spins)), cfg.level, cfg.engine,
               bits or "", "%.17e" % amp.real, "%.17e" % amp.imag)
        _emit(cfg, _rows_to_csv(header, [row]))
        return 0
    lines = ["spins      %s" % ",".join(map(str, cfg.spins)),
             "level      %d" % cfg.level,
             "engine     %s%s" % (cfg.engine,
                                  " (%d bits)" % bits if bits else ""),
             "amplitude  %.12e %+.12ej" % (amp.real, amp.imag)]
    if cfg.engine == "classical" or (cfg.parts and parts is not None):
        for key, val in (parts or {}).items():
            lines.append("%-10s %s" % (key, val))
    _emit(cfg, "\n".join(lines) + "\n")
    return 0


def cmd_diag(cfg):
    labels = SixJLabels(*cfg.spins)
    d = diagnostics.diagnostics_sixj(labels, cfg.level + 2, bits=cfg.bits or 512)
    fields = (("kappa", "%.6e"), ("delta_loss", "%.3f"),
              ("gamma_eager", "%.2f"), ("gamma_dcr", "%.2f"),
              ("max_term", "%.6e"), ("abs_sum", "%.6e"), ("value", "%.6e"))
    if cfg.fmt == "json":
        obj = {"spins": list(cfg.spins), "level": cfg.level}
        obj.update({name: getattr(d, name) for name, _ in fields})
        _emit(cfg, json.dumps(obj, indent=2) + "\n")
    elif cfg.fmt == "csv":
        header = tuple(name for name, _ in fields)
        row = tuple(fmt % getattr(d, name) for name, fmt in fields)
        _emit(cfg, _rows_to_csv(header, [row]))
    else:
        lines = ["%-12s %s" % (name, fmt % getattr(d, name))
                 for name, fmt in fields]
        _emit(cfg, "\n".join(lines) + "\n")
    return 0


def _sweep_grid(cfg):
    if cfg.sweep_count == 1:
        ts = np.array([cfg.sweep_start])
    else:
        ts = np.linspace(cfg.sweep_start, cfg.sweep_stop, cfg.sweep_count)
    if cfg.unit_circle:
        return np.exp(1j * ts)
    return ts.astype(complex)


def _mp_point(q, d_max, bits):
    """Promote one grid point to mp, snapping onto the exact root of
    unity when the double value sits within roundoff of one, so poles
    and vanishing terms resolve exactly instead of as huge residues."""
    with mp.workprec(bits):
        if abs(abs(q) - 1.0) < 1e-12:
            theta = cmath.phase(complex(q))
            for n in range(1, d_max + 1):
                m = round(theta * n / math.pi)
                if abs(theta - math.pi * m / n) < 1e-9:
                    return mp.expjpi(mp.mpf(m) / n)
        return mp.mpc(q)


def cmd_sweep(cfg):
    c0 = compile_count()
    t0 = time.perf_counter()
    dcr = compile_sixj(SixJLabels(*cfg.spins))
    compile_s = time.perf_counter() - t0
    qs = _sweep_grid(cfg)
    rows = []
    if cfg.engine == "dcr-f64":
        sw = SweepEvaluator(dcr)
        t0 = time.perf_counter()
        vals = sw.amplitudes(qs)
        proj_s = time.perf_counter() - t0
        per_us = 1e6 * proj_s / len(qs)
        for i, (q, v) in enumerate(zip(qs, vals)):
            ok = math.isfinite(v.real) and math.isfinite(v.imag)
            rows.append((i, "%.12e" % q.real, "%.12e" % q.imag,
                         "%.12e" % v.real if ok else "",
                         "%.12e" % v.imag if ok else "",
                         "ok" if ok else "ERROR", "%.3f" % per_us))
    else:
        bits = cfg.resolved_bits()
        tag = ComplexExtended(bits)
        proj_s = 0.0
        for i, q in enumerate(qs):
            t0 = time.perf_counter()
            try:
                with mp.workprec(bits):
                    ctx = make_context(tag, dcr.d_max,
                                       q=_mp_point(q, dcr.d_max, bits))
                    v = complex(amplitude_to_complex(evaluate(dcr, ctx), ctx))
                dt = time.perf_counter() - t0
                rows.append((i, "%.12e" % q.real, "%.12e" % q.imag,
                             "%.12e" % v.real, "%.12e" % v.imag, "ok",
                             "%.3f" % (1e6 * dt)))
            except (PoleError, ProjectionRangeError, ZeroDivisionError):
                dt = time.perf_counter() - t0
                rows.append((i, "%.12e" % q.real, "%.12e" % q.imag,
                             "", "", "ERROR", "%.3f" % (1e6 * dt)))
            proj_s += dt
    compiles = compile_count() - c0
    header = ("idx", "q_re", "q_im", "amp_re", "amp_im", "status", "usec")
    footer = ["compiles=%d points=%d compile_us=%.1f proj_us_per_point=%.3f"
              % (compiles, len(qs), 1e6 * compile_s, 1e6 * proj_s / len(qs))]
    if cfg.fmt == "json":
        obj = {"points": [dict(zip(header, r)) for r in rows],
               "compiles": compiles, "compile_us": 1e6 * compile_s,
               "proj_us_per_point": 1e6 * proj_s / len(qs)}
        _emit(cfg, json.dumps(obj, indent=2) + "\n")
    elif cfg.fmt == "csv":
        _emit(cfg, _rows_to_csv(header, rows, footer))
    else:
        _emit(cfg, _rows_to_text(header, rows, ["# " + footer[0]]))
    return 0


def _table_t3(bits):
    header = ("j", "k", "truth", "ref_truth", "dev_truth",
              "lse_f64", "ref_lse_f64", "dcr_f64")
    rows = []
    for j in T3_ROWS:
        labels = SixJLabels(*[2 * j] * 6)
        h = T3_LEVEL + 2
        dcr = compile_sixj(labels)
        tag = ComplexExtended(bits)
        ctx = make_context(tag, dcr.d_max, q=unit_circle_q(h, tag))
        truth = float(amplitude_to_complex(evaluate(dcr, ctx), ctx).real)
        lse = diagnostics.lse_eval_sixj(labels, h, "double")
        tagd = ComplexDouble()
        ctxd = make_context(tagd, dcr.d_max, q=unit_circle_q(h, tagd))
        dcrf = amplitude_to_complex(evaluate(dcr, ctxd), ctxd).real
        ref = T3_TRUTH[j]
        rows.append((j, T3_LEVEL, "%+.4e" % truth, "%+.4e" % ref,
                     "%.1e" % (abs(truth - ref) / abs(ref)),
                     "%+.4e" % lse, "%+.4e" % T3_LSE_F64[j], "%+.4e" % dcrf))
    return header, rows


def _table_t1():
    header = ("j", "k", "max_term", "ref_max_term", "abs_S", "ref_abs_S",
              "delta_loss", "ref_delta_loss")
    rows = []
    for j, k in T1_ROWS:
        d = diagnostics.diagnostics_sixj(SixJLabels(*[2 * j] * 6), k + 2)
        rt, rs, rd = T1_REF[j]
        rows.append((j, k, "%.3e" % d.max_term, "%.3e" % rt,
                     "%.3e" % abs(d.value), "%.3e" % rs,
                     "%.1f" % d.delta_loss, "%.1f" % rd))
    return header, rows


def _table_t4():
    header = ("j", "k", "log10_kappa", "ref_log10_kappa",
              "gamma_eager", "ref_gamma_eager", "gamma_dcr", "ref_gamma_dcr")
    rows = []
    for j, k in T4_ROWS:
        d = diagnostics.diagnostics_sixj(SixJLabels(*[2 * j] * 6), k + 2)
        ge_ref, gd_ref = T4_GAMMA.get(j, ("", ""))
        rows.append((j, k, "%.2f" % math.log10(d.kappa),
                     "%.2f" % T4_LOG10_KAPPA[j],
                     "%.1f" % d.gamma_eager, ge_ref,
                     "%.1f" % d.gamma_dcr, gd_ref))
    return header, rows


def cmd_table(cfg):
    if cfg.which == "t3":
        header, rows = _table_t3(cfg.bits or 2048)
    elif cfg.which == "t1":
        header, rows = _table_t1()
    else:
        header, rows = _table_t4()
    if cfg.fmt == "json":
        obj = {"table": cfg.which,
               "rows": [dict(zip(header, r)) for r in rows]}
        _emit(cfg, json.dumps(obj, indent=2) + "\n")
    elif cfg.fmt == "csv":
        _emit(cfg, _rows_to_csv(header, rows))
    else:
        _emit(cfg, _rows_to_text(header, rows))
    return 0


def cmd_tv(cfg):
    tri = statesum.load_triangulation(cfg.triangulation)
    value, stats = statesum.tv_partition(tri, cfg.level, bits=cfg.bits,
                                         weights=cfg.weights)
    value = complex(value)
    fields = (("value_re", "%.12e" % value.real),
              ("value_im", "%.12e" % value.imag),
              ("colorings", stats.num_colorings),
              ("distinct_classes", stats.distinct_classes),
              ("cache_hits", stats.cache_hits),
              ("cache_misses", stats.cache_misses))
    if cfg.fmt == "json":
        _emit(cfg, json.dumps(dict(fields), indent=2) + "\n")
    elif cfg.fmt == "csv":
        _emit(cfg, _rows_to_csv(tuple(k for k, _ in fields),
                                [tuple(v for _, v in fields)]))
    else:
        _emit(cfg, "\n".join("%-16s %s" % kv for kv in fields) + "\n")
    return 0


_COMMANDS = {"compile": cmd_compile, "eval": cmd_eval, "sweep": cmd_sweep,
             "diag": cmd_diag, "table": cmd_table, "tv": cmd_tv}


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        return _COMMANDS[cfg.command](cfg)
    except (AdmissibilityError, PoleError) as exc:
        print("inadmissible input: %s" % exc, file=sys.stderr)
        return 2
    except ConfigError as exc:
        print("configuration error: %s" % exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError) as exc:
        print("internal error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
