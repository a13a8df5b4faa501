"""Command-line front end.

    opcat examples bell|prbox
    opcat eval SCENARIO.json [-o MODEL.json]
    opcat classify MODEL.json [MODEL.json ...] [--require-witness]
    opcat rel-demo REL_SCENARIO.json
    opcat validate FILE.json

Exit status: 0 on success, 1 on schema errors, 2 when a witness was demanded
with ``--require-witness`` but the model is not local.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import locality as cl
from . import library
from .matcat import ShapeError, is_positive, mor_from_json, trace
from .operational import OperationalError, format_outcome, validate_measurement
from .rel import load_rel_scenario
from .scenario import (EmpiricalModel, ModelError, dump_model, empirical_from_operational,
                       model_from_json, model_to_json, operational_from_json, rationalize)
from .semiring import EPSILON, SemiringError, load_lattice, validate_semiring
from .stoch import StochError

EXIT_OK, EXIT_SCHEMA, EXIT_NO_WITNESS = 0, 1, 2
SCHEMA_ERRORS = (ModelError, SemiringError, ShapeError, OperationalError, StochError,
                 json.JSONDecodeError, OSError, KeyError, TypeError)


def _cell(S, v) -> str:
    if S.kind == "complex":
        z = complex(v)
        return f"{z.real:.12g}" if abs(z.imag) <= EPSILON else f"{z.real:.6g}{z.imag:+.6g}i"
    return str(S.format(v))


def format_table(e: EmpiricalModel) -> str:
    sc = e.scenario
    header = [""] + [format_outcome(o) for o in sc.outcome_tuples()]
    body = [[format_outcome(m)] + [_cell(e.S, e.table[m][o]) for o in sc.outcome_tuples()]
            for m in sc.setting_tuples()]
    widths = [max(len(r[k]) for r in [header] + body) for k in range(len(header))]
    lines = []
    for r in [header] + body:
        lines.append("  ".join(c.ljust(w) if k == 0 else c.rjust(w)
                               for k, (c, w) in enumerate(zip(r, widths))).rstrip())
    return "\n".join(lines)


def format_lhv(h: cl.LhvModel, limit: int = 32) -> str:
    S = h.S
    lines = [f"hidden variables: {len(h.hidden)}"]
    for lam in h.hidden[:limit]:
        lines.append(f"  d({lam}) = {S.format(h.weights[lam])}")
    if len(h.hidden) > limit:
        lines.append(f"  ... {len(h.hidden) - limit} more")
    return "\n".join(lines)


def format_classification(c: cl.Classification) -> str:
    lines = [format_table(c.model), f"verdict: {c.verdict}"]
    if c.relaxed:
        lines.append(f"(tolerance-relaxed verdict, residual {c.residual:.3g})")
    if c.lhv is not None:
        lines.append("local witness " + format_lhv(c.lhv))
    if c.farkas is not None:
        ys = " ".join(str(v) for v in c.farkas.certificate)
        lines.append(f"farkas certificate (rows: p(o|m) by setting then outcome, then sum): {ys}")
    if c.signed is not None:
        ws = ", ".join(str(w) for w in c.signed.state.weights)
        lines.append(f"signed realization over O^M (slots {_slots(c.signed.encoding, c.model.scenario.sites)}): [{ws}]")
    if c.inconsistency is not None:
        msg = cl.signalling_summary(c.model)
        if msg:
            lines.append(msg)
    return "\n".join(lines)


def _slots(enc, sites) -> str:
    return ", ".join(f"{sites[i]}:{m}" for i, m in enc.slots)


def _emit(args, text: str, payload) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


def cmd_examples(args) -> int:
    if args.name == "bell":
        computed = library.bell_model()
        ok = cl.verify_quantum_realization(library.bell_table(), library.bell_state(),
                                           library.bell_measurements(), args.epsilon)
        c = cl.classify(computed, args.epsilon)
        text = ("Bell state (|00>+|11>)/sqrt2, XY-plane spin measurements "
                "a=0, a'=pi/3, b=0, b'=pi/3\n" + format_classification(c)
                + f"\nquantum realization reproduces the table: {ok}")
        payload = cl.certificate_to_json(c)
    else:
        model = library.pr_table()
        witness = library.pr_witness()
        generated = cl.stoch_generate(witness, model.scenario)
        c = cl.classify(model)
        text = ("PR box from the signed global state\n"
                f"x = [{', '.join(str(w) for w in witness.weights)}]\n"
                f"slot order: {_slots(cl.encoding_for(model.scenario), model.scenario.sites)}\n"
                + format_classification(c)
                + f"\nwitness generates the table: {generated == model}")
        payload = cl.certificate_to_json(c)
        payload["witness_vector"] = [str(w) for w in witness.weights]
    _emit(args, text, payload)
    return EXIT_OK


def cmd_eval(args) -> int:
    data = json.loads(Path(args.scenario).read_text())
    state, meas, sites = operational_from_json(data)
    e = empirical_from_operational(state, meas, sites)
    if e.S.kind == "complex":
        e = rationalize(e) or e
    if args.output:
        Path(args.output).write_text(dump_model(e) + "\n")
    _emit(args, format_table(e), model_to_json(e))
    return EXIT_OK


def _classify_path(path: str, epsilon: float):
    e = model_from_json(json.loads(Path(path).read_text()))
    return cl.classify(e, epsilon)


def cmd_classify(args) -> int:
    if args.jobs > 1 and len(args.models) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_classify_path, args.models,
                                    [args.epsilon] * len(args.models)))
    else:
        results = [_classify_path(p, args.epsilon) for p in args.models]
    payloads = [cl.certificate_to_json(c) for c in results]
    texts = [format_classification(c) for c in results]
    if len(results) == 1:
        _emit(args, texts[0], payloads[0])
    else:
        _emit(args, "\n\n".join(f"== {p}\n{t}" for p, t in zip(args.models, texts)), payloads)
    if args.require_witness and any(c.verdict is not cl.Verdict.LOCAL for c in results):
        print("no local hidden-variable witness exists", file=sys.stderr)
        return EXIT_NO_WITNESS
    return EXIT_OK


def cmd_rel_demo(args) -> int:
    data = json.loads(Path(args.scenario).read_text())
    S, covers, sites = load_rel_scenario(data)
    e = cl.rel_empirical(S, covers, sites)
    h = cl.rel_lhv_construct(S, covers, sites)
    report = cl.verify_lhv(e, h)
    text = "\n".join([format_table(e), "constructed local model " + format_lhv(h),
                      f"local model reproduces the table: {report.ok}"]
                     + report.violations)
    payload = {"model": model_to_json(e), "witness": cl.lhv_to_json(h), "verified": report.ok}
    _emit(args, text, payload)
    return EXIT_OK if report.ok else EXIT_SCHEMA


def _validate_data(data) -> tuple[bool, list[str], str]:
    if isinstance(data, list):
        results = [_validate_data(d) for d in data]
        return (all(r[0] for r in results), [v for r in results for v in r[1]],
                "list of " + ", ".join(sorted({r[2] for r in results})))
    if "verdict" in data:
        r = cl.verify_certificate(data)
        return r.ok, r.violations, "certificate"
    if "covers" in data:
        S, covers, sites = load_rel_scenario(data)
        r = cl.verify_lhv(cl.rel_empirical(S, covers, sites), cl.rel_lhv_construct(S, covers, sites))
        return r.ok, r.violations, "rel scenario"
    if "measurements" in data:
        state, meas, _ = operational_from_json(data)
        problems = [f"{site_i}:{k}: {v}" for site_i, ms in enumerate(meas)
                    for k, m in ms.items() for v in validate_measurement(m).violations]
        return not problems, problems, "operational scenario"
    if "table" in data:
        e = model_from_json(data)
        problems = []
        if e.S.kind in ("rational", "complex") and not e.is_normalized():
            problems.append("some row does not sum to 1")
        return not problems, problems, "empirical model"
    if "entries" in data:
        f = mor_from_json(data)
        info = []
        if f.is_endo:
            info.append(f"trace {f.S.format(trace(f))}, positive: {is_positive(f)}")
        return True, info, "matrix"
    if "elements" in data:
        L = load_lattice(data)
        r = validate_semiring(L)
        return r.ok, r.violations, f"lattice ({len(L.labels)} elements)"
    raise ModelError("unrecognized file: expected a model, certificate, scenario, "
                     "matrix or lattice")


def cmd_validate(args) -> int:
    data = json.loads(Path(args.file).read_text())
    ok, messages, kind = _validate_data(data)
    for m in messages:
        print(("  " if ok else "violation: ") + str(m), file=sys.stdout if ok else sys.stderr)
    print(f"{kind}: {'valid' if ok else 'INVALID'}")
    return EXIT_OK if ok else EXIT_SCHEMA


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of tables")
    common.add_argument("--epsilon", type=float, default=EPSILON,
                        help="tolerance for floating tables (default 1e-9)")
    common.add_argument("--jobs", type=int, default=1, help="parallel classifications")

    parser = argparse.ArgumentParser(prog="opcat", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="verb", required=True)
    p = sub.add_parser("examples", parents=[common], help="built-in example models")
    p.add_argument("name", choices=["bell", "prbox"])
    p.set_defaults(fn=cmd_examples)
    p = sub.add_parser("eval", parents=[common], help="evaluate an operational scenario")
    p.add_argument("scenario")
    p.add_argument("-o", "--output", help="write the empirical model JSON here")
    p.set_defaults(fn=cmd_eval)
    p = sub.add_parser("classify", parents=[common], help="classify empirical models")
    p.add_argument("models", nargs="+")
    p.add_argument("--require-witness", action="store_true",
                   help="exit 2 unless every model is local")
    p.set_defaults(fn=cmd_classify)
    p = sub.add_parser("rel-demo", parents=[common], help="Rel(Ω) model and its local model")
    p.add_argument("scenario")
    p.set_defaults(fn=cmd_rel_demo)
    p = sub.add_parser("validate", parents=[common], help="structural validation")
    p.add_argument("file")
    p.set_defaults(fn=cmd_validate)
    return parser


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SCHEMA_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
