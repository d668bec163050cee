"""Command-line front end: instance ingestion, analysis, enumeration,
exception prediction, and batch processing with oracle agreement.

Exit codes: 0 = ran (any verdict), 2 = malformed input, 3 = internal
inconsistency (oracle evidence contradicting a verdict).
"""

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import engine, intmath, oracle, padic
from .errors import AupolyError, BudgetExceeded
from .lattice import GramMatrix3, ShiftVector, ShortCircuit

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INTERNAL = 3

# integers beyond this are serialized as decimal strings to survive
# consumers that parse JSON numbers as doubles
JSON_INT_LIMIT = 2**53


class DocumentError(Exception):
    pass


def _as_int(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise DocumentError(f"{where}: expected an integer (or decimal string)")
    try:
        return int(value)
    except ValueError:
        raise DocumentError(f"{where}: bad integer {value!r}") from None


def parse_document(doc):
    """InstanceDocument -> (GramMatrix3, ShiftVector, label)."""
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    gram_raw = doc.get("gram")
    if not isinstance(gram_raw, (list, tuple)) or len(gram_raw) != 6:
        raise DocumentError("gram: expected six integers "
                            "[g11, g12, g13, g22, g23, g33]")
    six = [_as_int(v, f"gram[{i}]") for i, v in enumerate(gram_raw)]
    shift_raw = doc.get("shift")
    if not isinstance(shift_raw, dict):
        raise DocumentError("shift: expected {numerators, denominator}")
    nums_raw = shift_raw.get("numerators")
    if not isinstance(nums_raw, (list, tuple)) or len(nums_raw) != 3:
        raise DocumentError("shift.numerators: expected three integers")
    nums = [_as_int(v, f"shift.numerators[{i}]") for i, v in enumerate(nums_raw)]
    den = _as_int(shift_raw.get("denominator"), "shift.denominator")
    try:
        gram = GramMatrix3.from_six(*six)
        shift = ShiftVector(nums, den)
    except (AupolyError, ValueError) as exc:
        raise DocumentError(str(exc)) from None
    return gram, shift, doc.get("label")


def instance_document(gram, shift, label=None):
    doc = {"gram": list(gram.six()),
           "shift": {"numerators": list(shift.numerators),
                     "denominator": shift.denominator}}
    if label is not None:
        doc["label"] = label
    return doc


def _jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) >= JSON_INT_LIMIT else obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return str(obj)


def verdict_report(verdict, gram, shift, label=None, exception_count=3):
    """The analyze JSON document (timing excluded; callers may add it)."""
    report = {
        "instance": instance_document(gram, shift, label),
        "decision": verdict.decision,
        "branch": verdict.branch,
        "dN": gram.det,
        "rad": verdict.rad,
        "rad_prime": verdict.rad_prime,
        "trace": [{"check": name, "observed": obs, "satisfied": sat}
                  for name, obs, sat in verdict.trace],
        "locals": [{"q": r.prime, "universal": r.universal,
                    "missed_class": (r.missed_class.representative
                                     if r.missed_class else None),
                    "precision": r.precision_used}
                   for r in verdict.local_reports],
    }
    inst = verdict.instance
    if inst is not None:
        report.update(p=inst.p, alpha=inst.alpha, epsilon=inst.epsilon,
                      conductor=inst.shift.conductor,
                      scale_applied=inst.scale_applied)
    elif isinstance(verdict.gate_outcome, ShortCircuit):
        sc = verdict.gate_outcome
        report.update(p=sc.p, alpha=sc.alpha, epsilon=sc.epsilon_raw)
    if verdict.witness is not None:
        report["witness"] = list(verdict.witness)
    if verdict.exception_family is not None:
        fam = verdict.exception_family
        primes = fam.predicted_primes(exception_count)
        report["exceptions"] = {
            "t": fam.t, "mu": fam.mu, "rho": fam.rho, "modulus": fam.modulus,
            "split_condition": fam.split_condition,
            "primes": primes, "values": [q * q * fam.t for q in primes],
        }
    if verdict.decision != "AlmostUniversal":
        failed = [r.prime for r in verdict.local_reports if not r.universal]
        if verdict.decision == "NotAlmostUniversal":
            reason = "all branch conditions fail" if not failed else \
                f"local failure at q = {failed[0]}"
            report["service"] = {"almost_universal": False, "reason": reason}
        else:
            report["service"] = {
                "almost_universal": False if failed else None,
                "reason": (f"local failure at q = {failed[0]}" if failed else
                           "hypotheses rejected; characterization not applicable"),
            }
    return report


def _load_document(path):
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
        doc = json.loads(text)
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: invalid JSON ({exc})") from None
    return parse_document(doc)


def _emit(report, as_json):
    if as_json:
        print(json.dumps(_jsonable(report), indent=2))
        return
    for key, value in report.items():
        if key in ("trace", "locals", "instance"):
            continue
        print(f"{key}: {value}")
    for entry in report.get("locals", ()):
        state = "universal" if entry["universal"] else \
            f"misses class {entry['missed_class']}"
        print(f"  Z_{entry['q']}: {state}")


def cmd_analyze(args):
    gram, shift, label = _load_document(args.instance)
    verdict = engine.analyze(gram, shift)
    report = verdict_report(verdict, gram, shift, label, args.count)
    _emit(report, args.json)
    return EXIT_OK


def cmd_local_scan(args):
    gram, shift, label = _load_document(args.instance)
    outcome = engine.analyze(gram, shift)
    reports = outcome.local_reports
    doc = {"instance": instance_document(gram, shift, label),
           "locals": [{"q": r.prime, "universal": r.universal,
                       "missed_class": (r.missed_class.representative
                                        if r.missed_class else None),
                       "precision": r.precision_used} for r in reports]}
    _emit(doc, args.json)
    return EXIT_OK


def _service_coset(verdict, gram, shift):
    if verdict.instance is not None:
        return verdict.instance.as_coset()
    outcome = verdict.gate_outcome
    if outcome is not None and getattr(outcome, "coset", None) is not None:
        return outcome.coset
    return None


def cmd_enumerate(args):
    gram, shift, label = _load_document(args.instance)
    verdict = engine.analyze(gram, shift)
    cs = _service_coset(verdict, gram, shift)
    if cs is None:
        print("instance has no integer-valued coset; nothing to enumerate",
              file=sys.stderr)
        return EXIT_INPUT
    doc = {"instance": instance_document(gram, shift, label),
           "epsilon": cs.epsilon, "step": cs.step, "bound": args.bound}
    if args.witness is not None:
        w = oracle.coset_witness(cs, args.witness)
        doc["witness_for"] = args.witness
        doc["witness"] = list(w) if w is not None else None
        _emit(doc, args.json)
        return EXIT_OK
    if args.bound < cs.epsilon:
        doc["warning"] = "bound below epsilon: progression window is empty"
    try:
        rep = oracle.enumerate_coset(cs, args.bound, budget=args.budget)
    except BudgetExceeded as exc:
        doc.update(error="budget_exceeded", authoritative=False,
                   visited=exc.partial.visited if exc.partial else None)
        _emit(doc, args.json)
        return EXIT_OK
    doc.update(visited=rep.visited, kernel=rep.kernel,
               represented_count=int(rep.bits.sum()),
               fingerprint=rep.fingerprint)
    if args.gaps:
        doc["gaps"] = oracle.gaps(rep)
        doc["stabilization"] = oracle.stabilization(rep, 0.5)
    else:
        values = rep.represented_values()
        doc["first_values"] = [int(v) for v in values[:50]]
    _emit(doc, args.json)
    return EXIT_OK


def cmd_exceptions(args):
    gram, shift, label = _load_document(args.instance)
    verdict = engine.analyze(gram, shift)
    doc = {"instance": instance_document(gram, shift, label),
           "decision": verdict.decision, "branch": verdict.branch}
    if verdict.exception_family is None:
        doc["applicable"] = False
    else:
        fam = verdict.exception_family
        primes = fam.predicted_primes(args.count)
        doc.update(applicable=True,
                   t=fam.t, mu=fam.mu, rho=fam.rho, modulus=fam.modulus,
                   primes=primes, values=[q * q * fam.t for q in primes])
    _emit(doc, args.json)
    return EXIT_OK


# ---------------------------------------------------------------------------
# batch mode

BATCH_COLUMNS = ["g11", "g12", "g13", "g22", "g23", "g33",
                 "n1", "n2", "n3", "den"]


def _parse_batch_row(row, line_no):
    if len(row) < 10:
        raise DocumentError(f"row {line_no}: expected at least 10 columns "
                            f"({','.join(BATCH_COLUMNS)}[,label])")
    vals = [_as_int(v.strip(), f"row {line_no} col {i + 1}")
            for i, v in enumerate(row[:10])]
    label = row[10].strip() if len(row) > 10 and row[10].strip() else f"row{line_no}"
    try:
        gram = GramMatrix3.from_six(*vals[:6])
        shift = ShiftVector(vals[6:9], vals[9])
    except (AupolyError, ValueError) as exc:
        raise DocumentError(f"row {line_no}: {exc}") from None
    return gram, shift, label


def _agreement(verdict, gram, shift, bound, budget):
    """Oracle cross-check: consistent / inconsistent / skipped (+ detail)."""
    cs = _service_coset(verdict, gram, shift)
    if cs is None:
        return "skipped", "no integer-valued coset"
    fam = verdict.exception_family
    if fam is not None:
        first = fam.predicted_values(1)[0]
        bound = max(bound, 2 * first)
    if bound > oracle.MAX_BOUND:
        return "skipped", f"bound {bound} beyond dense-array ceiling"
    try:
        rep = oracle.enumerate_coset(cs, bound, budget=budget)
    except BudgetExceeded:
        return "skipped", "enumeration budget exhausted"
    gap_values = {cs.epsilon + cs.step * n for n in oracle.gaps(rep)}

    if verdict.decision == "AlmostUniversal":
        stable = oracle.stabilization(rep, 0.5)
        return (("consistent", f"stable at bound {bound}") if stable == "stable"
                else ("inconsistent", "gaps persist in the upper window"))
    if fam is not None:
        predicted = [v for v in fam.predicted_values(3) if v <= bound]
        if not predicted:
            return "skipped", "no predicted exception below the bound"
        bad = [v for v in predicted if v not in gap_values]
        return (("consistent", f"{len(predicted)} predicted exceptions "
                 "confirmed unrepresented") if not bad
                else ("inconsistent", f"predicted exception {bad[0]} "
                      "was represented"))
    failed = [r for r in verdict.local_reports if not r.universal]
    if failed:
        rep0 = failed[0]
        q = rep0.prime
        if cs.shift.conductor % q == 0:
            return "skipped", f"local failure at q = {q} dividing the conductor"
        # a missed class representative c rules out exactly the targets
        # c * (unit square), i.e. same valuation and same square class;
        # higher q^2-multiples of c can still be represented primitively
        c_rep = rep0.missed_class.representative
        vc = intmath.valuation(c_rep, q)
        targets = range(cs.epsilon, bound + 1, cs.step)
        in_class = [t for t in targets if t > 0 and
                    intmath.valuation(t, q) == vc and
                    padic.square_class(t, q) == rep0.missed_class]
        if not in_class:
            return "skipped", "no progression target in the missed class"
        bad = [t for t in in_class if t not in gap_values]
        return (("consistent", f"all {len(in_class)} targets in the missed "
                 f"Z_{q} class are gaps") if not bad
                else ("inconsistent", f"target {bad[0]} in the missed class "
                      "was represented"))
    if verdict.branch == engine.BRANCH_SHORT_CIRCUIT:
        return (("consistent", "gaps exist as predicted") if gap_values
                else ("inconsistent", "no gaps despite negative verdict"))
    return "skipped", "no oracle check for this verdict"


def _batch_one(task):
    line_no, row, bound, budget = task
    try:
        gram, shift, label = _parse_batch_row(row, line_no)
    except DocumentError as exc:
        return {"label": f"row{line_no}", "decision": "error",
                "branch": str(exc), "agreement": "skipped", "error": True}
    verdict = engine.analyze(gram, shift)
    agreement, detail = _agreement(verdict, gram, shift, bound, budget)
    inst = verdict.instance
    return {
        "label": label,
        "decision": verdict.decision,
        "branch": verdict.branch,
        "p": inst.p if inst else "",
        "alpha": inst.alpha if inst else "",
        "epsilon": inst.epsilon if inst else "",
        "dN": gram.det,
        "rad_prime": verdict.rad_prime,
        "agreement": agreement,
        "detail": detail,
        "error": False,
    }


def cmd_batch(args):
    try:
        with open(args.path, newline="") as fh:
            rows = [row for row in csv.reader(fh)
                    if row and not row[0].lstrip().startswith("#")]
    except OSError as exc:
        print(f"cannot read {args.path}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if rows and rows[0][:1] and rows[0][0].strip().lower() == "g11":
        rows = rows[1:]
    tasks = [(i + 1, row, args.bound, args.budget) for i, row in enumerate(rows)]
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_batch_one, tasks))
    else:
        results = [_batch_one(t) for t in tasks]

    writer = csv.writer(sys.stdout)
    writer.writerow(["label", "decision", "branch", "p", "alpha", "epsilon",
                     "dN", "rad_prime", "agreement", "detail"])
    inconsistent = False
    for res in results:
        writer.writerow([res.get(k, "") for k in
                         ("label", "decision", "branch", "p", "alpha",
                          "epsilon", "dN", "rad_prime", "agreement", "detail")])
        if res["agreement"] == "inconsistent":
            inconsistent = True
    return EXIT_INTERNAL if inconsistent else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="aupoly",
        description="Decide almost universality of ternary quadratic "
                    "polynomials with odd prime power conductor.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_instance(p):
        p.add_argument("instance", help="instance JSON file (or - for stdin)")
        p.add_argument("--json", action="store_true",
                       help="machine-readable JSON output")

    p = sub.add_parser("analyze", help="full verdict for one instance")
    add_instance(p)
    p.add_argument("--count", type=int, default=3,
                   help="predicted exceptions to list on negative verdicts")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("local-scan", help="local universality reports")
    add_instance(p)
    p.set_defaults(func=cmd_local_scan)

    p = sub.add_parser("enumerate", help="oracle enumeration of the coset")
    add_instance(p)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--gaps", action="store_true", help="list progression gaps")
    p.add_argument("--witness", type=int, default=None,
                   help="print a witness vector for this value")
    p.add_argument("--budget", type=int, default=None,
                   help="abort after visiting this many lattice points")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("exceptions", help="predicted exceptional values")
    add_instance(p)
    p.add_argument("--count", type=int, default=3)
    p.set_defaults(func=cmd_exceptions)

    p = sub.add_parser("batch", help="CSV batch verdicts with oracle agreement")
    p.add_argument("path", help="CSV with columns "
                   "g11,g12,g13,g22,g23,g33,n1,n2,n3,den[,label]")
    p.add_argument("--bound", type=int, default=10**5,
                   help="base oracle bound for agreement checks")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_batch)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DocumentError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AupolyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
