"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a mathematical check fails (the
report carries the witness), 2 for usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from importlib import resources

from .algebra import GF, QQ, ZZ, Matrix, RingError, determinant

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def report(command, inputs, details, timings=None, status=None):
    if status is None:
        status = "pass" if all(d.get("status") == "pass" for d in details) else "fail"
    out = {"command": command, "inputs": inputs, "status": status, "details": details}
    if timings is not None:
        out["timings"] = timings
    return out


def load_schema() -> dict:
    return json.loads(resources.files("netforms").joinpath("data/report.schema.json").read_text())


def emit(rep, as_json, stream=None):
    stream = stream or sys.stdout
    if as_json:
        stream.write(json.dumps(rep, sort_keys=True, ensure_ascii=False, indent=2) + "\n")
        return
    stream.write(f"{rep['command']}: {rep['status']}\n")
    for d in rep["details"]:
        line = f"  {d.get('name', '')}: {d.get('status', '')}"
        extra = {k: v for k, v in d.items() if k not in ("name", "status", "suite")}
        if extra:
            line += "  " + json.dumps(extra, sort_keys=True, ensure_ascii=False)
        stream.write(line + "\n")


def exit_code(rep):
    return {"pass": EXIT_OK, "fail": EXIT_FAIL}.get(rep["status"], EXIT_USAGE)


def _field(q):
    try:
        return GF(int(q))
    except (RingError, ValueError) as exc:
        raise UsageError(f"bad field size {q!r}: {exc}")


def _point(text, F):
    from .geometry import parse_point
    try:
        p = parse_point(text, F)
    except (RingError, ValueError) as exc:
        raise UsageError(f"bad point {text!r}: {exc}")
    if len(p) != 7:
        raise UsageError(f"bad point {text!r}: expected 7 coordinates, got {len(p)}")
    return p


def _fmt(F, p):
    return [F.format(x) for x in p]


# -- subcommands ------------------------------------------------------------------------

def cmd_verify(args):
    from .verify import SUITES, run_suites
    if args.samples < 1:
        raise UsageError("--samples must be a positive integer")
    seed = random.SystemRandom().randrange(2 ** 32) if args.seed == "random" else int(args.seed)
    suites = SUITES if args.suite == "all" else (args.suite,)
    timings = {}
    details = []
    for name in suites:
        start = time.perf_counter()
        details.extend(run_suites([name], args.mode, args.samples, seed))
        timings[name] = round(time.perf_counter() - start, 3)
    details.sort(key=lambda d: (d["suite"], d["name"]))
    inputs = {"suite": args.suite, "mode": args.mode, "samples": args.samples, "seed": seed}
    return report("verify", inputs, details, timings if args.timings else None)


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}")


def _write_json(path, obj):
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if path in (None, "-"):
        return
    with open(path, "w") as fh:
        fh.write(text)


def _form_summary(q):
    from .forms import signature_pair
    d = determinant(q.Q)
    out = {"det": q.ring.encode(d)}
    if q.ring in (ZZ, QQ) and d != 0:
        out["signature"] = list(signature_pair(q))
    return out


def cmd_correspond(args):
    from .correspondence import net_from_form, phi_from_net
    from .forms import AlternatingNet, DegenerateNet, TernarySymForm, certify_rank4
    data = _read_json(args.infile)
    inputs = {"dir": args.dir, "in": args.infile}
    try:
        if args.dir == "net2form":
            net = AlternatingNet.from_json(data)
        else:
            form = TernarySymForm.from_json(data)
    except (KeyError, ValueError, RingError, TypeError) as exc:
        raise UsageError(f"malformed input: {exc}")
    if args.dir == "net2form":
        try:
            certify_rank4(net)
        except DegenerateNet as exc:
            where = "" if exc.point is None else " at (" + ",".join(str(x) for x in exc.point) + ")"
            return report("correspond", inputs, [{"name": "rank-4 certification", "status": "fail",
                                                  "message": f"{exc}{where}"}])
        image = phi_from_net(net)
        payload = image.to_json()
        summary = _form_summary(image)
    else:
        if not form.ring.is_unit(determinant(form.Q)):
            return report("correspond", inputs, [{"name": "nondegenerate form", "status": "fail",
                                                  "message": "form is degenerate (determinant is not a unit)"}])
        image = net_from_form(form)
        payload = image.to_json()
        summary = _form_summary(form)
    _write_json(args.outfile, payload)
    rec = {"name": args.dir, "status": "pass", "summary": summary}
    if args.outfile in (None, "-"):
        rec["image"] = payload
    return report("correspond", inputs, [rec])


def cmd_census(args):
    from .geometry import census
    q = int(args.q)
    if q > 9:
        raise UsageError("census supports q <= 9")
    _field(q)
    c = census(q, use_polarization=args.polarization)
    rec = {"name": f"census over GF({q})", "status": "pass" if c["consistent"] and c["total"] == c["expected_total"] else "fail",
           **{k: v for k, v in c.items() if k != "q"}}
    return report("census", {"q": q, "polarization": args.polarization}, [rec])


def _on_model_or_usage(p, F):
    from .geometry import on_model
    if not on_model(p, F):
        raise UsageError("point is not on the split model")


def cmd_lines(args):
    from .geometry import classify_point, lines_through
    F = _field(args.q)
    p = _point(args.point, F)
    _on_model_or_usage(p, F)
    lines = lines_through(p, F)
    recs = []
    for l in lines:
        recs.append({"name": "line", "status": "pass", **l.to_json()})
    label = classify_point(p, F)
    return report("lines", {"q": F.q, "point": _fmt(F, p)}, recs + [
        {"name": "orbit", "status": "pass", "orbit": label, "count": len(lines)}])


def cmd_trisecant(args):
    from .geometry import classify_point, trisecant_points
    F = _field(args.q)
    p = _point(args.point, F)
    _on_model_or_usage(p, F)
    t = trisecant_points(p, F)
    E = t.field
    recs = [{"name": "intersection", "status": "pass", "field": E.spec(),
             "label": _fmt(E, P), "multiplicity": m} for P, m in t.points]
    recs.append({"name": "orbit", "status": "pass", "orbit": classify_point(p, F),
                 "profile": list(t.profile)})
    return report("trisecant", {"q": F.q, "point": _fmt(F, p)}, recs)


def cmd_act(args):
    from .geometry import on_model
    from .groups import GroupElement2, act_on_point, sigma, sigma_prime
    if args.q is None and args.char is None:
        raise UsageError("give --char or --q")
    F = _field(args.q if args.q is not None else args.char)
    try:
        a, b, c, d = (F.parse(t) for t in args.g.split(","))
    except (ValueError, RingError) as exc:
        raise UsageError(f"bad group element {args.g!r}: {exc}")
    p = _point(args.point, F)
    try:
        if F.characteristic == 2:
            g = GroupElement2(F, a, b, c, d, special=True)
            M = sigma_prime(g)
        else:
            g = GroupElement2(F, a, b, c, d)
            M = sigma(g)
    except RingError as exc:
        raise UsageError(str(exc))
    image = act_on_point(M, p, F)
    ok = on_model(image, F) == on_model(p, F)
    rec = {"name": "image", "status": "pass" if ok else "fail", "image": _fmt(F, image),
           "on_model": on_model(image, F)}
    return report("act", {"q": F.q, "g": args.g, "point": _fmt(F, p)}, [rec])


def cmd_shafarevich(args):
    from .arithmetic import shafarevich_count, shafarevich_count_abstract
    if args.r is not None:
        if args.r < 1:
            raise UsageError("--r must be positive")
        n = shafarevich_count_abstract(args.r)
        return report("shafarevich", {"r": args.r}, [{"name": "count", "status": "pass", "count": n}])
    try:
        primes = [int(t) for t in args.primes.split(",") if t.strip()] if args.primes else []
    except ValueError:
        raise UsageError(f"bad prime list {args.primes!r}")
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            res = shafarevich_count(primes)
        except ValueError as exc:
            raise UsageError(str(exc))
    body = res.to_json()
    ok = res.verified and body["count"] == body["expected"]
    return report("shafarevich", {"primes": primes}, [{"name": "count", "status": "pass" if ok else "fail", **body}])


def _load_form(path):
    from .forms import TernarySymForm
    data = _read_json(path)
    try:
        if isinstance(data, list):
            from fractions import Fraction
            rows = [[Fraction(str(x)) for x in r] for r in data]
            ring = ZZ if all(x.denominator == 1 for r in rows for x in r) else QQ
            conv = int if ring == ZZ else (lambda x: x)
            return TernarySymForm(ring, Matrix(ring, [[conv(x) for x in r] for r in rows]))
        return TernarySymForm.from_json(data)
    except (KeyError, ValueError, RingError, TypeError) as exc:
        raise UsageError(f"malformed form: {exc}")


def cmd_local_class(args):
    from .arithmetic import good_reduction, local_class, parse_place
    q = _load_form(args.form)
    if q.ring not in (ZZ, QQ):
        raise UsageError("local classes need a rational form")
    try:
        v = parse_place(args.place)
        cls = local_class(q, v)
    except ValueError as exc:
        raise UsageError(str(exc))
    rec = {"name": "local class", "status": "pass", "place": str(v), "class": cls}
    if v != "inf":
        rec["good_reduction"] = good_reduction(q, v)
    return report("local-class", {"form": args.form, "place": str(v)}, [rec])


def cmd_split_model(args):
    from .algebra.codec import poly_to_json
    from .forms import split_net
    from .models import grassmannian_section, y_split_ideal
    R = ZZ if args.q is None else _field(args.q)
    Y = y_split_ideal(R)
    sec = grassmannian_section(split_net(R))
    rec = {"name": "split model", "status": "pass" if sec.generators == Y.generators else "fail",
           "ring": R.spec(), "vars": list(Y.vars), "quadrics": [str(g) for g in Y.generators],
           "encoded": [poly_to_json(g) for g in Y.generators]}
    return report("split-model", {"q": args.q}, [rec])


# -- parser -----------------------------------------------------------------------------

def build_parser():
    from .verify import MODES, SUITES
    p = argparse.ArgumentParser(prog="netforms", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--json", action="store_true", help="machine-readable report")
        sp.set_defaults(func=func)
        return sp

    v = add("verify", cmd_verify, "run verification suites")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--mode", choices=MODES, default="randomized")
    v.add_argument("--samples", type=int, default=20)
    v.add_argument("--seed", default="0", help="integer seed or 'random'")
    v.add_argument("--timings", action="store_true", help="include wall-clock timings")

    c = add("correspond", cmd_correspond, "net <-> form transforms")
    c.add_argument("--dir", choices=("net2form", "form2net"), required=True)
    c.add_argument("--in", dest="infile", required=True)
    c.add_argument("--out", dest="outfile", default=None)

    c = add("census", cmd_census, "orbit and line census over GF(q)")
    c.add_argument("--q", required=True)
    c.add_argument("--polarization", action="store_true",
                   help="also recompute lines by the tangent-space method")

    for name, func, text in (("lines", cmd_lines, "lines through a point"),
                             ("trisecant", cmd_trisecant, "trisecant intersection of a point")):
        c = add(name, func, text)
        c.add_argument("--point", required=True)
        c.add_argument("--q", required=True)

    c = add("act", cmd_act, "act on a point of the model")
    c.add_argument("--char", type=int)
    c.add_argument("--q", type=int)
    c.add_argument("--g", required=True, help="a,b,c,d")
    c.add_argument("--point", required=True)

    c = add("shafarevich", cmd_shafarevich, "count forms with good reduction outside S")
    c.add_argument("--primes", default="")
    c.add_argument("--r", type=int, help="abstract mode: number of places")

    c = add("local-class", cmd_local_class, "split or nonsplit at a place")
    c.add_argument("--form", required=True)
    c.add_argument("--place", required=True)

    c = add("split-model", cmd_split_model, "the five quadrics of the split model")
    c.add_argument("--q", type=int)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        rep = args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    emit(rep, args.json)
    if rep["status"] == "fail" and not args.json:
        for d in rep["details"]:
            if d.get("status") == "fail" and d.get("message"):
                sys.stderr.write(d["message"] + "\n")
    return exit_code(rep)


if __name__ == "__main__":
    sys.exit(main())
