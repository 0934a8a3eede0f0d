"""Command-line front end.

Polytopes are read and written as blocks: a header ``<#points> <dim>`` and
one point per line.  Weight systems are one combined weight system per line
in blocks ``d n_1 ... n_k``.  Lines starting with ``#`` are comments; those
in front of a record are echoed in front of its output.

Exit status: 0 success, 1 usage error, 2 malformed input, 3 I/O failure.
Failures that concern a single record print ``ERR <reason>`` and the run
continues.
"""
import argparse
import os
import sys
from typing import Iterator, List, Optional, TextIO, Tuple

from . import __version__
from .classify import DedupStore, classify, connectedness_report, polytope_from_key
from .errors import ParseError, RefpolyError
from .fibration import count_facet_projections, count_reflexive_projections, reflexive_sections
from .hodge import hodge_numbers, picard
from .lattices import enumerate_lattices, reflexive_on_lattice
from .polytope import Polytope, hull
from .weights import (CWS, delta_of_q, enumerate_cws, enumerate_single_ws, minimality_type,
                      parse_cws_line)

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --------------------------------------------------------------------------
# reading and writing


def read_polytopes(fh: TextIO) -> Iterator[Tuple[List[str], Polytope]]:
    """Yield ``(comments, polytope)`` per block; raises ParseError."""
    comments = []
    lines = iter(enumerate(fh, 1))
    for no, raw in lines:
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line)
            continue
        head = line.split()
        try:
            npts, dim = (int(x) for x in head)
        except ValueError:
            raise ParseError(f"expected '<#points> <dim>', got {line!r}", no)
        if npts < 1 or dim < 1:
            raise ParseError("point count and dimension must be positive", no)
        pts = []
        while len(pts) < npts:
            try:
                no, raw = next(lines)
            except StopIteration:
                raise ParseError(f"block ends after {len(pts)} of {npts} points", no)
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                p = tuple(int(x) for x in line.split())
            except ValueError:
                raise ParseError(f"non-integer coordinate in {line!r}", no)
            if len(p) != dim:
                raise ParseError(f"point has {len(p)} coordinates, expected {dim}", no)
            pts.append(p)
        try:
            P = hull(pts)
        except RefpolyError as exc:
            yield comments, exc
        else:
            yield comments, P
        comments = []


def read_weights(fh: TextIO, nweights: Optional[int]) -> Iterator[Tuple[List[str], CWS]]:
    comments = []
    for no, raw in enumerate(fh, 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line)
            continue
        try:
            q = parse_cws_line(line, nweights)
        except ValueError as exc:
            raise ParseError(str(exc), no)
        yield comments, q
        comments = []


def format_block(points, comment: Optional[str] = None) -> str:
    pts = [tuple(p) for p in points]
    out = []
    if comment:
        out.append(f"# {comment}")
    out.append(f"{len(pts)} {len(pts[0])}")
    out.extend(" ".join(str(int(x)) for x in p) for p in pts)
    return "\n".join(out)


# --------------------------------------------------------------------------
# per-record handlers; each returns the text to print


def _points(P: Polytope, args) -> str:
    return format_block(P.lattice_points())


def _dual(P: Polytope, args) -> str:
    D = P.dual()
    if not D.is_lattice:
        raise RefpolyError("the dual is not a lattice polytope")
    return format_block(D.vertices)


def _reflexive(P: Polytope, args) -> str:
    return "reflexive" if P.is_reflexive() else "not reflexive"


def _normalform(P: Polytope, args) -> str:
    nf = P.normal_form()
    return format_block(list(zip(*nf.matrix)))


def _hodge(P: Polytope, args) -> str:
    h = hodge_numbers(P)
    if h.n == 3:
        return str(h.picard)
    vals = list(h.h)
    if args.chi and h.chi is not None:
        vals.append(h.chi)
    return " ".join(map(str, vals))


def _picard(P: Polytope, args) -> str:
    return str(picard(P))


def _lattices(P: Polytope, args) -> str:
    blocks = []
    for r in enumerate_lattices(P):
        if args.check and not reflexive_on_lattice(r):
            raise RefpolyError(f"realization of index {r.index} is not reflexive")
        pts = r.dual_vertices if args.dual else r.vertices
        blocks.append(format_block(pts, f"index={r.index}"))
    return "\n".join(blocks)


def _sections_text(DeltaStar: Polytope, fiber_dim: int) -> List[str]:
    out = []
    for f in reflexive_sections(DeltaStar, fiber_dim):
        w = ",".join(map(str, sorted(f.fiber_weights.weights))) if f.fiber_weights else "-"
        red = ",".join(map(str, f.reducible_rays)) or "-"
        out.append(f"fiber_dim={f.fiber_dim} weights={w} base_rays={len(f.base_rays)} "
                   f"reducible={red}")
    return out


def _fibrations_polytope(P: Polytope, args) -> str:
    D = P.dual()
    fd = args.fiber_dim or P.dim - 1
    lines = _sections_text(D, fd)
    return "\n".join([f"sections={len(lines)}"] + lines)


def _fibrations_weights(q: CWS, args) -> str:
    Delta = delta_of_q(q)
    fd = args.fiber_dim or Delta.dim - 1
    lines = _sections_text(Delta.dual(), fd)
    head = f"Pi={count_reflexive_projections(q)}"
    if len(q.systems) == 1:
        head += f" F={count_facet_projections(q)}"
    return "\n".join([head] + lines)


def _analyze_polytope(P: Polytope, args) -> str:
    fields = [f"P={len(P.lattice_points())}", f"V={len(P.vertices)}"]
    if P.has_ip():
        D = P.dual()
        if D.is_lattice:
            fields += [f"dualP={len(D.lattice_points())}", f"dualV={len(D.vertices)}"]
    fields.append(f"reflexive={'yes' if P.is_reflexive() else 'no'}")
    if P.is_reflexive() and 3 <= P.dim <= 5:
        fields += _hodge_fields(P)
    return " ".join(fields)


def _hodge_fields(P: Polytope) -> List[str]:
    h = hodge_numbers(P)
    if h.n == 3:
        return [f"pic={h.picard}"]
    out = [f"h1{i + 1}={v}" for i, v in enumerate(h.h)]
    if h.chi is not None:
        out.append(f"chi={h.chi}")
    return out


def _analyze_weights(q: CWS, args) -> str:
    P = delta_of_q(q)
    if not P.has_ip():
        raise RefpolyError("Delta(q) has no interior point")
    D = P.dual()
    fields = [q.canonical().format(), f"P={len(P.lattice_points())}", f"V={len(P.vertices)}"]
    if D.is_lattice:
        fields += [f"dualP={len(D.lattice_points())}", f"dualV={len(D.vertices)}"]
    fields.append(f"type={minimality_type(q).letter}")
    if P.is_reflexive() and 3 <= P.dim <= 5:
        fields += _hodge_fields(P)
    if P.is_reflexive() and P.dim >= 2 and not args.no_pi:
        fields.append(f"Pi={count_reflexive_projections(q)}")
    if len(q.systems) == 1:
        fields.append(f"F={count_facet_projections(q)}")
    return " ".join(fields)


POLYTOPE_COMMANDS = {
    "points": _points,
    "dual": _dual,
    "reflexive": _reflexive,
    "normalform": _normalform,
    "hodge": _hodge,
    "picard": _picard,
    "lattices": _lattices,
    "fibrations": _fibrations_polytope,
    "analyze": _analyze_polytope,
}

WEIGHT_COMMANDS = {
    "delta": lambda q, args: format_block(
        delta_of_q(q).vertices if args.vertices_only else delta_of_q(q).lattice_points()),
    "fibrations": _fibrations_weights,
    "analyze": _analyze_weights,
}


# --------------------------------------------------------------------------
# argument parsing


def _jobs_default() -> int:
    try:
        return max(1, int(os.environ.get("REFPOLY_JOBS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="refpoly", description="Reflexive polytopes, weight systems and "
                "Calabi-Yau hypersurface invariants.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def with_input(sp, weights_flag=True):
        sp.add_argument("input", nargs="?", help="input file (default: stdin)")
        if weights_flag:
            sp.add_argument("--weights", action="store_true",
                            help="records are weight lines; act on Delta(q)")
            sp.add_argument("--nweights", type=int, help="weights per block")
        return sp

    for name, helptext in [("points", "all lattice points"),
                           ("dual", "vertices of the dual polytope"),
                           ("reflexive", "reflexivity test"),
                           ("normalform", "normal form vertex matrix"),
                           ("picard", "Picard number (dimension 3)")]:
        with_input(sub.add_parser(name, help=helptext))
    sp = with_input(sub.add_parser("hodge", help="Hodge numbers h11 h12 ... or Picard number"))
    sp.add_argument("--chi", action="store_true", help="append the Euler number (dimension 4)")
    sp = with_input(sub.add_parser("lattices", help="realizations on all admissible lattices"))
    sp.add_argument("--dual", action="store_true", help="print the dual vertices instead")
    sp.add_argument("--check", action="store_true", help="re-verify reflexivity of each pair")
    sp = with_input(sub.add_parser("fibrations", help="reflexive sections and projections"))
    sp.add_argument("--fiber-dim", type=int, help="section dimension (default n - 1)")
    sp = with_input(sub.add_parser("analyze", help="table-style summary"))
    sp.add_argument("--no-pi", action="store_true", help="skip counting reflexive projections")

    sp = with_input(sub.add_parser("delta", help="Delta(q) for each weight line"), False)
    sp.add_argument("--nweights", type=int, help="weights per block")
    sp.add_argument("--vertices-only", action="store_true", help="print only the vertices")

    sp = sub.add_parser("weights-enum", help="weight systems with l weights")
    sp.add_argument("--nweights", type=int, required=True)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--ip", dest="mode", action="store_const", const="ip")
    mode.add_argument("--candidates", dest="mode", action="store_const", const="candidates")
    sp.add_argument("--unsafe-huge", action="store_true", help="allow l = 5 (hours)")

    sp = sub.add_parser("cws-enum", help="IP combined weight systems in dimension n")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--unsafe-huge", action="store_true", help="allow n = 4 (hours)")

    sp = sub.add_parser("classify", help="all reflexive polytopes in dimension n")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--with-lattices", action="store_true")
    sp.add_argument("--resume", metavar="CHECKPOINT", help="checkpoint log to append to")
    sp.add_argument("--jobs", type=int, default=None)
    sp.add_argument("--seeds", metavar="FILE", help="weight lines to start from")
    sp.add_argument("--nweights", type=int, help="weights per block in --seeds")
    sp.add_argument("--dump", action="store_true", help="print every class as a block")
    sp.add_argument("--unsafe-huge", action="store_true", help="allow n = 4")
    return p


# --------------------------------------------------------------------------
# driver


def _open_input(path: Optional[str]) -> TextIO:
    if path is None or path == "-":
        return sys.stdin
    return open(path)


def _emit(out: TextIO, comments: List[str], text: str):
    for c in comments:
        out.write(c + "\n")
    if text:
        out.write(text + "\n")


def _run_records(args, out: TextIO) -> int:
    fh = _open_input(args.input)
    try:
        if args.command == "delta" or getattr(args, "weights", False):
            table = WEIGHT_COMMANDS if args.command in WEIGHT_COMMANDS else None
            records = read_weights(fh, args.nweights)
            for comments, q in records:
                try:
                    if table is not None:
                        text = table[args.command](q, args)
                    else:
                        text = POLYTOPE_COMMANDS[args.command](delta_of_q(q), args)
                except (RefpolyError, ArithmeticError, ValueError) as exc:
                    text = f"ERR {exc}"
                _emit(out, comments, text)
        else:
            for comments, P in read_polytopes(fh):
                if isinstance(P, Exception):
                    _emit(out, comments, f"ERR {P}")
                    continue
                try:
                    text = POLYTOPE_COMMANDS[args.command](P, args)
                except (RefpolyError, ArithmeticError, ValueError) as exc:
                    text = f"ERR {exc}"
                _emit(out, comments, text)
    finally:
        if fh is not sys.stdin:
            fh.close()
    return EXIT_OK


def _weights_enum(args, out) -> int:
    if args.nweights >= 5 and not args.unsafe_huge:
        raise UsageError("five weights take hours; pass --unsafe-huge")
    ws = enumerate_single_ws(args.nweights, args.mode or "ip")
    for w in sorted(ws, key=lambda q: q.key()):
        out.write(w.canonical().format() + "\n")
    return EXIT_OK


def _cws_enum(args, out) -> int:
    if args.dim >= 4 and not args.unsafe_huge:
        raise UsageError("dimension 4 takes hours; pass --unsafe-huge")
    qs = enumerate_cws(args.dim, allow_long=args.unsafe_huge)
    for q in sorted(qs, key=lambda q: q.key()):
        out.write(q.canonical().format() + "\n")
    return EXIT_OK


def _classify(args, out) -> int:
    if args.dim >= 4 and not args.unsafe_huge:
        raise UsageError("dimension 4 is not a desk-scale run; pass --unsafe-huge")
    seeds = None
    if args.seeds:
        with open(args.seeds) as fh:
            seeds = [q for _, q in read_weights(fh, args.nweights)]
    jobs = args.jobs if args.jobs is not None else _jobs_default()
    store = DedupStore(args.resume) if args.resume else None
    try:
        run = classify(args.dim, seeds=seeds, with_lattices=args.with_lattices, jobs=jobs,
                       store=store, allow_huge=args.unsafe_huge)
    finally:
        if store is not None:
            store.close()
    connected, _ = connectedness_report(run)
    out.write(f"classes {run.count}\n")
    out.write(f"connected {'yes' if connected else 'no'}\n")
    if args.dump:
        for key in sorted(run.store.keys):
            out.write(format_block(polytope_from_key(key).vertices) + "\n")
    return EXIT_OK


def main(argv=None, out: TextIO = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        if args.command == "weights-enum":
            return _weights_enum(args, out)
        if args.command == "cws-enum":
            return _cws_enum(args, out)
        if args.command == "classify":
            return _classify(args, out)
        return _run_records(args, out)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except OSError as exc:
        sys.stderr.write(f"io error: {exc}\n")
        return EXIT_IO
    except RefpolyError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
