"""Command-line interface.

Machine-readable JSON goes to stdout and human-readable text to stderr.
Errors exit with the code carried by their class in ``errors``.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

from . import __version__, fixtures
from .errors import DimerPolyError, InputError, MismatchReport
from .reports import _plain


def _emit(obj, args, text=None):
    if args.format == "text" and text is not None:
        sys.stdout.write(text.rstrip("\n") + "\n")
    else:
        sys.stdout.write(json.dumps(_plain(obj), sort_keys=True) + "\n")


def _note(msg):
    sys.stderr.write(msg.rstrip("\n") + "\n")


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _load_graph(ref):
    from .graph_core import from_json
    if os.path.exists(ref):
        return ref, from_json(_read_json(ref))
    if ref in fixtures.graph_names():
        return ref, fixtures.load_fixture_graph(ref)
    raise InputError(f"{ref} is neither a graph file nor a fixture ({', '.join(fixtures.graph_names())})")


def _load_link(ref):
    from .link import parse_pd
    if os.path.exists(ref):
        with open(ref) as fh:
            return ref, parse_pd(fh.read())
    try:
        return ref, parse_pd(fixtures.link_pd(ref))
    except (FileNotFoundError, OSError):
        return "inline", parse_pd(ref)


def _load_quiver(ref):
    from .quiver import Quiver
    if os.path.exists(ref):
        return Quiver.from_json(_read_json(ref))
    try:
        return fixtures.load_fixture_quiver(ref)
    except (FileNotFoundError, OSError):
        raise InputError(f"{ref} is neither a matrix file nor a fixture quiver") from None


def _load_plabic(ref):
    from .plabic import plabic_from_json
    if os.path.exists(ref):
        with open(ref) as fh:
            return plabic_from_json(fh.read())
    if ref in fixtures.plabic_names():
        return fixtures.load_fixture_plabic(ref)
    raise InputError(f"{ref} is neither a plabic file nor a fixture ({', '.join(fixtures.plabic_names())})")


def _int_list(text):
    text = text.strip().strip("()[]")
    if not text:
        return []
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"expected a list of integers, got {text!r}") from None


# ---------------------------------------------------------------------------
# commands

def cmd_dimer_poly(args):
    from .dimer import build_lattice, dimer_face_polynomial, enumerate_matchings, h_vector
    from .graph_core import dual_quiver, find_reduction_sequence
    name, G = _load_graph(args.graph)
    ms = enumerate_matchings(G)
    D = dimer_face_polynomial(G, matchings=ms)
    lat = build_lattice(G, ms)
    if args.format == "dot":
        sys.stdout.write(lat.to_dot(G) + "\n")
        _note(f"D_G = {D.to_text()}")
        return 0
    bottom = lat.elements[lat.bottom]
    h0 = h_vector(G, bottom)
    out = {"command": "dimer-poly", "graph": name, "D": D.to_text(),
           "faces": list(G.inner_faces), "matchings": len(ms), "covers": len(lat.covers),
           "g": [h0[f] for f in G.inner_faces], "quiver": dual_quiver(G)}
    if G.inner_faces:
        out["reductionSequence"] = list(find_reduction_sequence(G, args.depth_cap).faces)
    _emit(out, args, D.to_text())
    _note(f"{name}: {len(ms)} matchings, {len(lat.covers)} covers, D_G = {D.to_text()}")
    return 0


def cmd_alexander(args):
    from .laurent import equal_up_to_unit
    from .link import alexander_from_dimer, alexander_state_sum, kauffman_states, validate_diagram
    name, L = _load_link(args.pd)
    cert = validate_diagram(L)
    i = args.segment if args.segment is not None else min(L.segments)
    if i not in L.segments:
        raise InputError(f"segment {i} is not in the diagram (1..{len(L.segments)})")
    out = {"command": "alexander", "link": name, "pd": L.to_pd(), "segment": i,
           "method": args.method, "diagram": cert}
    if args.method in ("statesum", "both"):
        st = alexander_state_sum(L, i)
        states, lat_cert = kauffman_states(L, i)
        out["stateSum"] = st.to_text()
        out["states"] = len(states)
        out["clockLattice"] = lat_cert
    if args.method in ("dimer", "both"):
        spec, rep = alexander_from_dimer(L, i)
        out["dimerPolynomial"] = rep.details["D"].to_text()
        out["specialized"] = spec.to_text()
        out["prefactor"] = rep.details["prefactor"].to_text()
    if args.method == "both":
        eq, sign, k = equal_up_to_unit(spec, st)
        out["equalUpToUnit"] = eq
        out["unit"] = {"sign": sign, "power": k}
        _note(f"dimer: {spec.to_text()}\nstate sum: {st.to_text()}\n"
              f"related by {'-' if sign < 0 else '+'}t^{k}" if eq else "not related by a unit")
    text = out.get("specialized") or out.get("stateSum")
    _emit(out, args, text)
    return 0


def _report_hash(obj):
    return hashlib.sha256(json.dumps(_plain(obj), sort_keys=True).encode()).hexdigest()


def cmd_verify(args):
    from .suites import SUITES, run_suite
    names = list(SUITES) if args.suite == "all" else [args.suite]
    reports = []
    for s in names:
        rep = run_suite(s, graphs=args.graphs, max_faces=args.max_faces, seed=args.seed,
                        depth_cap=args.depth_cap)
        reports.append(rep.to_json())
        _note(f"{s}: {'pass' if rep.ok else 'FAIL'}")
    ok = all(r["ok"] for r in reports)
    out = {"command": "verify", "suite": args.suite, "seed": args.seed, "graphs": args.graphs,
           "maxFaces": args.max_faces, "depthCap": args.depth_cap, "ok": ok, "reports": reports}
    out["hash"] = _report_hash(reports)
    _emit(out, args, "\n".join(f"{r['name']}: {'pass' if r['ok'] else 'FAIL'}" for r in reports))
    return 0 if ok else MismatchReport.exit_code


def cmd_mutate(args):
    from .cluster import f_and_g
    Q = _load_quiver(args.matrix)
    seq = _int_list(args.sequence) if args.sequence else []
    labels = set(Q.mutable)
    for k in seq:
        if k not in labels:
            raise InputError(f"{k} is not a mutable vertex")
    seed = []
    for v in Q.mutable:
        F, g, _ = f_and_g(Q, seq, v)
        seed.append({"vertex": v, "F": F.to_text(), "g": list(g)})
    out = {"command": "mutate", "sequence": seq, "seed": seed}
    last = seq[-1] if seq else None
    text = "\n".join(f"{e['vertex']}: F = {e['F']}, g = {tuple(e['g'])}" for e in seed)
    if last is not None:
        out["last"] = next(e for e in seed if e["vertex"] == last)
    _emit(out, args, text)
    return 0


def cmd_plabic_twist(args):
    from .plabic import verify_plucker_cluster_monomial
    G = _load_plabic(args.graph)
    if args.assert_reduced:
        G.reduced_asserted = True
    J = tuple(_int_list(args.J))
    rep = verify_plucker_cluster_monomial(G, J)
    tw = rep.result
    out = {"command": "plabic-twist", "graph": G.name or args.graph, "J": list(J),
           "twist": tw.laurent.to_text(), "report": rep.to_json()}
    _emit(out, args, tw.laurent.to_text())
    if rep.details.get("vanishing"):
        _note(f"P_{list(J)} vanishes: no almost perfect matching has this boundary")
    else:
        parts = [f"({z.to_text()})" + (f"^{k}" if k > 1 else "") for z, k in tw.decomposition]
        _note(f"twist = {tw.frozenMonomial.to_text()} * " + " * ".join(parts))
    return 0


def cmd_two_bridge(args):
    from .link import alexander_from_dimer, flock_snake_equivalence, two_bridge
    alpha = _int_list(args.alpha)
    L, lower = two_bridge(alpha)
    rep = flock_snake_equivalence(alpha)
    spec, _ = alexander_from_dimer(L, lower)
    out = {"command": "two-bridge", "alpha": alpha, "pd": L.to_pd(), "lowerSegment": lower,
           "D": rep.details["D"].to_text(), "alexander": spec.to_text(), "report": rep.to_json()}
    if args.format == "dot":
        from .link import flock_graph
        sys.stdout.write(flock_graph(alpha).to_dot("flock") + "\n")
    else:
        _emit(out, args, rep.details["D"].to_text())
    _note(f"C{alpha}: D = {rep.details['D'].to_text()}")
    return 0


# ---------------------------------------------------------------------------

def build_parser():
    from .suites import SUITES
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "dot"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-faces", type=int, default=10)
    common.add_argument("--depth-cap", type=int, default=12,
                        help="longest square-move search when looking for a bigon")
    p = argparse.ArgumentParser(prog="dimerpoly", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("dimer-poly", parents=[common], help="dimer face polynomial of a graph")
    s.add_argument("graph", help="graph JSON file or fixture name")
    s.set_defaults(func=cmd_dimer_poly)

    s = sub.add_parser("alexander", parents=[common], help="Alexander polynomial of a link diagram")
    s.add_argument("pd", help="PD code, PD file, or named link")
    s.add_argument("--segment", type=int)
    s.add_argument("--method", choices=("dimer", "statesum", "both"), default="both")
    s.set_defaults(func=cmd_alexander)

    s = sub.add_parser("verify", parents=[common], help="run verification suites")
    s.add_argument("--suite", choices=SUITES + ("all",), default="all")
    s.add_argument("--graphs", type=int, default=50)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("mutate", parents=[common], help="F-polynomials and g-vectors after mutations")
    s.add_argument("matrix", help="quiver JSON file or fixture quiver name")
    s.add_argument("sequence", nargs="?", default="", help="mutation sequence, e.g. 3,2,4,5,1")
    s.set_defaults(func=cmd_mutate)

    s = sub.add_parser("plabic-twist", parents=[common], help="twisted Plucker coordinate as a cluster monomial")
    s.add_argument("graph", help="plabic JSON file or fixture name")
    s.add_argument("J", help="boundary subset, e.g. 1,3")
    s.add_argument("--assert-reduced", action="store_true",
                   help="treat the graph as reduced even if the file does not say so")
    s.set_defaults(func=cmd_plabic_twist)

    s = sub.add_parser("two-bridge", parents=[common], help="2-bridge link C(alpha), flock and snake graphs")
    s.add_argument("alpha", help="continued fraction entries, e.g. 2,1,3")
    s.set_defaults(func=cmd_two_bridge)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DimerPolyError as exc:
        _note(f"error: {type(exc).__name__}: {exc}")
        rep = getattr(exc, "report", None)
        payload = {"error": type(exc).__name__, "message": str(exc), "exitCode": exc.exit_code}
        if rep is not None:
            payload["report"] = rep.to_json()
        sys.stdout.write(json.dumps(_plain(payload), sort_keys=True) + "\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
