"""Command line front end.

Exit codes: 0 claim proved, 1 claim refuted, 2 inconclusive, 3 usage or I/O error.
Certificates can be addressed as ``corpus:<id>``.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from . import constructs, qbounds
from .errors import (ContinuationError, CorpusIntegrityError, ExactOnlyError, LiftIntegrityError,
                     RejectedSeedError, StrongPropsError)
from .matgraph import Graph, format_for_path, parse_graph
from .scalars import ExactMatrix
from .verify import check_witness, gershgorin_ssp, verify

EXIT_PROVED, EXIT_REFUTED, EXIT_INCONCLUSIVE, EXIT_ERROR = 0, 1, 2, 3
MIN_FLOAT_MARGIN = 10.0
CLI_SCHEMA = "strongprops.cli/1"


class InputError(click.ClickException):
    exit_code = EXIT_ERROR


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_json(path: str):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def load_graph(path: str, fmt: str | None = None) -> Graph:
    try:
        return parse_graph(_read(path), fmt or format_for_path(path))
    except (StrongPropsError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def load_certificate(ref: str) -> constructs.Certificate:
    if ref.startswith("corpus:"):
        try:
            return constructs.get_certificate(ref[len("corpus:"):])
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from None
        except CorpusIntegrityError as exc:
            raise InputError(str(exc)) from None
    obj = _load_json(ref)
    try:
        return constructs.Certificate.from_json(obj)
    except (KeyError, ValueError, StrongPropsError) as exc:
        raise InputError(f"{ref}: not a certificate ({exc})") from None


def _matrix_from_entries(entries, mode: str, where: str):
    if not isinstance(entries, list) or not all(isinstance(r, list) for r in entries):
        raise InputError(f"{where}: entries must be a list of rows")
    if mode == "exact":
        if any(isinstance(x, float) and not float(x).is_integer() for r in entries for x in r):
            raise InputError(f"{where}: exact mode needs exact entries (integers or strings "
                             "like '1/2' or '1+sqrt(6)'); use --mode float for decimals")
        try:
            return ExactMatrix.from_strings([[str(int(x)) if isinstance(x, float) else str(x)
                                              for x in r] for r in entries])
        except (ValueError, StrongPropsError) as exc:
            raise InputError(f"{where}: {exc}") from None
    try:
        return np.array([[float(ExactMatrix.from_strings([[x]])[0, 0]) if isinstance(x, str) else float(x)
                          for x in r] for r in entries])
    except (ValueError, StrongPropsError) as exc:
        raise InputError(f"{where}: {exc}") from None


def load_matrix(ref: str, mode: str):
    """A matrix and (optional) graph from a corpus ref, certificate, JSON or text file."""
    if ref.startswith("corpus:"):
        cert = load_certificate(ref)
        A = cert.matrix if mode == "exact" else cert.matrix.to_numpy()
        return A, cert.graph
    if ref.endswith(".json"):
        obj = _load_json(ref)
        if isinstance(obj, dict) and "input" in obj:
            obj = obj["input"]
        entries = obj.get("entries") if isinstance(obj, dict) else obj
        G = None
        if isinstance(obj, dict) and "edges" in obj:
            G = Graph.from_edges(len(entries), [tuple(e) for e in obj["edges"]])
        return _matrix_from_entries(entries, mode, ref), G
    rows = [line.split() for line in _read(ref).splitlines() if line.strip() and not line.startswith("#")]
    return _matrix_from_entries(rows, mode, ref), None


def _verdict_code(rep) -> int:
    if rep.mode == "float" and (rep.advisory or (rep.margin is not None and rep.margin < MIN_FLOAT_MARGIN)):
        return EXIT_INCONCLUSIVE
    return EXIT_PROVED if rep.verdict else EXIT_REFUTED


def _report_text(rep) -> str:
    lines = [f"{rep.property}: {'holds' if rep.verdict else 'fails'} ({rep.mode} mode)",
             f"  non-edges p = {rep.p}, constraint rank = {rep.rank}"]
    if rep.q is not None:
        lines.append(f"  distinct eigenvalues q = {rep.q}")
    if rep.margin is not None:
        lines.append(f"  rank margin = {'inf' if math.isinf(rep.margin) else f'{rep.margin:.3g}'}")
    if rep.witness is not None:
        lines.append("  witness X:")
        W = rep.witness.to_strings() if isinstance(rep.witness, ExactMatrix) else \
            [[f"{x:.6g}" for x in row] for row in np.asarray(rep.witness)]
        width = max(len(x) for row in W for x in row)
        lines += ["    " + " ".join(x.rjust(width) for x in row) for row in W]
    lines += [f"  note: {n}" for n in rep.notes]
    return "\n".join(lines) + "\n"


def _input_json(A, G: Graph) -> dict:
    entries = A.to_strings() if isinstance(A, ExactMatrix) else np.asarray(A).tolist()
    return {"entries": entries, "edges": [list(e) for e in G.sorted_edges()]}


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="strongprops")
def main_group():
    """Strong Arnold / spectral / multiplicity properties and bounds on q(G)."""


@main_group.command("verify")
@click.option("--property", "prop", type=click.Choice(["sap", "ssp", "smp"], case_sensitive=False))
@click.option("--cert", "cert", help="matrix source: corpus:<id>, certificate JSON, matrix JSON or text")
@click.option("--graph", "graph_path", help="graph the matrix must belong to (default: its pattern)")
@click.option("--mode", type=click.Choice(["exact", "float"]), default="exact", show_default=True)
@click.option("--tol", type=float, default=1e-9, show_default=True, help="relative rank tolerance (float mode)")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), help="write the report here")
@click.option("--recheck", type=click.Path(dir_okay=False), help="re-run a saved JSON report")
def verify_cmd(prop, cert, graph_path, mode, tol, fmt, out, recheck):
    """Decide SAP, SSP or SMP for a matrix."""
    if recheck:
        sys.exit(_recheck(recheck, fmt, out))
    if not prop or not cert:
        raise click.UsageError("--property and --cert are required (or use --recheck)")
    A, G = load_matrix(cert, mode)
    if graph_path:
        G = load_graph(graph_path)
    kw = {"tol": tol} if mode == "float" else {}
    try:
        rep = verify(A, prop.upper(), G, **kw)
    except StrongPropsError as exc:
        raise InputError(str(exc)) from None
    payload = {"schema": CLI_SCHEMA, "command": "verify", "report": rep.to_json(),
               "input": _input_json(A, G or _pattern(A))}
    _emit(_dumps(payload) if fmt == "json" else _report_text(rep), out)
    sys.exit(_verdict_code(rep))


def _pattern(A):
    from .matgraph import pattern_of
    return pattern_of(A)


def _recheck(path: str, fmt: str, out: str | None) -> int:
    saved = _load_json(path)
    try:
        old = saved["report"]
        inp = saved["input"]
    except (KeyError, TypeError):
        raise InputError(f"{path}: not a verify report") from None
    mode = old["mode"]
    A = _matrix_from_entries(inp["entries"], mode, path)
    G = Graph.from_edges(len(inp["entries"]), [tuple(e) for e in inp["edges"]])
    rep = verify(A, old["property"], G)
    new = rep.to_json()
    agree = new == old
    witness_ok = None
    if mode == "exact" and old.get("witness") is not None:
        witness_ok = check_witness(A, ExactMatrix.from_strings(old["witness"]), old["property"], G)
    payload = {"schema": CLI_SCHEMA, "command": "recheck", "reproduced": agree,
               "witness_valid": witness_ok, "report": new}
    if fmt == "json":
        _emit(_dumps(payload), out)
    else:
        _emit(f"recheck: {'reproduced' if agree else 'MISMATCH'}"
              + ("" if witness_ok is None else f", stored witness {'valid' if witness_ok else 'INVALID'}")
              + "\n" + _report_text(rep), out)
    if not agree or witness_ok is False:
        return EXIT_INCONCLUSIVE
    return _verdict_code(rep)


def _params_from_options(G, brute_force, M, Mplus, cover):
    if brute_force:
        try:
            P = qbounds.brute_force_params(G)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    else:
        P = qbounds.GraphParams()
    for name, val in (("M", M), ("Mplus", Mplus), ("clique_cover_number", cover)):
        if val is not None:
            setattr(P, name, val)
            P.provenance[name] = "user-supplied"
    try:
        P.validate(G.n)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return P


def _rules_table(title: str, bound) -> list[str]:
    lines = [f"{title}: {bound.value}"]
    for j in bound.rules:
        nums = ", ".join(f"{k}={v}" for k, v in j.numbers.items() if k != "H_edges")
        lines.append(f"  {j.value:>3}  {j.rule:<20} {j.citation}" + (f"  [{nums}]" if nums else ""))
    return lines


@main_group.command("bounds")
@click.option("--graph", "graph_path", required=True)
@click.option("--graph-format", type=click.Choice(["edge-list", "graph6"]))
@click.option("--brute-force", is_flag=True, help="compute M, M+ and the clique cover number (small n)")
@click.option("--M", "M", type=int, help="maximum nullity (or an upper bound)")
@click.option("--Mplus", "Mplus", type=int, help="PSD maximum nullity (or an upper bound)")
@click.option("--clique-cover", "cover", type=int)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False))
def bounds_cmd(graph_path, graph_format, brute_force, M, Mplus, cover, fmt, out):
    """Lower and upper bounds on q(G) with their justifications."""
    G = load_graph(graph_path, graph_format)
    P = _params_from_options(G, brute_force, M, Mplus, cover)
    rep = qbounds.bounds(G, P)
    if fmt == "json":
        payload = {"schema": CLI_SCHEMA, "command": "bounds", "graph": _graph_json(G),
                   "params": P.to_json(), "bounds": rep.to_json()}
        _emit(_dumps(payload), out)
    else:
        lines = [f"graph: n={G.n}, m={G.num_edges}"]
        lines += _rules_table("q lower", rep.lower) + _rules_table("q upper", rep.upper)
        _emit("\n".join(lines) + "\n", out)
    sys.exit(EXIT_PROVED)


def _graph_json(G: Graph) -> dict:
    return {"n": G.n, "edges": [list(e) for e in G.sorted_edges()]}


_VERDICT_TEXT = {
    "q_equals_n": "q = |G| (path)",
    "q_at_least_n_minus_1": "q >= |G|-1",
    "q_at_most_n_minus_2": "q <= |G|-2",
}


@main_group.command("classify")
@click.option("--graph", "graph_path", required=True)
@click.option("--graph-format", type=click.Choice(["edge-list", "graph6"]))
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False))
def classify_cmd(graph_path, graph_format, fmt, out):
    """Decide whether q(G) = |G|, q(G) >= |G|-1, or q(G) <= |G|-2."""
    G = load_graph(graph_path, graph_format)
    c = qbounds.classify_high_q(G)
    if fmt == "json":
        _emit(_dumps({"schema": CLI_SCHEMA, "command": "classify", "graph": _graph_json(G),
                      "classification": c.to_json()}), out)
    else:
        text = _VERDICT_TEXT[c.verdict]
        if c.family is not None:
            text += f" [{c.family.value}]"
        if c.structure:
            text += f" [{c.structure}]"
        if c.evidence is not None:
            text += f"\n  {c.evidence.rule}: {c.evidence.citation} -> {c.evidence.value}"
        _emit(text + "\n", out)
    sys.exit(EXIT_PROVED if c.evidence is not None else EXIT_INCONCLUSIVE)


@main_group.command("lift")
@click.option("--seed", required=True, help="corpus:<id> or certificate JSON")
@click.option("--supergraph", required=True)
@click.option("--graph-format", type=click.Choice(["edge-list", "graph6"]))
@click.option("--mode", type=click.Choice(["spectrum", "multiplicity"]), default="spectrum", show_default=True)
@click.option("--t-target", type=float, help="size of the new entries (default 0.1 * smallest edge entry)")
@click.option("--steps", type=int, default=16, show_default=True)
@click.option("--tol", "newton_tol", type=float, default=1e-11, show_default=True)
@click.option("--extra", help="comma-separated new eigenvalues when the supergraph is larger")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="json", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False))
def lift_cmd(seed, supergraph, graph_format, mode, t_target, steps, newton_tol, extra, fmt, out):
    """Realize the seed's spectrum (or multiplicity list) on a supergraph."""
    from . import lifting
    cert = load_certificate(seed)
    Gt = load_graph(supergraph, graph_format)
    kw = {"target_magnitude": t_target, "steps": steps, "newton_tol": newton_tol}
    try:
        if Gt.n != cert.n or extra:
            vals = [float(x) for x in extra.split(",")] if extra else []
            res = lifting.augment_and_lift(cert, Gt, vals, mode=mode, **kw)
        else:
            res = lifting.lift(lifting.LiftProblem(cert.matrix, Gt, mode, **kw))
    except RejectedSeedError as exc:
        click.echo(f"seed rejected: {exc}", err=True)
        sys.exit(EXIT_REFUTED)
    except (ContinuationError, LiftIntegrityError) as exc:
        click.echo(f"inconclusive: {exc}", err=True)
        if isinstance(exc, ContinuationError) and fmt == "json":
            _emit(_dumps({"schema": CLI_SCHEMA, "command": "lift", "error": str(exc),
                          "path_log": [list(x) for x in exc.path_log]}), out)
        sys.exit(EXIT_INCONCLUSIVE)
    except (StrongPropsError, ValueError) as exc:
        raise InputError(str(exc)) from None
    if fmt == "json":
        _emit(_dumps({"schema": CLI_SCHEMA, "command": "lift", "seed": cert.id,
                      "supergraph": _graph_json(Gt), "result": res.to_json()}), out)
    else:
        lines = [f"lifted {cert.id} to n={Gt.n}, m={Gt.num_edges} ({res.mode})",
                 f"  spectrum error {res.spectrum_error:.3g}, distinct eigenvalues {res.q}",
                 f"  continuation steps {len(res.path_log)}"]
        lines += ["  " + " ".join(f"{x:10.6f}" for x in row) for row in res.B]
        _emit("\n".join(lines) + "\n", out)
    sys.exit(EXIT_PROVED)


@main_group.group("corpus")
def corpus_group():
    """List, show, export or check certificates."""


@corpus_group.command("list")
def corpus_list():
    for c in _corpus():
        claims = ", ".join(f"{cl.kind}{'' if cl.shift is None else f'[{cl.shift}]'}={_claim_str(cl.value)}"
                           for cl in c.claims if cl.kind != "spectrum")
        click.echo(f"{c.id:<18} n={c.n:<2} {claims}")


def _claim_str(v):
    if isinstance(v, tuple):
        return "(" + ",".join(str(x) for x in v) + ")"
    return str(v)


def _corpus():
    try:
        return constructs.corpus()
    except (OSError, CorpusIntegrityError) as exc:
        raise InputError(str(exc)) from None


@corpus_group.command("show")
@click.argument("cert_id")
def corpus_show(cert_id):
    ref = cert_id if cert_id.startswith("corpus:") or cert_id.endswith(".json") else f"corpus:{cert_id}"
    click.echo(_dumps(load_certificate(ref).to_json()), nl=False)


@corpus_group.command("export")
@click.option("--out", type=click.Path(dir_okay=False))
def corpus_export(out):
    _emit(constructs.dump_corpus(_corpus()), out)


@corpus_group.command("check")
@click.argument("path", required=False)
def corpus_check(path):
    """Re-verify every claim of a certificate file (or the built-in corpus)."""
    try:
        certs = constructs.load_certificates(path) if path else constructs.load_certificates(
            constructs.corpus_path())
    except (OSError, ValueError, KeyError, StrongPropsError) as exc:
        raise InputError(str(exc)) from None
    bad = 0
    for c in certs:
        fails = constructs.verify_certificate(c)
        bad += bool(fails)
        click.echo(f"{c.id}: " + ("ok" if not fails else "; ".join(f"{cl.kind}: {m}" for cl, m in fails)))
    sys.exit(EXIT_REFUTED if bad else EXIT_PROVED)


@main_group.command("gersh")
@click.option("--cert", required=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
def gersh_cmd(cert, fmt):
    """Gershgorin-disc sufficient test for the SSP."""
    A, _ = load_matrix(cert, "exact" if not cert.endswith(".txt") else "float")
    res = gershgorin_ssp(A)
    if fmt == "json":
        click.echo(_dumps({"schema": CLI_SCHEMA, "command": "gersh", "result": res.to_json()}), nl=False)
    else:
        click.echo(res.status)
    sys.exit(EXIT_PROVED if res.proved else EXIT_INCONCLUSIVE)


def main(argv=None) -> int:
    try:
        rv = main_group.main(args=argv, prog_name="strongprops", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_ERROR
    except click.exceptions.Abort:
        return EXIT_ERROR
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR
    except (ExactOnlyError, StrongPropsError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_ERROR
    return rv if isinstance(rv, int) else 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
