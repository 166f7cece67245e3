"""Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 cap exceeded, 3 failed check.
"""

import argparse
import hashlib
import json
import os
import platform
import re
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import __version__, config
from .errors import CapExceeded, KWGaugeError, ValidationError

EXIT_OK, EXIT_VALIDATION, EXIT_CAP, EXIT_ASSERT = 0, 1, 2, 3
SIG = 12


class CheckFailed(Exception):
    """A duality or structure check did not hold at its tolerance."""


# --- reports ---------------------------------------------------------------

@dataclass
class RunManifest:
    argv: list
    inputs: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    caps: dict = field(default_factory=dict)
    versions: dict = field(default_factory=dict)
    wall_time_s: float = None

    def to_dict(self):
        out = {"argv": self.argv, "inputs": self.inputs, "tolerances": self.tolerances,
               "caps": self.caps, "versions": self.versions}
        if self.wall_time_s is not None:
            out["wall_time_s"] = self.wall_time_s
        return out


@dataclass
class Report:
    """Result of one command: scalar fields, optional table and a verdict line."""

    command: str
    fields: dict = field(default_factory=dict)
    columns: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    verdict: str = "OK"
    ok: bool = True


def fmt_value(x):
    """Render a value with 12 significant digits."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (complex, np.complexfloating)):
        x = complex(x)
        if abs(x.imag) <= 1e-12 * max(1.0, abs(x.real)):
            return f"{x.real:.{SIG}g}"
        return f"{x.real:.{SIG}g}{x.imag:+.{SIG}g}j"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.{SIG}g}"
    if isinstance(x, (list, tuple, np.ndarray)):
        return "[" + ", ".join(fmt_value(v) for v in x) + "]"
    return str(x)


def json_value(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        x = complex(x)
        if abs(x.imag) <= 1e-12 * max(1.0, abs(x.real)):
            return float(f"{x.real:.{SIG}g}")
        return {"re": float(f"{x.real:.{SIG}g}"), "im": float(f"{x.imag:.{SIG}g}")}
    if isinstance(x, (float, np.floating)):
        return float(f"{float(x):.{SIG}g}")
    if isinstance(x, (list, tuple, np.ndarray)):
        return [json_value(v) for v in x]
    if isinstance(x, dict):
        return {str(k): json_value(v) for k, v in x.items()}
    return x


def format_report(report, mode="table", manifest=None, quiet=False):
    """Render a report as an aligned table or as JSON (with manifest)."""
    if quiet:
        return report.verdict
    if mode == "json":
        doc = {"command": report.command, "ok": report.ok, "verdict": report.verdict,
               "fields": json_value(report.fields)}
        if report.columns:
            doc["columns"] = report.columns
            doc["rows"] = [json_value(list(r)) for r in report.rows]
        if manifest is not None:
            doc["manifest"] = manifest.to_dict()
        return json.dumps(doc, indent=2)
    lines = [f"{k}: {fmt_value(v)}" for k, v in report.fields.items()]
    if report.columns:
        cells = [report.columns] + [[fmt_value(v) for v in r] for r in report.rows]
        widths = [max(len(str(row[i])) for row in cells) for i in range(len(report.columns))]
        for k, row in enumerate(cells):
            lines.append("  ".join(str(c).rjust(w) for c, w in zip(row, widths)))
            if k == 0:
                lines.append("  ".join("-" * w for w in widths))
    lines.append(report.verdict)
    return "\n".join(lines)


# --- input parsing ----------------------------------------------------------

_INPUTS = {}


def _read_json(path):
    with open(path, "rb") as fh:
        data = fh.read()
    _INPUTS[path] = hashlib.sha256(data).hexdigest()
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def load_lattice(spec, check=True):
    """A lattice from a JSON file or a generator spec.

    Generator specs: ``torus:MxN``, ``genus:G``, ``sphere_cube``, ``sphere_tetra``.
    """
    from .surface import Lattice2, generate_lattice
    if os.path.exists(spec):
        data = _read_json(spec)
        try:
            lat = Lattice2.from_dict(data)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"{spec}: malformed lattice ({exc})") from None
        return lat.check() if check else lat
    m = re.fullmatch(r"torus:(\d+)x(\d+)", spec)
    if m:
        return generate_lattice("torus", int(m.group(1)), int(m.group(2)))
    m = re.fullmatch(r"genus:(\d+)", spec)
    if m:
        return generate_lattice("genus", g=int(m.group(1)))
    if spec in ("sphere_cube", "sphere_tetra"):
        return generate_lattice(spec)
    raise ValidationError(f"lattice {spec!r} is neither a file nor a generator spec")


def parse_numbers(text):
    """Numbers from an inline comma list or a file (JSON list or whitespace separated)."""
    if os.path.exists(text):
        with open(text, "rb") as fh:
            raw = fh.read()
        _INPUTS[text] = hashlib.sha256(raw).hexdigest()
        body = raw.decode()
        if body.lstrip().startswith("["):
            try:
                return json.loads(body)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{text}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        out = []
        for lineno, line in enumerate(body.splitlines(), 1):
            for tok in line.split("#")[0].replace(",", " ").split():
                try:
                    out.append(float(tok))
                except ValueError:
                    raise ValidationError(f"{text}:{lineno}: not a number: {tok!r}") from None
        return out
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ValidationError(f"malformed number list {text!r}") from None


def parse_theta(text, G):
    theta = np.asarray(parse_numbers(text), dtype=float)
    if theta.ndim != 1 or len(theta) != G.order:
        raise ValidationError(f"theta needs {G.order} values, got {theta.size}")
    return theta


def parse_element(text, G):
    """Element by index, or by residues joined with '.' for abelian groups."""
    if "." in text or G.has_abelian_view:
        parts = [int(x) for x in text.split(".")]
        if G.has_abelian_view:
            A = G.abelian
            if len(parts) != A.rank:
                raise ValidationError(f"element {text!r} needs {A.rank} residues")
            return tuple(p % n for p, n in zip(parts, A.factors))
        raise ValidationError("residue syntax needs an abelian group")
    k = int(text)
    if not 0 <= k < G.order:
        raise ValidationError(f"element index {k} out of range")
    return k


def parse_pairs(text, G):
    out = []
    if not text:
        return out
    for item in text.split(","):
        if ":" not in item:
            raise ValidationError(f"expected site:element, got {item!r}")
        site, elem = item.split(":", 1)
        out.append((int(site), parse_element(elem, G)))
    return out


def element_index(G, x):
    return G.abelian.index(x) if isinstance(x, tuple) else int(x)


def load_complex(spec):
    """3-manifold or surface complex: T3[:k], S3, RP2, genus:G, torus:MxN or a JSON file."""
    from .homology import (SimplicialComplex, lattice_complex, rp2_six_vertex,
                           sphere_boundary_simplex, torus3)
    if os.path.exists(spec):
        return SimplicialComplex.from_dict(_read_json(spec))
    m = re.fullmatch(r"T3(?::(\d+))?", spec)
    if m:
        return torus3(int(m.group(1) or 3))
    if spec == "S3":
        return sphere_boundary_simplex(4)
    if spec == "RP2":
        return rp2_six_vertex()
    return lattice_complex(load_lattice(spec))


def load_presentation_spec(spec):
    from . import tqft
    if os.path.exists(spec):
        return tqft.GroupPresentation.from_dict(_read_json(spec))
    m = re.fullmatch(r"T(\d+)", spec)
    if m:
        return tqft.torus_presentation(int(m.group(1)))
    m = re.fullmatch(r"(?:Sigma|genus):(\d+)", spec)
    if m:
        return tqft.surface_presentation(int(m.group(1)))
    m = re.fullmatch(r"L:(\d+)", spec)
    if m:
        return tqft.lens_presentation(int(m.group(1)))
    if spec == "S3":
        return tqft.sphere3_presentation()
    raise ValidationError(f"unknown manifold {spec!r}")


def _group(args):
    from .groups import build_group
    return build_group(args.group)


def _insertions(args, G):
    from .ising import Insertions
    return Insertions(order=parse_pairs(getattr(args, "order", None), G),
                      disorder=parse_pairs(getattr(args, "disorder", None), G))


# --- commands ----------------------------------------------------------------

def cmd_lattice_gen(args):
    from .surface import generate_lattice
    lat = generate_lattice(args.kind, args.m, args.n, args.g)
    text = lat.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    return Report("lattice gen", {"name": lat.name, "V": lat.V, "E": lat.E, "F": lat.F,
                                  "euler": lat.euler()}, verdict="OK" if args.out else text)


def cmd_lattice_dual(args):
    from .surface import dual_lattice
    dual = dual_lattice(load_lattice(args.lattice)).lattice
    text = dual.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    return Report("lattice dual", {"V": dual.V, "E": dual.E, "F": dual.F},
                  verdict="OK" if args.out else text)


def cmd_lattice_validate(args):
    lat = load_lattice(args.lattice, check=False)
    rep = lat.validate(args.genus)
    rows = [[i, msg] for i, msg in enumerate(rep.failures)]
    return Report("lattice validate", {"V": lat.V, "E": lat.E, "F": lat.F, "valid": rep.valid},
                  ["failure", "message"] if rows else [], rows,
                  "VALID" if rep.valid else "INVALID", rep.valid)


def cmd_fourier(args):
    from .harmonic import fourier_abelian, fourier_nonabelian
    G = _group(args)
    theta = parse_theta(args.theta, G)
    if G.has_abelian_view:
        td = fourier_abelian(theta, G.abelian)
        rows = [[i, v] for i, v in enumerate(td)]
        return Report("fourier", {"group": args.group}, ["dual_element", "value"], rows)
    blocks = fourier_nonabelian(theta, G)
    rows = [[j, b.shape[0], np.linalg.eigvalsh((b + b.conj().T) / 2).tolist(), b.reshape(-1).tolist()]
            for j, b in enumerate(blocks)]
    return Report("fourier", {"group": args.group}, ["irrep", "dim", "eigenvalues", "matrix"], rows)


def cmd_admissible(args):
    from .harmonic import is_admissible
    G = _group(args)
    res = is_admissible(parse_theta(args.theta, G), G, args.tol)
    return Report("admissible", {"admissible": res.admissible, "reason": res.reason,
                                 "witness": res.witness, "value": res.value},
                  verdict="ADMISSIBLE" if res else f"INADMISSIBLE ({res.reason})", ok=True)


def cmd_ising_partition(args):
    from .ising import spin_partition
    G = _group(args)
    lat = load_lattice(args.lattice)
    val = spin_partition(lat, G, parse_theta(args.theta, G), ins=_insertions(args, G),
                         threads=args.threads)
    return Report("ising partition", {"value": val})


def cmd_ising_vector(args):
    from .ising import partition_vector, partition_vector_nonabelian
    G = _group(args)
    lat = load_lattice(args.lattice)
    theta = parse_theta(args.theta, G)
    if G.has_abelian_view:
        pv = partition_vector(lat, G.abelian, theta, _insertions(args, G))
        rows = [[i, "".join(str(int(x)) for x in np.asarray(z).reshape(-1)), v]
                for i, (z, v) in enumerate(zip(pv.cocycles, pv.values))]
        return Report("ising vector", {"classes": len(pv)}, ["class", "cocycle", "value"], rows)
    dis = [(f, element_index(G, x)) for f, x in parse_pairs(args.disorder, G)]
    pv = partition_vector_nonabelian(lat, G, theta, dis)
    rows = [[i, " ".join(str(int(x)) for x in z), w, v]
            for i, (z, w, v) in enumerate(zip(pv.cocycles, pv.weights, pv.values))]
    return Report("ising vector", {"orbits": len(pv)}, ["orbit", "labeling", "weight", "value"], rows)


def cmd_ising_kw(args):
    from .ising import kw_dual_check
    G = _group(args)
    lat = load_lattice(args.lattice)
    rep = kw_dual_check(lat, G.abelian, parse_theta(args.theta, G), _insertions(args, G),
                        normalize_vertices=args.normalize_vertices)
    lhs, rhs = np.asarray(rep.lhs), np.asarray(rep.rhs)
    rows = [[i, a, b, abs(a - b)] for i, (a, b) in enumerate(zip(lhs, rhs))]
    fields = {"factor": rep.factor, "vertex_normalization": rep.vertex_normalization,
              "max_error": rep.max_error, "tolerance": 1e-8}
    ok = rep.max_error <= 1e-8
    return Report("ising kw-check", fields, ["class", "lhs", "rhs", "abs_err"], rows,
                  f"{'PASS' if ok else 'FAIL'} max_error={fmt_value(rep.max_error)}", ok)


def cmd_ising_transfer(args):
    from .ising import projector_constant, transfer_matrix
    G = _group(args)
    twist = element_index(G, parse_element(args.twist, G)) if args.twist else None
    T = transfer_matrix(args.n, G, parse_theta(args.theta, G), twist)
    c, res = projector_constant(T)
    lam = np.sort(np.linalg.eigvals(T).real)[::-1]
    top = lam[0] if lam.size else 0.0
    top_mult = int(np.sum(np.abs(lam - top) <= 1e-9 * max(1.0, abs(top))))
    return Report("ising transfer", {"size": T.shape[0], "rank": int(np.linalg.matrix_rank(T)),
                                     "norm": float(np.max(np.abs(T))), "top_eigenvalue": top,
                                     "top_multiplicity": top_mult, "c": c,
                                     "projector_residual": res,
                                     "leading": lam[:min(6, lam.size)]})


def cmd_tqft_count(args):
    from .tqft import count_bundles, count_homs
    G = _group(args)
    P = load_presentation_spec(args.manifold)
    return Report("tqft count", {"manifold": args.manifold, "homs": count_homs(P, G),
                                 "bundles": count_bundles(P, G)})


def cmd_tqft_higher(args):
    from .tqft import higher_partition
    X = load_complex(args.complex)
    A = _group(args).abelian
    return Report("tqft higher", {"complex": X.name, "r": args.r,
                                  "orders": X.cohomology_orders(A),
                                  "Z": higher_partition(X, args.r, A)})


def cmd_tqft_emdual(args):
    from .tqft import em_duality_check
    X = load_complex(args.complex)
    rep = em_duality_check(X, _group(args).abelian, args.r)
    return Report("tqft emdual", {"Z": rep.Z, "Z_dual": rep.Z_dual, "ratio": rep.ratio,
                                  "euler": rep.euler, "exponent": rep.exponent,
                                  "predicted": rep.predicted},
                  verdict="PASS" if rep.ok else "FAIL", ok=rep.ok)


def cmd_tqft_handlebody(args):
    from .ising import Insertions
    from .tqft import pair_with_handlebody, solid_torus
    G = _group(args)
    H = solid_torus(args.m, args.n)
    dis = parse_pairs(args.disorder, G)
    val = pair_with_handlebody(H, G, parse_theta(args.theta, G), Insertions(disorder=dis))
    return Report("tqft handlebody", {"boundary": H.lattice.name, "value": val})


def cmd_tqft_loop(args):
    from .tqft import loop_operator_S1xY
    G = _group(args)
    lat = load_lattice(args.lattice)
    if args.kind == "wilson":
        chi = parse_element(args.character, G) if args.character else None
        val = loop_operator_S1xY(lat, G, "wilson", character=chi)
    else:
        g = element_index(G, parse_element(args.element, G)) if args.element else None
        val = loop_operator_S1xY(lat, G, "thooft", face=args.face, element=g)
    return Report("tqft loop", {"kind": args.kind, "value": val})


def _tv_space(args, dual=False):
    from .surface import dual_lattice
    from .turaev_viro import FusionBackend, state_space
    G = _group(args)
    lat = load_lattice(args.lattice)
    if dual:
        lat = dual_lattice(lat).lattice
    B = FusionBackend(args.backend, G)
    return G, B, state_space(B, lat)


def cmd_tv_state_dim(args):
    _, B, S = _tv_space(args)
    return Report("tv state-dim", {"backend": B.kind, "labelings": len(S.labelings), "dim": S.dim},
                  verdict=str(S.dim))


def cmd_tv_projector_check(args):
    from .turaev_viro import projector_check
    _, B, S = _tv_space(args)
    rep = projector_check(S)
    tol = args.tol
    ok = max(rep.idempotence, rep.self_adjoint, rep.commutation) <= tol
    return Report("tv projector-check", {"backend": B.kind, "dim": S.dim,
                                         "idempotence": rep.idempotence,
                                         "self_adjoint": rep.self_adjoint,
                                         "commutation": rep.commutation, "rank": rep.rank,
                                         "tolerance": tol},
                  verdict=f"{'PASS' if ok else 'FAIL'} rank={rep.rank}", ok=ok)


def cmd_tv_ising_vector(args):
    from .turaev_viro import IsingActionVector, ising_vector
    G, B, S = _tv_space(args)
    theta = parse_theta(args.theta, G)
    psi = ising_vector(S, IsingActionVector.from_weight(B, theta, args.antipode))
    rows = []
    for li, lab in enumerate(S.labelings):
        blk = psi[S.offsets[li]:S.offsets[li + 1]]
        if np.max(np.abs(blk)) > 1e-12:
            rows.append([" ".join(str(int(x)) for x in lab), blk.tolist()])
    return Report("tv ising-vector", {"backend": B.kind, "dim": S.dim,
                                      "norm": float(np.linalg.norm(psi)), "support": len(rows)},
                  ["labeling", "components"], rows)


def cmd_tv_duality(args):
    from .turaev_viro import duality_harness, random_admissible
    G = _group(args)
    lat = load_lattice(args.lattice)
    if args.theta:
        data = parse_numbers(args.theta)
        thetas = [np.asarray(t, dtype=float) for t in data] if data and isinstance(data[0], list) \
            else [np.asarray(data, dtype=float)]
    else:
        rng = np.random.default_rng(args.seed)
        thetas = [random_admissible(G, rng) for _ in range(args.samples)]
    rep = duality_harness(G, lat, thetas, antipode=args.antipode)
    if rep.kind == "abelian":
        fields = {"kind": rep.kind, "factor": rep.factor, "max_error": rep.max_error, "tolerance": 1e-8}
        verdict = f"{'PASS' if rep.ok else 'FAIL'} max_error={fmt_value(rep.max_error)}"
        return Report("tv duality-check", fields, verdict=verdict, ok=rep.ok)
    rows = [[i, r] for i, r in enumerate(rep.ratios)]
    fields = {"kind": rep.kind, "samples": len(thetas), "spread": rep.spread, "tolerance": 1e-6,
              "antipode": args.antipode}
    verdict = f"{'PASS' if rep.ok else 'FAIL'} spread={fmt_value(rep.spread)}"
    return Report("tv duality-check", fields, ["sample", "ratio"], rows, verdict, rep.ok)


def cmd_cohomology(args):
    from .homology import CochainComplex, GradedComplex
    A = _group(args).abelian
    if args.lattice:
        C = CochainComplex(load_lattice(args.lattice), A)
        coh = C.cohomology()
        fields = {"orders": coh.orders, "order_Z1": coh.order_Z1, "order_B1": coh.order_B1,
                  "order_B2": coh.order_B2,
                  "D0_invariant_factors": [int(x) for x in coh.invariant_factors[0]],
                  "D1_invariant_factors": [int(x) for x in coh.invariant_factors[1]]}
        return Report("cohomology", fields)
    X = load_complex(args.complex)
    assert isinstance(X, GradedComplex)
    return Report("cohomology", {"complex": X.name, "euler": X.euler(),
                                 "orders": X.cohomology_orders(A)})


# --- parser ----------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="kwgauge", description="Finite-group lattice models and their dualities.")
    p.add_argument("--version", action="version", version=f"kwgauge {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="JSON report with run manifest")
    common.add_argument("--quiet", action="store_true", help="print only the verdict line")
    common.add_argument("--threads", type=int, default=config.default_threads())
    common.add_argument("--timing", action="store_true", help="record wall time in the manifest")
    sub = p.add_subparsers(dest="cmd", required=True)

    def leaf(parent, name, func, help_text, group=False, lattice=False, theta=False):
        q = parent.add_parser(name, parents=[common], help=help_text)
        if group:
            q.add_argument("--group", required=True, help="Zn, ZnxZm..., S3, D4, Q8, A4")
        if lattice:
            q.add_argument("--lattice", required=True, help="JSON file or torus:MxN, genus:G, sphere_cube")
        if theta:
            q.add_argument("--theta", required=True, help="comma list or file")
        q.set_defaults(func=func)
        return q

    lat = sub.add_parser("lattice", help="lattice generation and checks").add_subparsers(dest="sub", required=True)
    q = leaf(lat, "gen", cmd_lattice_gen, "generate a lattice")
    q.add_argument("--kind", required=True, choices=["torus", "sphere_cube", "sphere_tetra", "genus"])
    q.add_argument("--m", type=int)
    q.add_argument("--n", type=int)
    q.add_argument("--g", type=int)
    q.add_argument("--out")
    q = leaf(lat, "dual", cmd_lattice_dual, "dual lattice")
    q.add_argument("lattice")
    q.add_argument("--out")
    q = leaf(lat, "validate", cmd_lattice_validate, "validate a lattice file")
    q.add_argument("lattice")
    q.add_argument("--genus", type=int)

    q = leaf(sub, "fourier", cmd_fourier, "Fourier transform of a weight", group=True, theta=True)
    q = leaf(sub, "admissible", cmd_admissible, "admissibility test", group=True, theta=True)
    q.add_argument("--tol", type=float, default=config.TOL)

    ising = sub.add_parser("ising", help="Ising partition functions").add_subparsers(dest="sub", required=True)
    for name, func in (("partition", cmd_ising_partition), ("vector", cmd_ising_vector),
                       ("kw-check", cmd_ising_kw)):
        q = leaf(ising, name, func, f"ising {name}", group=True, lattice=True, theta=True)
        q.add_argument("--order", help="v:chi,... (chi residues joined by '.')")
        q.add_argument("--disorder", help="f:elem,...")
        if name == "kw-check":
            q.add_argument("--normalize-vertices", action="store_true")
    q = leaf(ising, "transfer", cmd_ising_transfer, "transfer matrix", group=True, theta=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--twist")

    tq = sub.add_parser("tqft", help="finite path integrals").add_subparsers(dest="sub", required=True)
    q = leaf(tq, "count", cmd_tqft_count, "count bundles", group=True)
    q.add_argument("--manifold", required=True, help="T<k>, S3, L:p, Sigma:g or presentation JSON")
    for name, func in (("higher", cmd_tqft_higher), ("emdual", cmd_tqft_emdual)):
        q = leaf(tq, name, func, f"tqft {name}", group=True)
        q.add_argument("--complex", required=True, help="T3[:k], S3, RP2, surface spec or JSON")
        q.add_argument("--r", type=int, required=True)
    q = leaf(tq, "handlebody", cmd_tqft_handlebody, "solid torus pairing", group=True, theta=True)
    q.add_argument("--m", type=int, default=2)
    q.add_argument("--n", type=int, default=2)
    q.add_argument("--disorder")
    q = leaf(tq, "loop", cmd_tqft_loop, "loop operator on S1 x Y", group=True, lattice=True)
    q.add_argument("--kind", choices=["wilson", "thooft"], default="wilson")
    q.add_argument("--character")
    q.add_argument("--element")
    q.add_argument("--face", type=int, default=0)

    tv = sub.add_parser("tv", help="Turaev-Viro state spaces").add_subparsers(dest="sub", required=True)
    for name, func in (("state-dim", cmd_tv_state_dim), ("projector-check", cmd_tv_projector_check),
                       ("ising-vector", cmd_tv_ising_vector)):
        q = leaf(tv, name, func, f"tv {name}", group=True, lattice=True)
        q.add_argument("--backend", choices=["vect", "rep"], default="vect")
        if name == "projector-check":
            q.add_argument("--tol", type=float, default=config.TOL)
        if name == "ising-vector":
            q.add_argument("--theta", required=True)
            q.add_argument("--antipode", action="store_true")
    q = leaf(tv, "duality-check", cmd_tv_duality, "duality harness", group=True, lattice=True)
    q.add_argument("--theta", help="file with a JSON list of weights (default: random samples)")
    q.add_argument("--samples", type=int, default=3)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--antipode", action="store_true")

    q = leaf(sub, "cohomology", cmd_cohomology, "cohomology orders", group=True)
    src = q.add_mutually_exclusive_group(required=True)
    src.add_argument("--lattice")
    src.add_argument("--complex")
    return p


def _versions():
    import networkx
    import scipy
    return {"kwgauge": __version__, "python": platform.python_version(), "numpy": np.__version__,
            "scipy": scipy.__version__, "networkx": networkx.__version__}


def parse_and_dispatch(argv=None, stdout=None, stderr=None):
    """Run one command; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_VALIDATION
    _INPUTS.clear()
    t0 = time.perf_counter()
    try:
        report = args.func(args)
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=stderr)
        return EXIT_CAP
    except (KWGaugeError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        failures = getattr(exc, "failures", None)
        for f in failures or []:
            print(f"  {f}", file=stderr)
        return EXIT_VALIDATION
    manifest = RunManifest(argv=argv, inputs=dict(sorted(_INPUTS.items())),
                           tolerances={"default": config.TOL}, caps=config.all_caps(),
                           versions=_versions(),
                           wall_time_s=round(time.perf_counter() - t0, 6) if args.timing else None)
    print(format_report(report, "json" if args.json else "table", manifest, args.quiet), file=stdout)
    if report.ok:
        return EXIT_OK
    return EXIT_VALIDATION if report.command == "lattice validate" else EXIT_ASSERT


def main():
    sys.exit(parse_and_dispatch())
