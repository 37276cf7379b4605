"""Certificate documents: JSON serialization and exact verification.

A document is a JSON object with exactly the keys
version, space, kind, payload, claimed_bound, metadata.  Rationals are
strings ("320/3" or "7"), never floats.

kind "lp-polynomial": payload {"basis", "normalization", "coeffs"}; the
space is a hamming / johnson / sphere descriptor.

kind "sdp-dual": payload["program"] selects the dual:
  "theta": space {"type": "graph", "n", "edges"}, payload {"variant", "t",
           "matrix"}; M = tI - J + (edge terms) must be PSD, proving theta <= t.
  "schrijver": space is a binary hamming descriptor, payload {"blocks"}
           with one rational dual block per block of the assembled SDP.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .delsarte import LpCertificate, SpaceSpec, verify_certificate
from .exact import psd_witness
from .orthopoly import DomainError

VERSION = "1"
KEYS = ("version", "space", "kind", "payload", "claimed_bound", "metadata")
KINDS = ("lp-polynomial", "sdp-dual")


class CertificateParseError(ValueError):
    """Malformed certificate; ``location`` is a JSON-pointer-like path."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


def qstr(v) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def parse_q(s, location: str) -> Fraction:
    if not isinstance(s, str):
        raise CertificateParseError(location, "rationals must be strings like \"p/q\"")
    try:
        num, _, den = s.partition("/")
        if den and (not den.lstrip("-").isdigit() or int(den) <= 0):
            raise ValueError(s)
        return Fraction(int(num), int(den) if den else 1)
    except ValueError:
        raise CertificateParseError(location, f"not a rational: {s!r}") from None


@dataclass
class CertificateDocument:
    space: dict
    kind: str
    payload: dict
    claimed_bound: Fraction
    metadata: dict = field(default_factory=dict)
    version: str = VERSION

    def to_json(self) -> dict:
        return {"version": self.version, "space": self.space, "kind": self.kind,
                "payload": self.payload, "claimed_bound": qstr(self.claimed_bound),
                "metadata": self.metadata}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"

    def write(self, path) -> Path:
        path = Path(path)
        path.write_text(self.dumps())
        return path


def loads(text: str) -> CertificateDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateParseError(f"line {exc.lineno} col {exc.colno}", exc.msg) from None
    if not isinstance(raw, dict):
        raise CertificateParseError("/", "top level must be an object")
    if set(raw) != set(KEYS):
        missing = sorted(set(KEYS) - set(raw))
        extra = sorted(set(raw) - set(KEYS))
        raise CertificateParseError("/", f"keys differ: missing {missing}, unexpected {extra}")
    if raw["kind"] not in KINDS:
        raise CertificateParseError("/kind", f"unknown kind {raw['kind']!r}")
    for key in ("space", "payload", "metadata"):
        if not isinstance(raw[key], dict):
            raise CertificateParseError(f"/{key}", "must be an object")
    claimed = parse_q(raw["claimed_bound"], "/claimed_bound")
    doc = CertificateDocument(raw["space"], raw["kind"], raw["payload"], claimed,
                              raw["metadata"], str(raw["version"]))
    _check_payload_shape(doc)
    return doc


def load(path) -> CertificateDocument:
    return loads(Path(path).read_text())


def _check_payload_shape(doc: CertificateDocument):
    p = doc.payload
    if doc.kind == "lp-polynomial":
        if not isinstance(p.get("coeffs"), list) or not p["coeffs"]:
            raise CertificateParseError("/payload/coeffs", "expected a nonempty list")
        for k, c in enumerate(p["coeffs"]):
            parse_q(c, f"/payload/coeffs/{k}")
        return
    prog = p.get("program")
    if prog == "theta":
        for key in ("t", "matrix", "variant"):
            if key not in p:
                raise CertificateParseError(f"/payload/{key}", "missing")
        parse_q(p["t"], "/payload/t")
        if not isinstance(p["matrix"], list):
            raise CertificateParseError("/payload/matrix", "expected a list of rows")
        for i, row in enumerate(p["matrix"]):
            if not isinstance(row, list):
                raise CertificateParseError(f"/payload/matrix/{i}", "expected a row")
            for j, v in enumerate(row):
                parse_q(v, f"/payload/matrix/{i}/{j}")
    elif prog == "schrijver":
        if not isinstance(p.get("blocks"), list):
            raise CertificateParseError("/payload/blocks", "expected a list of blocks")
    else:
        raise CertificateParseError("/payload/program", f"unknown program {prog!r}")


# --- verification -----------------------------------------------------------------

@dataclass
class CertVerdict:
    valid: bool
    bound: Fraction | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.valid


def _matrix(rows, location) -> list[list[Fraction]]:
    return [[parse_q(v, f"{location}/{i}/{j}") for j, v in enumerate(r)] for i, r in enumerate(rows)]


def verify(doc: CertificateDocument) -> CertVerdict:
    """Exact check; the certified bound must equal the claimed one."""
    try:
        if doc.kind == "lp-polynomial":
            return _verify_lp(doc)
        if doc.payload.get("program") == "theta":
            return _verify_theta(doc)
        return _verify_schrijver(doc)
    except DomainError as exc:
        return CertVerdict(False, reason=f"bad space: {exc}")


def _verify_lp(doc):
    space = SpaceSpec.from_json(doc.space)
    coeffs = [parse_q(c, f"/payload/coeffs/{k}") for k, c in enumerate(doc.payload["coeffs"])]
    expected = space.basis_name()
    if doc.payload.get("basis", expected) != expected:
        return CertVerdict(False, reason=f"basis must be {expected} for this space")
    norm = doc.payload.get("normalization", "unit")
    if norm not in ("unit", "jacobi"):
        return CertVerdict(False, reason=f"unknown normalization {norm!r}")
    v = verify_certificate(LpCertificate(space, coeffs, doc.claimed_bound, norm))
    return CertVerdict(v.valid, v.bound, v.reason)


def _verify_theta(doc):
    from .theta import ThetaCertificate

    sp = doc.space
    if sp.get("type") != "graph":
        return CertVerdict(False, reason="theta certificates need a graph space")
    n = int(sp["n"])
    edges = tuple(sorted((min(a, b), max(a, b)) for a, b in sp["edges"]))
    t = parse_q(doc.payload["t"], "/payload/t")
    M = _matrix(doc.payload["matrix"], "/payload/matrix")
    cert = ThetaCertificate(n, edges, t, M, doc.payload["variant"])
    ok, why = cert.check()
    if not ok:
        return CertVerdict(False, reason=why)
    if t != doc.claimed_bound:
        return CertVerdict(False, t, f"claimed bound {qstr(doc.claimed_bound)} differs from t = {qstr(t)}")
    return CertVerdict(True, t)


def _verify_schrijver(doc):
    from .schrijver import bound_from_rational_dual, build_schrijver

    sp = doc.space
    if sp.get("type") != "hamming" or int(sp.get("q", 2)) != 2:
        return CertVerdict(False, reason="triple-distance certificates need a binary hamming space")
    prob = build_schrijver(int(sp["n"]), int(sp["delta"]))
    p = prob.sdp
    blocks = doc.payload["blocks"]
    if len(blocks) != len(p.block_sizes):
        return CertVerdict(False, reason=f"expected {len(p.block_sizes)} blocks, got {len(blocks)}")
    Yq = []
    for b, (blk, s) in enumerate(zip(blocks, p.block_sizes)):
        loc = f"/payload/blocks/{b}"
        if s < 0:
            vals = [parse_q(v, f"{loc}/{i}") for i, v in enumerate(blk)]
            if len(vals) != -s:
                return CertVerdict(False, reason=f"block {b} has the wrong length")
            neg = [i for i, v in enumerate(vals) if v < 0]
            if neg:
                return CertVerdict(False, reason=f"block {b} entry {neg[0]} is negative")
            Yq.append(vals)
        else:
            M = _matrix(blk, loc)
            if len(M) != s or any(len(r) != s for r in M):
                return CertVerdict(False, reason=f"block {b} has the wrong shape")
            ok, why = psd_witness(M)
            if not ok:
                return CertVerdict(False, reason=f"block {b} not PSD: {why}")
            Yq.append(M)
    rb = bound_from_rational_dual(p, Yq, prob.upper)
    if rb.value != doc.claimed_bound:
        return CertVerdict(False, rb.value, f"claimed bound {qstr(doc.claimed_bound)} differs from "
                                             f"certified {qstr(rb.value)}")
    return CertVerdict(True, rb.value)


# --- constructors ---------------------------------------------------------------------

def lp_document(cert: LpCertificate, metadata: dict | None = None) -> CertificateDocument:
    return CertificateDocument(
        cert.space.to_json(), "lp-polynomial",
        {"basis": cert.space.basis_name(), "normalization": cert.normalization,
         "coeffs": [qstr(c) for c in cert.coeffs]},
        cert.bound(), metadata or {})


def theta_document(g, cert, metadata: dict | None = None) -> CertificateDocument:
    return CertificateDocument(
        {"type": "graph", "n": g.n, "edges": [list(e) for e in g.edges]}, "sdp-dual",
        {"program": "theta", "variant": cert.variant, "t": qstr(cert.t),
         "matrix": [[qstr(v) for v in row] for row in cert.matrix]},
        cert.t, metadata or {})


def schrijver_document(n: int, delta: int, Yq: list, bound: Fraction,
                       metadata: dict | None = None) -> CertificateDocument:
    blocks = [[qstr(v) for v in blk] if not blk or not isinstance(blk[0], list)
              else [[qstr(v) for v in row] for row in blk] for blk in Yq]
    return CertificateDocument({"type": "hamming", "n": n, "q": 2, "delta": delta}, "sdp-dual",
                               {"program": "schrijver", "blocks": blocks}, bound, metadata or {})


def e8_kissing_document() -> CertificateDocument:
    """The degree-6 polynomial (320/3)(t-1/2) t^2 (t+1/2)^2 (t+1) in Jacobi-normalized
    Gegenbauer form, for 8-dimensional codes with inner products <= 1/2."""
    coeffs = [Fraction(1), Fraction(16, 7), Fraction(200, 63), Fraction(832, 231),
              Fraction(1216, 429), Fraction(5120, 3003), Fraction(2560, 4641)]
    cert = LpCertificate(SpaceSpec.sphere(8, Fraction(1, 2)), coeffs, Fraction(240), "jacobi")
    return lp_document(cert, {"source": "E8 root system kissing configuration", "degree": 6})


def pentagon_document() -> CertificateDocument:
    """theta(C_5) <= t for a rational t just above sqrt(5), from the circulant dual.

    M = (t-1) I + e (C + C^T) - (C^2 + C^-2), C the cyclic shift, has
    eigenvalues t - 1 + 2e cos(2 pi k/5) - 2 cos(4 pi k/5).  At t = sqrt(5)
    the k = 0 and k = 2, 3 eigenvalues force e = (3 - sqrt(5))/2; a rational
    e near that and t slightly larger keep M PSD.
    """
    from .theta import Graph, ThetaCertificate

    g = Graph.cycle(5)
    t = Fraction(2236067978, 10**9)  # sqrt(5) = 2.23606797749...
    e = Fraction(381966011, 10**9)  # (3 - sqrt(5))/2 = 0.38196601125...
    M = [[Fraction(0)] * 5 for _ in range(5)]
    for i in range(5):
        M[i][i] = t - 1
        M[i][(i + 1) % 5] = M[(i + 1) % 5][i] = e
        M[i][(i + 2) % 5] = M[(i + 2) % 5][i] = Fraction(-1)
    cert = ThetaCertificate(5, g.edges, t, M, "theta")
    return theta_document(g, cert, {"source": "circulant dual of the 5-cycle"})
