"""Versioned JSON certificates: exact serialization and file-only revalidation.

Every document carries the schema tag, a kind, and the full run config as
text, so verification needs nothing besides the file: the verifier rebuilds
the representations from the embedded config, deserializes the exact scalars
and polynomials, and recomputes whatever the certificate claims.  Scalars
p + q*sqrt(d) are stored as integer numerator/denominator quadruples, never
as floats, so round trips are lossless and reports are byte-stable.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .config import (RunConfig, build_free, build_target, build_variety,
                     parse_automorphism, parse_config)
from .field import FieldDescriptor, Scalar
from .freealg import word_key
from .geometry import (ClosureCertificate, MembershipProof,
                       verify_closure_certificate)
from .params import CoeffPoly, ParamRing, monomial_key
from .representation import (FreeRep, ModuleElement, Representation,
                             mod_key_order, span_of)
from .verbal import (GroupDescription, Inner, NotInner, WordSystem, is_inner,
                     quotient_group_description, twist)

SCHEMA = "repgeo-certificate/1"


class BadCertificate(ValueError):
    """The file is not a certificate this schema version can read."""


# ---------------------------------------------------------------------------
# exact primitives

def scalar_to_json(s: Scalar) -> list:
    return [[s.p.numerator, s.p.denominator],
            [s.q.numerator, s.q.denominator]]


def scalar_from_json(data, field: FieldDescriptor) -> Scalar:
    (pn, pd), (qn, qd) = data
    return field.scalar(Fraction(pn, pd), Fraction(qn, qd))


def poly_terms_to_json(terms: dict) -> list:
    return [[list(w), scalar_to_json(c)]
            for w, c in sorted(terms.items(), key=lambda kv: word_key(kv[0]))]


def poly_terms_from_json(data, field: FieldDescriptor) -> dict:
    return {tuple(w): scalar_from_json(c, field) for w, c in data}


def module_to_json(m: ModuleElement) -> list:
    return [[j, list(w), scalar_to_json(c)]
            for (j, w), c in sorted(m.vec().items(),
                                    key=lambda kv: mod_key_order(kv[0]))]


def module_from_json(data, rep: FreeRep) -> ModuleElement:
    vec = {(j, tuple(w)): scalar_from_json(c, rep.field) for j, w, c in data}
    return rep.module_from_vec(vec)


def coeff_to_json(p: CoeffPoly) -> dict:
    # self-describing: cofactors live in restricted rings, so each
    # polynomial records its own variable list
    return {"vars": list(p.ring.names),
            "terms": [[list(m), scalar_to_json(c)]
                      for m, c in sorted(p.terms.items(),
                                         key=lambda kv: monomial_key(kv[0]))]}


def coeff_from_json(data, field: FieldDescriptor) -> CoeffPoly:
    ring = ParamRing(field, tuple(data["vars"]))
    return CoeffPoly(ring, {tuple(m): scalar_from_json(c, field)
                            for m, c in data["terms"]})


# ---------------------------------------------------------------------------
# membership proofs

def proof_to_json(proof: MembershipProof) -> dict:
    d = proof.data
    if proof.kind == "in-system-span":
        payload = {"coefficients": [[i, scalar_to_json(c)]
                                    for i, c in sorted(d["coefficients"].items())]}
    elif proof.kind == "generated-submodule":
        payload = {"combination": [[i, list(w), scalar_to_json(c)]
                                   for i, w, c in d["combination"]]}
    elif proof.kind == "ideal-combination":
        payload = {
            "coordinates": [[[j, list(w)], [coeff_to_json(c) for c in cof]]
                            for (j, w), cof in d["coordinates"]],
            "degree_bound": d["degree_bound"],
            "parameters": list(d["parameters"]),
        }
    elif proof.kind == "scope-branch":
        payload = {
            "det_blocks": d["det_blocks"],
            "zero_params": list(d["zero_params"]),
            "saturations": [{"param": s["param"], "power": s["power"],
                             "cofactors": [coeff_to_json(c)
                                           for c in s["cofactors"]]}
                            for s in d["saturations"]],
            "branches": [_branch_to_json(b) for b in d["branches"]],
            "degree_bound": d["degree_bound"],
            "parameters": list(d["parameters"]),
            "coordinate_keys": [[j, list(w)] for j, w in d["coordinate_keys"]],
        }
    else:
        raise BadCertificate(f"unknown proof kind {proof.kind!r}")
    return {"kind": proof.kind, **payload}


def proof_from_json(data, field: FieldDescriptor) -> MembershipProof:
    kind = data["kind"]
    if kind == "in-system-span":
        return MembershipProof(kind, {
            "coefficients": {i: scalar_from_json(c, field)
                             for i, c in data["coefficients"]}})
    if kind == "generated-submodule":
        return MembershipProof(kind, {
            "combination": [(i, tuple(w), scalar_from_json(c, field))
                            for i, w, c in data["combination"]]})
    if kind == "ideal-combination":
        return MembershipProof(kind, {
            "coordinates": [((j, tuple(w)),
                             [coeff_from_json(c, field) for c in cof])
                            for (j, w), cof in data["coordinates"]],
            "degree_bound": data["degree_bound"],
            "parameters": tuple(data["parameters"])})
    if kind == "scope-branch":
        return MembershipProof(kind, {
            "det_blocks": [[list(row) for row in block]
                           for block in data["det_blocks"]],
            "zero_params": list(data["zero_params"]),
            "saturations": [{"param": s["param"], "power": s["power"],
                             "cofactors": [coeff_from_json(c, field)
                                           for c in s["cofactors"]]}
                            for s in data["saturations"]],
            "branches": [_branch_from_json(b, field)
                         for b in data["branches"]],
            "degree_bound": data["degree_bound"],
            "parameters": tuple(data["parameters"]),
            "coordinate_keys": [(j, tuple(w))
                                for j, w in data["coordinate_keys"]]})
    raise BadCertificate(f"unknown proof kind {kind!r}")


def _branch_to_json(branch: dict) -> dict:
    if branch["kind"] == "rank-deficient":
        return {"kind": "rank-deficient",
                "block": [list(row) for row in branch["block"]],
                "cofactors": [[idx, [coeff_to_json(c) for c in cof]]
                              for idx, cof in branch.get("cofactors", [])]}
    if branch["kind"] == "regular":
        return {"kind": "regular",
                "zero_params": list(branch["zero_params"])}
    raise BadCertificate(f"unknown branch kind {branch['kind']!r}")


def _branch_from_json(data: dict, field) -> dict:
    if data["kind"] == "rank-deficient":
        return {"kind": "rank-deficient",
                "block": [list(row) for row in data["block"]],
                "cofactors": [(int(idx), [coeff_from_json(c, field)
                                          for c in cof])
                              for idx, cof in data.get("cofactors", [])]}
    if data["kind"] == "regular":
        return {"kind": "regular", "zero_params": list(data["zero_params"])}
    raise BadCertificate(f"unknown branch kind {data['kind']!r}")


# ---------------------------------------------------------------------------
# closure certificates

def closure_cert_to_json(cert: ClosureCertificate) -> dict:
    return {
        "verdict": cert.verdict,
        "system": [module_to_json(t) for t in cert.system],
        "target_label": cert.target_label,
        "samples": [{
            "stratum": s["stratum"],
            "lie_images": [poly_terms_to_json(terms)
                           for terms in s["lie_images"]],
            "module_images": [module_vec_to_json(vec)
                              for vec in s["module_images"]],
        } for s in cert.samples],
        "candidate_dim": cert.candidate_dim,
        "congruence_basis": [module_to_json(u) for u in cert.congruence_basis],
        "element_proofs": (None if cert.element_proofs is None else
                           [proof_to_json(p) for p in cert.element_proofs]),
        "witness": None if cert.witness is None else module_to_json(cert.witness),
        "witness_proof": (None if cert.witness_proof is None else
                          proof_to_json(cert.witness_proof)),
        "witness_residue": (None if cert.witness_residue is None else
                            module_to_json(cert.witness_residue)),
        "degree_bound": cert.degree_bound,
        "parameter_info": cert.parameter_info,
    }


def module_vec_to_json(vec: dict) -> list:
    return [[j, list(w), scalar_to_json(c)]
            for (j, w), c in sorted(vec.items(),
                                    key=lambda kv: mod_key_order(kv[0]))]


def module_vec_from_json(data, field: FieldDescriptor) -> dict:
    return {(j, tuple(w)): scalar_from_json(c, field) for j, w, c in data}


def closure_cert_from_json(data, src: FreeRep) -> ClosureCertificate:
    field = src.field
    return ClosureCertificate(
        verdict=data["verdict"],
        system=[module_from_json(t, src) for t in data["system"]],
        target_label=data["target_label"],
        samples=[{
            "stratum": s["stratum"],
            "lie_images": [poly_terms_from_json(terms, field)
                           for terms in s["lie_images"]],
            "module_images": [module_vec_from_json(vec, field)
                              for vec in s["module_images"]],
        } for s in data["samples"]],
        candidate_dim=data["candidate_dim"],
        congruence_basis=[module_from_json(u, src)
                          for u in data["congruence_basis"]],
        element_proofs=(None if data["element_proofs"] is None else
                        [proof_from_json(p, field)
                         for p in data["element_proofs"]]),
        witness=(None if data["witness"] is None else
                 module_from_json(data["witness"], src)),
        witness_proof=(None if data["witness_proof"] is None else
                       proof_from_json(data["witness_proof"], field)),
        witness_residue=(None if data["witness_residue"] is None else
                         module_from_json(data["witness_residue"], src)),
        degree_bound=data["degree_bound"],
        parameter_info=data["parameter_info"],
    )


# ---------------------------------------------------------------------------
# word systems and verbal certificates

def word_system_to_json(system: WordSystem) -> dict:
    return {"a": scalar_to_json(system.a), "phi": system.phi.name}


def word_system_from_json(data, field: FieldDescriptor) -> WordSystem:
    return WordSystem(scalar_from_json(data["a"], field),
                      parse_automorphism(data["phi"], field))


def inner_verdict_to_json(verdict) -> dict:
    if isinstance(verdict, Inner):
        return {
            "verdict": "Inner",
            "system": word_system_to_json(verdict.system),
            "tau_description": verdict.tau_description,
            "battery": list(verdict.battery),
        }
    if isinstance(verdict, NotInner):
        return {
            "verdict": "NotInner",
            "system": word_system_to_json(verdict.system),
            "lam": scalar_to_json(verdict.lam),
            "naturality_side": verdict.naturality_side,
            "semilinearity_side": verdict.semilinearity_side,
            "conclusion": verdict.conclusion,
        }
    raise BadCertificate(f"not an innerness verdict: {verdict!r}")


def group_to_json(g: GroupDescription) -> dict:
    return {
        "order": g.order,
        "elements": [[name, inner] for name, inner in g.elements],
        "scaling_note": g.scaling_note,
        "description": str(g),
    }


# ---------------------------------------------------------------------------
# documents

def make_document(kind: str, cfg: RunConfig, payload: dict) -> dict:
    return {"schema": SCHEMA, "kind": kind, "config": cfg.emit(),
            "payload": payload}


def dump_document(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def write_document(path: str, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_document(doc))


def load_document(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise BadCertificate(f"cannot read certificate {path}: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise BadCertificate(f"{path}: not a {SCHEMA} document")
    for key in ("kind", "config", "payload"):
        if key not in doc:
            raise BadCertificate(f"{path}: missing {key!r}")
    return doc


# ---------------------------------------------------------------------------
# revalidation from the file alone

def verify_document(doc: dict) -> tuple[bool, list[str]]:
    """Dispatch on kind; returns (ok, detail lines).

    Closure and separation documents get the strong treatment: the stored
    samples, proofs, and congruences are rechecked against representations
    rebuilt from the embedded config.  Report-style documents (inner,
    group, basis, ibn, twist battery) are recomputed from the config and
    compared payload for payload.
    """
    kind = doc["kind"]
    cfg = parse_config(doc["config"], source="<embedded config>")
    payload = doc["payload"]
    if kind == "closure":
        return _verify_closure_doc(cfg, payload)
    if kind == "separation":
        return _verify_separation_doc(cfg, payload)
    if kind == "inner":
        return _verify_recomputed(payload, _recompute_inner(cfg, payload),
                                  "innerness verdict")
    if kind == "group":
        fresh = group_to_json(quotient_group_description(build_variety(cfg)))
        return _verify_recomputed(payload, fresh, "group description")
    if kind in ("basis", "ibn", "twist-battery"):
        return _verify_recomputed_report(kind, cfg, payload)
    raise BadCertificate(f"unknown certificate kind {kind!r}")


def _verify_closure_doc(cfg: RunConfig, payload: dict) -> tuple[bool, list[str]]:
    src = build_free(cfg)
    target = build_target(cfg)
    cert = closure_cert_from_json(payload, src)
    ok = verify_closure_certificate(cert, target)
    lines = [f"verdict {cert.verdict}, candidate dimension "
             f"{cert.candidate_dim}, {len(cert.samples)} samples",
             f"revalidation {'passed' if ok else 'FAILED'}"]
    return ok, lines


def _verify_separation_doc(cfg: RunConfig, payload: dict) -> tuple[bool, list[str]]:
    field = cfg.field
    lam = scalar_from_json(payload["lam"], field)
    F = build_free(cfg)
    closed_cert = closure_cert_from_json(payload["closed_certificate"], F)
    open_cert = closure_cert_from_json(payload["open_certificate"], F)
    # the plain target is the quotient by the certified congruence; the
    # twisted one applies the unit-scale conjugation system on top
    H = Representation(F, span_of(F, closed_cert.system))
    system = WordSystem(field.one(),
                        parse_automorphism("conj", field))
    Hstar = twist(H, system)

    lines = []
    ok = True
    if payload["items"] and not all(i["passed"] for i in payload["items"]):
        ok = False
        lines.append("stored items include failures")
    closed_ok = verify_closure_certificate(closed_cert, H)
    open_ok = verify_closure_certificate(open_cert, Hstar)
    lines.append(f"closed certificate revalidation "
                 f"{'passed' if closed_ok else 'FAILED'}")
    lines.append(f"open certificate revalidation "
                 f"{'passed' if open_ok else 'FAILED'}")
    if not (closed_cert.verdict == "Closed" and open_cert.verdict == "NotClosed"):
        ok = False
        lines.append("stored verdicts do not separate the targets")
    dims = payload["dims"]
    if dims.get("module") != F.module_total_dim() or \
            dims.get("quotient") != H.module_total_dim():
        ok = False
        lines.append("stored dimensions disagree with the rebuilt targets")
    corr = payload["correspondence"]
    if not corr or not all(r["identity_holds"] and r["kernels_match"]
                           for r in corr):
        ok = False
        lines.append("stored correspondence records include failures")
    else:
        lines.append(f"{len(corr)} correspondence records consistent")
    if payload["anomalies"]:
        ok = False
        lines.append("stored anomalies present")
    if field.is_rational or lam.conjugate() == lam:
        ok = False
        lines.append("twist scalar is conjugation-fixed: nothing separates")
    return ok and closed_ok and open_ok, lines


def _recompute_inner(cfg: RunConfig, payload: dict) -> dict:
    system = word_system_from_json(payload["system"], cfg.field)
    return inner_verdict_to_json(is_inner(system, build_variety(cfg)))


def _verify_recomputed(stored: dict, fresh: dict,
                       label: str) -> tuple[bool, list[str]]:
    if stored == fresh:
        return True, [f"{label} recomputed and matches"]
    diff = [k for k in sorted(set(stored) | set(fresh))
            if stored.get(k) != fresh.get(k)]
    return False, [f"{label} mismatch in: " + ", ".join(diff)]


def _verify_recomputed_report(kind: str, cfg: RunConfig,
                              payload: dict) -> tuple[bool, list[str]]:
    from .cli import recompute_report
    fresh = recompute_report(kind, cfg, payload)
    return _verify_recomputed(payload, fresh, f"{kind} report")
