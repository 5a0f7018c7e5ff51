"""Throwaway instrumented smoke test for the geometry layer."""
import sys
import time

from repgeo.field import FieldDescriptor, automorphism_group
from repgeo.freealg import NCPoly
from repgeo.freelie import LieElement, standard_bracketing
from repgeo.representation import (FreeRep, Representation, VarietyDescriptor,
                                   span_of)
from repgeo.verbal import WordSystem, twist
from repgeo.geometry import (CertificationFailed, Congruence, EquationSystem,
                             Parameterized, Sampled, SampledFamily, closure,
                             is_closed, separation_example,
                             verify_closure_certificate, DEFAULT_SEED)

t0 = time.time()


def lap(msg):
    print(f"[{time.time() - t0:7.1f}s] {msg}", flush=True)


field = FieldDescriptor.quadratic(2)
lam = field.sqrt_gen()
one = field.one()
identity = NCPoly.word(tuple(range(6)), one)
variety = VarietyDescriptor(field, 6, (identity,))
F = FreeRep(variety, 2, 1)
lap(f"free rep: algebra dim {F.algebra.total_dim()}, module dim {F.module_total_dim()}")

e1 = LieElement.from_tree(standard_bracketing((0, 0, 0, 1, 1)), field)
e2 = LieElement.from_tree(standard_bracketing((0, 0, 1, 0, 1)), field)
v = F.module_generator(0)
t = e1.scale(lam) + e2
tv = F.act(t, v)
e1v = F.act(e1, v)
e2v = F.act(e2, v)
K = Congruence.from_module_elements(F, [tv])
H = Representation(F, span_of(F, [tv]))
conj = next(a for a in automorphism_group(field) if not a.is_identity())
W = WordSystem(one, conj)
Hstar = twist(H, W)
lap("section 5 data built")

stage = sys.argv[1] if len(sys.argv) > 1 else "all"

if stage in ("smoke", "all"):
    # frozen expectation: closure candidate of {x1.v} wrt F is the span of
    # monomials containing the letter x1, dimension 63 - 6 = 57
    x1v = F.act(LieElement.generator(0, field), v)
    T = EquationSystem(F, [x1v])
    fam = SampledFamily(T, F, Sampled(6, DEFAULT_SEED))
    cand = fam.candidate()
    lap(f"smoke candidate dims {cand.dims} (expect module 57)")
    assert cand.dims[1] == 57, cand.dims

if stage in ("closed", "all"):
    cert = is_closed(K, H, Sampled(6, DEFAULT_SEED))
    lap(f"is_closed(K, H): {cert.verdict} candidate_dim={cert.candidate_dim}")
    assert cert.verdict == "Closed" and cert.candidate_dim == 1
    ok = verify_closure_certificate(cert, H)
    lap(f"closed certificate revalidates: {ok}")
    assert ok

if stage in ("open", "all"):
    cert = is_closed(K, Hstar, Sampled(8, DEFAULT_SEED),
                     preferred_witnesses=[e1v])
    lap(f"is_closed(K, Hstar): {cert.verdict} candidate_dim={cert.candidate_dim} "
        f"witness={cert.witness} proof={cert.witness_proof.kind if cert.witness_proof else None}")
    assert cert.verdict == "NotClosed"
    ok = verify_closure_certificate(cert, Hstar)
    lap(f"open certificate revalidates: {ok}")
    assert ok

if stage in ("closure", "all"):
    # closure of {t.v} wrt H is sp(t.v) itself
    con, cert = closure(EquationSystem(F, [tv]), H,
                        Sampled(6, DEFAULT_SEED))
    lap(f"closure(t.v wrt H): dims {con.dims} verdict {cert.verdict}")
    assert con.dims[1] == 1

if stage in ("laws", "all"):
    # a random degree-5 Lie system wrt F: closure should certify end to end
    import random
    rng = random.Random(99)
    pool = [LieElement(b.poly, field) for b in F.lie_basis.elements(5)]
    f1 = pool[0].scale(field.scalar(2)) + pool[3]
    g1 = F.act(f1, v)
    T1 = EquationSystem(F, [g1])
    con1, cert1 = closure(T1, F, Sampled(6, DEFAULT_SEED))
    lap(f"closure(random deg-5 wrt F): dims {con1.dims} "
        f"kinds={sorted({p.kind for p in cert1.element_proofs})}")
    assert all(con1.module.contains(u) for u in T1.elements)
    # idempotence: re-close the closure's basis
    T2 = EquationSystem(F, con1.module.basis())
    con2, cert2 = closure(T2, F, Sampled(6, DEFAULT_SEED))
    lap(f"re-closure dims {con2.dims}")
    assert con2.module.span_equals(con1.module)

if stage in ("separate", "all"):
    report = separation_example(2)
    for line in report.summary_lines():
        print("   ", line, flush=True)
    lap(f"separation_example(2) overall pass={report.passed}")

lap("done")
