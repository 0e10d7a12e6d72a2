"""Compile a diagram to a circuit, then inspect circuit classes and count models."""

from pathlib import Path

from circus import circuit as C
from circus import compile as K
from circus.formats import parse_file, serialize

FIX = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

obdd = parse_file(FIX / "negxy.nbdd").payload
circ, vtree, rep = K.bdd_to_circuit(obdd)
print("claimed properties:", ", ".join(rep.claimed()))
print("checked:", K.verify_preservation(circ, vtree, rep))
print(serialize(circ))

sdd = parse_file(FIX / "sdd4.nnf").payload
vt = parse_file(FIX / "sdd4.vtree").payload
print("strongly deterministic, SDD:", C.check_strong_det_and_sdd(sdd, vt))

smooth = C.smooth_circuit(sdd)
print("models after smoothing:", C.count_models_smooth_ddnnf(smooth))
print("conditioned on A=1:", C.truth_table(C.condition(sdd, {"A": 1})).count(), "models of 8")
