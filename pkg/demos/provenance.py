"""Provenance of automata: a word automaton becomes an OBDD, a tree automaton an SDNNF."""

import itertools
from pathlib import Path

from circus import automata as A
from circus import bdd as B
from circus import circuit as C
from circus import compile as K
from circus.formats import parse_file

FIX = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

a1 = parse_file(FIX / "a1.nfa").payload
for n in (2, 4, 8):
    d = K.nfa_provenance(a1, n)
    print(f"words of length {n} containing a 1:", B.count_models_complete_free(d),
          f"({len(d.nodes)} nodes)")

# Letters beyond {0,1} are encoded in binary first.
abc = parse_file(FIX / "abc.nfa").payload
bin_a, code = A.binarize_alphabet(abc)
d = K.nfa_provenance(bin_a, 6)
accepted = [w for w in itertools.product("abc", repeat=3)
            if B.evaluate(d, K.word_assignment(A.encode_word(w, code)))]
print("code:", code, "| accepted words of length 3:", len(accepted))

b1 = parse_file(FIX / "b1.nfta").payload
sk = parse_file(FIX / "t3.tree").payload
circ, vt = K.nfta_provenance(b1, sk)
r = C.classify_syntactic(circ)
print("tree provenance smooth/decomposable:", r.smooth, r.decomposable,
      "| structured by leaf-push:", C.is_structured(circ, vt),
      "| models:", C.truth_table(circ).count())
