"""Walk through a nondeterministic decision diagram: runs, classes, completion, counting."""

from pathlib import Path

from circus import bdd as B
from circus.formats import parse_file

FIX = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

d = parse_file(FIX / "twosource.nbdd").payload
print("diagram:", d)
zero = {x: 0 for x in d.universe}
print("all-zero assignment accepted:", B.evaluate(d, zero),
      "with", B.count_accepting_runs(d, zero), "accepting run(s)")

r = B.classify(d)
print("class:", r.table_class(), "| free witness:", " ".join(r.witnesses["free"]))

# An ordered diagram completed along its own order stays ordered.
ordered = parse_file(FIX / "chain4.nbdd").payload
print("order:", " < ".join(B.classify(ordered).order))
full = B.complete(ordered, "ordered")
print("complete ordered copy:", full, "models:", B.count_models_complete_free(full))

# Or-nodes come and go without changing the function.
withor = parse_file(FIX / "ornodes.nbdd").payload
plain = B.from_or_bdd(withor)
print("or-elimination keeps the table:", B.truth_table(plain) == B.truth_table(withor))
