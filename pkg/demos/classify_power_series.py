"""
Classifying a few Köthe matrices
================================

Symbolic verdicts for the rapidly decreasing sequences, a power series
matrix and a damped variant, each cross-checked on a finite grid.
"""

from koethe_lab.growth_dsl import parse_spec
from koethe_lab.matrix_calculus import classify, probe_classification

# a_{j,q} = j^q, a_{j,q} = e^{q sqrt j}, and a_{j,q} = j^q e^{-j}
specs = [
    parse_spec("matrix s { log_entry: q * log(j) }"),
    parse_spec("matrix sqrt_series { log_entry: q * j^(1/2) }"),
    parse_spec("matrix damped { log_entry: q * log(j) - j }"),
]

for spec in specs:
    rep = classify(spec)
    _, consistent = probe_classification(spec, rep.verdicts, J=10_000, Q=8)
    print(f"\n{spec.name}")
    for key, v in rep.verdicts.items():
        extra = ""
        if v.witness is not None and v.witness.r_template is not None:
            a, b = v.witness.r_template
            extra = f"  r = {a}q + {b}"
        elif v.certificate is not None:
            extra = f"  ({v.certificate.code}, q0={v.certificate.q0})"
        print(f"  {key:20s} {v.state.value:9s}{extra}")
    print(f"  condition sets: {rep.set4.state.value} / {rep.set5.state.value}; grid agrees: {consistent}")

# The damped matrix is nuclear but no single column stays bounded below,
# so it fails both condition sets together.
