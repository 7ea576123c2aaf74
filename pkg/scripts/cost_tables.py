"""Lower bounds for arbitrary unitaries and QSD entangler counts, as CSV on stdout."""

from qloq.costs import lower_bound_table, qsd_table

print("# lower bounds: n, G=1, G=2, G=3 (* = estimate)")
table = lower_bound_table()
for n in range(2, 7):
    cells = []
    for G in (1, 2, 3):
        k, star = table[(n, G)]
        cells.append(f"{k}{'*' if star else ''}")
    print(",".join([str(n)] + cells))

print()
print("# QSD entanglers: n, qubit lower bound, qubit QSD, earlier qudit scheme, QLOQ g=2, g=3, g=4")
for row in qsd_table():
    print(",".join(str(row[k]) for k in ("n", "qubit_lower_bound", "qubit_qsd", "li", "qloq_g2", "qloq_g3", "qloq_g4")))
