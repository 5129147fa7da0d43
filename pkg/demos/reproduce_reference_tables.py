"""Walkthrough: recompute the published reference tables and see exactly
which printed cells their own equations cannot produce.

The shipped reference data carries each printed number with its print
precision; every cell is recomputed from the cost equations and compared
at half a unit in the last printed digit. The API TCO columns reproduce
exactly; the supervised TCO column and all per-correct-detection cells do
not, and the mismatch list is the machine-readable record of that.

Run: python demos/reproduce_reference_tables.py
"""

from collections import Counter

from detecon import load_catalog
from detecon.reference import discrepancy_report, format_report_lines

catalog = load_catalog()
report = discrepancy_report(catalog)

print(f"{report['n_cells']} printed cells checked against recomputation")
print(f"  {report['n_matching']} match at print precision")
print(f"  {report['n_mismatching']} do not\n")

by_column = Counter((m["table"], m["column"]) for m in report["mismatches"])
print("mismatches by column:")
for (table, column), count in sorted(by_column.items()):
    print(f"  {table}/{column}: {count}")

print("\nfirst few mismatching cells, both numbers shown:")
shown = 0
for line in format_report_lines(report):
    if line.startswith("[FAIL]"):
        print(" ", line)
        shown += 1
        if shown >= 8:
            break

print("\nfull machine-readable report: `detecon reproduce-tables --out-dir tables/`")
