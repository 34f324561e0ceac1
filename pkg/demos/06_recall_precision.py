#!/usr/bin/env python3
"""Recall/precision sweep on the built-in labeled corpus.

Each category's template arrangement queries the whole corpus across the
threshold ladder. Raising the threshold trades recall for precision: the
keyword column (0) catches everything sharing a name, the top column
keeps only near-identical arrangements.
"""

from pirsearch import default_spec, generate_corpus, render_csv, render_text, sweep

spec = default_spec(seed=20)
items = generate_corpus(spec)
kinds = {}
for item in items:
    kind = item.label.split(":")[0] if ":" in item.label else item.label
    kinds[kind] = kinds.get(kind, 0) + 1
print(f"corpus: {len(items)} images -> " + ", ".join(f"{v} {k}" for k, v in sorted(kinds.items())))
print()

table = sweep(items, spec)
print(render_text(table))
print("CSV form:")
print(render_csv(table))
