"""
Classifying newforms from their coefficients
============================================

Given a_p for many primes and the nebentypus, the values c_p = a_p^2 / chi(p)
reveal the projective type.  The predicted Hecke field is then compared with
the field the a_p actually generate and, when a defining polynomial is
stored, with its splitting behaviour modulo the first 500 good primes.
"""

from importlib.resources import files

from exotic_hecke.newform_classify import build_tables, check_prediction, classify_type, load_metadata, load_newforms

data = files("exotic_hecke") / "data"
for rec in load_newforms(data / "newforms.jsonl"):
    res = classify_type(rec)
    line = f"{rec.label:22s} level {rec.level:6d}  d={res.d:<3d} {res.proj_type:18s}"
    if res.predicted is not None:
        chk = check_prediction(rec, res)
        line += f" {res.predicted.describe():24s} {chk.status}"
    print(line)

# census tables are a fold over metadata rows; this file holds two rows that
# sit in unusual columns of the S4 table
tables = build_tables(load_metadata(data / "metadata_exceptional.jsonl"))
print()
print(tables.to_text())
