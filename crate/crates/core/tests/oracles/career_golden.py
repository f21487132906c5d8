"""Writes the expected upstream request descriptor for each career query kind.

Descriptors are spelled out by hand from the parameter table, not produced by
the crate, so the Rust builder is checked against an independent statement.
Standard inputs: Chicago, IL within 25 miles; Software Developer (15-1252.00);
Dental Hygienist (29-1292.00) as the comparison occupation; Illinois.
"""
import json
import pathlib

OUT = pathlib.Path(__file__).resolve().parents[4] / "data" / "fixtures" / "career" / "requests"

LOC = {"location": "Chicago, IL", "radius": "25"}
OCC = {"onetcode": "15-1252.00"}
OCC_IL = {"onetcode": "15-1252.00", "state": "IL"}

CASES = [
    ("american-job-center", "/v1/ajcfinder/{userId}", LOC),
    ("apprenticeship-offices", "/v1/apprenticeshipfinder/{userId}", LOC),
    ("certifications", "/v1/certificationfinder/{userId}", OCC),
    ("employment-patterns", "/v1/employmentpattern/{userId}", OCC),
    ("labor-market-information", "/v1/lmi/{userId}", OCC_IL),
    ("occupations", "/v1/occupation/{userId}", OCC_IL),
    ("occupational-reports", "/v1/occupationreports/{userId}", {"scope": "US"}),
    ("salaries-and-wages", "/v1/comparesalaries/{userId}/wage", OCC_IL),
    ("skills-gaps", "/v1/skillgap/{userId}", {"onetcode": "15-1252.00", "targetonetcode": "29-1292.00"}),
    ("state-resources", "/v1/unemploymentresources/{userId}", {"radius": "50", "state": "IL"}),
    ("tools-and-technology", "/v1/tnt/{userId}", OCC),
    ("training", "/v1/training/{userId}", LOC),
    ("unemployment", "/v1/unemploymentrate/{userId}", {"state": "IL"}),
    ("youth-programs", "/v1/youthprogramfinder/{userId}", LOC),
]

OUT.mkdir(parents=True, exist_ok=True)
for kind, path, query in CASES:
    doc = {"kind": kind, "method": "GET", "path": path, "query": dict(sorted(query.items()))}
    (OUT / f"{kind}.json").write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
print(f"wrote {len(CASES)} descriptors to {OUT}")
