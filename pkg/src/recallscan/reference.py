"""Bundled reference snapshot of recall-initiator tallies.

The live openFDA database drifts as new recalls are posted, so golden tests
and the offline fixture are pinned to this snapshot: 36 root-cause categories
with their case counts, plus the management-level grouping of those
categories that the shipped aggregation rule is checked against.

``REFERENCE_GROUPS`` is the grouping as published in the snapshot source.
Two of its rows cannot be reproduced by any uniform prefix-similarity
threshold; see DEVIATIONS.md at the repository root.
"""

# (root cause label, case count), in snapshot row order.
REFERENCE_INITIATORS: tuple[tuple[str, int], ...] = (
    ("Other", 197),
    ("No Marketing Application", 45),
    ("Under Investigation by firm", 1699),
    ("Software design", 270),
    ("Radiation Control for Health and Safety Act", 43),
    ("Material/Component Contamination", 42),
    ("Device Design", 1046),
    ("Employee error", 94),
    ("Process control", 1030),
    ("Process change control", 125),
    ("Error in labelling", 98),
    ("Software Manufacturing/Software Deployment", 13),
    ("Component design/selection", 131),
    ("Software Design Change", 45),
    ("Labelling Change Control", 81),
    ("Labelling design", 108),
    ("Process design", 135),
    ("Incorrect or no expiration date", 23),
    ("Software change control", 16),
    ("Mixed-up of materials/components", 29),
    ("Component change control", 116),
    ("Unknown/Undetermined by firm", 165),
    ("Nonconforming Material/Component", 643),
    ("Packaging", 49),
    ("Labelling mix-ups", 34),
    ("Packaging process control", 135),
    ("Vendor change control", 99),
    ("Storage", 134),
    ("Equipment maintenance", 72),
    ("Pending", 51),
    ("Software design (manufacturing process)", 13),
    ("Use error", 33),
    ("Packaging change control", 49),
    ("Package design/selection", 18),
    ("Labelling False and Misleading", 14),
    ("Environmental control", 96),
)

TOTAL_CASES = sum(count for _, count in REFERENCE_INITIATORS)

# Management-level grouping from the snapshot source: (members, total count).
REFERENCE_GROUPS: tuple[tuple[tuple[str, ...], int], ...] = (
    (("Component change control", "Component design/selection"), 247),
    (("Device Design",), 1046),
    (("Employee error",), 94),
    (("Environmental control",), 96),
    (("Equipment maintenance",), 72),
    (("Error in labelling",), 98),
    (("Incorrect or no expiration date",), 23),
    (
        (
            "Labelling Change Control",
            "Labelling design",
            "Labelling False and Misleading",
            "Labelling mix-ups",
        ),
        237,
    ),
    (("Material/Component Contamination",), 42),
    (("Mixed-up of materials/components",), 29),
    (("No Marketing Application",), 45),
    (("Nonconforming Material/Component",), 643),
    (("Other",), 197),
    (("Package design/selection", "Process design"), 153),
    (("Packaging", "Packaging change control", "Packaging process control"), 233),
    (("Pending",), 51),
    (("Process change control", "Process control"), 1155),
    (("Radiation Control for Health and Safety Act",), 43),
    (("Software design",), 270),
    (
        (
            "Software change control",
            "Software design (manufacturing process)",
            "Software Design Change",
            "Software Manufacturing/Software Deployment",
        ),
        87,
    ),
    (("Storage",), 134),
    (("Under Investigation by firm",), 1699),
    (("Unknown/Undetermined by firm",), 165),
    (("Use error",), 33),
    (("Vendor change control",), 99),
)
