"""Synthetic survey fixtures shared across the test suite.

The main fixture ("modelacq") is a 12-leaf, 3-level taxonomy of model
acquisition techniques with 8 known papers and 10 constraint directives;
its valid feature space has exactly 144 profiles (3 observability options
x 3 dynamics options x 4 trace options x 4 signal options), 136 of them
unwritten. A one-class "micro" fixture carries only the observability
ladder (3 models). Larger fixtures are generated programmatically.
"""

from __future__ import annotations

import csv
import io
import random

from surveyscope.ingest import load_corpus, parse_config, read_sheet
from surveyscope.ingest.corpus import Paper, SurveyCorpus, Taxonomy

# ---------------------------------------------------------------- modelacq

MODELACQ_CONFIG = """\
tab_name: Taxonomy
title_text: Model Acquisition Techniques Survey
input_file:
  filename: sheet.csv
  active_worksheet: main
papers_list:
  key_map:
    title: 3
    abstract:
    authors: 2
    venue: 1
    year: 0
  rows:
    start: 4
    stop: 11
taxonomy:
  rows:
    start: 0
    stop: 2
  columns:
    start: 4
    stop: 15
"""

# Leaf order (sheet columns 4..15):
#   Setting > Observability > {Unobservable, Partially Observable, Fully Observable}
#   Setting > Dynamics     > {Deterministic, Non-deterministic, Probabilistic}
#   Data > Trace           > {Partial, Full, Cost}
#   Data > Signal          > {States, Actions, Rewards}
MODELACQ_HEADER = [
    ["", "", "", "", "Setting", "", "", "", "", "", "Data", "", "", "", "", ""],
    ["", "", "", "", "Observability", "", "", "Dynamics", "", "", "Trace", "", "", "Signal", "", ""],
    [
        "", "", "", "",
        "Unobservable", "Partially Observable", "Fully Observable",
        "Deterministic", "Non-deterministic", "Probabilistic",
        "Partial", "Full", "Cost",
        "States", "Actions", "Rewards",
    ],
]

MODELACQ_PAPERS = [
    # (year, venue, authors, title, 12 leaf bits)
    (2008, "JAIR", "A. Lovelace", "Learning action models from plan traces",
     [0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 0]),
    (2015, "AIJ", "B. Babbage", "Acquiring grounded operators from noisy demonstrations",
     [0, 1, 1, 1, 1, 0, 0, 1, 0, 1, 0, 0]),
    (2018, "ICAPS", "C. Curie", "Model extraction under occlusion",
     [1, 0, 0, 1, 1, 1, 0, 1, 0, 1, 0, 0]),
    (2019, "ICAPS", "D. Dirac", "Cost-aware operator learning",
     [0, 0, 1, 1, 0, 0, 0, 1, 1, 0, 1, 0]),
    (2020, "AAAI", "E. Euler", "Offline symbolic model induction",
     [0, 0, 1, 1, 1, 0, 1, 1, 0, 1, 0, 0]),
    (2021, "IJCAI", "F. Fermi", "Neural-symbolic domain synthesis",
     [0, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 0]),
    (2022, "NeurIPS", "G. Gauss", "Interactive model refinement",
     [0, 0, 1, 1, 0, 0, 0, 1, 0, 0, 0, 0]),
    (2023, "ICML", "H. Hopper", "Sparse trace model discovery",
     [1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 0]),
]

# "Data > Signal > Rewards" is deliberately unused: the insights view must
# surface it as a class with no papers yet.
MODELACQ_GAP_CLASS = "Data > Signal > Rewards"

MODELACQ_LEAF_COUNT = 12
MODELACQ_VALID_PROFILES = 144  # 3 x 3 x 4 x 4, see module docstring
MODELACQ_UNWRITTEN = MODELACQ_VALID_PROFILES - len(MODELACQ_PAPERS)

MODELACQ_CONSTRAINTS = """\
# observability ladder
implies:Setting > Observability > Partially Observable,Setting > Observability > Fully Observable
implies:Setting > Observability > Unobservable,~Setting > Observability > Partially Observable
implies:Setting > Observability > Unobservable,~Setting > Observability > Fully Observable
atleastone:Setting > Observability > Unobservable,Setting > Observability > Partially Observable,
    Setting > Observability > Fully Observable

# dynamics subsumption chain
implies:Setting > Dynamics > Probabilistic,Setting > Dynamics > Non-deterministic,Setting > Dynamics > Deterministic
atleastone:Setting > Dynamics > Deterministic,Setting > Dynamics > Non-deterministic,Setting > Dynamics > Probabilistic

# traces
implies:Data > Trace > Partial,Data > Trace > Full
atleastone:Data > Trace > Partial,Data > Trace > Full
implies:Data > Trace > Cost,Data > Trace > Full

atmostone:Data > Signal
"""

TRACE_IMPLIES_TEXT = "implies:Data > Trace > Partial,Data > Trace > Full"
TRACE_IMPLIES_LINE = MODELACQ_CONSTRAINTS.splitlines().index(TRACE_IMPLIES_TEXT) + 1

MODELACQ_PREFERENCES = """\
Setting > Observability > Fully Observable
~Setting > Observability > Partially Observable
~Setting > Observability > Unobservable
Setting > Dynamics > Deterministic
~Setting > Dynamics > Non-deterministic
~Setting > Dynamics > Probabilistic
Data > Trace > Full
Data > Trace > Cost
~Data > Trace > Partial
~Data > Signal > States
~Data > Signal > Actions
~Data > Signal > Rewards
"""


def modelacq_sheet_rows(violation: bool = False) -> list[list[str]]:
    rows = [list(r) for r in MODELACQ_HEADER]
    rows.append([""] * 16)  # spacer row 3
    for year, venue, authors, title, bits in MODELACQ_PAPERS:
        row = [str(year), venue, authors, title] + ["x" if b else "" for b in bits]
        rows.append(row)
    if violation:
        # paper at row 5 claims partial traces without full traces
        rows[5][10] = "x"  # Data > Trace > Partial
        rows[5][11] = ""  # Data > Trace > Full dropped
    return rows


def rows_to_csv(rows: list[list[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerows(rows)
    return buffer.getvalue()


def modelacq_corpus(violation: bool = False):
    config = parse_config(MODELACQ_CONFIG)
    sheet = read_sheet(rows_to_csv(modelacq_sheet_rows(violation)), is_text=True)
    return load_corpus(config, sheet)


MODELACQ_TEXTS = {
    # paper 4 cites papers 7 and 10 exactly; stray text should not match
    4: (
        "Survey techniques discussed at length.\n"
        "\n"
        "REFERENCES\n"
        "[1] D. Dirac. Cost-aware operator learning. In ICAPS, 2019.\n"
        "[2] G. Gauss. Interactive model refinement. NeurIPS, 2022.\n"
        "[3] Z. Zonk. A gardening almanac for the patient. Unrelated Press, 1999.\n"
    ),
    # paper 5 cites paper 4 exactly
    5: (
        "Body text.\n"
        "\n"
        "References\n"
        "[1] A. Lovelace. Learning action models from plan traces. JAIR, 2008.\n"
        "[2] Q. Quill. Completely different topic entirely here. 2001.\n"
    ),
}

MODELACQ_EMBEDDINGS = "\n".join(
    f"{4 + i} {x:.2f} {y:.2f}"
    for i, (x, y) in enumerate(
        [(0.0, 0.0), (1.0, 0.5), (2.0, -1.0), (0.5, 2.0), (-1.0, 1.0), (3.0, 0.0), (-2.0, -2.0), (1.5, 1.5)]
    )
) + "\n"

# ------------------------------------------------------------------- micro

MICRO_CONFIG = """\
tab_name: Taxonomy
title_text: Observability Micro Survey
input_file:
  filename: micro.csv
  active_worksheet: main
papers_list:
  key_map:
    title: 0
  rows:
    start: 2
    stop: 2
    exclude:
      - 2
taxonomy:
  rows:
    start: 0
    stop: 1
  columns:
    start: 1
    stop: 3
"""

MICRO_SHEET = [
    ["", "Fluent Observability", "", ""],
    ["", "Unobservable", "Partially Observable", "Fully Observable"],
    ["", "", "", ""],
]

MICRO_CONSTRAINTS = """\
implies:Fluent Observability > Partially Observable,Fluent Observability > Fully Observable
implies:Fluent Observability > Unobservable,~Fluent Observability > Partially Observable
implies:Fluent Observability > Unobservable,~Fluent Observability > Fully Observable
atleastone:Fluent Observability > Unobservable,Fluent Observability > Partially Observable,Fluent Observability > Fully Observable
"""

MICRO_MODEL_COUNT = 3  # {U}, {P,F}, {F}


def micro_corpus():
    config = parse_config(MICRO_CONFIG)
    return load_corpus(config, MICRO_SHEET)


# --------------------------------------------------------- survey-at-scale

def big_survey_files() -> tuple[str, str]:
    """Config + sheet shaped like a real deployment: 4 header rows over
    columns 69-146, paper rows 7-184 with two excluded, one empty-title row.
    Returns (config_text, sheet_csv_text)."""
    config = """\
tab_name: Taxonomy
title_text: Large Synthetic Survey
input_file:
  filename: big.csv
  active_worksheet: main
papers_list:
  key_map:
    title: 3
    abstract:
    authors: 2
    venue: 1
    year: 0
  rows:
    start: 7
    stop: 184
    exclude:
      - 141
      - 151
taxonomy:
  rows:
    start: 1
    stop: 4
  columns:
    start: 69
    stop: 146
"""
    width = 147
    rows = [[""] * width for _ in range(185)]
    col = 69
    areas = ["Area A", "Area B", "Area C", "Area D", "Area E", "Area F"]
    for area in areas:  # 6 areas x 13 columns = 78 leaf columns
        rows[1][col] = area
        rows[2][col] = "Sub 1"
        rows[2][col + 6] = "Sub 2"
        for band_start, band_cols in ((0, 3), (3, 3), (6, 3), (9, 4)):
            rows[3][col + band_start] = f"Band {band_start}"
        for leaf in range(13):
            rows[4][col + leaf] = f"Leaf {col + leaf}"
        col += 13
    rng = random.Random(2024)
    for row in range(7, 185):
        if row == 7:
            rows[row][3] = ""  # header-adjacent junk row: empty title
        else:
            rows[row][3] = f"Synthetic paper {row}"
        rows[row][2] = f"Author {row}"
        rows[row][1] = "VENUE"
        rows[row][0] = str(2016 + row % 8)
        for c in range(69, 147):
            if rng.random() < 0.25:
                rows[row][c] = "x"
    return config, rows_to_csv(rows)


def _corrupt(title: str, k: int) -> str:
    """Substitute k non-space characters with rare letters, spread evenly."""
    chars = list(title)
    positions = [i for i, c in enumerate(chars) if c != " "]
    step = max(1, len(positions) // k)
    done = 0
    for idx in positions[::step]:
        if done == k:
            break
        chars[idx] = "q" if chars[idx].lower() != "q" else "z"
        done += 1
    assert done == k, (title, k, done)
    return "".join(chars)


def _one_edit(title: str) -> str:
    middle = len(title) // 2
    replacement = "q" if title[middle].lower() != "q" else "z"
    return title[:middle] + replacement + title[middle + 1 :]


CITATION_LONG_TITLES = [  # targets of heavily corrupted references (ids 0-4)
    "virtual fixtures for teleoperated assembly",
    "projected light cues for shared autonomy",
    "gesture channels in collaborative welding",
    "headset overlays for remote inspection",
    "waypoint previews for aerial manipulation",
]
CITATION_PLAIN_TITLES = [  # targets of exact references (ids 10-14)
    "latency compensation in mixed reality",
    "depth perception under stereo rendering",
    "anchoring virtual panels to workcells",
    "operator trust calibration displays",
    "spatial audio beacons for navigation",
]
CITATION_SHORT_TITLES = ["VEXOR", "ZYGON", "KRAIT", "QUOLL", "XENIX"]  # ids 15-19

GIBBERISH_REFERENCES = [
    "000 111 222 333 444 555 666 777 888 999 000111",
    "12345 67890 13579 24680 11223 44556 77889 90011",
    "0101 2323 4545 6767 8989 0011 2233 4455 6677 8899",
]


def citation_fixture():
    """20 papers; docs 0-4 cite exactly, 5-9 with one edit, 10-14 heavily
    corrupted, 15-19 cite nothing. Returns (corpus, texts, planted)."""
    titles = (
        CITATION_LONG_TITLES
        + [f"filler paper number {i} on miscellaneous robotics" for i in range(5, 10)]
        + CITATION_PLAIN_TITLES
        + CITATION_SHORT_TITLES
    )
    root = build_taxonomy_for_citations()
    papers = tuple(
        Paper(id=i, title=t, year=2000 + i) for i, t in enumerate(titles)
    )
    corpus = SurveyCorpus(
        title_text="Citation Fixture Survey",
        papers=papers,
        taxonomies=(Taxonomy(name="t", default=True, root=root),),
        membership=tuple((False, False) for _ in papers),
    )

    def body(reference: str | None) -> str:
        refs = [reference] if reference else []
        refs += GIBBERISH_REFERENCES[:2]
        return (
            "Main body text about the experiment, methods, and results.\n"
            "\nREFERENCES\n\n" + "\n\n".join(refs) + "\n"
        )

    texts = {}
    planted = {"exact": set(), "one_edit": set(), "corrupted": set()}
    for i in range(5):  # exact citations of ids 10-14
        target = 10 + i
        texts[i] = body(f"A. Author. {titles[target]}. Proc. Venue, 2019.")
        planted["exact"].add((i, target))
    for i in range(5, 10):  # one-edit citations of the short titles, ids 15-19
        target = 10 + i
        texts[i] = body(f"B. Writer. {_one_edit(titles[target])}. Journal, 2020.")
        planted["one_edit"].add((i, target))
    for i in range(10, 15):  # heavily corrupted citations of ids 0-4
        target = i - 10
        title = titles[target]
        k = round(0.3 * len(title))  # aligned edit fraction lands near 0.30
        texts[i] = body(f"C. Scribe. {_corrupt(title, k)}. Workshop, 2021.")
        planted["corrupted"].add((i, target))
    for i in range(15, 20):  # no planted citation
        texts[i] = body(None)
    return corpus, texts, planted


def build_taxonomy_for_citations():
    from surveyscope.ingest.taxonomy import build_taxonomy

    return build_taxonomy([["T", ""], ["t1", "t2"]], rows=(0, 1), cols=(0, 1))


def envelope_files() -> tuple[str, str, str]:
    """40 leaves under 8 groups, 6 atmostone directives (60 pairwise clauses),
    175 distinct known profiles. Returns (config, sheet_csv, constraints)."""
    config = """\
tab_name: Taxonomy
title_text: Envelope Survey
input_file:
  filename: envelope.csv
  active_worksheet: main
papers_list:
  key_map:
    title: 0
    year: 1
  rows:
    start: 3
    stop: 177
taxonomy:
  rows:
    start: 0
    stop: 1
  columns:
    start: 2
    stop: 41
"""
    width = 42
    header = [[""] * width, [""] * width]
    for group in range(8):
        header[0][2 + group * 5] = f"Group {group + 1}"
        for leaf in range(5):
            header[1][2 + group * 5 + leaf] = f"G{group + 1} L{leaf + 1}"
    constraints = "\n".join(f"atmostone:Group {g + 1}" for g in range(6)) + "\n"

    rng = random.Random(99)
    profiles: set[tuple[int, ...]] = set()
    while len(profiles) < 175:
        bits = [0] * 40
        for group in range(6):  # at most one mark in the constrained groups
            pick = rng.randrange(6)
            if pick < 5:
                bits[group * 5 + pick] = 1
        for leaf in range(30, 40):  # groups 7 and 8 are unconstrained
            bits[leaf] = 1 if rng.random() < 0.4 else 0
        profiles.add(tuple(bits))
    rows = list(header) + [[""] * width]
    for i, profile in enumerate(sorted(profiles)):
        row = [f"Envelope paper {i}", str(2010 + i % 14)] + [
            "x" if b else "" for b in profile
        ]
        rows.append(row)
    return config, rows_to_csv(rows), constraints
