"""surveyscope: explore a classified literature survey and find its gaps.

Pipeline: ingest a survey spreadsheet export and config into a corpus,
encode taxonomy + author constraints + known papers as CNF, compile to
d-DNNF to count and generate unwritten papers, extract a citation network
from paper texts, and serve everything to the bundled web client.
"""

__version__ = "0.1.0"
