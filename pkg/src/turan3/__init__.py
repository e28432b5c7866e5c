"""Exact toolkit for Turan-density work on 3-uniform hypergraphs.

Core surfaces:

  * graphs: the Hypergraph3 value type, canonical labeling, containment
  * enumeration: isomorph-free generation of graphs and typed flags
  * density: exact induced densities and flag pair-density tables
  * sdp: assembly, export and rational rounding of the bound program
  * certificate: exact rational verification of bound certificates
  * constructions: lower-bound generators and their density reports
  * partition: bipartition diagnostics (bad/missing edges, max-cut search)
  * cli: the turan3 command
"""

from .graphs import Hypergraph3, from_edges, named_graph

__all__ = ["Hypergraph3", "from_edges", "named_graph"]
__version__ = "0.1.0"
