"""List packings of chordal graphs and d-trees.

Submodules:
  graph_core    graphs, chordality, d-trees, clique listing, JSON/DOT
  packing_core  list assignments, packings, bad-clique detection
  matching      extension graphs, perfect matchings, repair procedures
  packer        constructive packing algorithms and the dispatcher
  gadget        lower-bound gadget constructions
  oracle        exhaustive backtracking decision procedures
  reduction     packing-to-coloring product reduction and pool bounds
  cli           batch command-line front end
"""

__version__ = "0.1.0"

__all__ = [
    "graph_core",
    "packing_core",
    "matching",
    "packer",
    "gadget",
    "oracle",
    "reduction",
    "cli",
    "errors",
    "rng",
]
