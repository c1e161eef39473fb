"""Exact-arithmetic toolkit for list-critical graph density arguments.

Submodules:
    params     parameter ledger, derived constants, feasibility gate
    graphs     small-graph primitives (cliques, matchings, mad, Rivin check)
    lists      list assignments and correspondence (DP-coloring) assignments
    classify   per-vertex classification: charge, the five savings routes,
               heavy/very-lordly/sponsored predicates, saved-graph check
    dense      list-dense neighbourhood subgraphs via complement matchings
    sampler    equalized naive colouring, retention bounds, marginal checks
    discharge  absorption decomposition, discharging rules R1-R4, the main
               and residual inequalities, the peel-and-recurse pipeline
    critical   exact solvers, criticality certificates, Ore composition,
               density-bound verifiers, small-graph enumeration
    cli        command-line front end over all of the above
"""

__version__ = "0.1.0"
