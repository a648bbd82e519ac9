"""Gadget pipeline from positive 4-occurrence NAE-3-SAT through weighted degree
balancing and partitioned-graph matching balancing down to mim/sim-width
instances, together with exact small-scale width oracles and witness checkers.
"""

__version__ = "0.1.0"
