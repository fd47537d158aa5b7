"""
Constants package for the decoy-state simulator.

"""
