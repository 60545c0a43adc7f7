"""Magnetic signed Laplacian toolkit and the MSGNN spectral network."""
from .graph import GraphError, SignedDiGraph, absolute_degree, read_edge_csv, signed_subgraphs, symmetrized_adjacency
from .maglap import (
    HermitianMatrix,
    NoDirectionError,
    hermitian_adjacency,
    laplacian_normalized,
    laplacian_unnormalized,
    q_max,
)

__all__ = [
    "GraphError",
    "HermitianMatrix",
    "NoDirectionError",
    "SignedDiGraph",
    "absolute_degree",
    "hermitian_adjacency",
    "laplacian_normalized",
    "laplacian_unnormalized",
    "q_max",
    "read_edge_csv",
    "signed_subgraphs",
    "symmetrized_adjacency",
]
