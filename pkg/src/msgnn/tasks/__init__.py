from .features import FeatureSpec, build_features, eigenvector_features, standardize
from .metrics import accuracy, ari
from .splits import LINK_TASKS, NUM_CLASSES, LinkSplit, NodeSplit, SplitError, read_split_csv, split_links, split_nodes

__all__ = [
    "FeatureSpec",
    "LINK_TASKS",
    "LinkSplit",
    "NUM_CLASSES",
    "NodeSplit",
    "SplitError",
    "accuracy",
    "ari",
    "build_features",
    "eigenvector_features",
    "read_split_csv",
    "split_links",
    "split_nodes",
    "standardize",
]
