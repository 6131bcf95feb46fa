"""Exact computations in groups of null sequences c0(X)."""

from .ambient import (
    Circle,
    DescriptorMismatch,
    Element,
    FiniteCyclic,
    Group,
    Product,
    R,
    RealLine,
    T,
    add,
    neg,
    rho,
    scalar_mul,
)
from .sequences import Interval, NullSeq, d, nu_embed, prefix_project, project

__all__ = [
    "Circle", "DescriptorMismatch", "Element", "FiniteCyclic", "Group", "Product", "R",
    "RealLine", "T", "add", "neg", "rho", "scalar_mul",
    "Interval", "NullSeq", "d", "nu_embed", "prefix_project", "project",
]

__version__ = "0.1.0"
