"""Symbolic-numeric toolkit for Lie systems that are Hamiltonian with respect
to every form of a family of presymplectic two-forms.

The compiled core exposes the expression engine, the exterior-calculus
operations, structure validation, diagonal prolongation, the fixed-step
integrator, and the built-in example registry.
"""

from ._core import (  # noqa: F401
    Chart,
    DomainBox,
    Example,
    Expr,
    KSymplecticStructure,
    KslieError,
    OneForm,
    ProductChart,
    TDependentField,
    Trajectory,
    TwoForm,
    VectorField,
    bracket_theta,
    check_constant,
    check_hamiltonian,
    d0,
    d1,
    differentiate,
    evaluate,
    example_ids,
    integrate,
    interior_product,
    is_closed,
    is_zero,
    kernel_dimension_at,
    lie_bracket,
    lie_derivative,
    load_example,
    parse,
    prolong_field,
    prolong_function,
    prolong_two_form,
    schwarzian_invariants,
    simplify,
    substitute,
    validate_structure,
    verify,
    wedge,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
